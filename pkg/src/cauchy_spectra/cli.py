"""Command-line front end: single solves, sweeps, and reference tables.

Artifacts are data-only (CSV and JSON) so any plotting tool can consume
them; re-running the same experiment byte-reproduces every file. Sweep
cells run concurrently; CAUCHY_SPECTRA_THREADS caps the worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import reference
from .grid import GridFunction, read_csv, write_csv
from .operators import (CauchyKernel, PotentialSpec, apply_potential,
                        write_weights_csv)
from .propagator import StrangStep, step
from .spectral import SolverConfig, SpectralResult, TrialBasis, solve

__all__ = ["ExperimentSpec", "run", "table1_report", "main"]

PROFILE_POINTS = (2.0, 10.0, 40.0, 50.0)

SOLVER_DEFAULTS = dict(h=0.001, dx=0.001, a=50.0, k_max=3000, check_every=100,
                       energy_tol=1e-5, z_max_mode="a", tail_compensation=False)


@dataclass
class ExperimentSpec:
    """Fully resolved description of one CLI experiment."""

    mode: str                      # oscillator | well | convergence_sweep
    solver: SolverConfig
    basis_kind: str
    states: int
    indices: tuple | None = None
    gs_order: tuple | None = None
    a_values: tuple = ()
    v0_values: tuple = ()          # empty means no potential (oscillator)
    output_dir: str = "."

    def __post_init__(self):
        if self.mode not in ("oscillator", "well", "convergence_sweep"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "convergence_sweep" and not self.a_values:
            raise ValueError("convergence sweep needs at least one a value")
        if self.mode == "well" and not self.v0_values:
            raise ValueError("well mode needs at least one v0 value")
        if self.states < 1 and not self.indices:
            raise ValueError("need at least one state")

    def basis(self) -> TrialBasis:
        if self.indices:
            idx = self.indices
        elif self.basis_kind == "hermite":
            idx = tuple(range(self.states))
        else:
            idx = tuple(range(1, self.states + 1))
        return TrialBasis(kind=self.basis_kind, indices=idx, gs_order=self.gs_order)

    def cells(self) -> list:
        """(a, v0) pairs to solve; v0 is None for oscillator cells."""
        a_list = self.a_values or (self.solver.a,)
        v0_list = self.v0_values or (None,)
        return [(a, v0) for a in a_list for v0 in v0_list]


def _json_ready(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    return value


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _solver_dict(cfg: SolverConfig) -> dict:
    return dict(h=cfg.h, a=cfg.a, dx=cfg.dx, k_max=cfg.k_max,
                check_every=cfg.check_every, energy_tol=cfg.energy_tol,
                z_max_mode=cfg.z_max_mode, tail_compensation=cfg.tail_compensation)


def _write_bundle(out: Path, cfg: SolverConfig, potential: PotentialSpec | None,
                  basis: TrialBasis, result: SpectralResult) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for i, f in enumerate(result.eigenfunctions, start=1):
        write_csv(f, out / f"psi_{i}.csv")
    for i in range(len(result.eigenvalues)):
        with open(out / f"energy_history_{i + 1}.csv", "w") as fh:
            fh.write("k,E\n")
            for k, e in enumerate(result.energy_history[:, i], start=1):
                fh.write(f"{k},{e:.17g}\n")
    summary = {
        "solver": _solver_dict(cfg),
        "potential": {"kind": potential.kind if potential else "none",
                      "v0": potential.v0 if potential else None},
        "basis": {"kind": basis.kind, "indices": list(basis.indices),
                  "gs_order": list(basis.effective_gs_order)},
        "eigenvalues": _json_ready(result.eigenvalues),
        "iterations_used": result.iterations_used,
        "converged": list(result.converged_flags),
    }
    _write_json(out / "summary.json", summary)


def _solve_cell(spec: ExperimentSpec, a: float, v0: float | None):
    cfg = SolverConfig(**{**_solver_dict(spec.solver), "a": a})
    potential = PotentialSpec.harmonic() if v0 is None else PotentialSpec.finite_well(v0)
    basis = spec.basis()
    result = solve(cfg, potential, basis)
    return cfg, potential, basis, result


def _table_row(a, v0, result: SpectralResult) -> str:
    cells = [f"{a:.10g}", "" if v0 is None else f"{v0:.10g}"]
    for e in result.eigenvalues:
        # a level at or above the well top is not a bound state; mark it
        # with a dash like the reference tables do
        if v0 is not None and e >= v0:
            cells.append("-")
        else:
            cells.append(f"{e:.10g}")
    return ",".join(cells)


def table1_report(entries, xs=PROFILE_POINTS) -> str:
    """CSV of |psi_1| at fixed exterior points per well depth.

    entries is a sequence of (v0, GridFunction) pairs holding converged
    ground states. Points beyond a state's grid come out empty.
    """
    header = "v0," + ",".join(f"psi_abs_x{x:g}" for x in xs)
    lines = [header]
    for v0, psi in entries:
        row = [f"{v0:.10g}"]
        for x in xs:
            if x > psi.grid.a + 1e-12:
                row.append("")
            else:
                row.append(f"{abs(psi.values[psi.grid.index_of(x)]):.10g}")
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def run(spec: ExperimentSpec) -> int:
    """Execute an experiment and write its artifact set under output_dir."""
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    cells = spec.cells()
    workers = min(len(cells), os.cpu_count() or 1)
    env_cap = os.environ.get("CAUCHY_SPECTRA_THREADS")
    if env_cap:
        workers = max(1, min(workers, int(env_cap)))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solved = list(pool.map(lambda c: _solve_cell(spec, *c), cells))
    else:
        solved = [_solve_cell(spec, *c) for c in cells]

    n_states = len(solved[0][3].eigenvalues)
    rows = []
    profile_entries = []
    for (a, v0), (cfg, potential, basis, result) in zip(cells, solved):
        cell_dir = out if len(cells) == 1 else out / f"cell_a{a:g}_v0{'' if v0 is None else f'{v0:g}'}"
        _write_bundle(cell_dir, cfg, potential, basis, result)
        rows.append(_table_row(a, v0, result))
        if v0 is not None:
            profile_entries.append((v0, result.eigenfunctions[0]))

    with open(out / "table.csv", "w") as fh:
        fh.write("a,v0," + ",".join(f"E{i + 1}" for i in range(n_states)) + "\n")
        for row in rows:
            fh.write(row + "\n")
    if profile_entries:
        with open(out / "profile.csv", "w") as fh:
            fh.write(table1_report(profile_entries))
    if len(cells) > 1:
        _write_json(out / "summary.json", {
            "mode": spec.mode,
            "solver": _solver_dict(spec.solver),
            "a_values": _json_ready(list(spec.a_values or (spec.solver.a,))),
            "v0_values": _json_ready(list(spec.v0_values)),
            "basis": {"kind": spec.basis_kind,
                      "indices": list(spec.basis().indices),
                      "gs_order": list(spec.basis().effective_gs_order)},
            "cells": len(cells),
        })
    return 0


# ---------------------------------------------------------------------------
# argument handling

def _parse_floats(text: str) -> tuple:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _parse_ints(text: str) -> tuple:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _parse_range(text: str) -> list:
    """"1..8" or "1,3,5" into a list of ints."""
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return list(_parse_ints(text))


def _load_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line {raw.strip()!r}; expected key=value")
            key, value = (tok.strip() for tok in line.split("=", 1))
            out[key] = value
    return out


_BOOL = {"true": True, "false": False, "1": True, "0": False}


def _resolve(args, config: dict, key: str, cast, default):
    cli = getattr(args, key, None)
    if cli is not None:
        return cli
    if key in config:
        return cast(config[key])
    return default


def _add_solver_flags(p: argparse.ArgumentParser, with_basis=True):
    p.add_argument("--h", type=float, default=None, help="time step (default 0.001)")
    p.add_argument("--dx", type=float, default=None, help="grid spacing (default 0.001)")
    p.add_argument("--a", type=str, default=None,
                   help="half-width; comma list allowed for sweeps (default 50)")
    p.add_argument("--k-max", type=int, default=None, help="iteration budget (default 3000)")
    p.add_argument("--check-every", type=int, default=None,
                   help="iterations between convergence checks (default 100)")
    p.add_argument("--energy-tol", type=float, default=None,
                   help="per-state energy stabilization threshold (default 1e-5)")
    p.add_argument("--z-max-mode", choices=("a", "2a"), default=None,
                   help="jump-integral truncation radius (default a)")
    p.add_argument("--tail-compensation", action="store_const", const=True, default=None,
                   help="add back the analytic tail of the truncated jump integral")
    if with_basis:
        p.add_argument("--states", type=int, default=None,
                       help="number of trial states (default 1)")
        p.add_argument("--indices", type=str, default=None,
                       help="explicit trial labels, e.g. '0,2' (overrides --states)")
        p.add_argument("--gs-order", type=str, default=None,
                       help="Gram-Schmidt precedence as trial labels, e.g. '2,0'")
    p.add_argument("--out", type=str, default=None, help="output directory (default .)")
    p.add_argument("--config", type=str, default=None,
                   help="key=value file supplying defaults for these flags")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cauchy-spectra",
        description="Eigenvalues and eigenfunctions of the 1D Cauchy operator "
                    "plus a confining potential, by imaginary-time propagation.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oscillator", help="x^2 potential, Hermite-function trials")
    _add_solver_flags(p)

    p = sub.add_parser("well", help="finite square well, box trig trials")
    _add_solver_flags(p)
    p.add_argument("--v0", type=str, default=None,
                   help="well depth; comma list runs one solve per depth")

    p = sub.add_parser("convergence-sweep",
                       help="grid of (a, v0) solves collected into table.csv")
    _add_solver_flags(p)
    p.add_argument("--v0", type=str, default=None,
                   help="well depth list; omit for an oscillator sweep")

    p = sub.add_parser("reference", help="emit semi-analytic oracle tables")
    p.add_argument("--infwell-energies", type=str, default=None,
                   help="levels, e.g. '1..8' or '1,3'")
    p.add_argument("--infwell-psi", type=int, default=None,
                   help="emit the asymptotic well eigenfunction for this level")
    p.add_argument("--airy-psi1", action="store_true",
                   help="emit the oscillator ground-state oracle")
    p.add_argument("--detuning-pairs", type=str, default=None,
                   help="cutoff pairs, e.g. '50:100,100:200,500:inf'")
    p.add_argument("--x-max", type=float, default=3.0)
    p.add_argument("--x-step", type=float, default=0.01)
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("apply-op", help="apply one operator to a CSV function")
    p.add_argument("--input", type=str, required=True, help="GridFunction CSV (x,value)")
    p.add_argument("--operator", choices=("cauchy", "potential", "hamiltonian", "step"),
                   default="cauchy")
    p.add_argument("--potential", choices=("harmonic", "finite_well"), default="harmonic")
    p.add_argument("--v0", type=float, default=None)
    p.add_argument("--h", type=float, default=0.001)
    p.add_argument("--method", choices=("fft", "direct"), default="fft")
    p.add_argument("--z-max-mode", choices=("a", "2a"), default="a")
    p.add_argument("--tail-compensation", action="store_true")
    p.add_argument("--dump-weights", action="store_true",
                   help="also write the kernel stencil as weights.csv")
    p.add_argument("--out", type=str, default=None)
    return ap


def _spec_from_args(args) -> ExperimentSpec:
    config = _load_config_file(args.config) if args.config else {}
    a_raw = _resolve(args, config, "a", str, None)
    a_values = _parse_floats(a_raw) if a_raw is not None else ()
    solver = SolverConfig(
        h=_resolve(args, config, "h", float, SOLVER_DEFAULTS["h"]),
        dx=_resolve(args, config, "dx", float, SOLVER_DEFAULTS["dx"]),
        a=a_values[0] if a_values else SOLVER_DEFAULTS["a"],
        k_max=_resolve(args, config, "k_max", int, SOLVER_DEFAULTS["k_max"]),
        check_every=_resolve(args, config, "check_every", int, SOLVER_DEFAULTS["check_every"]),
        energy_tol=_resolve(args, config, "energy_tol", float, SOLVER_DEFAULTS["energy_tol"]),
        z_max_mode=_resolve(args, config, "z_max_mode", str, SOLVER_DEFAULTS["z_max_mode"]),
        tail_compensation=_resolve(args, config, "tail_compensation",
                                   lambda s: _BOOL[s.lower()],
                                   SOLVER_DEFAULTS["tail_compensation"]),
    )
    v0_raw = _resolve(args, config, "v0", str, None) if hasattr(args, "v0") else None
    v0_values = _parse_floats(str(v0_raw)) if v0_raw is not None else ()
    indices_raw = _resolve(args, config, "indices", str, None)
    gs_raw = _resolve(args, config, "gs_order", str, None)
    mode = {"oscillator": "oscillator", "well": "well",
            "convergence-sweep": "convergence_sweep"}[args.command]
    if mode == "well" and not v0_values:
        raise ValueError("well mode requires --v0")
    return ExperimentSpec(
        mode=mode,
        solver=solver,
        basis_kind="hermite" if not v0_values else "box_trig",
        states=_resolve(args, config, "states", int, 1),
        indices=_parse_ints(indices_raw) if indices_raw else None,
        gs_order=_parse_ints(gs_raw) if gs_raw else None,
        a_values=a_values if mode == "convergence_sweep" else a_values[:1],
        v0_values=v0_values,
        output_dir=_resolve(args, config, "out", str, "."),
    )


def _run_reference(args) -> int:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    wrote = False
    if args.infwell_energies:
        with open(out / "infwell_energies.csv", "w") as fh:
            fh.write("n,E\n")
            for n in _parse_range(args.infwell_energies):
                fh.write(f"{n},{reference.infwell_energy(n):.17g}\n")
        wrote = True
    if args.infwell_psi:
        n = args.infwell_psi
        xs = np.arange(-args.x_max, args.x_max + 0.5 * args.x_step, args.x_step)
        with open(out / f"infwell_psi_{n}.csv", "w") as fh:
            fh.write("x,value\n")
            for x in xs:
                fh.write(f"{x:.17g},{reference.infwell_psi(n, x):.17g}\n")
        wrote = True
    if args.airy_psi1:
        oracle = reference.AiryGroundState()
        xs = np.arange(-args.x_max, args.x_max + 0.5 * args.x_step, args.x_step)
        with open(out / "airy_psi1.csv", "w") as fh:
            fh.write("x,value\n")
            for x in xs:
                fh.write(f"{x:.17g},{oracle(x):.17g}\n")
        wrote = True
    if args.detuning_pairs:
        with open(out / "detuning.csv", "w") as fh:
            fh.write("a,b,delta\n")
            for pair in args.detuning_pairs.split(","):
                lo, hi = pair.split(":")
                b = np.inf if hi.strip() in ("inf", "") else float(hi)
                delta = reference.detuning(float(lo), b)
                fh.write(f"{float(lo):.10g},{'inf' if np.isinf(b) else f'{b:.10g}'},"
                         f"{delta:.17g}\n")
        wrote = True
    if not wrote:
        raise ValueError("reference: nothing requested; pass at least one table flag")
    return 0


def _run_apply_op(args) -> int:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    f = read_csv(args.input)
    kernel = CauchyKernel(f.grid, z_max_mode=args.z_max_mode,
                          tail_compensation=args.tail_compensation)
    if args.potential == "finite_well":
        if args.v0 is None:
            raise ValueError("finite_well needs --v0")
        potential = PotentialSpec.finite_well(args.v0)
    else:
        potential = PotentialSpec.harmonic()
    if args.operator == "cauchy":
        result = kernel.apply(f, method=args.method)
    elif args.operator == "potential":
        result = apply_potential(potential, f)
    elif args.operator == "hamiltonian":
        tf = kernel.apply(f, method=args.method)
        result = GridFunction(f.grid, tf.values + potential.evaluate(f.grid) * f.values)
    else:
        result = step(StrangStep(args.h, kernel, potential), f)
    write_csv(result, out / "result.csv")
    if args.dump_weights:
        write_weights_csv(kernel, out / "weights.csv")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("oscillator", "well", "convergence-sweep"):
            return run(_spec_from_args(args))
        if args.command == "reference":
            return _run_reference(args)
        return _run_apply_op(args)
    except Exception as exc:  # deliberate: CLI boundary emits machine-readable errors
        json.dump({"error": str(exc), "type": type(exc).__name__}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
