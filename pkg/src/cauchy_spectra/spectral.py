"""Iterative eigensolver: trial set, decay stepping, ordered Gram-Schmidt.

The driver repeats, for a set of n trial functions,

    1. shift every slot by S(h),
    2. read per-slot energies E_i = -log(<Phi_i, S(h) Phi_i>) / h,
    3. re-orthonormalize in a declared Gram-Schmidt precedence,

until all energies stabilize over a check window or the iteration budget
runs out. Which eigenstate a slot converges to is selected by the trial
set's parity and overlap structure, not by node counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, GridFunction, normalize, trapezoid_dot
from .operators import CauchyKernel, PotentialSpec, Z_MAX_MODES
from .propagator import StrangStep

__all__ = [
    "TrialBasis",
    "SolverConfig",
    "SpectralResult",
    "hermite_function",
    "make_trial",
    "gram_schmidt_ordered",
    "energy_estimate",
    "solve",
    "solve_with_trials",
    "count_nodes",
]


@dataclass(frozen=True)
class TrialBasis:
    """Labeled trial set with a Gram-Schmidt precedence order.

    kind "hermite": label i >= 0 is the i-th Hermite function
    H_i(x) exp(-x^2/2), the natural whole-line choice. kind "box_trig":
    label n >= 1 is cos(n pi x / 2) for odd n and sin(n pi x / 2) for even
    n, supported on |x| < 1 and zero outside.

    gs_order lists the same labels in the precedence used at each
    orthonormalization pass (first listed is only normalized); the default
    precedence is ascending label order. Orderings only reshuffle the
    transients, not the converged set, but slot labels follow them.
    """

    kind: str
    indices: tuple
    gs_order: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("hermite", "box_trig"):
            raise ValueError(f"unknown trial kind {self.kind!r}")
        idx = tuple(int(i) for i in self.indices)
        if not idx:
            raise ValueError("trial basis needs at least one index")
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate trial indices {idx}")
        lo = 0 if self.kind == "hermite" else 1
        if any(i < lo for i in idx):
            raise ValueError(f"{self.kind} indices must be >= {lo}, got {idx}")
        object.__setattr__(self, "indices", idx)
        if self.gs_order is not None:
            order = tuple(int(i) for i in self.gs_order)
            if sorted(order) != sorted(idx):
                raise ValueError(f"gs_order {order} is not a permutation of indices {idx}")
            object.__setattr__(self, "gs_order", order)

    @property
    def effective_gs_order(self) -> tuple:
        return self.gs_order if self.gs_order is not None else tuple(sorted(self.indices))

    def order_positions(self) -> list:
        """gs_order translated to positions into the trial list."""
        return [self.indices.index(i) for i in self.effective_gs_order]


def hermite_function(i: int, x: np.ndarray) -> np.ndarray:
    """Normalized Hermite function H_i(x) exp(-x^2/2) / sqrt(2^i i! sqrt(pi)).

    Uses the normalized three-term recurrence, which keeps the Gaussian
    factored in and avoids the overflow the raw Rodrigues polynomials hit
    around i = 15.
    """
    if i < 0:
        raise ValueError("hermite index must be >= 0")
    h_prev = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if i == 0:
        return h_prev
    h_cur = np.sqrt(2.0) * x * h_prev
    for j in range(1, i):
        h_prev, h_cur = h_cur, np.sqrt(2.0 / (j + 1)) * x * h_cur - np.sqrt(j / (j + 1.0)) * h_prev
    return h_cur


def _box_function(n: int, grid: Grid) -> np.ndarray:
    x = grid.x
    v = np.cos(0.5 * n * np.pi * x) if n % 2 == 1 else np.sin(0.5 * n * np.pi * x)
    return np.where(np.abs(x) >= 1.0 - 1e-12, 0.0, v)


def make_trial(basis: TrialBasis, grid: Grid) -> list:
    """Sample the trial set on grid and normalize each function."""
    out = []
    for i in basis.indices:
        if basis.kind == "hermite":
            v = hermite_function(i, grid.x)
        else:
            if grid.a < 1.0:
                raise ValueError("box_trig trials need a grid with a >= 1")
            v = _box_function(i, grid)
        out.append(normalize(GridFunction(grid, v), preserve_sign=True))
    return out


def gram_schmidt_ordered(fs: list, order=None) -> list:
    """Orthonormalize following a precedence order.

    order is a permutation of positions 0..len(fs)-1 (default: as listed).
    The first position in order is only normalized; each later one is
    orthogonalized against all previously processed, then normalized.
    Results come back in the original positional slots, signs preserved.
    """
    n = len(fs)
    if order is None:
        order = range(n)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order {order} is not a permutation of 0..{n - 1}")
    grid = fs[0].grid
    dx = grid.dx
    out = [None] * n
    done = []
    for slot in order:
        v = fs[slot].values.copy()
        for p in done:
            v -= trapezoid_dot(out[p], v, dx) * out[p]
        nrm = np.sqrt(trapezoid_dot(v, v, dx))
        if nrm < 1e-10:
            raise ValueError(f"trial set degenerated: slot {slot} is null after projection")
        out[slot] = v / nrm
        done.append(slot)
    return [GridFunction(grid, v) for v in out]


def energy_estimate(s: StrangStep, f: GridFunction) -> float:
    """-log(<f, S(h) f>) / h for a normalized f."""
    dx = f.grid.dx
    nrm = np.sqrt(trapezoid_dot(f.values, f.values, dx))
    if abs(nrm - 1.0) > 1e-6:
        raise ValueError(f"energy estimate requires a normalized state, got ||f|| = {nrm!r}")
    expect = trapezoid_dot(f.values, s.apply_to_array(f.values), dx)
    if expect <= 0.0:
        raise ValueError(
            f"non-positive step expectation {expect!r}: diverged state or h*V too large")
    return -np.log(expect) / s.h


@dataclass
class SolverConfig:
    """Run parameters for solve(); defaults match the standard runs."""

    h: float = 0.001
    a: float = 50.0
    dx: float = 0.001
    k_max: int = 3000
    check_every: int = 100
    energy_tol: float = 1e-5
    z_max_mode: str = "a"
    tail_compensation: bool = False

    def __post_init__(self):
        if not (self.h > 0.0):
            raise ValueError("h must be > 0")
        if not (self.a >= 1.0):
            raise ValueError("a must be >= 1")
        if not (self.dx > 0.0):
            raise ValueError("dx must be > 0")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.check_every < 1:
            raise ValueError("check_every must be >= 1")
        if not (self.energy_tol > 0.0):
            raise ValueError("energy_tol must be > 0")
        if self.z_max_mode not in Z_MAX_MODES:
            raise ValueError(f"z_max_mode must be one of {Z_MAX_MODES}")

    def make_grid(self) -> Grid:
        return Grid(self.a, self.dx)

    def make_kernel(self, grid: Grid | None = None) -> CauchyKernel:
        return CauchyKernel(grid or self.make_grid(), z_max_mode=self.z_max_mode,
                            tail_compensation=self.tail_compensation)


@dataclass
class SpectralResult:
    """Converged eigenpairs plus the full per-iteration energy record.

    Slots keep the positional order of the trial set (no re-sorting when
    energy curves cross during transients); sorted_eigenvalues gives the
    ascending view.
    """

    eigenvalues: list
    eigenfunctions: list
    energy_history: np.ndarray  # shape (iterations_used, n_states)
    iterations_used: int
    converged_flags: list
    config: SolverConfig | None = field(default=None, repr=False)

    @property
    def sorted_eigenvalues(self) -> list:
        return sorted(self.eigenvalues)

    @property
    def converged(self) -> bool:
        return all(self.converged_flags)


def solve_with_trials(config: SolverConfig, potential: PotentialSpec,
                      trials: list, order=None) -> SpectralResult:
    """Run the iteration on explicitly given trial functions.

    trials must live on config's grid (a, dx) and be linearly independent;
    order is a position permutation for the Gram-Schmidt precedence.
    """
    grid = trials[0].grid
    if grid != config.make_grid():
        raise ValueError("trial functions are not on the configured grid")
    kernel = config.make_kernel(grid)
    s = StrangStep(config.h, kernel, potential)
    dx = grid.dx
    n = len(trials)
    if order is None:
        order = list(range(n))

    vs = [normalize(t, preserve_sign=True).values for t in trials]
    history = np.empty((config.k_max, n))
    flags = [False] * n
    k_used = config.k_max
    for it in range(config.k_max):
        us = [s.apply_to_array(v) for v in vs]
        for i, (v, u) in enumerate(zip(vs, us)):
            if not np.all(np.isfinite(u)):
                bad = int(np.flatnonzero(~np.isfinite(u))[0])
                raise FloatingPointError(
                    f"slot {i}: non-finite value at node {bad} (x={grid.x[bad]})")
            expect = trapezoid_dot(v, u, dx)
            if expect <= 0.0:
                raise ValueError(
                    f"slot {i}: non-positive step expectation {expect!r} at iteration {it + 1}")
            history[it, i] = -np.log(expect) / config.h
        # ordered Gram-Schmidt pass on the raw shifted set
        new_vs = [None] * n
        done = []
        for slot in order:
            w = us[slot]
            for p in done:
                w = w - trapezoid_dot(new_vs[p], w, dx) * new_vs[p]
            nrm = np.sqrt(trapezoid_dot(w, w, dx))
            if nrm < 1e-10:
                raise ValueError(
                    f"trial set degenerated: slot {slot} is null after projection")
            new_vs[slot] = w / nrm
            done.append(slot)
        vs = new_vs
        k = it + 1
        if k % config.check_every == 0 and k >= 2 * config.check_every:
            delta = np.abs(history[it] - history[it - config.check_every])
            flags = [bool(d < config.energy_tol) for d in delta]
            if all(flags):
                k_used = k
                break

    funcs = [normalize(GridFunction(grid, v)) for v in vs]
    return SpectralResult(
        eigenvalues=[float(e) for e in history[k_used - 1]],
        eigenfunctions=funcs,
        energy_history=history[:k_used].copy(),
        iterations_used=k_used,
        converged_flags=flags,
        config=config,
    )


def solve(config: SolverConfig, potential: PotentialSpec,
          basis: TrialBasis) -> SpectralResult:
    """Full run: build the trial set on the configured grid and iterate."""
    grid = config.make_grid()
    trials = make_trial(basis, grid)
    return solve_with_trials(config, potential, trials, order=basis.order_positions())


def count_nodes(f: GridFunction, lo: float, hi: float, node_eps: float = 1e-8) -> int:
    """Strict sign changes of f between consecutive samples on [lo, hi].

    Samples with |value| <= node_eps are skipped so a zero crossing is not
    double counted. Nodal counts are a diagnostic label only; there is no
    nodal-line theorem backing them for nonlocal generators.
    """
    if lo >= hi:
        return 0
    x = f.grid.x
    sel = (x >= lo) & (x <= hi)
    v = f.values[sel]
    v = v[np.abs(v) > node_eps]
    if v.size < 2:
        return 0
    return int(np.sum(np.signbit(v[1:]) != np.signbit(v[:-1])))
