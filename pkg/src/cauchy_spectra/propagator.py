"""Small-time semigroup step S(h) = exp(-hV/2) (1 - hT) exp(-hV/2).

The kinetic exponential is linearized to (1 - hT); reference eigenvalue
tables were produced with exactly this factor, so it is the default.
quadratic_kinetic=True adds the h^2 T^2 / 2 term for error studies, which
restores the full O(h^3) local accuracy of the symmetric splitting.
"""

from __future__ import annotations

import warnings

import numpy as np

from .grid import GridFunction, trapezoid_dot
from .operators import CauchyKernel, PotentialSpec

__all__ = ["StrangStep", "step", "evolve"]


class StrangStep:
    """One imaginary-time shift of length h on a fixed grid.

    The nodewise factors exp(-h V(x)/2) are precomputed. For finite wells
    a warning is emitted when h*V0 >= 1/2: the step stays usable (deep-well
    reference runs used h*V0 up to 5) but eigenvalue accuracy degrades.
    """

    def __init__(self, h: float, kernel: CauchyKernel, potential: PotentialSpec,
                 quadratic_kinetic: bool = False, _allow_zero_h: bool = False):
        if not (h > 0.0) and not (_allow_zero_h and h == 0.0):
            raise ValueError("time step h must be positive")
        v = potential.evaluate(kernel.grid)
        if np.any(v < 0.0):
            raise ValueError("potential must be nonnegative for the decay step")
        if potential.kind == "finite_well" and h * potential.v0 >= 0.5:
            warnings.warn(
                f"h*V0 = {h * potential.v0:g} >= 1/2: eigenvalue accuracy degrades; "
                "decrease h for deep wells", stacklevel=2)
        lam = kernel.spectral_bound()
        if h * lam >= 2.0:
            warnings.warn(
                f"h*lambda_max = {h * lam:.3g} >= 2: the linearized kinetic factor "
                "amplifies the highest grid mode and the iteration will diverge; "
                "decrease h or increase dx", stacklevel=2)
        self.h = float(h)
        self.kernel = kernel
        self.potential = potential
        self.quadratic_kinetic = bool(quadratic_kinetic)
        self.half_exp_v = np.exp(-0.5 * h * v)
        self.half_exp_v.flags.writeable = False

    @classmethod
    def zero_time(cls, kernel: CauchyKernel, potential: PotentialSpec) -> "StrangStep":
        """h = 0 step (the identity); intended for tests only."""
        return cls(0.0, kernel, potential, _allow_zero_h=True)

    @property
    def grid(self):
        return self.kernel.grid

    def apply_to_array(self, v: np.ndarray) -> np.ndarray:
        g = self.half_exp_v * v
        tg = self.kernel.apply_to_array(g)
        out = g - self.h * tg
        if self.quadratic_kinetic:
            out += (0.5 * self.h * self.h) * self.kernel.apply_to_array(tg)
        return self.half_exp_v * out

    def __repr__(self):
        return (f"StrangStep(h={self.h}, {self.kernel!r}, {self.potential.kind}, "
                f"quadratic_kinetic={self.quadratic_kinetic})")


def _check_finite(out: np.ndarray, grid) -> None:
    if not np.all(np.isfinite(out)):
        bad = int(np.flatnonzero(~np.isfinite(out))[0])
        raise FloatingPointError(
            f"non-finite value at node {bad} (x={grid.x[bad]}): "
            "h too large or corrupted state")


def step(s: StrangStep, f: GridFunction) -> GridFunction:
    """Apply S(h) once."""
    if f.grid != s.grid:
        raise ValueError(f"grid mismatch: step on {s.grid!r}, f on {f.grid!r}")
    out = s.apply_to_array(f.values)
    _check_finite(out, s.grid)
    return GridFunction(s.grid, out)


def evolve(s: StrangStep, f: GridFunction, k: int, telemetry=None) -> GridFunction:
    """k-fold composition of step, without renormalization.

    telemetry, if given, is a path or writable text stream receiving CSV
    rows ``k,norm,energy_estimate`` per iteration. The energy estimate is
    the Rayleigh-quotient reading -log(<f_k, f_{k+1}> / <f_k, f_k>) / h.
    """
    if k < 1:
        raise ValueError("step count k must be >= 1")
    if f.grid != s.grid:
        raise ValueError(f"grid mismatch: step on {s.grid!r}, f on {f.grid!r}")
    own = telemetry is not None and (
        isinstance(telemetry, (str, bytes)) or hasattr(telemetry, "__fspath__"))
    fh = open(telemetry, "w") if own else telemetry
    try:
        if fh is not None:
            fh.write("k,norm,energy_estimate\n")
        dx = s.grid.dx
        v = f.values
        for i in range(1, k + 1):
            out = s.apply_to_array(v)
            _check_finite(out, s.grid)
            if fh is not None:
                nrm = np.sqrt(trapezoid_dot(out, out, dx))
                if s.h > 0.0:
                    ray = trapezoid_dot(v, out, dx) / trapezoid_dot(v, v, dx)
                    energy = -np.log(ray) / s.h if ray > 0.0 else np.nan
                else:
                    energy = np.nan
                fh.write(f"{i},{nrm:.17g},{energy:.17g}\n")
            v = out
    finally:
        if own:
            fh.close()
    return GridFunction(s.grid, v)
