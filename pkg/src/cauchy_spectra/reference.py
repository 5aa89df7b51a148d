"""Independent semi-analytic oracles, kept free of the solver machinery.

Contents: the Airy-integral ground state of the x^2-confined Cauchy
operator, the large-n asymptotic energies and eigenfunction formulas for
the infinite square well of that operator, the cutoff detuning model, and
a power-law tail fitter. The Airy function itself is evaluated in-house
(power series up to |t| = 5, asymptotic expansion beyond) so these
routines share nothing with the grid discretization they are used to
check.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from .grid import GridFunction

__all__ = [
    "AIRY_GROUND_ENERGY",
    "airy_ai",
    "AiryGroundState",
    "airy_psi1",
    "infwell_energy",
    "infwell_psi",
    "q_function",
    "gamma_density",
    "g_transform",
    "detuning",
    "tail_exponent_fit",
]

# ground state energy of (-Laplacian)^(1/2) + x^2; equals the magnitude of
# the first zero of Ai'
AIRY_GROUND_ENERGY = 1.01879297

# Ai(0) = 3^(-2/3)/Gamma(2/3) and -Ai'(0) = 3^(-1/3)/Gamma(1/3), pinned
# numerically so the series stays independent of any library Gamma
_AI0 = 0.3550280538878172
_AIP0 = 0.2588194037928068

_SERIES_TERMS = 40
_ASYMPTOTIC_TERMS = 8
_SERIES_RADIUS = 5.0


def airy_ai(t: float) -> float:
    """Airy function Ai(t) for t >= -5.

    Maclaurin series with 40 terms on [-5, 5], 8-term asymptotic expansion
    for t > 5 (relative error there below 4e-7, absolute below 4e-11).
    """
    if t < -_SERIES_RADIUS:
        raise ValueError("airy_ai implemented for t >= -5 only")
    if t <= _SERIES_RADIUS:
        f_term, g_term = 1.0, t
        f_sum, g_sum = f_term, g_term
        t3 = t * t * t
        for k in range(1, _SERIES_TERMS + 1):
            f_term *= t3 / ((3 * k) * (3 * k - 1))
            g_term *= t3 / ((3 * k) * (3 * k + 1))
            f_sum += f_term
            g_sum += g_term
        return _AI0 * f_sum - _AIP0 * g_sum
    z = (2.0 / 3.0) * t ** 1.5
    u, s = 1.0, 1.0
    for k in range(1, _ASYMPTOTIC_TERMS + 1):
        u *= (6 * k - 5) * (6 * k - 1) / (72.0 * k)
        s += (-1) ** k * u / z ** k
    return np.exp(-z) / (2.0 * np.sqrt(np.pi) * t ** 0.25) * s


class AiryGroundState:
    """Ground state psi_1(x) = (A0/pi) int_{-E1}^inf Ai(t) cos(x (t+E1)) dt.

    A0 is fixed by Parseval so that psi_1 has unit L2 norm on the whole
    line: since psi_1 is the cosine transform of Ai(. - E1), the squared
    norm equals (A0^2/pi) int Ai^2. The integral is truncated at t_cut,
    where Ai has decayed far below the quadrature tolerance.
    """

    def __init__(self, t_cut: float = 15.0):
        self.e1 = AIRY_GROUND_ENERGY
        self.t_cut = float(t_cut)
        self._a0 = None

    @property
    def normalization(self) -> float:
        if self._a0 is None:
            ai2 = quad(lambda t: airy_ai(t) ** 2, -self.e1, self.t_cut, limit=200)[0]
            self._a0 = float(np.sqrt(np.pi / ai2))
        return self._a0

    def __call__(self, x: float) -> float:
        # oscillatory weights keep the quadrature accurate out to large x
        xa = abs(float(x))
        ic = quad(airy_ai, -self.e1, self.t_cut, weight="cos", wvar=xa, limit=200)[0]
        if xa == 0.0:
            return self.normalization / np.pi * ic
        is_ = quad(airy_ai, -self.e1, self.t_cut, weight="sin", wvar=xa, limit=200)[0]
        return self.normalization / np.pi * (np.cos(xa * self.e1) * ic
                                             - np.sin(xa * self.e1) * is_)

    def sample(self, xs) -> np.ndarray:
        return np.array([self(x) for x in np.asarray(xs, dtype=float)])


_default_ground_state = AiryGroundState()


def airy_psi1(x: float) -> float:
    """Ground state oracle with the default truncation t_cut = 15."""
    return _default_ground_state(x)


def infwell_energy(n: int) -> float:
    """Large-n asymptotic level n pi/2 - pi/8 of the infinite well on [-1, 1]."""
    if n < 1:
        raise ValueError("level index n must be >= 1")
    return n * np.pi / 2.0 - np.pi / 8.0


def q_function(x: float) -> float:
    """Smooth switch: 0 below -1/3, 1 above 1/3, quadratic blend between."""
    third = 1.0 / 3.0
    if x <= -third:
        return 0.0
    if x < 0.0:
        return 4.5 * (x + third) ** 2
    if x < third:
        return 1.0 - 4.5 * (x - third) ** 2
    return 1.0


# 200-point Gauss-Legendre on (0, pi/2) for the inner integral of
# gamma_density after the substitution r = tan(theta)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(200)
_GL_THETA = 0.25 * np.pi * (_GL_NODES + 1.0)
_GL_W = 0.25 * np.pi * _GL_WEIGHTS
_GL_TAN = np.tan(_GL_THETA)


def gamma_density(s: float) -> float:
    """Positive density gamma(s) whose Laplace transform is g_transform.

    gamma(s) = s / (pi sqrt(2) (1+s^2)) * exp(-(1/pi) int_0^inf
    log(1+rs)/(1+r^2) dr); the inner integral is evaluated on a fixed
    200-point rule after r = tan(theta).
    """
    if s <= 0.0:
        return 0.0
    inner = float(np.dot(_GL_W, np.log1p(s * _GL_TAN))) / np.pi
    return s / (np.pi * np.sqrt(2.0) * (1.0 + s * s)) * np.exp(-inner)


def g_transform(x: float) -> float:
    """Laplace transform G(x) = int_0^inf exp(-xs) gamma(s) ds, x > 0.

    The outer integral is truncated at s = 200/x; the discarded tail is
    below exp(-200) * gamma-bound and therefore far under the quadrature
    tolerance (gamma(s) <= s / (pi sqrt(2) (1+s^2))).
    """
    if x <= 0.0:
        raise ValueError("g_transform defined for x > 0")
    return quad(lambda s: np.exp(-x * s) * gamma_density(s), 0.0, 200.0 / x,
                limit=200)[0]


def infwell_psi(n: int, x: float) -> float:
    """Large-n asymptotic eigenfunction of the infinite well on [-1, 1].

    psi_n(x) = q(-x) F_n(1+x) - (-1)^n q(x) F_n(1-x) with
    F_n(y) = sin(E_n y + pi/8) - G(E_n y). The formula approximates a
    hard-wall state, so it is taken as exactly 0 for |x| >= 1; inside,
    both arguments of F_n are positive and G is well defined.
    """
    if n < 1:
        raise ValueError("level index n must be >= 1")
    if abs(x) >= 1.0:
        return 0.0
    en = infwell_energy(n)

    def fn(y):
        return np.sin(en * y + np.pi / 8.0) - g_transform(en * y)

    qm = q_function(-x)
    qp = q_function(x)
    t1 = qm * fn(1.0 + x) if qm != 0.0 else 0.0
    t2 = qp * fn(1.0 - x) if qp != 0.0 else 0.0
    return t1 - (-1) ** n * t2


def detuning(a: float, b: float) -> float:
    """Eigenvalue shift (2/pi)(1/a - 1/b) between jump cutoffs a < b."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("cutoffs must be positive")
    return (2.0 / np.pi) * (1.0 / a - 1.0 / b)


def tail_exponent_fit(f: GridFunction, lo: float, hi: float) -> float:
    """Decay exponent p of |f| ~ x^(-p), least squares on log|f| vs log x.

    Fits over the nodes with lo <= x <= hi, skipping exact zeros. Returns
    the positive exponent (the negated log-log slope).
    """
    if not (0.0 < lo < hi):
        raise ValueError("window must satisfy 0 < lo < hi")
    if hi > f.grid.a + 1e-12:
        raise ValueError("window extends past the grid half-width")
    x = f.grid.x
    sel = (x >= lo) & (x <= hi) & (np.abs(f.values) > 0.0)
    if np.count_nonzero(sel) < 2:
        raise ValueError(f"no usable samples in [{lo}, {hi}]")
    slope = np.polyfit(np.log(x[sel]), np.log(np.abs(f.values[sel])), 1)[0]
    return float(-slope)
