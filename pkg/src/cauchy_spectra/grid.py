"""Uniform 1D grids on [-a, a] and real-valued functions sampled on them.

A grid function is defined as identically zero outside [-a, a]; every
operator in this package relies on that zero extension when a stencil
reaches past the endpoints.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Grid",
    "GridFunction",
    "inner_product",
    "norm",
    "normalize",
    "restrict_or_embed",
    "write_csv",
    "read_csv",
]


class Grid:
    """Uniform nodes x_j = -a + j*dx for j = 0 .. n_points-1.

    Both endpoints are nodes, so dx must evenly divide 2a. Nodes are built
    symmetrically around 0 so that x_j == -x_{n-1-j} holds exactly in
    floating point, which keeps parity arguments exact.
    """

    __slots__ = ("a", "dx", "n_points", "x")

    def __init__(self, a: float, dx: float):
        if not (a > 0.0) or not (dx > 0.0):
            raise ValueError("grid requires a > 0 and dx > 0")
        n = int(round(2.0 * a / dx)) + 1
        if n < 3:
            raise ValueError("grid needs at least 3 nodes; decrease dx")
        x = (np.arange(n) - (n - 1) / 2.0) * dx
        if abs(x[-1] - a) > 1e-12 * max(1.0, abs(a)):
            raise ValueError(f"dx={dx!r} does not evenly divide the interval [-{a!r}, {a!r}]")
        self.a = float(a)
        self.dx = float(dx)
        self.n_points = n
        self.x = x
        self.x.flags.writeable = False

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return (self.a == other.a and self.dx == other.dx
                and self.n_points == other.n_points)

    def __hash__(self):
        return hash((self.a, self.dx, self.n_points))

    def __repr__(self):
        return f"Grid(a={self.a}, dx={self.dx}, n_points={self.n_points})"

    def index_of(self, x: float) -> int:
        """Index of the node closest to x (x must lie within one dx of a node)."""
        j = int(round((x + self.a) / self.dx))
        if j < 0 or j >= self.n_points:
            raise ValueError(f"x={x} outside [-{self.a}, {self.a}]")
        return j


class GridFunction:
    """Real samples on a Grid, immutable after construction.

    The represented function is the piecewise value at the nodes inside
    [-a, a] and exactly zero outside.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values):
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.ndim != 1 or values.size != grid.n_points:
            raise ValueError(
                f"values length {values.size} does not match grid with {grid.n_points} nodes")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise ValueError(f"non-finite sample at node {bad} (x={grid.x[bad]})")
        if values.flags.writeable:
            values = values.copy()
            values.flags.writeable = False
        self.grid = grid
        self.values = values

    def __repr__(self):
        return f"GridFunction({self.grid!r}, max|f|={np.max(np.abs(self.values)):.3g})"


def _check_same_grid(f: GridFunction, g: GridFunction):
    if f.grid != g.grid:
        raise ValueError(f"grid mismatch: {f.grid!r} vs {g.grid!r}")


def trapezoid_dot(u, v, dx):
    """Trapezoid-rule integral of the nodewise product of two sample arrays."""
    s = float(np.dot(u, v))
    s -= 0.5 * (u[0] * v[0] + u[-1] * v[-1])
    return s * dx


def inner_product(f: GridFunction, g: GridFunction) -> float:
    """Trapezoid approximation of the L2 product of f and g over [-a, a]."""
    _check_same_grid(f, g)
    return trapezoid_dot(f.values, g.values, f.grid.dx)


def norm(f: GridFunction) -> float:
    """L2 norm sqrt(<f, f>)."""
    return float(np.sqrt(trapezoid_dot(f.values, f.values, f.grid.dx)))


def normalize(f: GridFunction, preserve_sign: bool = False) -> GridFunction:
    """Scale f to unit L2 norm.

    Unless preserve_sign is set, the overall sign is fixed so that the
    sample of largest absolute value is positive. That makes outputs
    deterministic; the sign itself carries no meaning.
    """
    nrm = norm(f)
    if nrm <= 0.0:
        raise ValueError("cannot normalize null vector")
    v = f.values / nrm
    if not preserve_sign:
        peak = int(np.argmax(np.abs(v)))
        if v[peak] < 0.0:
            v = -v
    return GridFunction(f.grid, v)


def restrict_or_embed(f: GridFunction, target: Grid) -> GridFunction:
    """Move f to another grid with the same spacing and node alignment.

    Samples are copied where nodes coincide; target nodes with no source
    counterpart get 0 (the zero extension), and source nodes outside the
    target are dropped.
    """
    src = f.grid
    if abs(src.dx - target.dx) > 1e-12 * src.dx:
        raise ValueError(f"incompatible spacing: {src.dx} vs {target.dx}")
    # both grids are centered at 0, so nodes align iff the center offset
    # (n_t - n_s)/2 is a whole number of nodes
    if (target.n_points - src.n_points) % 2 != 0:
        raise ValueError("grids do not share node alignment")
    shift = (target.n_points - src.n_points) // 2
    out = np.zeros(target.n_points)
    lo_t = max(0, shift)
    hi_t = min(target.n_points, src.n_points + shift)
    if lo_t < hi_t:
        out[lo_t:hi_t] = f.values[lo_t - shift:hi_t - shift]
    return GridFunction(target, out)


def write_csv(f: GridFunction, path_or_file) -> None:
    """Serialize as CSV with header ``x,value`` at full double precision."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w") if own else path_or_file
    try:
        fh.write("x,value\n")
        for x, v in zip(f.grid.x, f.values):
            fh.write(f"{x:.17g},{v:.17g}\n")
    finally:
        if own:
            fh.close()


def read_csv(path_or_file) -> GridFunction:
    """Load a GridFunction written by write_csv, reconstructing its grid."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "r") if own else path_or_file
    try:
        header = fh.readline().strip()
        if header != "x,value":
            raise ValueError(f"expected header 'x,value', got {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    finally:
        if own:
            fh.close()
    x, v = data[:, 0], data[:, 1]
    if x.size < 3:
        raise ValueError("need at least 3 rows")
    dx = (x[-1] - x[0]) / (x.size - 1)
    if np.max(np.abs(np.diff(x) - dx)) > 1e-9 * dx:
        raise ValueError("nodes are not uniformly spaced")
    a = 0.5 * (x[-1] - x[0])
    if abs(x[0] + a) > 1e-9 * max(1.0, a):
        raise ValueError("nodes are not symmetric around 0")
    return GridFunction(Grid(a, dx), v)
