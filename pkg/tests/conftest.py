import numpy as np
import pytest

from cauchy_spectra import Grid, GridFunction


@pytest.fixture
def unit_grid():
    return Grid(1.0, 0.001)


def sample(grid: Grid, fn) -> GridFunction:
    return GridFunction(grid, fn(grid.x))


def random_interior(grid: Grid, rng) -> GridFunction:
    """Random samples vanishing at the two boundary nodes.

    The trapezoid rule halves the endpoint weights, so the discrete
    operator is exactly self-adjoint only on this boundary-vanishing
    subspace; confined states live there to machine precision anyway.
    """
    v = rng.standard_normal(grid.n_points)
    v[0] = v[-1] = 0.0
    return GridFunction(grid, v)
