import io

import numpy as np
import pytest

from cauchy_spectra import (Grid, GridFunction, inner_product, norm, normalize,
                            read_csv, restrict_or_embed, write_csv)

from conftest import sample


class TestGrid:
    def test_nodes_and_counts(self):
        g = Grid(1.0, 0.5)
        assert g.n_points == 5
        assert np.allclose(g.x, [-1.0, -0.5, 0.0, 0.5, 1.0])
        assert g.x[-1] == pytest.approx(g.a, rel=1e-12)

    def test_nodes_mirror_exactly(self):
        g = Grid(50.0, 0.001)
        assert g.n_points == 100001
        assert np.array_equal(g.x, -g.x[::-1])

    def test_bad_spacing_rejected(self):
        with pytest.raises(ValueError):
            Grid(1.0, 0.3)

    def test_too_few_nodes(self):
        with pytest.raises(ValueError):
            Grid(1.0, 2.0)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            Grid(-1.0, 0.1)
        with pytest.raises(ValueError):
            Grid(1.0, -0.1)

    def test_index_of(self):
        g = Grid(2.0, 0.5)
        assert g.index_of(0.0) == 4
        assert g.index_of(2.0) == 8
        with pytest.raises(ValueError):
            g.index_of(3.0)


class TestGridFunction:
    def test_length_mismatch(self):
        g = Grid(1.0, 0.5)
        with pytest.raises(ValueError):
            GridFunction(g, np.ones(4))

    def test_rejects_non_finite(self):
        g = Grid(1.0, 0.5)
        with pytest.raises(ValueError, match="non-finite"):
            GridFunction(g, [0.0, 1.0, np.nan, 1.0, 0.0])

    def test_immutable(self):
        g = Grid(1.0, 0.5)
        f = GridFunction(g, np.ones(5))
        with pytest.raises(ValueError):
            f.values[0] = 2.0

    def test_input_array_copied(self):
        g = Grid(1.0, 0.5)
        src = np.ones(5)
        f = GridFunction(g, src)
        src[0] = 99.0
        assert f.values[0] == 1.0


class TestInnerProduct:
    def test_constant_on_unit_interval(self):
        g = Grid(1.0, 0.5)
        one = GridFunction(g, np.ones(5))
        assert inner_product(one, one) == pytest.approx(2.0, abs=1e-15)

    def test_odd_times_even_vanishes(self):
        g = Grid(2.0, 0.01)
        odd = sample(g, lambda x: x * np.exp(-x * x))
        even = sample(g, lambda x: np.cos(x))
        assert abs(inner_product(odd, even)) < 1e-12

    def test_cos_half_pi_normalized(self, unit_grid):
        # oracle: antiderivative of cos^2(pi x/2) is x/2 + sin(pi x)/(2 pi)
        exact = (0.5 + np.sin(np.pi) / (2 * np.pi)) - (-0.5 + np.sin(-np.pi) / (2 * np.pi))
        f = sample(unit_grid, lambda x: np.cos(np.pi * x / 2))
        assert inner_product(f, f) == pytest.approx(exact, abs=1e-6)
        assert exact == 1.0

    def test_symmetry_and_bilinearity(self):
        g = Grid(3.0, 0.1)
        rng = np.random.default_rng(3)
        f = GridFunction(g, rng.standard_normal(g.n_points))
        h = GridFunction(g, rng.standard_normal(g.n_points))
        w = GridFunction(g, 2.5 * f.values + 0.5 * h.values)
        assert inner_product(f, h) == pytest.approx(inner_product(h, f), rel=1e-14)
        assert inner_product(w, h) == pytest.approx(
            2.5 * inner_product(f, h) + 0.5 * inner_product(h, h), rel=1e-12)

    def test_cauchy_schwarz(self):
        g = Grid(3.0, 0.1)
        rng = np.random.default_rng(11)
        for _ in range(8):
            f = GridFunction(g, rng.standard_normal(g.n_points))
            h = GridFunction(g, rng.standard_normal(g.n_points))
            assert abs(inner_product(f, h)) <= norm(f) * norm(h) * (1 + 1e-12)

    def test_grid_mismatch(self):
        f = GridFunction(Grid(1.0, 0.5), np.ones(5))
        h = GridFunction(Grid(2.0, 0.5), np.ones(9))
        with pytest.raises(ValueError, match="grid mismatch"):
            inner_product(f, h)


class TestNormalize:
    def test_scaling(self):
        g = Grid(1.0, 0.5)
        v = np.array([0.0, 1.0, 1.0, 1.0, 0.0])
        f = GridFunction(g, 2.0 * v / norm(GridFunction(g, v)))
        out = normalize(f)
        assert norm(out) == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(out.values, f.values / 2.0, atol=1e-12)

    def test_idempotent(self, unit_grid):
        f = normalize(sample(unit_grid, lambda x: np.exp(-x * x)))
        again = normalize(f)
        assert np.max(np.abs(again.values - f.values)) < 1e-12

    def test_scale_invariance(self, unit_grid):
        f = sample(unit_grid, lambda x: 1.0 + x * x)
        a = normalize(f)
        b = normalize(GridFunction(unit_grid, 7.25 * f.values))
        assert np.max(np.abs(a.values - b.values)) < 1e-12

    def test_sign_convention(self, unit_grid):
        f = sample(unit_grid, lambda x: -np.cos(np.pi * x / 2))
        out = normalize(f)
        assert out.values[unit_grid.index_of(0.0)] > 0.0

    def test_preserve_sign(self, unit_grid):
        f = sample(unit_grid, lambda x: -np.cos(np.pi * x / 2))
        out = normalize(f, preserve_sign=True)
        assert out.values[unit_grid.index_of(0.0)] < 0.0

    def test_null_vector(self):
        g = Grid(1.0, 0.5)
        with pytest.raises(ValueError, match="cannot normalize null vector"):
            normalize(GridFunction(g, np.zeros(5)))


class TestRestrictOrEmbed:
    def test_embed_zero_extends(self):
        small = Grid(1.0, 0.1)
        big = Grid(5.0, 0.1)
        f = sample(small, lambda x: 1.0 - x * x)
        out = restrict_or_embed(f, big)
        assert np.all(out.values[np.abs(big.x) > 1.0 + 1e-12] == 0.0)
        inside = np.abs(big.x) <= 1.0 + 1e-12
        assert np.array_equal(out.values[inside], f.values)

    def test_round_trip_exact(self):
        small = Grid(1.0, 0.1)
        big = Grid(5.0, 0.1)
        f = sample(small, lambda x: np.sin(3 * x))
        back = restrict_or_embed(restrict_or_embed(f, big), small)
        assert np.array_equal(back.values, f.values)

    def test_inner_product_preserved_inside_support(self):
        small = Grid(1.0, 0.01)
        f = sample(small, lambda x: np.cos(np.pi * x / 2))
        out = restrict_or_embed(f, Grid(2.0, 0.01))
        assert inner_product(out, out) == pytest.approx(inner_product(f, f), abs=1e-12)

    def test_embedded_constant_keeps_samples(self):
        small = Grid(1.0, 0.5)
        f = GridFunction(small, np.ones(5))
        out = restrict_or_embed(f, Grid(2.0, 0.5))
        assert np.array_equal(out.values, [0, 0, 1, 1, 1, 1, 1, 0, 0])
        # the support-edge samples sit interior to the wider grid, so the
        # trapezoid rule no longer halves them
        assert inner_product(out, out) == pytest.approx(2.5, abs=1e-12)

    def test_spacing_mismatch(self):
        f = GridFunction(Grid(1.0, 0.5), np.ones(5))
        with pytest.raises(ValueError, match="incompatible spacing"):
            restrict_or_embed(f, Grid(1.0, 0.25))

    def test_misaligned_grids(self):
        f = GridFunction(Grid(1.0, 0.5), np.ones(5))
        with pytest.raises(ValueError, match="alignment"):
            restrict_or_embed(f, Grid(1.25, 0.5))


class TestCsv:
    def test_round_trip_bitwise(self):
        g = Grid(2.0, 0.25)
        rng = np.random.default_rng(5)
        f = GridFunction(g, rng.standard_normal(g.n_points))
        buf = io.StringIO()
        write_csv(f, buf)
        buf.seek(0)
        assert buf.readline() == "x,value\n"
        buf.seek(0)
        back = read_csv(buf)
        assert back.grid == g
        assert np.array_equal(back.values, f.values)

    def test_file_round_trip(self, tmp_path):
        g = Grid(1.0, 0.125)
        f = sample(g, lambda x: np.exp(x))
        path = tmp_path / "f.csv"
        write_csv(f, path)
        back = read_csv(path)
        assert np.array_equal(back.values, f.values)

    def test_bad_header(self):
        with pytest.raises(ValueError, match="header"):
            read_csv(io.StringIO("a,b\n1,2\n"))
