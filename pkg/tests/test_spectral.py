import math

import numpy as np
import pytest

from savark.errors import ConfigError, SingularSolveError
from savark.spectral import (
    Grid2D,
    RealField,
    Symbol,
    apply_symbol,
    biharmonic,
    dealias,
    dealias_mask,
    divergence,
    forward,
    gradient,
    inner,
    integral,
    inverse,
    laplacian,
    norm_inf,
    norm_l2,
    solve_shifted,
    solve_shifted_block,
)


@pytest.fixture
def grid():
    return Grid2D.square(16)


def field(grid, fn):
    return RealField.from_function(grid, fn)


class TestGrid:
    @pytest.mark.parametrize("n", [0, 7, -4])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(ConfigError):
            Grid2D(n, 8)

    def test_rejects_empty_domain(self):
        with pytest.raises(ConfigError):
            Grid2D(8, 8, 1.0, 1.0)

    def test_wavenumbers_and_nyquist(self, grid):
        assert grid.kx[8] == pytest.approx(8.0)
        assert grid.kx_odd[8] == 0.0
        assert grid.kx[15] == pytest.approx(-1.0)
        assert grid.k2[3, 4] == pytest.approx(25.0)

    def test_unit_domain_scaling(self):
        g = Grid2D.square(8, 0.0, 1.0)
        assert g.kx[1] == pytest.approx(2.0 * math.pi)
        assert g.area == pytest.approx(1.0)
        assert g.hx == pytest.approx(1.0 / 8.0)

    def test_field_shape_checked(self, grid):
        with pytest.raises(ConfigError):
            RealField(grid, np.zeros((4, 4)))

    def test_fields_on_different_grids(self, grid):
        with pytest.raises(ConfigError):
            RealField.zeros(grid) + RealField.zeros(Grid2D.square(8))


class TestOperators:
    def test_laplacian_of_trigonometric_mode(self, grid):
        u = field(grid, lambda X, Y: np.sin(2 * X) * np.cos(3 * Y))
        assert norm_inf(laplacian(u) + 13.0 * u) < 1e-12

    def test_biharmonic(self, grid):
        u = field(grid, lambda X, Y: np.cos(X + 2 * Y))
        assert norm_inf(biharmonic(u) - 25.0 * u) < 1e-11

    def test_gradient(self, grid):
        u = field(grid, lambda X, Y: np.sin(X) * np.cos(2 * Y))
        ux, uy = gradient(u)
        assert norm_inf(ux - field(grid, lambda X, Y: np.cos(X) * np.cos(2 * Y))) < 1e-12
        assert norm_inf(uy + field(grid, lambda X, Y: 2 * np.sin(X) * np.sin(2 * Y))) < 1e-12

    def test_divergence_of_gradient_is_laplacian_below_nyquist(self, grid):
        u = field(grid, lambda X, Y: np.sin(3 * X) * np.cos(Y) + np.cos(5 * Y))
        assert norm_inf(divergence(*gradient(u)) - laplacian(u)) < 1e-11

    def test_apply_symbol(self, grid):
        u = field(grid, lambda X, Y: np.sin(X) * np.sin(Y))
        sigma = Symbol.from_k2(grid, lambda k2: 1.0 + k2)
        assert norm_inf(apply_symbol(sigma, u) - 3.0 * u) < 1e-12

    def test_inner_products(self, grid):
        one = RealField.constant(grid, 1.0)
        assert inner(one, one) == pytest.approx(grid.area)
        s = field(grid, lambda X, Y: np.sin(X) * np.sin(Y))
        assert integral(s) == pytest.approx(0.0, abs=1e-12)
        # (sin x sin y)^2 integrates to pi^2 over (0, 2pi)^2
        assert norm_l2(s) ** 2 == pytest.approx(math.pi ** 2)

    def test_dealias_mask(self):
        g = Grid2D.square(12)
        mask = dealias_mask(g)
        assert int(mask.sum()) == 49
        u = field(g, lambda X, Y: np.cos(X) + np.cos(5 * Y))
        assert norm_inf(dealias(u) - field(g, lambda X, Y: np.cos(X))) < 1e-12


class TestShiftedSolves:
    def test_scalar_shift(self, grid):
        alpha = 0.3
        w = field(grid, lambda X, Y: np.sin(X) * np.sin(2 * Y))
        sigma = Symbol.from_k2(grid, lambda k2: -k2)
        r = (1.0 + 5.0 * alpha) * w
        assert norm_inf(solve_shifted(sigma, alpha, r) - w) < 1e-12

    def test_zero_shift_copies(self, grid):
        r = field(grid, lambda X, Y: np.cos(X))
        out = solve_shifted(Symbol.constant(grid, 1.0), 0.0, r)
        assert out is not r
        assert np.array_equal(out.values, r.values)

    def test_singular_shift(self, grid):
        with pytest.raises(SingularSolveError):
            solve_shifted(Symbol.constant(grid, 1.0), 1.0, RealField.zeros(grid))

    def test_block_solve_residual(self, grid):
        r3 = math.sqrt(3.0) / 6.0
        alpha = 0.01 * np.array([[0.25, 0.25 - r3], [0.25 + r3, 0.25]])
        sigma = Symbol.from_k2(grid, lambda k2: -k2 - 1.0)
        rhs = [
            field(grid, lambda X, Y: np.sin(X) + np.cos(3 * Y)),
            field(grid, lambda X, Y: np.cos(2 * X) * np.sin(Y)),
        ]
        w = solve_shifted_block(sigma, alpha, rhs)
        for i in range(2):
            res = w[i] - rhs[i]
            for j in range(2):
                res = res - apply_symbol(sigma, w[j]) * alpha[i, j]
            assert norm_inf(res) < 1e-12

    def test_block_of_one_matches_scalar(self, grid):
        sigma = Symbol.from_k2(grid, lambda k2: -k2)
        r = field(grid, lambda X, Y: np.sin(2 * X))
        (a,) = solve_shifted_block(sigma, np.array([[0.2]]), [r])
        assert norm_inf(a - solve_shifted(sigma, 0.2, r)) < 1e-14


def random_field(grid, seed):
    return RealField(grid, np.random.default_rng(seed).standard_normal(grid.shape))


def dense_operator(grid, op):
    """Matrix of a linear field map, built column by column from unit fields."""
    n = grid.nx * grid.ny
    cols = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        cols.append(op(RealField(grid, e.reshape(grid.shape))).values.ravel())
    return np.column_stack(cols)


RECTANGLES = [
    Grid2D(16, 12, 0.0, 2.0, 0.0, 3.0),
    Grid2D(12, 20, -1.0, 1.5, 0.0, 0.7),
]


class TestDiscreteIdentities:
    @pytest.mark.parametrize("g", RECTANGLES)
    @pytest.mark.parametrize("seed", range(5))
    def test_laplacian_is_symmetric_and_nonpositive(self, g, seed):
        u, v = random_field(g, seed), random_field(g, seed + 100)
        lhs, rhs = inner(laplacian(u), v), inner(u, laplacian(v))
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)
        assert inner(laplacian(u), u) <= 0.0

    @pytest.mark.parametrize("g", RECTANGLES)
    @pytest.mark.parametrize("seed", range(5))
    def test_divergence_is_minus_adjoint_of_gradient(self, g, seed):
        px, py, v = (random_field(g, seed + k) for k in (0, 10, 20))
        vx, vy = gradient(v)
        lhs = inner(divergence(px, py), v)
        rhs = -(inner(px, vx) + inner(py, vy))
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)

    @pytest.mark.parametrize("g", RECTANGLES)
    def test_transform_round_trip(self, g):
        u = random_field(g, 7)
        assert norm_inf(inverse(forward(u), g) - u) < 1e-13

    @pytest.mark.parametrize("alpha", [0.01, 0.5])
    def test_shifted_solve_matches_dense_matrix(self, alpha):
        g = Grid2D(8, 8, 0.0, 1.0, 0.0, 1.5)
        lap = dense_operator(g, laplacian)
        r = random_field(g, 3)
        dense = np.linalg.solve(np.eye(64) - alpha * lap, r.values.ravel())
        w = solve_shifted(Symbol.from_k2(g, lambda k2: -k2), alpha, r)
        assert np.max(np.abs(w.values.ravel() - dense)) < 1e-10 * max(1.0, np.max(np.abs(dense)))

    def test_dense_laplacian_is_symmetric(self):
        lap = dense_operator(Grid2D(8, 8, 0.0, 1.0, 0.0, 1.5), laplacian)
        assert np.max(np.abs(lap - lap.T)) < 1e-10 * np.max(np.abs(lap))

    @pytest.mark.parametrize("n", [8, 16, 32])
    def test_sine_norm_on_the_periodic_square(self, n):
        g = Grid2D.square(n)
        s = field(g, lambda X, Y: np.sin(X))
        assert inner(s, s) == pytest.approx(2.0 * math.pi ** 2, rel=1e-13)
