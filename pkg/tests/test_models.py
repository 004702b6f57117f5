import math

import numpy as np
import pytest

from savark.errors import ConfigError, SolverError
from savark.models import (
    AllenCahn,
    CahnHilliard,
    MolecularBeamEpitaxy,
    energies,
    make_model,
    q_init,
    sine_product_cosine_time,
    without_nonlinearity,
)
from savark.integrators import SAVState
from savark.harness.initial_conditions import random_smooth
from savark.spectral import Grid2D, RealField, gradient, inner, integral, norm_inf


def smooth(grid, amp=0.3):
    return RealField.from_function(
        grid, lambda X, Y: amp * (np.sin(X) * np.cos(2 * Y) + 0.5 * np.cos(3 * X + Y))
    )


def models():
    return [
        AllenCahn(0.3, kappa=1.0),
        AllenCahn(0.3, kappa=2.0, c=5.0),
        CahnHilliard(0.5, 0.4, kappa=0.0),
        CahnHilliard(0.5, 0.4, kappa=1.5),
        MolecularBeamEpitaxy(1.0, 0.1, kappa=0.0),
        MolecularBeamEpitaxy(1.0, 0.1, kappa=0.7),
        MolecularBeamEpitaxy(1.0, 0.1, kappa=0.2, slope_selection=False),
    ]


@pytest.mark.parametrize("model", models(), ids=lambda m: f"{m.name}-k{m.kappa}")
def test_modified_energy_equals_original_at_consistent_q(model):
    grid = Grid2D.square(16)
    u = smooth(grid)
    q = q_init(model, u)
    assert model.modified_energy(u, q) == pytest.approx(model.original_energy(u), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("model", models(), ids=lambda m: f"{m.name}-k{m.kappa}")
def test_reformulated_velocity_matches_original(model):
    grid = Grid2D.square(16)
    u = smooth(grid)
    f = model.variational(u)
    v = model.velocity(u, model.w_value(u), f)
    ref = model.original_velocity(u)
    assert norm_inf(v - ref) <= 1e-10 * max(1.0, norm_inf(ref))


@pytest.mark.parametrize("model", models(), ids=lambda m: f"{m.name}-k{m.kappa}-s{getattr(m, 'slope_selection', '')}")
@pytest.mark.parametrize("seed", range(20))
def test_variational_derivative_matches_central_difference(model, seed):
    # d/deta W(u + eta phi) at eta = 0 equals (f, phi)_N
    grid = Grid2D.square(16)
    u = random_smooth(grid, seed, amplitude=0.4)
    phi = random_smooth(grid, seed + 1000, amplitude=1.0)
    eta = 1e-4
    slope = (model.w_value(u + eta * phi) - model.w_value(u - eta * phi)) / (2.0 * eta)
    if isinstance(model, MolecularBeamEpitaxy):
        ux, uy, p = model._slopes(u)
        px, py = gradient(phi)
        m = model._flux_weight(p) / (2.0 * model.w_value(u))
        pairing = inner(RealField(grid, m * ux.values), px) + inner(RealField(grid, m * uy.values), py)
        assert inner(model.variational(u), phi) == pytest.approx(pairing, rel=1e-10, abs=1e-12)
    else:
        pairing = inner(model.variational(u), phi)
    assert slope == pytest.approx(pairing, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("model", [m for m in models() if m.mass_conserving], ids=lambda m: f"{m.name}-k{m.kappa}")
def test_conserving_models_have_zero_mean_velocity(model):
    grid = Grid2D.square(16)
    u = smooth(grid) + RealField.constant(grid, 0.2)
    v = model.velocity(u, model.w_value(u), model.variational(u))
    assert integral(v) == pytest.approx(0.0, abs=1e-11)


def test_cahn_hilliard_q_of_zero_field():
    # W^2 = 1/4 |Omega| + C|Omega| = 5 pi^2 on (0, 2 pi)^2
    model = CahnHilliard(1.0, 0.01)
    q = q_init(model, RealField.zeros(Grid2D.square(8)))
    assert q == pytest.approx(math.pi * math.sqrt(5.0))


def test_allen_cahn_variational_of_constant_field():
    grid = Grid2D.square(8, 0.0, 1.0)
    model = AllenCahn(0.01, kappa=1.0, c=1.0)
    a = 0.5
    u = RealField.constant(grid, a)
    w = math.sqrt(0.25 * (a * a - 1.0) ** 2 - 0.5 * a * a + 1.0)
    assert model.w_value(u) == pytest.approx(w)
    assert np.allclose(model.variational(u).values, (a ** 3 - 2.0 * a) / (2.0 * w))


def test_energy_constants():
    g = Grid2D.square(8)
    assert AllenCahn(0.1, kappa=1.0, c=3.0).energy_constant(g) == 3.0
    ch = CahnHilliard(1.0, 0.1, kappa=2.0, c=1.0)
    assert ch.energy_constant(g) == pytest.approx((4.0 + 4.0 + 4.0) / 4.0 * g.area)
    mbe = MolecularBeamEpitaxy(1.0, 0.1, kappa=0.2, c=2.0, slope_selection=False)
    assert mbe.energy_constant(g) == pytest.approx(2.0 * g.area)


class TestPreconditions:
    def test_allen_cahn_semidefinite_refused(self):
        with pytest.raises(ConfigError):
            AllenCahn(0.01, kappa=0.0)
        assert AllenCahn(0.01, kappa=0.0, allow_semidefinite=True).kappa == 0.0

    def test_nonpositive_constant(self):
        with pytest.raises(ConfigError):
            CahnHilliard(1.0, 0.1, c=0.0)

    def test_mbe_without_slope_selection_needs_kappa(self):
        with pytest.raises(ConfigError):
            MolecularBeamEpitaxy(1.0, 0.1, kappa=0.1, slope_selection=False)

    def test_negative_radicand(self):
        # F_kappa is negative near u = +-1 for large kappa; a tiny C cannot compensate
        model = AllenCahn(0.1, kappa=10.0, c=1e-3)
        with pytest.raises(SolverError):
            model.w_value(RealField.constant(Grid2D.square(8, 0.0, 1.0), 1.0))

    def test_q_init_reports_config_error(self):
        model = AllenCahn(0.1, kappa=10.0, c=1e-3)
        with pytest.raises(ConfigError):
            q_init(model, RealField.constant(Grid2D.square(8, 0.0, 1.0), 1.0))


class TestRegistry:
    def test_make_model_filters_keys(self):
        model = make_model("mbe", {"mobility": 1.0, "delta": 0.1, "kappa": 0.0, "c": 1.0, "epsilon": 9.0})
        assert isinstance(model, MolecularBeamEpitaxy)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError, match="available"):
            make_model("swift_hohenberg", {})

    def test_energies_of_state(self):
        model = CahnHilliard(1.0, 0.2)
        u = smooth(Grid2D.square(8))
        e = energies(model, SAVState(u, q_init(model, u)))
        assert e.modified == pytest.approx(e.original, rel=1e-12)


def test_without_nonlinearity():
    base = CahnHilliard(1.0, 0.2)
    lin = without_nonlinearity(base)
    u = smooth(Grid2D.square(8))
    assert norm_inf(lin.variational(u)) == 0.0
    assert lin.w_value(u) == pytest.approx(base.w_value(RealField.zeros(u.grid)))
    assert lin.parameters()["nonlinearity"] is False


def test_manufactured_source_makes_exact_solution_consistent():
    model = CahnHilliard(0.01, 1.0)
    sol = sine_product_cosine_time()
    grid = Grid2D.square(16)
    h = sol.source(model)(grid, 0.4)
    phi = sol.field(grid, 0.4)
    phi_t = RealField.from_function(grid, lambda X, Y: -np.sin(X) * np.sin(Y) * np.sin(0.4))
    assert norm_inf(model.original_velocity(phi) + h - phi_t) < 1e-12
