from __future__ import annotations

from typing import Any, Dict, Tuple

import numpy as np

from savark.errors import ConfigError
from savark.models.base import GradientFlowModel
from savark.spectral import Grid2D, RealField, biharmonic, divergence, gradient, integral, laplacian


NO_SLOPE_KAPPA_MIN = 0.125


class MolecularBeamEpitaxy(GradientFlowModel):
    """Thin-film height equation u_t = -lam (delta Lap^2 u - div F'(grad u)).

    With slope selection F(p) = 1/4 (|p|^2 - 1)^2 and L = delta Lap^2 - kappa Lap.
    Without it F(p) = -1/2 ln(1 + |p|^2); the kappa term then moves into W with
    the opposite sign, L = delta Lap^2 + kappa Lap, and kappa >= 1/8 is required.
    That symbol, delta |k|^4 - kappa |k|^2, is negative for 0 < |k|^2 < kappa/delta,
    so L is indefinite at low wavenumbers and the quadratic energy 1/2 (u, L u)_N
    can be negative. Shifted stage solves stay nonsingular only while
    1 + tau a_ii lam (delta |k|^4 - kappa |k|^2) does not vanish on the grid.

    The kappa part of L uses the first-derivative wavenumbers so that it
    matches (|grad_N u|^2, 1)_N inside W exactly.
    """

    name = "mbe"
    mass_conserving = True

    def __init__(
        self,
        mobility: float,
        delta: float,
        kappa: float = 0.0,
        c: float = 1.0,
        slope_selection: bool = True,
        dealiased: bool = False,
    ):
        if not mobility > 0:
            raise ConfigError(f"mbe: mobility must be positive, got {mobility}")
        if not delta > 0:
            raise ConfigError(f"mbe: delta must be positive, got {delta}")
        if kappa < 0:
            raise ConfigError(f"mbe: kappa must be >= 0, got {kappa}")
        if not slope_selection and kappa < NO_SLOPE_KAPPA_MIN:
            raise ConfigError(f"mbe without slope selection needs kappa >= 1/8, got {kappa}")
        super().__init__(kappa, c, dealiased)
        self.mobility = float(mobility)
        self.delta = float(delta)
        self.slope_selection = bool(slope_selection)

    def _mobility(self, grid: Grid2D) -> np.ndarray:
        return -self.mobility * np.ones(grid.shape)

    def _linear(self, grid: Grid2D) -> np.ndarray:
        sign = 1.0 if self.slope_selection else -1.0
        return self.delta * grid.k2 ** 2 + sign * self.kappa * grid.k2_odd

    @staticmethod
    def _slopes(u: RealField) -> Tuple[RealField, RealField, np.ndarray]:
        ux, uy = gradient(u)
        return ux, uy, ux.values ** 2 + uy.values ** 2

    def _density(self, p: np.ndarray) -> np.ndarray:
        if self.slope_selection:
            return 0.25 * (p - 1.0 - self.kappa) ** 2
        return 0.5 * self.kappa * p - 0.5 * np.log1p(p)

    def _flux_weight(self, p: np.ndarray) -> np.ndarray:
        # derivative of the W density with respect to grad u, divided by grad u
        if self.slope_selection:
            return p - 1.0 - self.kappa
        return self.kappa - 1.0 / (1.0 + p)

    def radicand(self, u: RealField) -> float:
        _, _, p = self._slopes(u)
        return integral(RealField(u.grid, self._density(p))) + self.c * u.grid.area

    def _variational(self, v: RealField, w: float) -> RealField:
        vx, vy, p = self._slopes(v)
        m = self._flux_weight(p) / (2.0 * w)
        return -divergence(RealField(v.grid, m * vx.values), RealField(v.grid, m * vy.values))

    def energy_constant(self, grid: Grid2D) -> float:
        if self.slope_selection:
            k = self.kappa
            return (k * k + 2.0 * k + 4.0 * self.c) / 4.0 * grid.area
        return self.c * grid.area

    def original_energy(self, u: RealField) -> float:
        lap = laplacian(u).values
        _, _, p = self._slopes(u)
        if self.slope_selection:
            bulk = 0.25 * (p - 1.0) ** 2
        else:
            bulk = -0.5 * np.log1p(p)
        h = u.grid.hx * u.grid.hy
        return 0.5 * self.delta * h * float(np.sum(lap * lap)) + integral(RealField(u.grid, bulk))

    def original_velocity(self, u: RealField) -> RealField:
        ux, uy, p = self._slopes(u)
        if self.slope_selection:
            m = p - 1.0
        else:
            m = -1.0 / (1.0 + p)
        flux = divergence(RealField(u.grid, m * ux.values), RealField(u.grid, m * uy.values))
        return -self.mobility * (self.delta * biharmonic(u) - flux)

    def parameters(self) -> Dict[str, Any]:
        params = super().parameters()
        params.update({
            "mobility": self.mobility,
            "delta": self.delta,
            "slope_selection": self.slope_selection,
        })
        return params
