from __future__ import annotations

from typing import Any, Dict

import numpy as np

from savark.errors import ConfigError
from savark.models.base import GradientFlowModel
from savark.spectral import Grid2D, RealField, integral, inner, laplacian


class CahnHilliard(GradientFlowModel):
    """u_t = lam Lap(-eps^2 Lap u + u^3 - u) with L = kappa - eps^2 Lap.

    W(u)^2 = 1/4 ((u^2 - 1 - kappa)^2, 1)_N + C|Omega|.
    """

    name = "ch"
    mass_conserving = True

    def __init__(
        self,
        mobility: float,
        epsilon: float,
        kappa: float = 0.0,
        c: float = 1.0,
        dealiased: bool = False,
    ):
        if not mobility > 0:
            raise ConfigError(f"ch: mobility must be positive, got {mobility}")
        if not epsilon > 0:
            raise ConfigError(f"ch: epsilon must be positive, got {epsilon}")
        if kappa < 0:
            raise ConfigError(f"ch: kappa must be >= 0, got {kappa}")
        super().__init__(kappa, c, dealiased)
        self.mobility = float(mobility)
        self.epsilon = float(epsilon)

    def _mobility(self, grid: Grid2D) -> np.ndarray:
        return -self.mobility * grid.k2

    def _linear(self, grid: Grid2D) -> np.ndarray:
        return self.epsilon ** 2 * grid.k2 + self.kappa

    def radicand(self, u: RealField) -> float:
        x = u.values
        bulk = integral(RealField(u.grid, (x * x - 1.0 - self.kappa) ** 2))
        return 0.25 * bulk + self.c * u.grid.area

    def _variational(self, v: RealField, w: float) -> RealField:
        x = v.values
        return RealField(v.grid, (x * x - 1.0 - self.kappa) * x / (2.0 * w))

    def energy_constant(self, grid: Grid2D) -> float:
        k = self.kappa
        return (k * k + 2.0 * k + 4.0 * self.c) / 4.0 * grid.area

    def original_energy(self, u: RealField) -> float:
        bulk = integral(RealField(u.grid, 0.25 * (u.values ** 2 - 1.0) ** 2))
        return -0.5 * self.epsilon ** 2 * inner(laplacian(u), u) + bulk

    def original_velocity(self, u: RealField) -> RealField:
        chem = RealField(u.grid, -self.epsilon ** 2 * laplacian(u).values + u.values ** 3 - u.values)
        return self.mobility * laplacian(chem)

    def parameters(self) -> Dict[str, Any]:
        params = super().parameters()
        params.update({"mobility": self.mobility, "epsilon": self.epsilon})
        return params
