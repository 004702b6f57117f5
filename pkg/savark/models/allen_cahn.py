from __future__ import annotations

from typing import Any, Dict

import numpy as np

from savark.errors import ConfigError
from savark.models.base import GradientFlowModel
from savark.spectral import Grid2D, RealField, integral, inner, laplacian


class AllenCahn(GradientFlowModel):
    """u_t = -(-eps^2 Lap u + u^3 - u), split as L = kappa - eps^2 Lap.

    W(u) = sqrt((F_k(u), 1)_N + C0) with F_k(u) = 1/4 (u^2 - 1)^2 - kappa/2 u^2.
    kappa = 0 leaves L only semi-definite and is refused unless asked for.
    """

    name = "ac"

    def __init__(
        self,
        epsilon: float,
        kappa: float = 1.0,
        c: float = 1.0,
        allow_semidefinite: bool = False,
        dealiased: bool = False,
    ):
        if not epsilon > 0:
            raise ConfigError(f"ac: epsilon must be positive, got {epsilon}")
        if kappa < 0 or (kappa == 0 and not allow_semidefinite):
            raise ConfigError(f"ac: kappa must be positive, got {kappa}")
        super().__init__(kappa, c, dealiased)
        self.epsilon = float(epsilon)

    def _mobility(self, grid: Grid2D) -> np.ndarray:
        return -np.ones(grid.shape)

    def _linear(self, grid: Grid2D) -> np.ndarray:
        return self.epsilon ** 2 * grid.k2 + self.kappa

    def _potential(self, u: np.ndarray) -> np.ndarray:
        return 0.25 * (u * u - 1.0) ** 2 - 0.5 * self.kappa * u * u

    def radicand(self, u: RealField) -> float:
        return integral(RealField(u.grid, self._potential(u.values))) + self.c

    def _variational(self, v: RealField, w: float) -> RealField:
        x = v.values
        return RealField(v.grid, (x ** 3 - (1.0 + self.kappa) * x) / (2.0 * w))

    def energy_constant(self, grid: Grid2D) -> float:
        return self.c

    def original_energy(self, u: RealField) -> float:
        bulk = integral(RealField(u.grid, 0.25 * (u.values ** 2 - 1.0) ** 2))
        return -0.5 * self.epsilon ** 2 * inner(laplacian(u), u) + bulk

    def original_velocity(self, u: RealField) -> RealField:
        x = u.values
        return RealField(u.grid, self.epsilon ** 2 * laplacian(u).values - x ** 3 + x)

    def parameters(self) -> Dict[str, Any]:
        params = super().parameters()
        params["epsilon"] = self.epsilon
        return params
