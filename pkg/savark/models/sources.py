from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from savark.models.base import GradientFlowModel
from savark.spectral import Grid2D, RealField


SpaceTimeFn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class SourceTerm:
    """Forcing h(x, y, t) added to the stage velocities."""
    fn: Callable[[Grid2D, float], RealField]

    def __call__(self, grid: Grid2D, t: float) -> RealField:
        return self.fn(grid, t)


@dataclass(frozen=True)
class ManufacturedSolution:
    exact: SpaceTimeFn
    time_derivative: SpaceTimeFn

    def field(self, grid: Grid2D, t: float) -> RealField:
        return RealField.from_function(grid, lambda X, Y: self.exact(X, Y, t))

    def source(self, model: GradientFlowModel) -> SourceTerm:
        """h = phi_t - G dF/du[phi], so that phi solves the forced equation."""
        def fn(grid: Grid2D, t: float) -> RealField:
            phi = self.field(grid, t)
            phi_t = RealField.from_function(grid, lambda X, Y: self.time_derivative(X, Y, t))
            return phi_t - model.original_velocity(phi)
        return SourceTerm(fn)


def sine_product_cosine_time() -> ManufacturedSolution:
    """phi = sin(x) sin(y) cos(t)."""
    return ManufacturedSolution(
        exact=lambda X, Y, t: np.sin(X) * np.sin(Y) * np.cos(t),
        time_derivative=lambda X, Y, t: -np.sin(X) * np.sin(Y) * np.sin(t),
    )
