from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Dict, Tuple

import numpy as np

from savark.errors import ConfigError, SolverError
from savark.spectral import Grid2D, RealField, Symbol, dealias, forward, inner, inverse


class GradientFlowModel(ABC):
    """A gradient flow u_t = G(L u + 2 q f(u)) with its SAV quantities.

    Subclasses provide the Fourier symbols of G (mobility) and L (linear part,
    including the kappa stabilization), the radicand of W(u)^2 and the
    variational term f = dW/du - div(dW/d grad u).
    """

    name: str = ""
    mass_conserving: bool = False

    def __init__(self, kappa: float, c: float, dealiased: bool = False):
        if not c > 0:
            raise ConfigError(f"{self.name}: C must be positive, got {c}")
        self.kappa = float(kappa)
        self.c = float(c)
        self.dealiased = bool(dealiased)
        self._symbols: Dict[Tuple[str, Grid2D], Symbol] = {}

    # -- symbols -----------------------------------------------------------

    @abstractmethod
    def _mobility(self, grid: Grid2D) -> np.ndarray:
        ...

    @abstractmethod
    def _linear(self, grid: Grid2D) -> np.ndarray:
        ...

    def _cached(self, key: str, grid: Grid2D, build) -> Symbol:
        sym = self._symbols.get((key, grid))
        if sym is None:
            sym = Symbol(grid, build(grid))
            self._symbols[(key, grid)] = sym
        return sym

    def mobility_symbol(self, grid: Grid2D) -> Symbol:
        return self._cached("g", grid, self._mobility)

    def linear_symbol(self, grid: Grid2D) -> Symbol:
        return self._cached("l", grid, self._linear)

    def stage_symbol(self, grid: Grid2D) -> Symbol:
        """Symbol of G*L, the operator treated implicitly in every stage."""
        return self._cached("gl", grid, lambda g: self._mobility(g) * self._linear(g))

    # -- SAV quantities ----------------------------------------------------

    @abstractmethod
    def radicand(self, u: RealField) -> float:
        """W(u)^2, evaluated with the (., 1)_N quadrature."""

    def w_value(self, u: RealField) -> float:
        r = self.radicand(u)
        if not r > 0.0:
            raise SolverError(f"{self.name}: W radicand is {r:.6g} <= 0 (C too small)")
        return float(np.sqrt(r))

    @abstractmethod
    def _variational(self, v: RealField, w: float) -> RealField:
        ...

    def variational(self, v: RealField) -> RealField:
        f = self._variational(v, self.w_value(v))
        return dealias(f) if self.dealiased else f

    def apply_mobility(self, u: RealField) -> RealField:
        return inverse(self.mobility_symbol(u.grid).values * forward(u), u.grid)

    def apply_linear(self, u: RealField) -> RealField:
        return inverse(self.linear_symbol(u.grid).values * forward(u), u.grid)

    def velocity(self, u: RealField, q: float, f: RealField) -> RealField:
        """G(L u + 2 q f)."""
        g = u.grid
        mu = self.linear_symbol(g).values * forward(u) + 2.0 * q * forward(f)
        return inverse(self.mobility_symbol(g).values * mu, g)

    # -- energies ----------------------------------------------------------

    @abstractmethod
    def energy_constant(self, grid: Grid2D) -> float:
        ...

    @abstractmethod
    def original_energy(self, u: RealField) -> float:
        ...

    def quadratic_energy(self, u: RealField) -> float:
        """1/2 (u, L u)_N."""
        return 0.5 * inner(u, self.apply_linear(u))

    def modified_energy(self, u: RealField, q: float) -> float:
        return self.quadratic_energy(u) + q * q - self.energy_constant(u.grid)

    @abstractmethod
    def original_velocity(self, u: RealField) -> RealField:
        """Right-hand side G dF/du of the unreformulated equation."""

    def parameters(self) -> Dict[str, Any]:
        return {"kind": self.name, "kappa": self.kappa, "c": self.c, "dealias": self.dealiased}


class LinearizedModel(GradientFlowModel):
    """The linear part of another model: f == 0 and W constant."""

    def __init__(self, base: GradientFlowModel):
        self.name = f"{base.name}_linear"
        self.mass_conserving = base.mass_conserving
        super().__init__(base.kappa, base.c)
        self.base = base

    def _mobility(self, grid: Grid2D) -> np.ndarray:
        return self.base.mobility_symbol(grid).values

    def _linear(self, grid: Grid2D) -> np.ndarray:
        return self.base.linear_symbol(grid).values

    def radicand(self, u: RealField) -> float:
        return self.base.radicand(RealField.zeros(u.grid))

    def _variational(self, v: RealField, w: float) -> RealField:
        return RealField.zeros(v.grid)

    def energy_constant(self, grid: Grid2D) -> float:
        return 0.0

    def original_energy(self, u: RealField) -> float:
        return self.quadratic_energy(u)

    def original_velocity(self, u: RealField) -> RealField:
        return self.apply_mobility(self.apply_linear(u))

    def parameters(self) -> Dict[str, Any]:
        params = self.base.parameters()
        params["nonlinearity"] = False
        return params


def without_nonlinearity(model: GradientFlowModel) -> GradientFlowModel:
    return LinearizedModel(model)
