from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Tuple, Union

import numpy as np

from savark.errors import ConfigError


TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Grid2D:
    """Uniform periodic grid on (x_left, x_right) x (y_left, y_right).

    Point (j, k) is (x_left + j*hx, y_left + k*hy). Wavenumbers follow the DFT
    ordering; the Nyquist entry carries +pi*N/L.
    """
    nx: int
    ny: int
    x_left: float = 0.0
    x_right: float = TWO_PI
    y_left: float = 0.0
    y_right: float = TWO_PI

    def __post_init__(self) -> None:
        for label, n in (("nx", self.nx), ("ny", self.ny)):
            if int(n) != n or n <= 0 or n % 2:
                raise ConfigError(f"{label} must be a positive even integer, got {n}")
        if not (self.x_left < self.x_right and self.y_left < self.y_right):
            raise ConfigError(
                f"invalid domain ({self.x_left}, {self.x_right}) x ({self.y_left}, {self.y_right})"
            )

    @classmethod
    def square(cls, n: int, left: float = 0.0, right: float = TWO_PI) -> "Grid2D":
        return cls(n, n, left, right, left, right)

    @property
    def lx(self) -> float:
        return self.x_right - self.x_left

    @property
    def ly(self) -> float:
        return self.y_right - self.y_left

    @property
    def hx(self) -> float:
        return self.lx / self.nx

    @property
    def hy(self) -> float:
        return self.ly / self.ny

    @property
    def area(self) -> float:
        return self.lx * self.ly

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nx, self.ny)

    @staticmethod
    def _wavenumbers(n: int, length: float) -> np.ndarray:
        k = np.fft.fftfreq(n, d=1.0 / n)
        k[n // 2] = n / 2
        return k * (TWO_PI / length)

    @cached_property
    def kx(self) -> np.ndarray:
        return self._wavenumbers(self.nx, self.lx)

    @cached_property
    def ky(self) -> np.ndarray:
        return self._wavenumbers(self.ny, self.ly)

    @cached_property
    def kx_odd(self) -> np.ndarray:
        """kx with the Nyquist entry zeroed (first-derivative symbols)."""
        k = self.kx.copy()
        k[self.nx // 2] = 0.0
        return k

    @cached_property
    def ky_odd(self) -> np.ndarray:
        k = self.ky.copy()
        k[self.ny // 2] = 0.0
        return k

    @cached_property
    def k2(self) -> np.ndarray:
        """|k|^2 on the full (nx, ny) mode array."""
        return self.kx[:, None] ** 2 + self.ky[None, :] ** 2

    @cached_property
    def k2_odd(self) -> np.ndarray:
        return self.kx_odd[:, None] ** 2 + self.ky_odd[None, :] ** 2

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        x = self.x_left + self.hx * np.arange(self.nx)
        y = self.y_left + self.hy * np.arange(self.ny)
        return np.meshgrid(x, y, indexing="ij")

    def describe(self) -> dict:
        return {
            "nx": self.nx,
            "ny": self.ny,
            "x_left": self.x_left,
            "x_right": self.x_right,
            "y_left": self.y_left,
            "y_right": self.y_right,
        }


Scalar = Union[int, float]


@dataclass(frozen=True, eq=False)
class RealField:
    """Real grid function; values[j, k] lives at grid point (j, k)."""
    grid: Grid2D
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.shape:
            raise ConfigError(f"field shape {vals.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, grid: Grid2D) -> "RealField":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid2D, value: float) -> "RealField":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: Grid2D, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "RealField":
        X, Y = grid.coordinates()
        return cls(grid, np.broadcast_to(fn(X, Y), grid.shape).astype(float))

    def require_same_grid(self, other: "RealField") -> None:
        if other.grid != self.grid:
            raise ConfigError("fields live on different grids")

    def __add__(self, other: "RealField") -> "RealField":
        self.require_same_grid(other)
        return RealField(self.grid, self.values + other.values)

    def __sub__(self, other: "RealField") -> "RealField":
        self.require_same_grid(other)
        return RealField(self.grid, self.values - other.values)

    def __mul__(self, other: Union[Scalar, "RealField"]) -> "RealField":
        if isinstance(other, RealField):
            self.require_same_grid(other)
            return RealField(self.grid, self.values * other.values)
        return RealField(self.grid, self.values * float(other))

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "RealField":
        return RealField(self.grid, self.values / float(other))

    def __neg__(self) -> "RealField":
        return RealField(self.grid, -self.values)

    def min(self) -> float:
        return float(np.min(self.values))

    def max(self) -> float:
        return float(np.max(self.values))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def copy(self) -> "RealField":
        return RealField(self.grid, self.values.copy())


@dataclass(frozen=True, eq=False)
class Symbol:
    """Real Fourier multiplier evaluated on the (nx, ny) mode array of a grid."""
    grid: Grid2D
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.broadcast_to(np.asarray(self.values, dtype=float), self.grid.shape).copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_k2(cls, grid: Grid2D, fn: Callable[[np.ndarray], np.ndarray], odd: bool = False) -> "Symbol":
        return cls(grid, fn(grid.k2_odd if odd else grid.k2))

    @classmethod
    def constant(cls, grid: Grid2D, value: float) -> "Symbol":
        return cls(grid, np.full(grid.shape, float(value)))

    def __mul__(self, other: "Symbol") -> "Symbol":
        return Symbol(self.grid, self.values * other.values)

    def scaled(self, factor: float) -> "Symbol":
        return Symbol(self.grid, self.values * float(factor))
