"""Named initial fields used by runs, suites and tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from savark.errors import ConfigError
from savark.models.sources import ManufacturedSolution, sine_product_cosine_time
from savark.spectral import Grid2D, RealField, inverse


PI = math.pi


@dataclass(frozen=True)
class InitialCondition:
    name: str
    build: Callable[[Grid2D, int], RealField]
    manufactured: Optional[ManufacturedSolution] = None
    description: str = ""

    def __call__(self, grid: Grid2D, seed: int = 0) -> RealField:
        return self.build(grid, seed)


def _ac_sine(grid: Grid2D, seed: int) -> RealField:
    return RealField.from_function(grid, lambda X, Y: 0.1 * np.sin(2 * PI * X) * np.sin(2 * PI * Y))


def _ch_cos(grid: Grid2D, seed: int) -> RealField:
    def fn(X, Y):
        return 0.05 * (
            np.cos(6 * PI * X) * np.cos(8 * PI * Y)
            + (np.cos(8 * PI * X) * np.cos(6 * PI * Y)) ** 2
            + np.cos(2 * PI * X - 10 * PI * Y) * np.cos(4 * PI * X - 2 * PI * Y)
        )
    return RealField.from_function(grid, fn)


def _mbe_two_mode(grid: Grid2D, seed: int) -> RealField:
    return RealField.from_function(
        grid, lambda X, Y: 0.1 * (np.sin(3 * X) * np.sin(5 * Y) + np.sin(5 * X) * np.sin(5 * Y))
    )


_MANUFACTURED = sine_product_cosine_time()


def _manufactured_ch(grid: Grid2D, seed: int) -> RealField:
    return _MANUFACTURED.field(grid, 0.0)


def random_smooth(grid: Grid2D, seed: int = 0, modes: int = 4, amplitude: float = 0.1) -> RealField:
    """Band-limited random field: |k_x|, |k_y| <= `modes` in index units, max-norm `amplitude`."""
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(grid.shape, dtype=complex)
    kx = np.fft.fftfreq(grid.nx, d=1.0 / grid.nx)
    ky = np.fft.fftfreq(grid.ny, d=1.0 / grid.ny)
    band = (np.abs(kx)[:, None] <= modes) & (np.abs(ky)[None, :] <= modes)
    count = int(band.sum())
    coeffs[band] = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    values = inverse(coeffs, grid).values
    field = RealField(grid, values - values.mean())
    peak = float(np.max(np.abs(field.values)))
    if peak == 0.0:
        return RealField.zeros(grid)
    return field * (amplitude / peak)


INITIAL_CONDITIONS: Dict[str, InitialCondition] = {
    "ac_sine": InitialCondition("ac_sine", _ac_sine, description="0.1 sin(2 pi x) sin(2 pi y)"),
    "ch_cos": InitialCondition("ch_cos", _ch_cos, description="three-mode cosine data"),
    "mbe_two_mode": InitialCondition(
        "mbe_two_mode", _mbe_two_mode, description="0.1 (sin 3x sin 5y + sin 5x sin 5y)"
    ),
    "manufactured_ch": InitialCondition(
        "manufactured_ch", _manufactured_ch, manufactured=_MANUFACTURED,
        description="sin x sin y cos t with forcing",
    ),
    "random_smooth": InitialCondition(
        "random_smooth", lambda grid, seed: random_smooth(grid, seed), description="seeded band-limited field"
    ),
}


def available_initial_conditions() -> List[str]:
    return sorted(INITIAL_CONDITIONS)


def get_initial_condition(name: str) -> InitialCondition:
    ic = INITIAL_CONDITIONS.get((name or "").strip())
    if ic is None:
        raise ConfigError(
            f"unknown initial condition '{name}'; available: {', '.join(available_initial_conditions())}"
        )
    return ic
