from savark.spectral.grid import Grid2D, RealField, Symbol
from savark.spectral.operators import (
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

__all__ = [
    "Grid2D",
    "RealField",
    "Symbol",
    "apply_symbol",
    "biharmonic",
    "dealias",
    "dealias_mask",
    "divergence",
    "forward",
    "gradient",
    "inner",
    "integral",
    "inverse",
    "laplacian",
    "norm_inf",
    "norm_l2",
    "solve_shifted",
    "solve_shifted_block",
]
