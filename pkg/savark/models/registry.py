from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, List

from savark.errors import ConfigError, SolverError
from savark.models.allen_cahn import AllenCahn
from savark.models.base import GradientFlowModel
from savark.models.cahn_hilliard import CahnHilliard
from savark.models.mbe import MolecularBeamEpitaxy
from savark.spectral import RealField


def make_ac(epsilon: float, kappa: float = 1.0, c: float = 1.0, **options: Any) -> AllenCahn:
    return AllenCahn(epsilon, kappa=kappa, c=c, **options)


def make_ch(mobility: float, epsilon: float, kappa: float = 0.0, c: float = 1.0, **options: Any) -> CahnHilliard:
    return CahnHilliard(mobility, epsilon, kappa=kappa, c=c, **options)


def make_mbe(
    mobility: float,
    delta: float,
    kappa: float = 0.0,
    c: float = 1.0,
    slope_selection: bool = True,
    **options: Any,
) -> MolecularBeamEpitaxy:
    return MolecularBeamEpitaxy(mobility, delta, kappa=kappa, c=c, slope_selection=slope_selection, **options)


MODEL_FACTORIES: Dict[str, Callable[..., GradientFlowModel]] = {
    "ac": make_ac,
    "ch": make_ch,
    "mbe": make_mbe,
}

# keyword arguments each factory accepts from a configuration
MODEL_KEYS: Dict[str, List[str]] = {
    "ac": ["epsilon", "kappa", "c", "allow_semidefinite", "dealiased"],
    "ch": ["mobility", "epsilon", "kappa", "c", "dealiased"],
    "mbe": ["mobility", "delta", "kappa", "c", "slope_selection", "dealiased"],
}


def make_model(kind: str, params: Dict[str, Any]) -> GradientFlowModel:
    key = (kind or "").strip().lower()
    factory = MODEL_FACTORIES.get(key)
    if factory is None:
        raise ConfigError(f"unknown model '{kind}'; available: {', '.join(sorted(MODEL_FACTORIES))}")
    allowed = MODEL_KEYS[key]
    kwargs = {k: v for k, v in params.items() if k in allowed and v is not None}
    try:
        return factory(**kwargs)
    except TypeError as e:
        raise ConfigError(f"model '{key}': {e}") from e


def q_init(model: GradientFlowModel, u0: RealField) -> float:
    """Consistent initial value q(0) = W(u0)."""
    try:
        return model.w_value(u0)
    except SolverError as e:
        raise ConfigError(str(e)) from e


@dataclass(frozen=True)
class Energies:
    modified: float
    original: float


def energies(model: GradientFlowModel, state: Any) -> Energies:
    """Modified and original energy of anything carrying `u` and `q` (an SAVState)."""
    return Energies(
        modified=model.modified_energy(state.u, state.q),
        original=model.original_energy(state.u),
    )
