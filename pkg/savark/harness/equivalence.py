from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from savark.errors import ConfigError
from savark.harness.config import DEFAULT_INITIAL_CONDITION, DOMAINS, load_catalog
from savark.harness.initial_conditions import get_initial_condition
from savark.integrators import MarkIIStepper, RkpcStepper, initial_state
from savark.models.base import GradientFlowModel
from savark.models.registry import make_model
from savark.spectral import Grid2D, RealField, norm_inf
from savark.tableaux import ButcherTableau, base_tableau, build_rkpc_markII


EQUIVALENCE_THRESHOLD = 1e-10
DEFAULT_N = 16
DEFAULT_TAU = 1e-3


@dataclass(frozen=True)
class EquivalenceResult:
    base: str
    sweeps: int
    model: str
    steps: int
    u_deviation: float
    q_deviation: float

    @property
    def deviation(self) -> float:
        return max(self.u_deviation, self.q_deviation)

    @property
    def passed(self) -> bool:
        return self.deviation <= EQUIVALENCE_THRESHOLD


def _relative(diff: float, scale: float) -> float:
    return diff / scale if scale > 0 else diff


def equivalence_check(
    base: Union[str, ButcherTableau],
    sweeps: int,
    model: Union[str, GradientFlowModel],
    steps: int,
    grid: Optional[Grid2D] = None,
    tau: float = DEFAULT_TAU,
    u0: Optional[RealField] = None,
) -> EquivalenceResult:
    """Max relative deviation between prediction-correction and its four-tableau form.

    The prediction-correction run uses tol=0 so it always performs exactly
    `sweeps` passes.
    """
    if int(sweeps) < 1:
        raise ConfigError(f"sweep count must be >= 1, got {sweeps}")
    if int(steps) < 1:
        raise ConfigError(f"step count must be >= 1, got {steps}")
    base_name = base if isinstance(base, str) else "custom"
    tableau = base_tableau(base) if isinstance(base, str) else base

    if isinstance(model, str):
        kind = model.strip().lower()
        catalog = load_catalog()
        defaults = (catalog.get("models") or {}).get(kind)
        if defaults is None:
            raise ConfigError(f"unknown model '{model}'")
        the_model = make_model(kind, defaults)
        ic = get_initial_condition(DEFAULT_INITIAL_CONDITION[kind])
        domain = (catalog.get("initial_conditions") or {}).get(ic.name, {}).get("domain", "two_pi")
    else:
        the_model, ic, domain = model, None, "two_pi"
    if grid is None:
        lo, hi = DOMAINS[domain]
        grid = Grid2D.square(DEFAULT_N, lo, hi)
    if u0 is None:
        u0 = ic(grid) if ic is not None else get_initial_condition("random_smooth")(grid)

    rkpc = RkpcStepper(tableau, sweeps, tol=0.0, base_name=base_name)
    markii = MarkIIStepper(build_rkpc_markII(tableau, sweeps))
    a = initial_state(the_model, rkpc, u0)
    b = initial_state(the_model, markii, u0)
    u_dev = q_dev = 0.0
    for _ in range(int(steps)):
        a = rkpc.advance(the_model, a, tau).state
        b = markii.advance(the_model, b, tau).state
        u_dev = max(u_dev, _relative(norm_inf(a.u - b.u), norm_inf(b.u)))
        q_dev = max(q_dev, _relative(abs(a.q - b.q), abs(b.q)))
    return EquivalenceResult(base_name, int(sweeps), the_model.name, int(steps), u_dev, q_dev)
