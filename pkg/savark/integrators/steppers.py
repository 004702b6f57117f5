from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from savark.errors import ConfigError
from savark.integrators import schemes
from savark.integrators.state import SAVState, StepOutcome
from savark.models.base import GradientFlowModel
from savark.models.sources import SourceTerm
from savark.tableaux import ARKPair, ButcherTableau, MARKIITableaux, base_tableau, build_rkpc_markII, builtin


class TimeStepper(ABC):
    algorithm: str = ""
    needs_v: bool = False

    @abstractmethod
    def advance(
        self,
        model: GradientFlowModel,
        state: SAVState,
        tau: float,
        source: Optional[SourceTerm] = None,
    ) -> StepOutcome:
        ...

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        ...


class MarkStepper(TimeStepper):
    algorithm = "mark"

    def __init__(self, pair: ARKPair):
        self.pair = pair

    def advance(self, model, state, tau, source=None) -> StepOutcome:
        return schemes.advance_mark(model, self.pair, state, tau, source)

    def describe(self) -> Dict[str, Any]:
        return {"algorithm": self.algorithm, "name": self.pair.name, "stages": self.pair.s}


class ArkStepper(MarkStepper):
    algorithm = "ark"
    needs_v = True

    def advance(self, model, state, tau, source=None) -> StepOutcome:
        return schemes.advance_ark(model, self.pair, state, tau, source)


class MarkIIStepper(TimeStepper):
    algorithm = "markii"

    def __init__(self, tableaux: MARKIITableaux):
        self.tableaux = tableaux

    def advance(self, model, state, tau, source=None) -> StepOutcome:
        return schemes.advance_markII(model, self.tableaux, state, tau, source)

    def describe(self) -> Dict[str, Any]:
        return {"algorithm": self.algorithm, "name": self.tableaux.name, "stages": self.tableaux.s}


class RkpcStepper(TimeStepper):
    algorithm = "rkpc"

    def __init__(self, base: ButcherTableau, sweeps: int = schemes.RKPC_SWEEPS,
                 tol: float = schemes.RKPC_TOL, base_name: str = ""):
        if sweeps < 1:
            raise ConfigError(f"rkpc sweeps must be >= 1, got {sweeps}")
        self.base = base
        self.sweeps = int(sweeps)
        self.tol = float(tol)
        self.base_name = base_name

    def advance(self, model, state, tau, source=None) -> StepOutcome:
        return schemes.advance_rkpc(model, self.base, state, tau, self.sweeps, self.tol, source)

    def describe(self) -> Dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "base": self.base_name,
            "sweeps": self.sweeps,
            "tol": self.tol,
            "stages": self.base.s,
        }


ALGORITHMS = ("mark", "ark", "markii", "rkpc")


def resolve_stepper(
    algorithm: str,
    name: str = "",
    gamma: Optional[float] = None,
    base: str = "gauss_2",
    sweeps: int = schemes.RKPC_SWEEPS,
    tol: float = schemes.RKPC_TOL,
) -> TimeStepper:
    """Build a stepper from configuration values.

    mark/ark use the built-in pair `name`; markii builds its tableaux from the
    rkpc base and sweep count; rkpc uses the base method directly.
    """
    algo = (algorithm or "mark").strip().lower()
    if algo == "mark":
        return MarkStepper(builtin(name, gamma=gamma))
    if algo == "ark":
        return ArkStepper(builtin(name, gamma=gamma))
    if algo == "markii":
        return MarkIIStepper(build_rkpc_markII(base_tableau(base), sweeps))
    if algo == "rkpc":
        return RkpcStepper(base_tableau(base), sweeps, tol, base_name=base)
    raise ConfigError(f"unknown algorithm '{algorithm}'; available: {', '.join(ALGORITHMS)}")
