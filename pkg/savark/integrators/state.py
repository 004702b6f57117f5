from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from savark.spectral import RealField


@dataclass(frozen=True)
class SAVState:
    u: RealField
    q: float
    t: float = 0.0
    v: Optional[RealField] = None   # only carried by the ARK stepper

    def with_v(self) -> "SAVState":
        return self if self.v is not None else SAVState(self.u, self.q, self.t, self.u.copy())


@dataclass
class StageWorkspace:
    """Per-stage values of one step, filled block by block."""
    s: int
    v: List[Optional[RealField]] = field(default_factory=list)
    vdot_l: List[Optional[RealField]] = field(default_factory=list)
    vdot_n: List[Optional[RealField]] = field(default_factory=list)
    f: List[Optional[RealField]] = field(default_factory=list)
    gf: List[Optional[RealField]] = field(default_factory=list)      # G f
    h: List[Optional[RealField]] = field(default_factory=list)       # source at the stage time
    u: List[Optional[RealField]] = field(default_factory=list)
    udot: List[Optional[RealField]] = field(default_factory=list)
    q: List[float] = field(default_factory=list)
    qdot: List[float] = field(default_factory=list)
    # lagged quantities of the four-tableau scheme
    w: Dict[int, RealField] = field(default_factory=dict)
    r: List[float] = field(default_factory=list)
    rdot_l: List[float] = field(default_factory=list)
    rdot_n: Dict[int, float] = field(default_factory=dict)
    residuals: List[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        n = self.s
        for name in ("v", "vdot_l", "vdot_n", "f", "gf", "h", "u", "udot"):
            if not getattr(self, name):
                setattr(self, name, [None] * n)
        for name in ("q", "qdot", "r", "rdot_l"):
            if not getattr(self, name):
                setattr(self, name, [0.0] * n)


@dataclass(frozen=True)
class StepReport:
    energy_before: float
    energy_after: float
    q: float
    residuals: List[float]
    wall_time: float
    sweeps: int = 0        # prediction sweeps actually performed (RKPC)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


@dataclass(frozen=True)
class StepOutcome:
    state: SAVState
    report: StepReport
