from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from savark.errors import ConfigError, IntegrationError, SolverError
from savark.integrators.state import SAVState, StepReport
from savark.integrators.steppers import TimeStepper
from savark.models.base import GradientFlowModel
from savark.models.registry import q_init
from savark.models.sources import SourceTerm
from savark.spectral import Grid2D, RealField, integral, norm_inf, norm_l2


ENERGY_COLUMNS = ["step", "time", "q", "modified_energy", "original_energy", "mass", "u_min", "u_max"]


class Observer:
    """Hooks called by `integrate`; the default implementations do nothing."""

    def on_start(self, model: GradientFlowModel, state: SAVState) -> None:
        pass

    def on_step(self, step: int, state: SAVState, report: StepReport) -> None:
        pass

    def on_finish(self, step: int, state: SAVState) -> None:
        pass


class EnergyRecorder(Observer):
    def __init__(self, every: int = 1):
        self.every = max(1, int(every))
        self.rows: List[Dict[str, Any]] = []
        self._model: Optional[GradientFlowModel] = None
        self._last = -1

    def _row(self, step: int, state: SAVState) -> None:
        m = self._model
        self.rows.append({
            "step": step,
            "time": state.t,
            "q": state.q,
            "modified_energy": m.modified_energy(state.u, state.q),
            "original_energy": m.original_energy(state.u),
            "mass": integral(state.u),
            "u_min": state.u.min(),
            "u_max": state.u.max(),
        })
        self._last = step

    def on_start(self, model, state) -> None:
        self._model = model
        self._row(0, state)

    def on_step(self, step, state, report) -> None:
        if step % self.every == 0:
            self._row(step, state)

    def on_finish(self, step, state) -> None:
        if self._last != step:
            self._row(step, state)

    def modified(self) -> List[float]:
        return [r["modified_energy"] for r in self.rows]


class SnapshotWriter(Observer):
    """Hands the state to `sink` whenever t hits one of `times` (within half a step)."""

    def __init__(self, times: Sequence[float], sink: Callable[[int, SAVState], None], tau: float):
        self.pending = sorted(float(t) for t in times)
        self.sink = sink
        self.slack = 0.5 * tau
        self.written: List[float] = []

    def _maybe(self, step: int, state: SAVState) -> None:
        while self.pending and abs(self.pending[0] - state.t) <= self.slack:
            self.written.append(self.pending.pop(0))
            self.sink(step, state)
        while self.pending and self.pending[0] < state.t - self.slack:
            self.pending.pop(0)

    def on_start(self, model, state) -> None:
        self._maybe(0, state)

    def on_step(self, step, state, report) -> None:
        self._maybe(step, state)


@dataclass
class ErrorRecord:
    time: float
    l2: float
    linf: float


class ErrorProbe(Observer):
    """Distance to an exact solution exact(grid, t), at the final time or every step."""

    def __init__(self, exact: Callable[[Grid2D, float], RealField], every_step: bool = False):
        self.exact = exact
        self.every_step = every_step
        self.records: List[ErrorRecord] = []

    def _measure(self, state: SAVState) -> None:
        diff = state.u - self.exact(state.u.grid, state.t)
        self.records.append(ErrorRecord(state.t, norm_l2(diff), norm_inf(diff)))

    def on_step(self, step, state, report) -> None:
        if self.every_step:
            self._measure(state)

    def on_finish(self, step, state) -> None:
        if not self.every_step or not self.records or self.records[-1].time != state.t:
            self._measure(state)


class MassMonitor(Observer):
    def __init__(self):
        self.initial = 0.0
        self.max_drift = 0.0

    def on_start(self, model, state) -> None:
        self.initial = integral(state.u)

    def on_step(self, step, state, report) -> None:
        scale = max(abs(self.initial), 1e-300)
        self.max_drift = max(self.max_drift, abs(integral(state.u) - self.initial) / scale)


@dataclass
class Trajectory:
    final: SAVState
    steps: int
    reports: List[StepReport] = field(default_factory=list)


def step_count(tau: float, t_final: float) -> tuple[int, float]:
    """Number of full steps and the remainder of a final partial step."""
    n = int(math.floor(t_final / tau + 1e-9))
    rest = t_final - n * tau
    if abs(rest) <= 1e-9 * tau:
        rest = 0.0
    return n, rest


def initial_state(model: GradientFlowModel, stepper: TimeStepper, u0: RealField, t0: float = 0.0) -> SAVState:
    state = SAVState(u=u0, q=q_init(model, u0), t=t0)
    return state.with_v() if stepper.needs_v else state


def integrate(
    model: GradientFlowModel,
    stepper: TimeStepper,
    u0: RealField,
    tau: float,
    t_final: float,
    observers: Sequence[Observer] = (),
    source: Optional[SourceTerm] = None,
    keep_reports: bool = False,
) -> Trajectory:
    if not tau > 0:
        raise ConfigError(f"time step must be positive, got {tau}")
    if t_final < 0:
        raise ConfigError(f"final time must be >= 0, got {t_final}")
    if 0 < t_final < tau:
        raise ConfigError(f"time step {tau} exceeds final time {t_final}")

    state = initial_state(model, stepper, u0)
    for obs in observers:
        obs.on_start(model, state)

    n_full, rest = step_count(tau, t_final)
    sizes = [tau] * n_full + ([rest] if rest > 0 else [])
    reports: List[StepReport] = []
    for n, dt in enumerate(sizes, start=1):
        try:
            outcome = stepper.advance(model, state, dt, source)
        except SolverError as e:
            raise IntegrationError(n, e, time=state.t) from e
        # pin the clock to the step grid so long runs do not drift
        t = n * tau if n <= n_full else t_final
        state = SAVState(outcome.state.u, outcome.state.q, t, outcome.state.v)
        if keep_reports:
            reports.append(outcome.report)
        for obs in observers:
            obs.on_step(n, state, outcome.report)

    for obs in observers:
        obs.on_finish(len(sizes), state)
    return Trajectory(final=state, steps=len(sizes), reports=reports)
