from savark.integrators.driver import (
    ENERGY_COLUMNS,
    EnergyRecorder,
    ErrorProbe,
    MassMonitor,
    Observer,
    SnapshotWriter,
    Trajectory,
    initial_state,
    integrate,
)
from savark.integrators.schemes import (
    advance_ark,
    advance_mark,
    advance_markII,
    advance_rkpc,
    step_sav_ark,
    step_sav_mark,
    step_sav_markII,
    step_sav_rkpc,
)
from savark.integrators.stages import StageContext, coupled_uq_stage, explicit_stage_v
from savark.integrators.state import SAVState, StageWorkspace, StepOutcome, StepReport
from savark.integrators.steppers import (
    ArkStepper,
    MarkIIStepper,
    MarkStepper,
    RkpcStepper,
    TimeStepper,
    resolve_stepper,
)

__all__ = [
    "ENERGY_COLUMNS",
    "ArkStepper",
    "EnergyRecorder",
    "ErrorProbe",
    "MarkIIStepper",
    "MarkStepper",
    "MassMonitor",
    "Observer",
    "RkpcStepper",
    "SAVState",
    "SnapshotWriter",
    "StageContext",
    "StageWorkspace",
    "StepOutcome",
    "StepReport",
    "TimeStepper",
    "Trajectory",
    "advance_ark",
    "advance_mark",
    "advance_markII",
    "advance_rkpc",
    "coupled_uq_stage",
    "explicit_stage_v",
    "initial_state",
    "integrate",
    "resolve_stepper",
    "step_sav_ark",
    "step_sav_mark",
    "step_sav_markII",
    "step_sav_rkpc",
]
