from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from savark.errors import IntegrationError, SolverError
from savark.harness.config import MANIFEST_SCHEMA, RunConfig, safe_validate
from savark.harness.initial_conditions import get_initial_condition
from savark.harness.io import (
    snapshot_hash,
    snapshot_name,
    write_energy_csv,
    write_json,
    write_snapshot,
    write_snapshot_csv,
)
from savark.integrators import EnergyRecorder, SAVState, SnapshotWriter, Trajectory, integrate
from savark.models.sources import SourceTerm


MANIFEST_VERSION = 1
MANIFEST_NAME = "manifest.json"
ENERGY_NAME = "energy.csv"
SNAPSHOT_DIR = "snapshots"


@dataclass
class RunResult:
    run_dir: Path
    manifest: Dict[str, Any]
    trajectory: Optional[Trajectory] = None
    energy_rows: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.manifest.get("status") == "ok"


def run_id_for(config: RunConfig) -> str:
    """Hash of the resolved config, independent of where the outputs go."""
    payload = config.to_dict()
    payload["output"] = {k: v for k, v in payload["output"].items() if k != "directory"}
    return snapshot_hash(payload)


def _manifest(config: RunConfig, run_id: str, model, stepper) -> Dict[str, Any]:
    return {
        "version": MANIFEST_VERSION,
        "run_id": run_id,
        "status": "ok",
        "config": config.to_dict(),
        "defaults_applied": sorted(config.defaults_applied),
        "model": model.parameters(),
        "scheme": stepper.describe(),
        "steps": 0,
        "final_time": 0.0,
        "snapshots": [],
        "files": [],
    }


def run(config: RunConfig, out_dir: Optional[str | Path] = None) -> RunResult:
    """Integrate one configured problem and write manifest, energy series and snapshots.

    Solver failures are written into the manifest (status "failed" with the
    failing step) and then re-raised.
    """
    run_id = run_id_for(config)
    run_dir = Path(out_dir) if out_dir else Path(config.output["directory"]) / run_id

    grid = config.build_grid()
    model = config.build_model()
    stepper = config.build_stepper()
    ic = get_initial_condition(config.initial_condition)
    u0 = ic(grid, config.seed)
    source: Optional[SourceTerm] = ic.manufactured.source(model) if ic.manufactured else None

    manifest = _manifest(config, run_id, model, stepper)
    fmt = config.output["format"]
    snapshots: List[str] = []

    def sink(step: int, state: SAVState) -> None:
        rel = f"{SNAPSHOT_DIR}/{snapshot_name(step, state.t, fmt)}"
        if fmt == "csv":
            write_snapshot_csv(run_dir / rel, state.u, state.t)
        else:
            write_snapshot(run_dir / rel, state.u, state.t)
        snapshots.append(rel)

    times = sorted(set(config.output["snapshot_times"]))
    recorder = EnergyRecorder(every=config.output["energy_every"])
    writer = SnapshotWriter(times, sink, config.dt)

    trajectory: Optional[Trajectory] = None
    failure: Optional[SolverError] = None
    try:
        trajectory = integrate(model, stepper, u0, config.dt, config.t_final, observers=[recorder, writer], source=source)
    except SolverError as e:
        failure = e

    write_energy_csv(run_dir / ENERGY_NAME, recorder.rows)
    manifest["snapshots"] = snapshots
    manifest["files"] = [ENERGY_NAME, *snapshots]
    if trajectory is not None:
        manifest["steps"] = trajectory.steps
        manifest["final_time"] = trajectory.final.t
    else:
        step = failure.step if isinstance(failure, IntegrationError) else 0
        at = failure.time if isinstance(failure, IntegrationError) else None
        manifest["status"] = "failed"
        manifest["steps"] = max(step - 1, 0)
        manifest["final_time"] = float(at) if at is not None else 0.0
        manifest["failure"] = {"step": step, "time": at, "error": str(failure)}

    safe_validate(manifest, MANIFEST_SCHEMA, "manifest")
    write_json(run_dir / MANIFEST_NAME, manifest)
    if failure is not None:
        raise failure
    return RunResult(run_dir=run_dir, manifest=manifest, trajectory=trajectory, energy_rows=recorder.rows)
