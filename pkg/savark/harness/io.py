from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from savark.errors import ConfigError
from savark.integrators.driver import ENERGY_COLUMNS
from savark.spectral import Grid2D, RealField


CONVERGENCE_COLUMNS = ["scheme", "dt", "l2_error", "linf_error", "rate_l2", "rate_linf"]

SNAPSHOT_MAGIC = b"SAVF"
SNAPSHOT_VERSION = 1
SNAPSHOT_HEADER = struct.Struct("<4sIQQd")


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_out(path: str | Path, content: str) -> None:
    """Write text (newline-terminated) atomically, creating parent directories."""
    text = content if content.endswith("\n") else content + "\n"
    _atomic_write(Path(path), text.encode("utf-8"))


def dumps_json(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True)


def write_json(path: str | Path, payload: Any) -> None:
    write_out(path, dumps_json(payload))


def snapshot_hash(payload: Dict[str, Any]) -> str:
    raw = json.dumps(payload, ensure_ascii=False, sort_keys=True)
    return hashlib.sha256(raw.encode("utf-8", errors="ignore")).hexdigest()[:16]


def format_value(value: Any) -> str:
    """CSV cell text; floats use repr so reruns are byte-identical, None/NaN become empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return "" if math.isnan(f) else repr(f)
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def write_csv(path: str | Path, columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> None:
    write_out(path, render_csv(columns, rows))


def write_energy_csv(path: str | Path, rows: Iterable[Mapping[str, Any]]) -> None:
    write_csv(path, ENERGY_COLUMNS, rows)


def write_convergence_csv(path: str | Path, rows: Iterable[Any]) -> None:
    write_csv(path, CONVERGENCE_COLUMNS, [r.as_row() if hasattr(r, "as_row") else r for r in rows])


def read_csv(path: str | Path) -> List[Dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


# -------- field snapshots --------

def encode_snapshot(u: RealField, time: float) -> bytes:
    g = u.grid
    header = SNAPSHOT_HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, g.nx, g.ny, float(time))
    body = np.ascontiguousarray(u.values, dtype="<f8").tobytes(order="C")
    return header + body


def write_snapshot(path: str | Path, u: RealField, time: float) -> None:
    _atomic_write(Path(path), encode_snapshot(u, time))


def write_snapshot_csv(path: str | Path, u: RealField, time: float) -> None:
    X, Y = u.grid.coordinates()
    rows = (
        {"i": i, "j": j, "x": float(X[i, j]), "y": float(Y[i, j]), "u": float(u.values[i, j])}
        for i in range(u.grid.nx)
        for j in range(u.grid.ny)
    )
    write_out(path, f"# time={time!r}\n" + render_csv(["i", "j", "x", "y", "u"], rows))


@dataclass(frozen=True)
class Snapshot:
    nx: int
    ny: int
    time: float
    values: np.ndarray

    def field(self, grid: Optional[Grid2D] = None) -> RealField:
        grid = grid or Grid2D(self.nx, self.ny)
        if grid.shape != (self.nx, self.ny):
            raise ConfigError(f"snapshot is {self.nx}x{self.ny}, grid is {grid.nx}x{grid.ny}")
        return RealField(grid, self.values.copy())


def decode_snapshot(data: bytes) -> Snapshot:
    if len(data) < SNAPSHOT_HEADER.size:
        raise ConfigError("truncated snapshot header")
    magic, version, nx, ny, time = SNAPSHOT_HEADER.unpack_from(data, 0)
    if magic != SNAPSHOT_MAGIC:
        raise ConfigError(f"not a field snapshot (magic {magic!r})")
    if version != SNAPSHOT_VERSION:
        raise ConfigError(f"unsupported snapshot version {version}")
    expected = SNAPSHOT_HEADER.size + 8 * nx * ny
    if len(data) != expected:
        raise ConfigError(f"snapshot size {len(data)} bytes, expected {expected}")
    values = np.frombuffer(data, dtype="<f8", offset=SNAPSHOT_HEADER.size).reshape(nx, ny).astype(float)
    return Snapshot(int(nx), int(ny), float(time), values)


def read_snapshot(path: str | Path) -> Snapshot:
    return decode_snapshot(Path(path).read_bytes())


def snapshot_name(step: int, time: float, fmt: str) -> str:
    ext = "csv" if fmt == "csv" else "savf"
    return f"u_{step:08d}_t{time:.6f}.{ext}"
