"""Run configuration: INI file -> catalog defaults -> schema-validated RunConfig.

Every default filled in during resolution is listed in `defaults_applied`
and ends up in the run manifest.
"""

from __future__ import annotations

import configparser
import copy
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import yaml  # PyYAML
from jsonschema import validate

from savark.errors import ConfigError
from savark.integrators.steppers import ALGORITHMS, TimeStepper, resolve_stepper
from savark.models.base import GradientFlowModel
from savark.models.registry import make_model
from savark.spectral import Grid2D
from savark.tableaux.library import GAMMA_DEFAULT, base_tableau, builtin, normalize_name


BASE_DIR = Path(__file__).resolve().parent.parent
CATALOG_PATH = BASE_DIR / "presets" / "catalog.yml"
SCHEMA_DIR = BASE_DIR / "schemas"

DOMAINS = {
    "unit": (0.0, 1.0),
    "two_pi": (0.0, 2.0 * math.pi),
}

DEFAULT_INITIAL_CONDITION = {"ac": "ac_sine", "ch": "ch_cos", "mbe": "mbe_two_mode"}
DEFAULT_GRID_N = 128


def load_json(path: Path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


RUN_SCHEMA = load_json(SCHEMA_DIR / "run_config.schema.json")
MANIFEST_SCHEMA = load_json(SCHEMA_DIR / "manifest.schema.json")


def safe_validate(obj: Dict[str, Any], schema: Dict[str, Any], schema_name: str) -> None:
    try:
        validate(instance=obj, schema=schema)
    except Exception as e:
        msg = getattr(e, "message", str(e))
        path = "/".join(str(p) for p in getattr(e, "absolute_path", []) or [])
        where = f" at '{path}'" if path else ""
        raise ConfigError(f"invalid {schema_name}{where}: {msg}") from e


def catalog_path() -> Path:
    override = (os.environ.get("SAVARK_CATALOG_PATH") or "").strip()
    return Path(override) if override else CATALOG_PATH


def load_catalog(path: Optional[Path] = None) -> Dict[str, Any]:
    path = path or catalog_path()
    if not path.exists():
        raise ConfigError(f"catalog not found: {path}")
    return yaml.safe_load(path.read_text(encoding="utf-8")) or {}


def default_out_dir() -> str:
    return (os.environ.get("SAVARK_OUT_DIR") or "").strip() or "runs"


# -------- value parsing --------

def _to_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: '{value}'")


def _to_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError(f"not an integer: '{value}'")
    f = float(value)
    if not f.is_integer():
        raise ValueError(f"not an integer: '{value}'")
    return int(f)


def _to_floats(value: Any) -> List[float]:
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(tok) for tok in str(value).replace(",", " ").split()]


def _to_str(value: Any) -> str:
    return str(value).strip()


KEY_TYPES: Dict[str, Dict[str, Callable[[Any], Any]]] = {
    "model": {
        "kind": lambda v: _to_str(v).lower(),
        "initial_condition": _to_str,
        "epsilon": float,
        "mobility": float,
        "delta": float,
        "kappa": float,
        "c": float,
        "slope_selection": _to_bool,
        "allow_semidefinite": _to_bool,
        "dealiased": _to_bool,
        "seed": _to_int,
    },
    "scheme": {
        "name": _to_str,
        "algorithm": lambda v: _to_str(v).lower(),
        "gamma": float,
        "base": _to_str,
        "sweeps": _to_int,
        "tol": float,
    },
    "grid": {
        "n": _to_int,
        "nx": _to_int,
        "ny": _to_int,
        "x_left": float,
        "x_right": float,
        "y_left": float,
        "y_right": float,
    },
    "time": {
        "dt": float,
        "t_final": float,
    },
    "output": {
        "directory": _to_str,
        "format": lambda v: _to_str(v).lower(),
        "snapshot_times": _to_floats,
        "energy_every": _to_int,
    },
}


def parse_sections(raw: Dict[str, Dict[str, Any]]) -> Dict[str, Dict[str, Any]]:
    """Type-convert raw section values; unknown sections or keys are errors."""
    out: Dict[str, Dict[str, Any]] = {name: {} for name in KEY_TYPES}
    for section, values in raw.items():
        sec = section.strip().lower()
        if sec not in KEY_TYPES:
            raise ConfigError(f"unknown section [{section}]; expected one of {', '.join(KEY_TYPES)}")
        for key, value in values.items():
            k = key.strip().lower()
            conv = KEY_TYPES[sec].get(k)
            if conv is None:
                raise ConfigError(f"unknown key '{sec}.{k}'")
            try:
                out[sec][k] = conv(value)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"bad value for '{sec}.{k}': {e}") from e
    return out


def read_ini(path: str | Path) -> Dict[str, Dict[str, str]]:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(p.read_text(encoding="utf-8"), source=str(p))
    except configparser.Error as e:
        raise ConfigError(f"cannot parse {p}: {e}") from e
    return {name: dict(parser.items(name)) for name in parser.sections()}


# -------- resolved configuration --------

@dataclass
class RunConfig:
    model: Dict[str, Any]
    scheme: Dict[str, Any]
    grid: Dict[str, Any]
    time: Dict[str, Any]
    output: Dict[str, Any]
    defaults_applied: List[str] = field(default_factory=list)
    source_path: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": dict(self.model),
            "scheme": dict(self.scheme),
            "grid": dict(self.grid),
            "time": dict(self.time),
            "output": dict(self.output),
        }

    @property
    def dt(self) -> float:
        return float(self.time["dt"])

    @property
    def t_final(self) -> float:
        return float(self.time["t_final"])

    @property
    def initial_condition(self) -> str:
        return self.model["initial_condition"]

    @property
    def seed(self) -> int:
        return int(self.model.get("seed", 0))

    def build_grid(self) -> Grid2D:
        g = self.grid
        return Grid2D(g["nx"], g["ny"], g["x_left"], g["x_right"], g["y_left"], g["y_right"])

    def build_model(self) -> GradientFlowModel:
        params = {k: v for k, v in self.model.items() if k not in ("kind", "initial_condition", "seed")}
        return make_model(self.model["kind"], params)

    def build_stepper(self) -> TimeStepper:
        s = self.scheme
        return resolve_stepper(
            s["algorithm"],
            name=s.get("name", ""),
            gamma=s.get("gamma"),
            base=s.get("base", "gauss_2"),
            sweeps=s.get("sweeps", 4),
            tol=s.get("tol", 1e-14),
        )

    def scheme_label(self) -> str:
        s = self.scheme
        if s["algorithm"] == "mark":
            return s["name"]
        if s["algorithm"] == "ark":
            return f"{s['name']}_ark"
        return f"{s['base']}_{s['algorithm']}{s['sweeps']}"

    def with_sections(self, **sections: Dict[str, Any]) -> "RunConfig":
        """Copy with whole sections replaced, re-validated against the schema."""
        data = copy.deepcopy(self.to_dict())
        data.update(copy.deepcopy(sections))
        safe_validate(data, RUN_SCHEMA, "run_config")
        return RunConfig(**data, defaults_applied=list(self.defaults_applied), source_path=self.source_path)


def resolve_config(
    raw: Dict[str, Dict[str, Any]],
    catalog: Optional[Dict[str, Any]] = None,
    source_path: str = "",
) -> RunConfig:
    catalog = catalog if catalog is not None else load_catalog()
    sec = parse_sections(raw)
    applied: List[str] = []

    def default(section: str, key: str, value: Any) -> None:
        if key not in sec[section]:
            sec[section][key] = value
            applied.append(f"{section}.{key}")

    # model
    kind = sec["model"].get("kind")
    if not kind:
        raise ConfigError("missing required key 'model.kind'")
    model_defaults = (catalog.get("models") or {}).get(kind)
    if model_defaults is None:
        raise ConfigError(f"unknown model kind '{kind}'")
    default("model", "initial_condition", DEFAULT_INITIAL_CONDITION.get(kind, ""))
    ic_name = sec["model"]["initial_condition"]
    ic_entry = (catalog.get("initial_conditions") or {}).get(ic_name)
    if ic_entry is None:
        known = ", ".join(sorted(catalog.get("initial_conditions") or {}))
        raise ConfigError(f"unknown initial condition '{ic_name}'; available: {known}")
    for key, value in (ic_entry.get("model") or {}).items():
        default("model", key, value)
    for key, value in model_defaults.items():
        default("model", key, value)
    default("model", "seed", 0)

    # scheme
    scheme_defaults = catalog.get("schemes") or {}
    default("scheme", "algorithm", scheme_defaults.get("algorithm", "mark"))
    algo = sec["scheme"]["algorithm"]
    if algo not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm '{algo}'; available: {', '.join(ALGORITHMS)}")
    if algo in ("mark", "ark"):
        default("scheme", "name", scheme_defaults.get("name", "diark_2_2_2"))
        sec["scheme"]["name"] = normalize_name(sec["scheme"]["name"])
        builtin(sec["scheme"]["name"])  # raises on unknown names
        if sec["scheme"]["name"] == "diark_2_2_2":
            default("scheme", "gamma", GAMMA_DEFAULT)
        for key in ("base", "sweeps", "tol"):
            sec["scheme"].pop(key, None)
    else:
        default("scheme", "base", scheme_defaults.get("base", "gauss_2"))
        base_tableau(sec["scheme"]["base"])
        default("scheme", "sweeps", int(scheme_defaults.get("sweeps", 4)))
        if algo == "rkpc":
            default("scheme", "tol", float(scheme_defaults.get("tol", 1e-14)))
        else:
            sec["scheme"].pop("tol", None)
        for key in ("name", "gamma"):
            sec["scheme"].pop(key, None)

    # grid
    g = sec["grid"]
    n = g.pop("n", None)
    if n is not None:
        g.setdefault("nx", n)
        g.setdefault("ny", n)
    default("grid", "nx", DEFAULT_GRID_N)
    default("grid", "ny", DEFAULT_GRID_N)
    lo, hi = DOMAINS.get(ic_entry.get("domain", "two_pi"), DOMAINS["two_pi"])
    default("grid", "x_left", lo)
    default("grid", "x_right", hi)
    default("grid", "y_left", lo)
    default("grid", "y_right", hi)

    # time
    for key in ("dt", "t_final"):
        if key not in sec["time"]:
            raise ConfigError(f"missing required key 'time.{key}'")
    dt, t_final = sec["time"]["dt"], sec["time"]["t_final"]
    if not dt > 0:
        raise ConfigError(f"time.dt must be positive, got {dt}")
    if t_final < 0:
        raise ConfigError(f"time.t_final must be >= 0, got {t_final}")
    if 0 < t_final < dt:
        raise ConfigError(f"time.dt={dt} exceeds time.t_final={t_final}")

    # output
    default("output", "directory", default_out_dir())
    default("output", "format", "binary")
    times = ic_entry.get("snapshot_times")
    default("output", "snapshot_times", [float(t) for t in times] if times else [0.0, float(t_final)])
    sec["output"]["snapshot_times"] = [t for t in sec["output"]["snapshot_times"] if t <= t_final + 1e-12]
    default("output", "energy_every", 1)

    safe_validate(sec, RUN_SCHEMA, "run_config")
    return RunConfig(**sec, defaults_applied=applied, source_path=source_path)


def load_config(path: str | Path, catalog: Optional[Dict[str, Any]] = None) -> RunConfig:
    return resolve_config(read_ini(path), catalog=catalog, source_path=str(path))
