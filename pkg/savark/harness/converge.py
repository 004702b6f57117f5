"""Temporal refinement studies: errors at the final time against a reference, and observed rates."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from savark.errors import ConfigError
from savark.harness.config import RunConfig, load_catalog, resolve_config
from savark.harness.initial_conditions import get_initial_condition
from savark.harness.io import write_convergence_csv
from savark.integrators import integrate
from savark.spectral import Grid2D, RealField, norm_inf, norm_l2


DEFAULT_REFERENCE_SCHEME = "diark_5_6_4"
REFERENCE_DT_FRACTION = 1.0 / 64.0


@dataclass
class ConvergenceRow:
    scheme: str
    dt: float
    l2_error: float
    linf_error: float
    rate_l2: Optional[float] = None
    rate_linf: Optional[float] = None

    def as_row(self) -> Dict[str, Any]:
        return {
            "scheme": self.scheme,
            "dt": self.dt,
            "l2_error": self.l2_error,
            "linf_error": self.linf_error,
            "rate_l2": self.rate_l2,
            "rate_linf": self.rate_linf,
        }


@dataclass(frozen=True)
class Reference:
    """Either the manufactured exact solution or a fine-step run of `scheme`."""
    kind: str
    dt: Optional[float] = None
    scheme: str = DEFAULT_REFERENCE_SCHEME
    n: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> "Reference":
        """'manufactured', 'fine', 'fine:TAU' or 'fine:TAU:SCHEME'."""
        parts = [p.strip() for p in (text or "").split(":")]
        kind = parts[0].lower()
        if kind == "manufactured" and len(parts) == 1:
            return cls("manufactured")
        if kind == "fine" and len(parts) <= 3:
            try:
                dt = float(parts[1]) if len(parts) > 1 and parts[1] else None
            except ValueError as e:
                raise ConfigError(f"bad reference step in '{text}'") from e
            scheme = parts[2] if len(parts) > 2 and parts[2] else DEFAULT_REFERENCE_SCHEME
            return cls("fine", dt=dt, scheme=scheme)
        raise ConfigError(f"reference must be 'manufactured' or 'fine:TAU', got '{text}'")

    @classmethod
    def from_catalog(cls, entry: Dict[str, Any]) -> "Reference":
        kind = str(entry.get("kind", "")).lower()
        if kind not in ("manufactured", "fine"):
            raise ConfigError(f"unknown reference kind '{kind}'")
        dt = entry.get("dt")
        return cls(
            kind,
            dt=float(dt) if dt is not None else None,
            scheme=str(entry.get("scheme", DEFAULT_REFERENCE_SCHEME)),
            n=int(entry["n"]) if entry.get("n") is not None else None,
        )


def observed_rates(dts: Sequence[float], errors: Sequence[float]) -> List[Optional[float]]:
    """log(e_k/e_{k+1}) / log(dt_k/dt_{k+1}); undefined for the first row and for zero errors."""
    rates: List[Optional[float]] = [None]
    for k in range(1, len(errors)):
        e0, e1 = errors[k - 1], errors[k]
        d0, d1 = dts[k - 1], dts[k]
        if not (e0 > 0 and e1 > 0) or d0 == d1:
            rates.append(None)
        elif d0 == 2.0 * d1:
            rates.append(float(np.log2(e0 / e1)))
        else:
            rates.append(math.log(e0 / e1) / math.log(d0 / d1))
    return rates


def restrict(fine: RealField, coarse: Grid2D) -> RealField:
    """Pointwise restriction of a field on a nested finer grid."""
    g = fine.grid
    if g == coarse:
        return fine
    same_domain = (g.x_left, g.x_right, g.y_left, g.y_right) == (
        coarse.x_left, coarse.x_right, coarse.y_left, coarse.y_right
    )
    if not same_domain or g.nx % coarse.nx or g.ny % coarse.ny:
        raise ConfigError(
            f"reference grid {g.nx}x{g.ny} on {g.describe()} does not nest run grid "
            f"{coarse.nx}x{coarse.ny} on {coarse.describe()}"
        )
    sx, sy = g.nx // coarse.nx, g.ny // coarse.ny
    return RealField(coarse, fine.values[::sx, ::sy].copy())


def final_values(config: RunConfig, dt: float) -> np.ndarray:
    """Final-time field of `config` integrated with step `dt` (process-pool friendly)."""
    grid = config.build_grid()
    model = config.build_model()
    stepper = config.build_stepper()
    ic = get_initial_condition(config.initial_condition)
    source = ic.manufactured.source(model) if ic.manufactured else None
    traj = integrate(model, stepper, ic(grid, config.seed), dt, config.t_final, source=source)
    return traj.final.u.values


def _final_fields(config: RunConfig, dts: Sequence[float], workers: int) -> List[np.ndarray]:
    if workers > 1 and len(dts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(final_values, [config] * len(dts), list(dts)))
    return [final_values(config, dt) for dt in dts]


def reference_config(config: RunConfig, reference: Reference, dts: Sequence[float]) -> RunConfig:
    dt = reference.dt if reference.dt is not None else max(dts) * REFERENCE_DT_FRACTION
    grid = dict(config.grid)
    if reference.n is not None:
        grid.update(nx=reference.n, ny=reference.n)
    return config.with_sections(
        scheme={"algorithm": "mark", "name": reference.scheme},
        grid=grid,
        time={**config.time, "dt": dt},
    )


def converge(
    config: RunConfig,
    dts: Sequence[float],
    reference: Reference,
    workers: int = 1,
    reference_field: Optional[RealField] = None,
) -> List[ConvergenceRow]:
    """One row per step size, errors measured in the discrete L2 and max norms at t_final."""
    if not dts:
        raise ConfigError("no step sizes given")
    grid = config.build_grid()

    if reference_field is None:
        if reference.kind == "manufactured":
            ic = get_initial_condition(config.initial_condition)
            if ic.manufactured is None:
                raise ConfigError(
                    f"initial condition '{config.initial_condition}' has no manufactured solution"
                )
            reference_field = ic.manufactured.field(grid, config.t_final)
        else:
            ref_cfg = reference_config(config, reference, dts)
            reference_field = RealField(ref_cfg.build_grid(), final_values(ref_cfg, ref_cfg.dt))
    exact = restrict(reference_field, grid)

    finals = _final_fields(config, dts, workers)
    l2 = [norm_l2(RealField(grid, u) - exact) for u in finals]
    linf = [norm_inf(RealField(grid, u) - exact) for u in finals]
    r2 = observed_rates(dts, l2)
    rinf = observed_rates(dts, linf)
    label = config.scheme_label()
    return [
        ConvergenceRow(label, float(dt), e2, ei, a, b)
        for dt, e2, ei, a, b in zip(dts, l2, linf, r2, rinf)
    ]


# -------- catalog suites --------

def suite_base_config(entry: Dict[str, Any], catalog: Dict[str, Any]) -> RunConfig:
    model = dict(entry.get("model") or {})
    model["initial_condition"] = entry.get("initial_condition", "")
    dts = [float(t) for t in entry.get("dt") or []]
    if not dts:
        raise ConfigError("suite has no step sizes")
    raw = {
        "model": model,
        "grid": dict(entry.get("grid") or {}),
        "time": {"dt": max(dts), "t_final": float(entry["t_final"])},
    }
    return resolve_config(raw, catalog=catalog)


def suite_configs(entry: Dict[str, Any], base: RunConfig) -> List[RunConfig]:
    """Every scheme variant a suite compares, as resolved configs."""
    out: List[RunConfig] = []
    for name in entry.get("schemes") or []:
        scheme = {"algorithm": "mark", "name": name}
        out.append(base.with_sections(scheme=scheme))
    for name in entry.get("ark_variants") or []:
        out.append(base.with_sections(scheme={"algorithm": "ark", "name": name}))
    rkpc = entry.get("rkpc") or {}
    for sweeps in rkpc.get("sweeps") or []:
        scheme = {"algorithm": "rkpc", "base": rkpc.get("base", "gauss_2"), "sweeps": int(sweeps), "tol": 0.0}
        out.append(base.with_sections(scheme=scheme))
    for cfg in out:
        cfg.build_stepper()  # unknown names fail before any integration
    return out


def run_suite(
    name: str,
    out_dir: str | Path,
    workers: int = 1,
    catalog: Optional[Dict[str, Any]] = None,
) -> Dict[str, List[ConvergenceRow]]:
    """Run a catalog suite; writes `<out_dir>/<name>/<scheme>.csv` per compared scheme."""
    catalog = catalog if catalog is not None else load_catalog()
    suites = catalog.get("suites") or {}
    entry = suites.get(name)
    if entry is None:
        raise ConfigError(f"unknown suite '{name}'; available: {', '.join(sorted(suites))}")
    dts = [float(t) for t in entry["dt"]]
    base = suite_base_config(entry, catalog)
    reference = Reference.from_catalog(entry.get("reference") or {"kind": "fine"})

    ref_field: Optional[RealField] = None
    if reference.kind == "fine":
        ref_cfg = reference_config(base, reference, dts)
        ref_field = RealField(ref_cfg.build_grid(), final_values(ref_cfg, ref_cfg.dt))

    results: Dict[str, List[ConvergenceRow]] = {}
    for cfg in suite_configs(entry, base):
        rows = converge(cfg, dts, reference, workers=workers, reference_field=ref_field)
        label = cfg.scheme_label()
        write_convergence_csv(Path(out_dir) / name / f"{label}.csv", rows)
        results[label] = rows
    return results
