from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from savark.tableaux import (
    ARKPair,
    algebraic_stability,
    builtin,
    check_ark_order,
    classify,
    validate_pair,
)
from savark.tableaux.analysis import MAX_ORDER
from savark.tableaux.library import available_methods


AUDIT_COLUMNS = [
    "method",
    "stages",
    "valid",
    "implicit_class",
    "explicit_class",
    "claimed_order",
    "achieved_order",
    "algebraically_stable",
    "b_min",
    "m_spectrum",
    "note",
]

UNCHECKED_NOTE = "order-4 conditions not checked symbolically; see convergence suite"


@dataclass
class AuditRow:
    method: str
    stages: int
    valid: bool
    implicit_class: str
    explicit_class: str
    claimed_order: int
    achieved_order: int
    algebraically_stable: bool
    b_min: float
    m_spectrum: List[float]
    violations: List[str]
    note: str = ""

    def as_row(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "stages": self.stages,
            "valid": self.valid,
            "implicit_class": self.implicit_class,
            "explicit_class": self.explicit_class,
            "claimed_order": self.claimed_order,
            "achieved_order": self.achieved_order,
            "algebraically_stable": self.algebraically_stable,
            "b_min": self.b_min,
            "m_spectrum": format_spectrum(self.m_spectrum),
            "note": self.note,
        }


def format_spectrum(values: Sequence[float]) -> str:
    out = []
    for v in values:
        text = f"{v:.4f}"
        out.append("0.0000" if text == "-0.0000" else text)
    return " ".join(out)


def audit_pair(pair: ARKPair) -> AuditRow:
    check = validate_pair(pair)
    stab = algebraic_stability(pair.implicit)
    report = check_ark_order(pair, MAX_ORDER) if check.ok else None
    achieved = report.achieved_order if report else 0
    notes = []
    if pair.claimed_order > MAX_ORDER:
        notes.append(UNCHECKED_NOTE)
    elif report and achieved < pair.claimed_order:
        failed = [r.condition for r in report.failed(achieved + 1)]
        notes.append("fails " + ", ".join(failed))
    if report and achieved == pair.claimed_order < MAX_ORDER:
        failed = [r.condition for r in report.failed(achieved + 1)]
        if failed:
            notes.append(f"order {achieved + 1} fails: " + ", ".join(failed))
    return AuditRow(
        method=pair.name,
        stages=pair.s,
        valid=check.ok,
        implicit_class=classify(pair.implicit),
        explicit_class=classify(pair.explicit),
        claimed_order=pair.claimed_order,
        achieved_order=achieved,
        algebraically_stable=stab.is_algebraically_stable,
        b_min=stab.b_min,
        m_spectrum=[float(e) for e in stab.eigenvalues],
        violations=list(check.violations),
        note="; ".join(notes),
    )


def audit_tableaux(pairs: Optional[Sequence[ARKPair]] = None) -> List[AuditRow]:
    """One row per method (the built-ins unless `pairs` is given)."""
    pairs = list(pairs) if pairs is not None else [builtin(name) for name in available_methods()]
    return [audit_pair(p) for p in pairs]


def render_audit_text(rows: Sequence[AuditRow]) -> str:
    lines = []
    for r in rows:
        verdict = "stable" if r.algebraically_stable else "NOT algebraically stable"
        lines.append(
            f"{r.method}: s={r.stages} {r.implicit_class}/{r.explicit_class} "
            f"order claimed={r.claimed_order} achieved={r.achieved_order} {verdict}"
        )
        lines.append(f"  M spectrum: {format_spectrum(r.m_spectrum)}  (min b = {r.b_min:.6g})")
        for v in r.violations:
            lines.append(f"  invalid: {v}")
        if r.note:
            lines.append(f"  note: {r.note}")
    return "\n".join(lines) + "\n"
