"""Reader for user-supplied additive pairs.

    [method]            (optional)
    name = my_pair
    order = 2

    [implicit]
    A = 0.25 0
        0.5 0.25
    b = 0.5 0.5

    [explicit]
    A = 0 0 ; 1 0
    b = 0.5 0.5

Rows of A may be split over lines or separated by ';'. c is always derived
from the row sums.
"""

from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Dict, List, Optional

from savark.errors import ConfigError, ValidationError
from savark.tableaux.analysis import validate_pair
from savark.tableaux.spec import ARKPair, ButcherTableau


_SECTION_RE = re.compile(r"^\s*\[([A-Za-z_]+)\]\s*$")
_KEY_RE = re.compile(r"^\s*([A-Za-z_]+)\s*=\s*(.*)$")


def _numbers(text: str, where: str) -> List[float]:
    out: List[float] = []
    for tok in text.replace(";", " ").split():
        try:
            out.append(float(tok))
        except ValueError as e:
            raise ConfigError(f"{where}: '{tok}' is not a number") from e
    return out


def _parse_sections(text: str) -> Dict[str, Dict[str, str]]:
    sections: Dict[str, Dict[str, str]] = {}
    current: Optional[str] = None
    key: Optional[str] = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1).lower()
            sections.setdefault(current, {})
            key = None
            continue
        if current is None:
            raise ConfigError(f"content outside of a section: '{line.strip()}'")
        m = _KEY_RE.match(line)
        if m:
            key = m.group(1).strip()
            sections[current][key] = m.group(2)
        elif key is not None:
            # continuation of a multi-line value (rows of A)
            sections[current][key] += " " + line.strip()
        else:
            raise ConfigError(f"[{current}]: cannot parse '{line.strip()}'")
    return sections


def _tableau(section: Dict[str, str], label: str) -> ButcherTableau:
    if "A" not in section or "b" not in section:
        raise ConfigError(f"[{label}] needs both 'A' and 'b'")
    b = _numbers(section["b"], f"[{label}] b")
    a = _numbers(section["A"], f"[{label}] A")
    s = len(b)
    if s == 0 or len(a) != s * s:
        side = math.isqrt(len(a))
        raise ConfigError(
            f"[{label}] A has {len(a)} entries ({side}x{side}?) but b has {s}; expected {s * s}"
        )
    rows = [a[i * s:(i + 1) * s] for i in range(s)]
    return ButcherTableau.from_matrix(rows, b)


def parse_pair(text: str, name: str = "custom") -> ARKPair:
    sections = _parse_sections(text)
    for required in ("implicit", "explicit"):
        if required not in sections:
            raise ConfigError(f"missing [{required}] section")
    meta = sections.get("method", {})
    try:
        order = int(meta.get("order", "0").strip() or 0)
    except ValueError as e:
        raise ConfigError(f"[method] order must be an integer, got '{meta.get('order')}'") from e
    pair = ARKPair(
        implicit=_tableau(sections["implicit"], "implicit"),
        explicit=_tableau(sections["explicit"], "explicit"),
        name=(meta.get("name") or name).strip(),
        claimed_order=order,
    )
    result = validate_pair(pair)
    if not result.ok:
        raise ValidationError(pair.name, list(result.violations))
    return pair


def load_pair(path: str | Path) -> ARKPair:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"tableau file not found: {p}")
    return parse_pair(p.read_text(encoding="utf-8"), name=p.stem)
