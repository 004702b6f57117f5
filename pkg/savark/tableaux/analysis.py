"""Structural checks, order conditions and algebraic stability of tableaux."""

from __future__ import annotations

from typing import Callable, List, Tuple

import numpy as np
from scipy import linalg

from savark.errors import UnsupportedOrderError
from savark.tableaux.spec import (
    ARKPair,
    ButcherTableau,
    ConditionResult,
    OrderReport,
    StabilityReport,
    ValidationResult,
)


ROW_SUM_TOL = 1e-12
ORDER_TOL = 1e-10
PSD_FLOOR = -1e-10
B_FLOOR = -1e-12

ERK = "ERK"
DIRK = "DIRK"
GENERAL = "general"

MAX_ORDER = 3


def validate(t: ButcherTableau) -> ValidationResult:
    violations: List[str] = []
    A, b, c = t.A, t.b, t.c
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        violations.append(f"A must be square, got shape {A.shape}")
    s = b.shape[0]
    if s < 1:
        violations.append("stage count must be positive")
    if A.ndim == 2 and A.shape[0] != s:
        violations.append(f"dimension mismatch: A is {A.shape[0]}x{A.shape[1]}, b has {s} entries")
    if c.shape[0] != s:
        violations.append(f"dimension mismatch: c has {c.shape[0]} entries, b has {s}")
    for label, arr in (("A", A), ("b", b), ("c", c)):
        if not np.all(np.isfinite(arr)):
            violations.append(f"non-finite entries in {label}")
    if not violations:
        dev = float(np.max(np.abs(c - A.sum(axis=1))))
        if dev > ROW_SUM_TOL:
            violations.append(f"c != A*1 (max deviation {dev:.3e})")
    return ValidationResult(tuple(violations))


def validate_pair(p: ARKPair) -> ValidationResult:
    violations = [f"implicit: {v}" for v in validate(p.implicit).violations]
    violations += [f"explicit: {v}" for v in validate(p.explicit).violations]
    if p.implicit.s != p.explicit.s:
        violations.append(f"stage counts differ: {p.implicit.s} vs {p.explicit.s}")
    elif not violations and classify(p.explicit) != ERK:
        violations.append("explicit tableau is not strictly lower triangular")
    return ValidationResult(tuple(violations))


def classify(t: ButcherTableau) -> str:
    A = t.A
    if not np.any(np.triu(A)):
        return ERK
    if not np.any(np.triu(A, k=1)):
        return DIRK
    return GENERAL


def stage_blocks(A: np.ndarray) -> List[Tuple[int, ...]]:
    """Smallest contiguous stage blocks making A block lower triangular.

    DIRK matrices give singleton blocks; a fully implicit sub-block (Gauss)
    becomes one block.
    """
    A = np.asarray(A, dtype=float)
    s = A.shape[0]
    blocks: List[Tuple[int, ...]] = []
    start = 0
    while start < s:
        end = start
        i = start
        while i <= end:
            nz = np.nonzero(A[i, i + 1:])[0]
            if nz.size:
                end = max(end, i + 1 + int(nz[-1]))
            i += 1
        blocks.append(tuple(range(start, end + 1)))
        start = end + 1
    return blocks


def algebraic_stability(t: ButcherTableau) -> StabilityReport:
    A, b = t.A, t.b
    BA = b[:, None] * A
    M = BA + BA.T - np.outer(b, b)
    eig = linalg.eigvalsh(M)[::-1]
    b_min = float(np.min(b))
    stable = b_min >= B_FLOOR and float(eig[-1]) >= PSD_FLOOR
    M.setflags(write=False)
    return StabilityReport(M=M, eigenvalues=eig, b_min=b_min, is_algebraically_stable=bool(stable))


def stability_function(t: ButcherTableau, z):
    """R(z) = 1 + z b^T (I - zA)^{-1} 1, vectorised over z."""
    z = np.asarray(z, dtype=complex)
    s = t.s
    eye = np.eye(s)
    ones = np.ones(s)
    flat = z.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    for n, zn in enumerate(flat):
        out[n] = 1.0 + zn * (t.b @ np.linalg.solve(eye - zn * t.A, ones))
    return out.reshape(z.shape) if z.ndim else out[0]


# Each entry: (identifier, order, coupling, evaluator(b, c, A, bh, ch, Ah), exact value).
_Evaluator = Callable[..., float]
_CONDITIONS: List[Tuple[str, int, bool, _Evaluator, float]] = [
    ("b.1", 1, False, lambda b, c, A, bh, ch, Ah: b.sum(), 1.0),
    ("bh.1", 1, False, lambda b, c, A, bh, ch, Ah: bh.sum(), 1.0),
    ("b.c", 2, False, lambda b, c, A, bh, ch, Ah: b @ c, 0.5),
    ("bh.ch", 2, False, lambda b, c, A, bh, ch, Ah: bh @ ch, 0.5),
    ("b.ch", 2, True, lambda b, c, A, bh, ch, Ah: b @ ch, 0.5),
    ("bh.c", 2, True, lambda b, c, A, bh, ch, Ah: bh @ c, 0.5),
    ("b.c^2", 3, False, lambda b, c, A, bh, ch, Ah: b @ (c * c), 1.0 / 3.0),
    ("b.Ac", 3, False, lambda b, c, A, bh, ch, Ah: b @ (A @ c), 1.0 / 6.0),
    ("bh.ch^2", 3, False, lambda b, c, A, bh, ch, Ah: bh @ (ch * ch), 1.0 / 3.0),
    ("bh.Ah ch", 3, False, lambda b, c, A, bh, ch, Ah: bh @ (Ah @ ch), 1.0 / 6.0),
    ("b.(c*ch)", 3, True, lambda b, c, A, bh, ch, Ah: b @ (c * ch), 1.0 / 3.0),
    ("bh.(c*ch)", 3, True, lambda b, c, A, bh, ch, Ah: bh @ (c * ch), 1.0 / 3.0),
    ("b.ch^2", 3, True, lambda b, c, A, bh, ch, Ah: b @ (ch * ch), 1.0 / 3.0),
    ("bh.c^2", 3, True, lambda b, c, A, bh, ch, Ah: bh @ (c * c), 1.0 / 3.0),
    ("b.A ch", 3, True, lambda b, c, A, bh, ch, Ah: b @ (A @ ch), 1.0 / 6.0),
    ("b.Ah c", 3, True, lambda b, c, A, bh, ch, Ah: b @ (Ah @ c), 1.0 / 6.0),
    ("b.Ah ch", 3, True, lambda b, c, A, bh, ch, Ah: b @ (Ah @ ch), 1.0 / 6.0),
    ("bh.A ch", 3, True, lambda b, c, A, bh, ch, Ah: bh @ (A @ ch), 1.0 / 6.0),
    ("bh.Ah c", 3, True, lambda b, c, A, bh, ch, Ah: bh @ (Ah @ c), 1.0 / 6.0),
    ("bh.Ac", 3, True, lambda b, c, A, bh, ch, Ah: bh @ (A @ c), 1.0 / 6.0),
]


def check_ark_order(p: ARKPair, target: int = MAX_ORDER) -> OrderReport:
    if target < 1 or target > MAX_ORDER:
        raise UnsupportedOrderError(
            f"order target {target} unsupported: conditions are encoded for orders 1..{MAX_ORDER}"
        )
    imp, exp = p.implicit, p.explicit
    args = (imp.b, imp.c, imp.A, exp.b, exp.c, exp.A)

    results: List[ConditionResult] = []
    for name, order, coupling, fn, exact in _CONDITIONS:
        if order > target:
            continue
        residual = float(fn(*args) - exact)
        results.append(ConditionResult(name, order, coupling, residual, abs(residual) <= ORDER_TOL))

    achieved = 0
    for order in range(1, target + 1):
        if all(r.satisfied for r in results if r.order == order):
            achieved = order
        else:
            break
    return OrderReport(target=target, achieved_order=achieved, conditions=results)
