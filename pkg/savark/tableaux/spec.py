from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float, ndmin=ndim)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    """Coefficients (A, b, c) of a Runge-Kutta method.

    Construction never raises on inconsistent data so that `validate` can
    report every violation; use `from_matrix` to derive c as row sums.
    """
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", _frozen(self.A, 2))
        object.__setattr__(self, "b", _frozen(self.b, 1))
        object.__setattr__(self, "c", _frozen(self.c, 1))

    @classmethod
    def from_matrix(cls, A, b) -> "ButcherTableau":
        A = np.array(A, dtype=float, ndmin=2)
        return cls(A=A, b=b, c=A.sum(axis=1))

    @property
    def s(self) -> int:
        return int(self.b.shape[0])


@dataclass(frozen=True, eq=False)
class ARKPair:
    implicit: ButcherTableau
    explicit: ButcherTableau
    name: str = ""
    claimed_order: int = 0

    @property
    def s(self) -> int:
        return self.implicit.s


@dataclass(frozen=True)
class ValidationResult:
    violations: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True, eq=False)
class StabilityReport:
    M: np.ndarray
    eigenvalues: np.ndarray       # descending
    b_min: float
    is_algebraically_stable: bool


@dataclass(frozen=True)
class ConditionResult:
    condition: str                # e.g. "b.c", "bh.(c*ch)"
    order: int
    coupling: bool
    residual: float
    satisfied: bool


@dataclass(frozen=True)
class OrderReport:
    target: int
    achieved_order: int
    conditions: List[ConditionResult] = field(default_factory=list)

    def failed(self, order: int) -> List[ConditionResult]:
        return [c for c in self.conditions if c.order == order and not c.satisfied]


@dataclass(frozen=True, eq=False)
class MARKIITableaux:
    """Four coupled coefficient matrices sharing one weight vector.

    `a` drives the linear part of v, `a_hat` its nonlinear part, `a_tilde`
    and `a_bar` build the lagged field w from the same velocities.
    """
    a: ButcherTableau
    a_hat: ButcherTableau
    a_tilde: ButcherTableau
    a_bar: ButcherTableau
    name: str = ""

    @property
    def b(self) -> np.ndarray:
        return self.a.b

    @property
    def s(self) -> int:
        return self.a.s

    def parts(self) -> Tuple[ButcherTableau, ButcherTableau, ButcherTableau, ButcherTableau]:
        return self.a, self.a_hat, self.a_tilde, self.a_bar
