"""Built-in additive Runge-Kutta pairs and base Runge-Kutta methods.

Coefficients are evaluated from their closed forms at call time.
"""

from __future__ import annotations

import math
import re
from typing import Callable, Dict, List

from savark.errors import ConfigError
from savark.tableaux.spec import ARKPair, ButcherTableau


GAMMA_DEFAULT = (3.0 + math.sqrt(3.0)) / 6.0

SQRT3 = math.sqrt(3.0)


def _sigma_mu() -> tuple[float, float]:
    sigma = SQRT3 / 3.0 * math.cos(math.pi / 18.0) + 0.5
    mu = 1.0 / (6.0 * (2.0 * sigma - 1.0) ** 2)
    return sigma, mu


def _pair(name: str, order: int, A, Ah, b) -> ARKPair:
    return ARKPair(
        implicit=ButcherTableau.from_matrix(A, b),
        explicit=ButcherTableau.from_matrix(Ah, b),
        name=name,
        claimed_order=order,
    )


def diark_2_2_2(gamma: float = GAMMA_DEFAULT) -> ARKPair:
    g = float(gamma)
    A = [[g, 0.0], [1.0 - 2.0 * g, g]]
    Ah = [[0.0, 0.0], [1.0, 0.0]]
    return _pair("diark_2_2_2", 2, A, Ah, [0.5, 0.5])


def diark_2_3_3() -> ARKPair:
    g = GAMMA_DEFAULT
    A = [
        [0.0, 0.0, 0.0],
        [0.0, g, 0.0],
        [0.0, -SQRT3 / 3.0, g],
    ]
    Ah = [
        [0.0, 0.0, 0.0],
        [g, 0.0, 0.0],
        [(-3.0 + SQRT3) / 6.0, (3.0 - SQRT3) / 3.0, 0.0],
    ]
    return _pair("diark_2_3_3", 3, A, Ah, [0.0, 0.5, 0.5])


def diark_3_4_3() -> ARKPair:
    sg, mu = _sigma_mu()
    x = (9.0 * mu * sg - 3.0 * mu - 3.0 * sg + 1.0) / (3.0 * mu * (2.0 * sg - 1.0))
    A = [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, sg, 0.0, 0.0],
        [0.0, 0.5 - sg, sg, 0.0],
        [0.0, 2.0 * sg, 1.0 - 4.0 * sg, sg],
    ]
    Ah = [
        [0.0, 0.0, 0.0, 0.0],
        [sg, 0.0, 0.0, 0.0],
        [0.0, 0.5, 0.0, 0.0],
        [0.0, x, 1.0 - sg - x, 0.0],
    ]
    return _pair("diark_3_4_3", 3, A, Ah, [0.0, mu, 1.0 - 2.0 * mu, mu])


def diark_5_6_4() -> ARKPair:
    sg, mu = _sigma_mu()
    m2 = mu * mu
    d1 = 108.0 * m2 - 90.0 * mu + 9.0
    d2 = 324.0 * m2 - 270.0 * mu + 27.0
    d3 = 36.0 * m2 - 30.0 * mu + 3.0
    A = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 3.0 / 8.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 8.0, 0.0, 3.0 / 16.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, sg, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.5 - sg, sg, 0.0],
        [0.0, 0.0, 0.0, 2.0 * sg, 1.0 - 4.0 * sg, sg],
    ]
    Ah = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 8.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 9.0 / 16.0, 0.0, 0.0, 0.0, 0.0],
        [
            25.0 / (162.0 * mu),
            (-104.0 * sg * m2 + 6.0 * m2 + 20.0 * mu) / d1,
            (112.0 * sg * m2 + 36.0 * m2 - 37.0 * mu) / d2,
            0.0, 0.0, 0.0,
        ],
        [0.0, 0.0, 0.5, 0.0, 0.0, 0.0],
        [
            0.0,
            (56.0 * sg * m2 - 2.0 * m2 - 12.0 * mu) / d3,
            (16.0 * sg * m2 - 4.0 * m2 + 3.0 * mu) / d3,
            0.0, 0.0, 0.0,
        ],
    ]
    return _pair("diark_5_6_4", 4, A, Ah, [0.0, 0.0, 0.0, mu, 1.0 - 2.0 * mu, mu])


def gark_4_5_4() -> ARKPair:
    r = SQRT3 / 6.0
    A = [
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.25, 0.0, 0.0, 0.0],
        [0.25, 0.0, 0.25, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.25, 0.25 - r],
        [0.0, 0.0, 0.0, 0.25 + r, 0.25],
    ]
    Ah = [
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [0.25, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.5, 0.0, 0.0, 0.0],
        [1.0 / 6.0, 0.0, 1.0 / 3.0 - r, 0.0, 0.0],
        [1.0 / 6.0, 0.0, 1.0 / 3.0 + r, 0.0, 0.0],
    ]
    return _pair("gark_4_5_4", 4, A, Ah, [0.0, 0.0, 0.0, 0.5, 0.5])


# name -> factory; only diark_2_2_2 takes a parameter (gamma).
BUILTINS: Dict[str, Callable[..., ARKPair]] = {
    "diark_2_2_2": diark_2_2_2,
    "diark_2_3_3": diark_2_3_3,
    "diark_3_4_3": diark_3_4_3,
    "diark_5_6_4": diark_5_6_4,
    "gark_4_5_4": gark_4_5_4,
}

_ALIASES = {
    "magrk": "gark_4_5_4",
    "gark": "gark_4_5_4",
}


def implicit_euler() -> ButcherTableau:
    return ButcherTableau.from_matrix([[1.0]], [1.0])


def implicit_midpoint() -> ButcherTableau:
    return ButcherTableau.from_matrix([[0.5]], [1.0])


def gauss_2() -> ButcherTableau:
    r = SQRT3 / 6.0
    return ButcherTableau.from_matrix([[0.25, 0.25 - r], [0.25 + r, 0.25]], [0.5, 0.5])


BASES: Dict[str, Callable[[], ButcherTableau]] = {
    "implicit_euler": implicit_euler,
    "implicit_midpoint": implicit_midpoint,
    "gauss_2": gauss_2,
}


def available_methods() -> List[str]:
    return sorted(BUILTINS)


def available_bases() -> List[str]:
    return sorted(BASES)


def normalize_name(name: str) -> str:
    """Map identifiers such as 'SAV-MDIARK(2,2,2)' or 'DIARK(2,2,2)' to 'diark_2_2_2'."""
    raw = (name or "").strip().lower()
    raw = re.sub(r"^sav[-_ ]*", "", raw)
    m = re.match(r"^m?(diark|gark)\s*[(_ ]\s*(\d+)\s*[,_ ]\s*(\d+)\s*[,_ ]\s*(\d+)\s*\)?$", raw)
    if m:
        return f"{m.group(1)}_{m.group(2)}_{m.group(3)}_{m.group(4)}"
    return _ALIASES.get(raw, raw)


def builtin(name: str, **params) -> ARKPair:
    key = normalize_name(name)
    factory = BUILTINS.get(key)
    if factory is None:
        raise ConfigError(
            f"unknown method '{name}'; available: {', '.join(available_methods())}"
        )
    gamma = params.get("gamma")
    if key == "diark_2_2_2" and gamma is not None:
        return factory(gamma=float(gamma))
    return factory()


def base_tableau(name: str) -> ButcherTableau:
    key = (name or "").strip().lower().replace("-", "_")
    if key == "gauss2":
        key = "gauss_2"
    factory = BASES.get(key)
    if factory is None:
        raise ConfigError(f"unknown base method '{name}'; available: {', '.join(available_bases())}")
    return factory()
