from __future__ import annotations

import numpy as np

from savark.errors import ConfigError
from savark.tableaux.spec import ButcherTableau, MARKIITableaux


def build_rkpc_markII(base: ButcherTableau, sweeps: int) -> MARKIITableaux:
    """Four-tableau form of prediction-correction with `sweeps` prediction passes.

    Stages are grouped as 0..M, each group a copy of the base stages. Group 0
    holds the initial guess, group m >= 1 the m-th prediction (the last one
    doubles as the corrected stage). With E_m the selector of group m:

        A       = sum_{m>=1} E_m A E_m^T
        A_hat   = sum_{m>=1} E_m A E_{m-1}^T
        A_tilde = sum_{m<M} E_m A E_{m+1}^T + E_M A E_M^T
        A_bar   = sum_{m<M} E_m A E_m^T     + E_M A E_0^T
        b       = (0, e_M (x) b)
    """
    M = int(sweeps)
    if M < 1:
        raise ConfigError(f"sweep count must be >= 1, got {sweeps}")
    A = np.asarray(base.A, dtype=float)
    s = base.s
    n = (M + 1) * s

    def group(m: int) -> slice:
        return slice(m * s, (m + 1) * s)

    a = np.zeros((n, n))
    a_hat = np.zeros((n, n))
    a_tilde = np.zeros((n, n))
    a_bar = np.zeros((n, n))
    for m in range(M + 1):
        if m >= 1:
            a[group(m), group(m)] = A
            a_hat[group(m), group(m - 1)] = A
        if m < M:
            a_tilde[group(m), group(m + 1)] = A
            a_bar[group(m), group(m)] = A
    a_tilde[group(M), group(M)] = A
    a_bar[group(M), group(0)] = A

    b = np.zeros(n)
    b[group(M)] = base.b

    return MARKIITableaux(
        a=ButcherTableau.from_matrix(a, b),
        a_hat=ButcherTableau.from_matrix(a_hat, b),
        a_tilde=ButcherTableau.from_matrix(a_tilde, b),
        a_bar=ButcherTableau.from_matrix(a_bar, b),
        name=f"rkpc_markII(M={M})",
    )
