"""Linearly implicit stage solves shared by every stepper.

Stages are processed in contiguous blocks (see `stage_blocks`). Within a
block the implicit coefficients may couple stages (Gauss blocks); the
explicit coefficients of a block may only reach earlier blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from savark.errors import SolverError, StageSingularError
from savark.integrators.state import StageWorkspace
from savark.models.base import GradientFlowModel
from savark.models.sources import SourceTerm
from savark.spectral import RealField, Symbol, apply_symbol, inner, solve_shifted_block


Q_SINGULAR_TOL = 1e-13
RESIDUAL_TOL = 1e-9


def combine(base: RealField, terms: Iterable[Tuple[float, Optional[RealField]]]) -> RealField:
    """base + sum(weight * field), skipping zero weights and missing fields."""
    out = base.values.copy()
    for weight, fld in terms:
        if weight != 0.0 and fld is not None:
            out += weight * fld.values
    return RealField(base.grid, out)


def _relative(residual: float, *scales: float) -> float:
    scale = max([abs(s) for s in scales] + [1e-300])
    return abs(residual) / scale


@dataclass
class StageContext:
    model: GradientFlowModel
    u_n: RealField
    q_n: float
    t_n: float
    tau: float
    c: np.ndarray
    source: Optional[SourceTerm] = None
    residual_tol: Optional[float] = RESIDUAL_TOL
    sigma: Symbol = field(init=False)
    _h: Dict[int, Optional[RealField]] = field(default_factory=dict, init=False)

    def __post_init__(self) -> None:
        self.sigma = self.model.stage_symbol(self.u_n.grid)

    def source_at(self, i: int) -> Optional[RealField]:
        if self.source is None:
            return None
        if i not in self._h:
            self._h[i] = self.source(self.u_n.grid, self.t_n + float(self.c[i]) * self.tau)
        return self._h[i]

    def record(self, ws: StageWorkspace, residual: float, what: str, stage: int) -> None:
        ws.residuals.append(residual)
        if self.residual_tol is not None and residual > self.residual_tol:
            raise SolverError(
                f"stage {stage}: {what} residual {residual:.3e} exceeds {self.residual_tol:.1e}"
            )


def explicit_stage_v(
    ctx: StageContext,
    block: Sequence[int],
    base: RealField,
    A: np.ndarray,
    A_hat: np.ndarray,
    ws: StageWorkspace,
) -> List[RealField]:
    """v_i = base + tau sum_j (a_ij vL_j + ah_ij vN_j) for the stages of `block`.

    Only the linear part is implicit; afterwards vL_i = G L v_i is stored.
    """
    B = list(block)
    i0 = B[0]
    tau = ctx.tau
    rhs = []
    for i in B:
        terms = [(tau * A[i, j], ws.vdot_l[j]) for j in range(i0)]
        terms += [(tau * A_hat[i, j], ws.vdot_n[j]) for j in range(i0)]
        rhs.append(combine(base, terms))
    a_bb = tau * A[np.ix_(B, B)]
    vs = solve_shifted_block(ctx.sigma, a_bb, rhs)
    for k, i in enumerate(B):
        ws.v[i] = vs[k]
        ws.vdot_l[i] = apply_symbol(ctx.sigma, vs[k])
    for k, i in enumerate(B):
        implicit = combine(RealField.zeros(base.grid), [(a_bb[k, m], ws.vdot_l[j]) for m, j in enumerate(B)])
        res = (vs[k] - rhs[k] - implicit).values
        scale = max(np.max(np.abs(vs[k].values)), np.max(np.abs(rhs[k].values)), np.max(np.abs(implicit.values)))
        ctx.record(ws, _relative(float(np.max(np.abs(res))), scale), "v", i)
    return vs


def coupled_uq_stage(
    ctx: StageContext,
    block: Sequence[int],
    A: np.ndarray,
    ws: StageWorkspace,
) -> None:
    """Solve the (u, q) stage equations of `block` given f_i in the workspace.

    u_i = u^n + tau sum_j a_ij udot_j, udot_j = G(L u_j + 2 q_j f_j) + h_j
    q_i = q^n + tau sum_j a_ij (f_j, udot_j)_N

    u is affine in the block's q values: u = U1 + sum_k q_k U2[k], obtained by
    shifted solves, which leaves an m x m linear system for q.
    """
    model = ctx.model
    B = list(block)
    m = len(B)
    i0 = B[0]
    tau = ctx.tau
    grid = ctx.u_n.grid

    f = [ws.f[i] for i in B]
    h = [ctx.source_at(i) for i in B]
    for i, hi in zip(B, h):
        ws.h[i] = hi
    rhs_u = [combine(ctx.u_n, [(tau * A[i, j], ws.udot[j]) for j in range(i0)]) for i in B]
    rhs_q = np.array([ctx.q_n + tau * sum(A[i, j] * ws.qdot[j] for j in range(i0)) for i in B])
    a_bb = tau * A[np.ix_(B, B)]
    gf = [model.apply_mobility(fi) for fi in f]

    if not np.any(a_bb):
        u = rhs_u
        q = rhs_q
        udot = [combine(apply_symbol(ctx.sigma, u[k]), [(2.0 * q[k], gf[k]), (1.0, h[k])]) for k in range(m)]
    else:
        r1 = [combine(rhs_u[a], [(a_bb[a, b], h[b]) for b in range(m)]) for a in range(m)]
        U1 = solve_shifted_block(ctx.sigma, a_bb, r1)
        U2 = []
        for k in range(m):
            r2 = [RealField(grid, 2.0 * a_bb[a, k] * gf[k].values) for a in range(m)]
            U2.append(solve_shifted_block(ctx.sigma, a_bb, r2))
        sU1 = [apply_symbol(ctx.sigma, x) for x in U1]
        sU2 = [[apply_symbol(ctx.sigma, x) for x in col] for col in U2]

        base_dot = [combine(sU1[a], [(1.0, h[a])]) for a in range(m)]
        p0 = np.array([inner(f[a], base_dot[a]) for a in range(m)])
        P = np.empty((m, m))
        for a in range(m):
            for k in range(m):
                P[a, k] = inner(f[a], sU2[k][a])
            P[a, a] += 2.0 * inner(f[a], gf[a])
        lhs = np.eye(m) - a_bb @ P
        det = float(lhs[0, 0]) if m == 1 else float(np.linalg.det(lhs))
        if abs(det) < Q_SINGULAR_TOL:
            raise StageSingularError(
                f"stages {B}: q elimination is singular (determinant {det:.3e}); reduce the time step"
            )
        q = np.linalg.solve(lhs, rhs_q + a_bb @ p0)
        u = [combine(U1[a], [(q[k], U2[k][a]) for k in range(m)]) for a in range(m)]
        udot = [
            combine(base_dot[a], [(q[k], sU2[k][a]) for k in range(m)] + [(2.0 * q[a], gf[a])])
            for a in range(m)
        ]

    for k, i in enumerate(B):
        ws.u[i] = u[k]
        ws.q[i] = float(q[k])
        ws.udot[i] = udot[k]
        ws.gf[i] = gf[k]
        ws.qdot[i] = inner(f[k], udot[k])

    for k, i in enumerate(B):
        implicit = combine(RealField.zeros(grid), [(a_bb[k, m_], ws.udot[j]) for m_, j in enumerate(B)])
        res = (u[k] - rhs_u[k] - implicit).values
        scale = max(np.max(np.abs(u[k].values)), np.max(np.abs(rhs_u[k].values)), np.max(np.abs(implicit.values)))
        ctx.record(ws, _relative(float(np.max(np.abs(res))), scale), "u", i)
        q_implicit = float(sum(a_bb[k, m_] * ws.qdot[j] for m_, j in enumerate(B)))
        ctx.record(ws, _relative(ws.q[i] - rhs_q[k] - q_implicit, ws.q[i], rhs_q[k], q_implicit), "q", i)


def nonlinear_velocity(ws: StageWorkspace, i: int, r: float) -> RealField:
    """vN_i = 2 r G f_i + h_i."""
    return combine(RealField.zeros(ws.gf[i].grid), [(2.0 * r, ws.gf[i]), (1.0, ws.h[i])])
