"""One-step maps of the four SAV additive Runge-Kutta algorithms.

`advance_*` return a StepOutcome (state and report); `step_sav_*` return
only the new state.
"""

from __future__ import annotations

import time
from typing import List, Optional, Sequence, Tuple

import numpy as np

from savark.errors import ConfigError, SolverError, StructureError
from savark.integrators.stages import (
    RESIDUAL_TOL,
    StageContext,
    combine,
    coupled_uq_stage,
    explicit_stage_v,
    nonlinear_velocity,
)
from savark.integrators.state import SAVState, StageWorkspace, StepOutcome, StepReport
from savark.models.base import GradientFlowModel
from savark.models.sources import SourceTerm
from savark.spectral import RealField, apply_symbol, inner, norm_inf, solve_shifted_block
from savark.tableaux import ARKPair, ButcherTableau, MARKIITableaux, stage_blocks


RKPC_TOL = 1e-14
RKPC_SWEEPS = 4


def _check_explicit_reach(name: str, A_hat: np.ndarray, blocks: Sequence[Tuple[int, ...]]) -> None:
    for block in blocks:
        i0 = block[0]
        for i in block:
            if np.any(A_hat[i, i0:]):
                raise StructureError(
                    f"{name}: explicit coefficients of stage {i} reach stage {i0} or later"
                )


def _finish(
    model: GradientFlowModel,
    state: SAVState,
    u: RealField,
    q: float,
    tau: float,
    ws: StageWorkspace,
    started: float,
    v: Optional[RealField] = None,
    sweeps: int = 0,
) -> StepOutcome:
    if not (u.is_finite() and np.isfinite(q)):
        raise SolverError("non-finite solution after step")
    report = StepReport(
        energy_before=model.modified_energy(state.u, state.q),
        energy_after=model.modified_energy(u, q),
        q=float(q),
        residuals=list(ws.residuals),
        wall_time=time.perf_counter() - started,
        sweeps=sweeps,
    )
    return StepOutcome(SAVState(u=u, q=float(q), t=state.t + tau, v=v), report)


def _update(state: SAVState, b: np.ndarray, tau: float, ws: StageWorkspace) -> Tuple[RealField, float]:
    u = combine(state.u, [(tau * b[i], ws.udot[i]) for i in range(len(b))])
    q = state.q + tau * float(sum(b[i] * ws.qdot[i] for i in range(len(b)) if b[i] != 0.0))
    return u, q


def _advance_additive(
    model: GradientFlowModel,
    pair: ARKPair,
    state: SAVState,
    tau: float,
    source: Optional[SourceTerm],
    propagate_v: bool,
    residual_tol: Optional[float],
) -> StepOutcome:
    if tau <= 0:
        raise ConfigError(f"time step must be positive, got {tau}")
    started = time.perf_counter()
    A = pair.implicit.A
    A_hat = pair.explicit.A
    blocks = stage_blocks(A)
    _check_explicit_reach(pair.name or "pair", A_hat, blocks)

    ctx = StageContext(model, state.u, state.q, state.t, tau, pair.implicit.c, source, residual_tol)
    ws = StageWorkspace(pair.s)
    base = state.v if (propagate_v and state.v is not None) else state.u

    for block in blocks:
        explicit_stage_v(ctx, block, base, A, A_hat, ws)
        for i in block:
            ws.f[i] = model.variational(ws.v[i])
        coupled_uq_stage(ctx, block, A, ws)
        for i in block:
            ws.vdot_n[i] = nonlinear_velocity(ws, i, ws.q[i])

    u, q = _update(state, pair.implicit.b, tau, ws)
    v_next = None
    if propagate_v:
        b, bh = pair.implicit.b, pair.explicit.b
        v_next = combine(
            base,
            [(tau * b[i], ws.vdot_l[i]) for i in range(pair.s)]
            + [(tau * bh[i], ws.vdot_n[i]) for i in range(pair.s)],
        )
    return _finish(model, state, u, q, tau, ws, started, v=v_next)


def advance_mark(
    model: GradientFlowModel,
    pair: ARKPair,
    state: SAVState,
    tau: float,
    source: Optional[SourceTerm] = None,
    residual_tol: Optional[float] = RESIDUAL_TOL,
) -> StepOutcome:
    """v restarts from u^n every step."""
    return _advance_additive(model, pair, state, tau, source, False, residual_tol)


def advance_ark(
    model: GradientFlowModel,
    pair: ARKPair,
    state: SAVState,
    tau: float,
    source: Optional[SourceTerm] = None,
    residual_tol: Optional[float] = RESIDUAL_TOL,
) -> StepOutcome:
    """v is carried across steps (v^0 = u^0 when the state has none)."""
    return _advance_additive(model, pair, state.with_v(), tau, source, True, residual_tol)


def advance_markII(
    model: GradientFlowModel,
    tableaux: MARKIITableaux,
    state: SAVState,
    tau: float,
    source: Optional[SourceTerm] = None,
    residual_tol: Optional[float] = RESIDUAL_TOL,
) -> StepOutcome:
    """Four-tableau scheme with the lagged field w and the auxiliary scalar r.

    Per block: v (implicit in G L v), the r values, vN = 2 r G f[v] + h, then
    the coupled (u, q) solve. rN_j = (f[w_j], vN_j) with w_j built lazily the
    first time an explicit coefficient needs it.
    """
    if tau <= 0:
        raise ConfigError(f"time step must be positive, got {tau}")
    started = time.perf_counter()
    A = tableaux.a.A
    A_hat = tableaux.a_hat.A
    A_tilde = tableaux.a_tilde.A
    A_bar = tableaux.a_bar.A
    blocks = stage_blocks(A)
    _check_explicit_reach(tableaux.name or "markII", A_hat, blocks)

    ctx = StageContext(model, state.u, state.q, state.t, tau, tableaux.a.c, source, residual_tol)
    ws = StageWorkspace(tableaux.s)
    done = np.zeros(tableaux.s, dtype=bool)      # v and vL known
    n_known = np.zeros(tableaux.s, dtype=bool)   # vN known

    def lagged(j: int) -> RealField:
        if j not in ws.w:
            need_l = np.nonzero(A_tilde[j])[0]
            need_n = np.nonzero(A_bar[j])[0]
            if not (np.all(done[need_l]) and np.all(n_known[need_n])):
                raise StructureError(f"lagged stage {j} needs velocities that are not available yet")
            ws.w[j] = combine(
                state.u,
                [(tau * A_tilde[j, k], ws.vdot_l[k]) for k in need_l]
                + [(tau * A_bar[j, k], ws.vdot_n[k]) for k in need_n],
            )
        return ws.w[j]

    def rdot_n(j: int) -> float:
        if j not in ws.rdot_n:
            ws.rdot_n[j] = inner(model.variational(lagged(j)), ws.vdot_n[j])
        return ws.rdot_n[j]

    r_n = state.q
    for block in blocks:
        i0 = block[0]
        explicit_stage_v(ctx, block, state.u, A, A_hat, ws)
        for i in block:
            done[i] = True
            ws.f[i] = model.variational(ws.v[i])
            ws.rdot_l[i] = inner(ws.f[i], ws.vdot_l[i])
        for i in block:
            acc = sum(A[i, j] * ws.rdot_l[j] for j in range(block[-1] + 1) if A[i, j] != 0.0)
            acc += sum(A_hat[i, j] * rdot_n(j) for j in range(i0) if A_hat[i, j] != 0.0)
            ws.r[i] = r_n + tau * float(acc)
        coupled_uq_stage(ctx, block, A, ws)
        for i in block:
            ws.vdot_n[i] = nonlinear_velocity(ws, i, ws.r[i])
            n_known[i] = True

    u, q = _update(state, tableaux.b, tau, ws)
    return _finish(model, state, u, q, tau, ws, started)


def advance_rkpc(
    model: GradientFlowModel,
    base: ButcherTableau,
    state: SAVState,
    tau: float,
    sweeps: int = RKPC_SWEEPS,
    tol: float = RKPC_TOL,
    source: Optional[SourceTerm] = None,
    residual_tol: Optional[float] = RESIDUAL_TOL,
) -> StepOutcome:
    """Prediction-correction on a base Runge-Kutta method.

    Each prediction sweep solves the linear stage system with the nonlinear
    forcing 2 q G f frozen at the previous iterate, then updates q explicitly.
    Sweeps stop early only when tol > 0 and the stage update is below tol in
    the max norm. The correction is one coupled (u, q) pass with f taken at
    the predicted stages.
    """
    if tau <= 0:
        raise ConfigError(f"time step must be positive, got {tau}")
    if sweeps < 1:
        raise ConfigError(f"prediction needs at least one sweep, got {sweeps}")
    started = time.perf_counter()
    A = base.A
    s = base.s
    blocks = stage_blocks(A)
    ctx = StageContext(model, state.u, state.q, state.t, tau, base.c, source, residual_tol)

    pred_u: List[RealField] = [state.u] * s
    pred_q: List[float] = [state.q] * s
    performed = 0
    for _ in range(sweeps):
        forcing = []
        for i in range(s):
            gf = model.apply_mobility(model.variational(pred_u[i]))
            forcing.append(combine(RealField.zeros(state.u.grid), [(2.0 * pred_q[i], gf), (1.0, ctx.source_at(i))]))
        new_u: List[Optional[RealField]] = [None] * s
        udot: List[Optional[RealField]] = [None] * s
        for block in blocks:
            i0 = block[0]
            B = list(block)
            a_bb = tau * A[np.ix_(B, B)]
            rhs = [
                combine(
                    state.u,
                    [(tau * A[i, j], udot[j]) for j in range(i0)]
                    + [(tau * A[i, j], forcing[j]) for j in B],
                )
                for i in B
            ]
            sol = solve_shifted_block(ctx.sigma, a_bb, rhs)
            for k, i in enumerate(B):
                new_u[i] = sol[k]
                udot[i] = combine(forcing[i], [(1.0, apply_symbol(ctx.sigma, sol[k]))])
        qdot = [inner(model.variational(new_u[i]), udot[i]) for i in range(s)]
        new_q = [state.q + tau * float(sum(A[i, j] * qdot[j] for j in range(s))) for i in range(s)]
        change = max(norm_inf(new_u[i] - pred_u[i]) for i in range(s))
        pred_u, pred_q = list(new_u), new_q
        performed += 1
        if tol > 0 and change <= tol:
            break

    ws = StageWorkspace(s)
    for block in blocks:
        for i in block:
            ws.f[i] = model.variational(pred_u[i])
        coupled_uq_stage(ctx, block, A, ws)

    u, q = _update(state, base.b, tau, ws)
    return _finish(model, state, u, q, tau, ws, started, sweeps=performed)


def step_sav_mark(model, pair, state, tau, source=None) -> SAVState:
    return advance_mark(model, pair, state, tau, source).state


def step_sav_ark(model, pair, state, tau, source=None) -> SAVState:
    return advance_ark(model, pair, state, tau, source).state


def step_sav_markII(model, tableaux, state, tau, source=None) -> SAVState:
    return advance_markII(model, tableaux, state, tau, source).state


def step_sav_rkpc(model, base, sweeps, tol, state, tau, source=None) -> SAVState:
    return advance_rkpc(model, base, state, tau, sweeps=sweeps, tol=tol, source=source).state
