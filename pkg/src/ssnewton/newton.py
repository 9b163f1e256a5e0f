"""The semismooth* Newton method for box generalized equations.

One outer iteration is: (1) an approximation step, the strictly convex QP
that projects the current iterate onto the graph of the reformulated
inclusion and delivers a multiplier, then (2) a Newton step solving the
reduced n x n linear system built from a basis W of the normal-cone span at
the predicted point and an orthonormal basis Z of ker(W^T Jg).

The module also assembles the full (n+s)-dimensional linearization pair
(A, B) and its closed-form inverse.  These are redundant for solving -- the
reduced system is algebraically equivalent -- and serve as cross-check
oracles for the reduced path.
"""

from dataclasses import dataclass

import numpy as np

from .cones import basis_for_pattern, pattern_summary
from .errors import (
    DegeneracyError,
    QPInfeasibleError,
    RankDeficiencyError,
    SingularMatrixError,
)
from .linalg import nullspace_basis, pseudo_inverse_full_row_rank, solve_dense
from .problems import eval_f, eval_g, eval_jg, lagrangian
from .qp import QPInstance, solve_qp
from .reports import IterationRecord, SolveReport, Status


@dataclass(frozen=True, eq=False)
class ApproxResult:
    """A point on the graph of the reformulated inclusion, with multiplier.

    ``y_hat`` stacks the two residual blocks (Lagrangian value, g(x) - d);
    by the QP optimality conditions it equals (-u_hat, -Jg(x) u_hat).
    ``pattern`` is the exact activity pattern reported by the QP solver.
    """

    x_hat: np.ndarray
    d_hat: np.ndarray
    lam_hat: np.ndarray
    p_star: np.ndarray
    y_hat: np.ndarray
    u_hat: np.ndarray
    pattern: tuple


@dataclass(frozen=True, eq=False)
class NewtonWorkspace:
    w: np.ndarray  # basis of span N_D(d_hat), one signed unit per active coord
    z: np.ndarray  # orthonormal basis of ker(w^T Jg)
    reduced_matrix: np.ndarray
    reduced_rhs: np.ndarray
    condition_estimate: float


def approximation_step(problem, x):
    """Solve QP(x) and package the induced graph point and multiplier."""
    x = np.asarray(x, dtype=float)
    c = eval_f(problem, x)
    b = eval_g(problem, x)
    jac = eval_jg(problem, x)
    qp = solve_qp(QPInstance(c=c, b=b, jac=jac, box=problem.box))
    d_hat = b + jac @ qp.u
    p_star = c + jac.T @ qp.lam
    return ApproxResult(
        x_hat=x,
        d_hat=d_hat,
        lam_hat=qp.lam,
        p_star=p_star,
        y_hat=np.concatenate([p_star, b - d_hat]),
        u_hat=qp.u,
        pattern=qp.active,
    )


def _geometry(problem, approx):
    jac_g = eval_jg(problem, approx.x_hat)
    lag = lagrangian(problem, approx.x_hat, approx.lam_hat)
    w = basis_for_pattern(approx.pattern)
    try:
        z = nullspace_basis(w.T @ jac_g)
    except RankDeficiencyError as exc:
        raise DegeneracyError(
            f"point is degenerate: active rows of Jg lost rank ({exc})"
        ) from exc
    return w, z, jac_g, lag


def newton_workspace(problem, approx):
    """Reduced n x n Newton system at the output of the approximation step."""
    n = problem.n
    w, z, jac_g, lag = _geometry(problem, approx)
    reduced = np.vstack([z.T @ lag.jacobian, w.T @ jac_g])
    rhs = np.concatenate([-(z.T @ approx.y_hat[:n]), -(w.T @ approx.y_hat[n:])])
    svals = np.linalg.svd(reduced, compute_uv=False)
    cond = np.inf if svals[-1] == 0.0 else float(svals[0] / svals[-1])
    return NewtonWorkspace(
        w=w, z=z, reduced_matrix=reduced, reduced_rhs=rhs, condition_estimate=cond
    )


def newton_step(workspace):
    """Direction s solving the reduced system; raises on a singular system."""
    return solve_dense(workspace.reduced_matrix, workspace.reduced_rhs)


def assemble_full_ab(problem, approx):
    """The (n+s) x (n+s) linearization pair (A, B), assembled blockwise."""
    n, s = problem.n, problem.s
    w, z, jac_g, lag = _geometry(problem, approx)
    m = w.shape[1]
    a = np.zeros((n + s, n + s))
    b = np.zeros((n + s, n + s))
    a[: n - m, :n] = z.T @ lag.jacobian
    a[n - m : n, :n] = w.T @ jac_g
    a[n:, :n] = jac_g
    a[n:, n:] = -np.eye(s)
    b[: n - m, :n] = z.T
    b[n - m : n, n:] = w.T
    b[n:, n:] = np.eye(s)
    return a, b


def closed_form_inverse(problem, approx):
    """Explicit inverse of the linearization matrix A.

    Valid whenever the reduced Lagrangian block G = Z^T JL Z is regular and
    the active rows W^T Jg have full row rank; built from G^{-1} and the
    Moore-Penrose inverse of W^T Jg.
    """
    n, s = problem.n, problem.s
    w, z, jac_g, lag = _geometry(problem, approx)
    m = w.shape[1]
    g_mat = z.T @ lag.jacobian @ z
    try:
        g_inv = (
            np.column_stack([solve_dense(g_mat, e) for e in np.eye(n - m)])
            if n - m
            else np.zeros((0, 0))
        )
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"reduced Lagrangian block is singular: {exc}") from exc
    c_dag = pseudo_inverse_full_row_rank(w.T @ jac_g)
    top_left = z @ g_inv
    top_mid = (np.eye(n) - top_left @ z.T @ lag.jacobian) @ c_dag
    inv = np.zeros((n + s, n + s))
    inv[:n, : n - m] = top_left
    inv[:n, n - m : n] = top_mid
    inv[n:, : n - m] = jac_g @ top_left
    inv[n:, n - m : n] = jac_g @ top_mid
    inv[n:, n:] = -np.eye(s)
    return inv


def full_step_oracle(problem, approx):
    """Newton direction computed as -(A^{-1} B y)_x; equals the reduced path."""
    _, b = assemble_full_ab(problem, approx)
    inv = closed_form_inverse(problem, approx)
    full = -(inv @ (b @ approx.y_hat))
    return full[: problem.n]


def _default_direction(problem, approx):
    return newton_step(newton_workspace(problem, approx))


def solve(problem, x0, tol=1e-10, max_iter=50, approximation=approximation_step,
          direction=_default_direction):
    """Run the Newton iteration from x0 until ||u_hat|| <= tol.

    The residual proxy ||u_hat|| vanishes exactly at solutions of the
    inclusion, so it doubles as the stopping test.  Solver-level failures
    (infeasible QP, singular or degenerate Newton system, iteration cap)
    are reported in the returned status, never raised.

    ``approximation`` and ``direction`` are pluggable so the same outer loop
    can drive other graph-point constructions or linearization choices.
    """
    x = np.asarray(x0, dtype=float).copy()
    records = []
    prev_step = None
    status, message = Status.MAX_ITER, ""
    k = 0
    while True:
        try:
            approx = approximation(problem, x)
        except QPInfeasibleError as exc:
            status, message = Status.QP_INFEASIBLE, str(exc)
            break
        residual = float(np.linalg.norm(approx.u_hat))
        branch = pattern_summary(approx.pattern)
        lam = tuple(float(v) for v in approx.lam_hat)
        if residual <= tol:
            records.append(
                IterationRecord(k, tuple(map(float, x)), residual, 0.0, lam, branch)
            )
            status = Status.CONVERGED
            break
        if k >= max_iter:
            records.append(
                IterationRecord(k, tuple(map(float, x)), residual, 0.0, lam, branch)
            )
            status = Status.MAX_ITER
            break
        try:
            step = direction(problem, approx)
        except (DegeneracyError, SingularMatrixError) as exc:
            status, message = Status.SINGULAR_NEWTON_SYSTEM, str(exc)
            records.append(
                IterationRecord(k, tuple(map(float, x)), residual, 0.0, lam, branch)
            )
            break
        step_norm = float(np.linalg.norm(step))
        rate = None
        if prev_step is not None and prev_step > 0:
            rate = step_norm / prev_step**2
        records.append(
            IterationRecord(
                k, tuple(map(float, x)), residual, step_norm, lam, branch, rate
            )
        )
        x = x + step
        prev_step = step_norm
        k += 1
    return SolveReport(
        status=status,
        iterations=tuple(records),
        final_x=tuple(float(v) for v in x),
        message=message,
    )
