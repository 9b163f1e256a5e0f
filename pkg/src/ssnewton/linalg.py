"""Small dense linear-algebra kernel.

Everything here operates on plain ``numpy`` arrays at desk scale (a few
hundred rows at most).  The LQ factorization uses a fixed sign convention --
all diagonal entries of the triangular factor are nonnegative -- which makes
the returned orthogonal factor (and hence the null-space basis taken from its
trailing columns) a continuous function of the input as long as the input has
full row rank.  The Newton machinery relies on that continuity.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, RankDeficiencyError, SingularMatrixError

RANK_TOL = 1e-10
PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class QRFactorization:
    """Orthogonal factorization C Q = (L : 0).

    ``q`` is n x n orthogonal, ``l`` is m x m lower triangular with
    nonnegative diagonal.  ``rank_ok`` is True iff every diagonal entry of
    ``l`` exceeds the rank tolerance relative to the scale of C.
    """

    q: np.ndarray
    l: np.ndarray
    rank_ok: bool


def _as_matrix(c):
    c = np.asarray(c, dtype=float)
    if c.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got ndim={c.ndim}")
    if c.size and not np.isfinite(c).all():
        raise DimensionError("matrix entries must be finite")
    return c


def lq_householder(c):
    """Factor a wide matrix as C Q = (L : 0) with L lower triangular.

    Householder reflections applied to C^T, with each reflection chosen so
    the produced diagonal entry is nonnegative.  The reflector direction is
    computed in the cancellation-free form, so Q varies continuously with C
    at every full-row-rank input.

    Requires m <= n.
    """
    c = _as_matrix(c)
    m, n = c.shape
    if m > n:
        raise DimensionError(f"need rows <= cols, got {m}x{n}")
    scale = max(1.0, float(np.max(np.abs(c))) if c.size else 0.0)

    a = c.T.copy()  # n x m, reduced to upper triangular
    q = np.eye(n)
    for k in range(m):
        x = a[k:, k]
        alpha = float(np.linalg.norm(x))
        if alpha == 0.0:
            continue  # zero column: diagonal stays 0, rank_ok will be False
        sigma = float(x[1:] @ x[1:])
        if x[0] > 0.0:
            if sigma == 0.0:
                a[k, k] = alpha
                continue  # already aligned with +e1, no reflection needed
            v0 = -sigma / (x[0] + alpha)
        else:
            v0 = x[0] - alpha
        v = x.copy()
        v[0] = v0
        beta = 2.0 / (v0 * v0 + sigma)
        a[k:, k:] -= beta * np.outer(v, v @ a[k:, k:])
        a[k, k] = alpha
        a[k + 1:, k] = 0.0
        q[:, k:] -= beta * np.outer(q[:, k:] @ v, v)

    l = a[:m, :m].T.copy()
    diag = np.diagonal(l)
    rank_ok = bool(diag.size == 0 or np.min(diag) > RANK_TOL * scale)
    return QRFactorization(q=q, l=l, rank_ok=rank_ok)


def nullspace_basis(c):
    """Orthonormal basis of ker(C) for a full-row-rank m x n matrix C.

    Returns the trailing n - m columns of the orthogonal factor of
    :func:`lq_householder`, so C Z = 0 and Z^T Z = I.  The sign convention
    makes Z deterministic and locally continuous in C.
    """
    c = _as_matrix(c)
    m, n = c.shape
    fac = lq_householder(c)
    if not fac.rank_ok:
        diag = np.diagonal(fac.l)
        bad = int(np.argmin(diag)) if diag.size else 0
        raise RankDeficiencyError(
            f"matrix is rank deficient (diagonal {bad} of L is "
            f"{diag[bad] if diag.size else 0.0:.3e})",
            index=bad,
        )
    return fac.q[:, m:].copy()


def _lu_factor(a, tol):
    """Doolittle LU with partial pivoting; raises when a pivot falls below tol."""
    n = a.shape[0]
    lu = a.copy()
    piv = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= tol:
            raise SingularMatrixError(
                f"pivot {abs(lu[p, k]):.3e} at column {k} below tolerance {tol:.3e}"
            )
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def _lu_solve(lu, piv, b):
    n = lu.shape[0]
    x = b[piv].astype(float)
    for k in range(n):  # forward, unit lower
        x[k + 1:] -= lu[k + 1:, k] * x[k]
    for k in range(n - 1, -1, -1):  # backward
        x[k] = (x[k] - lu[k, k + 1:] @ x[k + 1:]) / lu[k, k]
    return x


def solve_dense(a, rhs):
    """Solve the square system A x = rhs by LU with partial pivoting.

    Raises :class:`SingularMatrixError` when a pivot is below
    1e-12 x matrix scale.
    """
    a = _as_matrix(a)
    rhs = np.asarray(rhs, dtype=float)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError(f"matrix must be square, got {a.shape}")
    if rhs.shape != (n,):
        raise DimensionError(f"rhs has shape {rhs.shape}, expected ({n},)")
    if n == 0:
        return np.zeros(0)
    scale = max(1.0, float(np.max(np.abs(a))))
    lu, piv = _lu_factor(a, PIVOT_TOL * scale)
    return _lu_solve(lu, piv, rhs)


def lu_min_pivot(a):
    """Smallest pivot magnitude met during partial-pivot elimination.

    Used as the regularity score of a square matrix: the matrix counts as
    regular when this exceeds the pivot tolerance times its scale.  Never
    raises; an exactly breakdown pivot reports as 0.0.
    """
    a = _as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError(f"matrix must be square, got {a.shape}")
    if n == 0:
        return np.inf
    lu = a.copy()
    smallest = np.inf
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        pivot = abs(lu[p, k])
        smallest = min(smallest, pivot)
        if pivot == 0.0:
            return 0.0
        if p != k:
            lu[[k, p]] = lu[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return float(smallest)


def pseudo_inverse_full_row_rank(c):
    """Moore-Penrose inverse C^T (C C^T)^{-1} of a full-row-rank matrix."""
    c = _as_matrix(c)
    m, n = c.shape
    if m == 0:
        return np.zeros((n, 0))
    gram = c @ c.T
    scale = max(1.0, float(np.max(np.abs(gram))))
    try:
        lu, piv = _lu_factor(gram, PIVOT_TOL * scale)
    except SingularMatrixError as exc:
        raise RankDeficiencyError(f"matrix does not have full row rank: {exc}") from exc
    cols = np.column_stack([_lu_solve(lu, piv, c[:, j]) for j in range(n)])
    return cols.T


def smallest_singular_value(c):
    """Smallest singular value of C; +inf for an empty matrix by convention."""
    c = _as_matrix(c)
    if 0 in c.shape:
        return np.inf
    return float(np.linalg.svd(c, compute_uv=False)[-1])
