import numpy as np
import pytest

from ssnewton.errors import DimensionError, RankDeficiencyError, SingularMatrixError
from ssnewton.linalg import (
    lq_householder,
    lu_min_pivot,
    nullspace_basis,
    pseudo_inverse_full_row_rank,
    smallest_singular_value,
    solve_dense,
)


def test_lq_identity():
    fac = lq_householder(np.eye(2))
    assert np.allclose(fac.q, np.eye(2))
    assert np.allclose(fac.l, np.eye(2))
    assert fac.rank_ok


def test_lq_single_row():
    fac = lq_householder(np.array([[0.0, 2.0]]))
    assert np.allclose(fac.l, [[2.0]])
    assert np.allclose(fac.q[:, 0], [0.0, 1.0])
    rec = np.hstack([fac.l, np.zeros((1, 1))])
    assert np.max(np.abs(np.array([[0.0, 2.0]]) @ fac.q - rec)) <= 1e-12 * 2


def test_lq_random_reconstruction():
    rng = np.random.default_rng(0)
    for _ in range(100):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(m, 8))
        c = rng.uniform(-3, 3, (m, n))
        fac = lq_householder(c)
        scale = max(1.0, np.max(np.abs(c)))
        assert np.max(np.abs(fac.q.T @ fac.q - np.eye(n))) <= 1e-12
        rec = np.hstack([fac.l, np.zeros((m, n - m))])
        assert np.max(np.abs(c @ fac.q - rec)) <= 1e-12 * scale
        assert np.all(np.diagonal(fac.l) >= 0.0)
        assert np.max(np.abs(np.triu(fac.l, 1))) == 0.0


def test_lq_shape_and_finiteness_errors():
    with pytest.raises(DimensionError):
        lq_householder(np.zeros((3, 2)))
    with pytest.raises(DimensionError):
        lq_householder(np.array([[np.nan, 1.0]]))


def test_nullspace_single_row():
    z = nullspace_basis(np.array([[1.0, 0.0]]))
    assert np.allclose(z, [[0.0], [1.0]])


def test_nullspace_empty_and_square():
    assert np.allclose(nullspace_basis(np.zeros((0, 3))), np.eye(3))
    z = nullspace_basis(np.eye(3))
    assert z.shape == (3, 0)


def test_nullspace_properties():
    rng = np.random.default_rng(1)
    for _ in range(100):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(m, 7))
        c = rng.uniform(-2, 2, (m, n))
        z = nullspace_basis(c)
        assert z.shape == (n, n - m)
        if z.size:
            assert np.max(np.abs(c @ z)) <= 1e-12 * max(1.0, np.max(np.abs(c)))
            assert np.max(np.abs(z.T @ z - np.eye(n - m))) <= 1e-12


def test_nullspace_rank_deficiency_reports_index():
    c = np.array([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    with pytest.raises(RankDeficiencyError) as info:
        nullspace_basis(c)
    assert info.value.index is not None


def test_nullspace_continuity_under_perturbation():
    # the nonnegative-diagonal convention makes Z locally continuous in C
    rng = np.random.default_rng(2)
    checked = 0
    while checked < 100:
        m = int(rng.integers(1, 4))
        n = int(rng.integers(m, 6))
        c = rng.uniform(-2, 2, (m, n))
        if np.min(np.diagonal(lq_householder(c).l)) <= 1e-3:
            continue
        dc = rng.uniform(-1, 1, (m, n))
        dc *= 1e-8 / max(np.linalg.norm(dc), 1e-300)
        z = nullspace_basis(c)
        zp = nullspace_basis(c + dc)
        assert np.linalg.norm(z - zp) <= 1e-4
        checked += 1


def test_solve_dense_trivial():
    rhs = np.array([3.0, -1.0])
    assert np.allclose(solve_dense(np.eye(2), rhs), rhs)
    x = solve_dense(np.diag([2.0, 4.0]), np.array([2.0, 8.0]))
    assert np.allclose(x, [1.0, 2.0])


def test_solve_dense_residual_and_roundtrip():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = rng.uniform(-1, 1, (6, 6)) + 6 * np.eye(6)
        rhs = rng.uniform(-1, 1, 6)
        x = solve_dense(a, rhs)
        assert np.linalg.norm(a @ x - rhs) <= 1e-10 * (1 + np.linalg.norm(rhs))
        xref = rng.uniform(-1, 1, 6)
        xref /= max(1.0, np.linalg.norm(xref))
        assert np.linalg.norm(solve_dense(a, a @ xref) - xref) <= 1e-9


def test_solve_dense_singular():
    with pytest.raises(SingularMatrixError):
        solve_dense(np.array([[1.0, 2.0], [2.0, 4.0]]), np.array([1.0, 1.0]))


def test_lu_min_pivot():
    assert lu_min_pivot(np.diag([4.0, 0.5])) == 0.5
    assert lu_min_pivot(np.zeros((2, 2))) == 0.0
    assert lu_min_pivot(np.zeros((0, 0))) == np.inf


def test_pseudo_inverse_examples():
    assert np.allclose(pseudo_inverse_full_row_rank(np.array([[2.0, 0.0]])), [[0.5], [0.0]])
    assert np.allclose(pseudo_inverse_full_row_rank(np.eye(3)), np.eye(3))


def test_pseudo_inverse_random():
    rng = np.random.default_rng(4)
    for _ in range(50):
        c = rng.uniform(-2, 2, (2, 4))
        dag = pseudo_inverse_full_row_rank(c)
        assert np.max(np.abs(c @ dag - np.eye(2))) <= 1e-10


def test_pseudo_inverse_rank_deficient():
    with pytest.raises(RankDeficiencyError):
        pseudo_inverse_full_row_rank(np.array([[1.0, 0.0], [1.0, 0.0]]))


def _smallest_eig_bisect_3x3(m):
    """Oracle: smallest eigenvalue via sign-chain bisection on the
    characteristic polynomial q(t) = det(tI - M), coefficients by cofactors."""
    a = m[0, 0] + m[1, 1] + m[2, 2]
    b = (
        m[0, 0] * m[1, 1]
        - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2]
        - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2]
        - m[1, 2] * m[2, 1]
    )
    c = (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )

    def below_all_roots(t):
        # all roots real: t < lambda_min iff q, q', q'' alternate in sign
        q = ((t - a) * t + b) * t - c
        dq = 3 * t * t - 2 * a * t + b
        ddq = 6 * t - 2 * a
        return q < 0 and dq > 0 and ddq < 0

    radius = float(np.max(np.sum(np.abs(m), axis=1)))
    lo, hi = -radius - 1.0, radius + 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if below_all_roots(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_smallest_singular_value_examples():
    assert smallest_singular_value(np.diag([3.0, 1.0])) == pytest.approx(1.0)
    assert smallest_singular_value(np.array([[1.0, 0.0], [0.0, 0.0]])) == pytest.approx(0.0)
    assert smallest_singular_value(np.zeros((0, 3))) == np.inf


def test_smallest_singular_value_against_charpoly_oracle():
    rng = np.random.default_rng(5)
    for _ in range(50):
        c = rng.uniform(-2, 2, (3, 3))
        sigma = smallest_singular_value(c)
        eig = _smallest_eig_bisect_3x3(c.T @ c)
        expected = np.sqrt(max(eig, 0.0))
        top = np.linalg.norm(c, 2)
        assert abs(sigma - expected) <= 1e-9 * max(1.0, top)
