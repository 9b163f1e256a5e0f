"""Generalized-equation problem model and assumption checkers.

A problem is the inclusion 0 in f(x) + Jg(x)^T N_D(g(x)) with D a box.  It is
described by callbacks for f, g, their Jacobians and the multiplier-weighted
Hessian of g, plus the box.  Affine instances can be loaded from JSON.
"""

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cones import (
    ACTIVITY_TOL,
    Activity,
    BoxSet,
    activity,
    enumerate_face_index_sets,
    normal_cone_membership,
    span_normal_basis,
)
from .errors import (
    DegeneracyError,
    EvaluationError,
    InvalidMultiplierError,
    ProblemFormatError,
    RankDeficiencyError,
)
from .linalg import lu_min_pivot, nullspace_basis, smallest_singular_value

HESSIAN_SYMMETRY_TOL = 1e-10
REGULARITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GEProblem:
    """One generalized equation: callbacks, box and a name.

    Callbacks must be pure; values are immutable after construction and the
    problem may be evaluated concurrently.
    """

    name: str
    n: int
    s: int
    f: Callable
    jf: Callable
    g: Callable
    jg: Callable
    hg: Callable  # (x, lam) -> Hessian of <lam, g> at x
    box: BoxSet

    def self_check(self, x=None, lam=None):
        """Evaluate every callback once and verify shapes, finiteness, symmetry."""
        x = np.zeros(self.n) if x is None else np.asarray(x, dtype=float)
        lam = np.ones(self.s) if lam is None else np.asarray(lam, dtype=float)
        eval_f(self, x)
        eval_jf(self, x)
        eval_g(self, x)
        eval_jg(self, x)
        eval_hg(self, x, lam)
        return True


def _checked(value, shape, label):
    value = np.asarray(value, dtype=float)
    if value.shape != shape:
        raise EvaluationError(f"{label} returned shape {value.shape}, expected {shape}")
    if value.size and not np.isfinite(value).all():
        bad = np.argwhere(~np.isfinite(value))[0]
        raise EvaluationError(f"{label} is non-finite at entry {tuple(bad)}")
    return value


def eval_f(problem, x):
    return _checked(problem.f(x), (problem.n,), f"{problem.name}: f")


def eval_jf(problem, x):
    return _checked(problem.jf(x), (problem.n, problem.n), f"{problem.name}: jf")


def eval_g(problem, x):
    return _checked(problem.g(x), (problem.s,), f"{problem.name}: g")


def eval_jg(problem, x):
    return _checked(problem.jg(x), (problem.s, problem.n), f"{problem.name}: jg")


def eval_hg(problem, x, lam):
    h = _checked(problem.hg(x, lam), (problem.n, problem.n), f"{problem.name}: hg")
    if h.size and float(np.max(np.abs(h - h.T))) > HESSIAN_SYMMETRY_TOL:
        raise EvaluationError(f"{problem.name}: hg is not symmetric")
    return h


@dataclass(frozen=True)
class LagrangianEval:
    value: np.ndarray  # f(x) + Jg(x)^T lam
    jacobian: np.ndarray  # Jf(x) + Hg(x, lam)


def lagrangian(problem, x, lam):
    """Value and Jacobian of the Lagrangian map x -> f(x) + Jg(x)^T lam."""
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=float)
    value = eval_f(problem, x) + eval_jg(problem, x).T @ lam
    jac = eval_jf(problem, x) + eval_hg(problem, x, lam)
    return LagrangianEval(value=value, jacobian=jac)


def nondegeneracy_modulus(problem, x, d, tol=ACTIVITY_TOL):
    """Smallest singular value of W^T Jg(x) with W spanning N_D(d).

    +inf when d is interior (no normals to test); the point (x, d) is
    non-degenerate exactly when the returned modulus is positive.
    """
    w = span_normal_basis(d, problem.box, tol)
    if w.shape[1] == 0:
        return np.inf
    return smallest_singular_value(w.T @ eval_jg(problem, x))


@dataclass(frozen=True)
class FaceCheck:
    index_set: tuple
    min_pivot: float  # smallest pivot met while factoring the reduced Hessian
    passed: bool


@dataclass(frozen=True)
class SecondOrderReport:
    faces: tuple

    @property
    def passed(self):
        return all(f.passed for f in self.faces)


def _signed_columns(pattern, index_set, s):
    cols = []
    for i in index_set:
        e = np.zeros(s)
        e[i] = -1.0 if pattern[i] is Activity.AT_LOWER else 1.0
        cols.append(e)
    return np.column_stack(cols) if cols else np.zeros((s, 0))


def check_second_order(problem, x, lam, tol=ACTIVITY_TOL):
    """Face-wise regularity of the reduced Lagrangian Jacobian.

    For every index set J between the strictly active and the active
    coordinates, restricts the Lagrangian Jacobian to the null space of the
    rows of Jg(x) selected by J and records whether that reduced matrix is
    regular (LU pivots above tolerance).  An empty null space passes.
    """
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=float)
    g0 = eval_g(problem, x)
    if not normal_cone_membership(g0, lam, problem.box, tol):
        raise InvalidMultiplierError("multiplier is not in the normal cone at g(x)")
    pattern = activity(g0, problem.box, tol)
    jac_g = eval_jg(problem, x)
    l_jac = lagrangian(problem, x, lam).jacobian
    checks = []
    for index_set in enumerate_face_index_sets(g0, lam, problem.box, tol):
        w = _signed_columns(pattern, index_set, problem.s)
        try:
            z = nullspace_basis(w.T @ jac_g)
        except RankDeficiencyError as exc:
            raise DegeneracyError(
                f"active rows for index set {index_set} lost rank: {exc}"
            ) from exc
        if z.shape[1] == 0:
            checks.append(FaceCheck(index_set, np.inf, True))
            continue
        reduced = z.T @ l_jac @ z
        pivot = lu_min_pivot(reduced)
        scale = max(1.0, float(np.max(np.abs(reduced))))
        checks.append(FaceCheck(index_set, pivot, pivot > REGULARITY_TOL * scale))
    return SecondOrderReport(faces=tuple(checks))


@dataclass(frozen=True, eq=False)
class AffineProblemSpec:
    """f(x) = M x + q and g(x) = G x + h with box bounds; JSON-serializable."""

    name: str
    m: np.ndarray
    q: np.ndarray
    g_mat: np.ndarray
    h: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def build(self):
        n = self.q.shape[0]
        s = self.h.shape[0]
        m, q, g_mat, h = self.m, self.q, self.g_mat, self.h
        return GEProblem(
            name=self.name,
            n=n,
            s=s,
            f=lambda x: m @ x + q,
            jf=lambda x: m,
            g=lambda x: g_mat @ x + h,
            jg=lambda x: g_mat,
            hg=lambda x, lam: np.zeros((n, n)),
            box=BoxSet(self.lower, self.upper),
        )


def _bound(value, path):
    if value == "-inf":
        return -np.inf
    if value in ("+inf", "inf"):
        return np.inf
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ProblemFormatError(f"{path}: expected a number, '-inf' or '+inf', got {value!r}")


def _array(doc, key, shape):
    try:
        arr = np.asarray(doc[key], dtype=float)
    except KeyError:
        raise ProblemFormatError(f"$.{key}: missing field") from None
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"$.{key}: not a numeric array ({exc})") from None
    if arr.shape != shape:
        raise ProblemFormatError(f"$.{key}: shape {arr.shape}, expected {shape}")
    return arr


def parse_affine_problem(doc):
    """Validate a parsed JSON document and return the affine spec."""
    if not isinstance(doc, dict):
        raise ProblemFormatError("$: document must be a JSON object")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise ProblemFormatError("$.name: missing or not a string")
    for key in ("n", "s"):
        if not isinstance(doc.get(key), int) or doc[key] < 1:
            raise ProblemFormatError(f"$.{key}: must be a positive integer")
    n, s = doc["n"], doc["s"]
    m = _array(doc, "M", (n, n))
    q = _array(doc, "q", (n,))
    g_mat = _array(doc, "G", (s, n))
    h = _array(doc, "h", (s,))
    for key in ("lower", "upper"):
        if key not in doc or not isinstance(doc[key], list) or len(doc[key]) != s:
            raise ProblemFormatError(f"$.{key}: must be a list of length {s}")
    lower = np.array([_bound(v, f"$.lower[{i}]") for i, v in enumerate(doc["lower"])])
    upper = np.array([_bound(v, f"$.upper[{i}]") for i, v in enumerate(doc["upper"])])
    if np.any(lower > upper):
        bad = int(np.argmax(lower > upper))
        raise ProblemFormatError(f"$.lower[{bad}]: exceeds upper bound")
    return AffineProblemSpec(name=name, m=m, q=q, g_mat=g_mat, h=h, lower=lower, upper=upper)


def load_affine_problem(text):
    """Build a problem from a JSON document (see README for the schema)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON: {exc}") from exc
    return parse_affine_problem(doc).build()


def _ncp_paper():
    return GEProblem(
        name="ncp-paper",
        n=1,
        s=1,
        f=lambda x: np.array([-x[0] - x[0] ** 2]),
        jf=lambda x: np.array([[-1.0 - 2.0 * x[0]]]),
        g=lambda x: x.copy(),
        jg=lambda x: np.eye(1),
        hg=lambda x, lam: np.zeros((1, 1)),
        box=BoxSet.nonpositive(1),
    )


def _ncp_paper_affine():
    spec = AffineProblemSpec(
        name="ncp-paper-affine",
        m=np.array([[-1.0]]),
        q=np.zeros(1),
        g_mat=np.eye(1),
        h=np.zeros(1),
        lower=np.array([-np.inf]),
        upper=np.zeros(1),
    )
    return spec.build()


def _box_vi_2d():
    spec = AffineProblemSpec(
        name="box-vi-2d",
        m=np.eye(2),
        q=np.array([-1.0, -1.0]),
        g_mat=np.eye(2),
        h=np.zeros(2),
        lower=np.array([-np.inf, -np.inf]),
        upper=np.zeros(2),
    )
    return spec.build()


def builtin_registry():
    """The built-in problems, sorted by name."""
    problems = [_box_vi_2d(), _ncp_paper(), _ncp_paper_affine()]
    return sorted(problems, key=lambda p: p.name)


def get_problem(name):
    for problem in builtin_registry():
        if problem.name == name:
            return problem
    known = ", ".join(p.name for p in builtin_registry())
    raise KeyError(f"unknown problem {name!r} (built in: {known})")
