"""Semismooth* Newton solver for generalized equations over box sets.

Solves 0 in f(x) + Jg(x)^T N_D(g(x)) where D is a box, via a strictly convex
QP approximation step followed by a coderivative-based Newton step, with
assumption checkers and classical baselines for comparison.
"""

from .baselines import (
    AVIInstance,
    NonsmoothSystem,
    josephy_newton,
    nonsmooth_newton,
    solve_avi_enumerate,
)
from .cones import (
    Activity,
    BoxSet,
    activity,
    critical_cone_membership,
    enumerate_face_index_sets,
    normal_cone_membership,
    polyhedral_defect_scan,
    regular_coderivative_nd,
    semismooth_star_defect,
    span_normal_basis,
)
from .newton import (
    ApproxResult,
    NewtonWorkspace,
    approximation_step,
    assemble_full_ab,
    closed_form_inverse,
    full_step_oracle,
    newton_step,
    newton_workspace,
    solve,
)
from .problems import (
    AffineProblemSpec,
    GEProblem,
    LagrangianEval,
    builtin_registry,
    check_second_order,
    get_problem,
    lagrangian,
    load_affine_problem,
    nondegeneracy_modulus,
)
from .qp import QPInstance, QPSolution, brute_force_qp, solve_qp
from .reports import IterationRecord, SolveReport, Status

__version__ = "0.1.0"

__all__ = [
    "Activity",
    "AffineProblemSpec",
    "ApproxResult",
    "AVIInstance",
    "BoxSet",
    "GEProblem",
    "IterationRecord",
    "LagrangianEval",
    "NewtonWorkspace",
    "NonsmoothSystem",
    "QPInstance",
    "QPSolution",
    "SolveReport",
    "Status",
    "activity",
    "approximation_step",
    "assemble_full_ab",
    "brute_force_qp",
    "builtin_registry",
    "check_second_order",
    "closed_form_inverse",
    "critical_cone_membership",
    "enumerate_face_index_sets",
    "full_step_oracle",
    "get_problem",
    "josephy_newton",
    "lagrangian",
    "load_affine_problem",
    "newton_step",
    "newton_workspace",
    "nondegeneracy_modulus",
    "nonsmooth_newton",
    "normal_cone_membership",
    "polyhedral_defect_scan",
    "regular_coderivative_nd",
    "semismooth_star_defect",
    "solve",
    "solve_avi_enumerate",
    "solve_qp",
    "span_normal_basis",
]
