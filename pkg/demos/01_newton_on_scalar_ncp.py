"""Walk the Newton iteration through the scalar complementarity problem.

The built-in problem "ncp-paper" is the inclusion

    0 in -x - x^2 + N_{(-inf, 0]}(x),

whose unique solution is x = 0.  The iteration has two closed-form branches:
from negative iterates the next point is x^2 / (1 + 2x); once the predicted
point hits the bound, the next point is exactly 0.  This script runs the
solver from both sides and checks the recurrences numerically.
"""

import numpy as np

from ssnewton import get_problem, solve

problem = get_problem("ncp-paper")

print("=== start on the negative side ===")
report = solve(problem, np.array([-0.1]), tol=1e-12)
print(f"status: {report.status.value}")
print(f"{'k':>2} {'x':>24} {'|u_hat|':>12} {'step':>12} branch")
for rec in report.iterations:
    print(
        f"{rec.k:>2} {rec.x[0]:>24.17g} {rec.residual:>12.3e} "
        f"{rec.step_norm:>12.3e} {rec.branch}"
    )

x0 = -0.1
predicted = x0**2 / (1 + 2 * x0)
print(f"\nclosed form for the first step: x1 = x0^2/(1+2 x0) = {predicted!r}")
print(f"solver's x1                           = {report.iterations[1].x[0]!r}")

print("\n=== start on the positive side ===")
report = solve(problem, np.array([0.3]), tol=1e-12)
for rec in report.iterations:
    print(f"k={rec.k}  x={rec.x[0]:.17g}  branch={rec.branch}")
print("from a positive start the bound is hit immediately and one step lands on 0")

print("\n=== quadratic convergence in one number ===")
for x0 in (-0.1, -0.05, -0.01):
    report = solve(problem, np.array([x0]), tol=1e-12)
    x1 = report.iterations[1].x[0]
    print(f"x0 = {x0:+.3f}:  x1/x0^2 = {x1 / x0**2:.12f}   1/(1+2 x0) = {1/(1+2*x0):.12f}")
