"""Josephy-Newton linearizes only f; here that is fatal, there it is fine.

The classical method solves an affine variational inequality each iteration.
On the scalar complementarity problem that subproblem has *no solution* for
any start with 0 < |x0| <= 1/2 - pattern enumeration certifies it - while
the graph-based Newton method converges quadratically from the same starts,
except exactly at x0 = -0.5 where the reduced Jacobian -1 - 2 x vanishes and
the solver reports the singularity instead of regularizing it away.
On a monotone affine problem both methods work and land on the same point.

The command-line equivalent of the last section is

    ssnewton solve --problem box-vi-2d --method compare --x0 0.3,0.3
"""

import numpy as np

from ssnewton import get_problem, josephy_newton, solve

ncp = get_problem("ncp-paper")

print("=== scalar complementarity problem ===")
print(f"{'x0':>6} {'graph-based Newton':>34} {'Josephy-Newton':>28}")
for x0 in (0.1, -0.1, 0.5, -0.5):
    ours = solve(ncp, np.array([x0]), tol=1e-12)
    theirs = josephy_newton(ncp, np.array([x0]), lam0=np.zeros(1), tol=1e-12)
    mine = f"{ours.status.value} in {len(ours.iterations) - 1} steps -> {ours.final_x[0]:.1e}"
    other = theirs.status.value
    print(f"{x0:>6} {mine:>34} {other:>28}")

print("\n=== monotone two-dimensional box problem ===")
boxvi = get_problem("box-vi-2d")
for x0 in ([0.3, 0.3], [-0.2, 0.4]):
    ours = solve(boxvi, np.array(x0), tol=1e-12)
    theirs = josephy_newton(boxvi, np.array(x0), tol=1e-12)
    gap = np.linalg.norm(np.array(ours.final_x) - np.array(theirs.final_x))
    print(
        f"x0 = {x0}: both {ours.status.value}, final points agree to {gap:.1e}"
    )
