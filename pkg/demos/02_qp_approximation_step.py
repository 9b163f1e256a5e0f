"""The approximation step is one strictly convex QP per outer iteration.

At the current iterate x the solver minimizes 0.5 ||u||^2 + f(x)^T u subject
to g(x) + Jg(x) u staying in the box.  The minimizer u and its multiplier
place the pair (x, g(x) + Jg(x) u) on the graph of the inclusion and select
the active set used by the Newton step.  The dual active-set solver is
checked here against the pattern-enumeration oracle.
"""

import numpy as np

from ssnewton import BoxSet, QPInstance, brute_force_qp, solve_qp
from ssnewton.cones import pattern_summary

print("=== the scalar complementarity QP at x = 0.0125 ===")
x = 0.0125
inst = QPInstance(
    c=np.array([-(x + x * x)]),  # f(x)
    b=np.array([x]),  # g(x)
    jac=np.eye(1),  # Jg(x)
    box=BoxSet.nonpositive(1),
)
sol = solve_qp(inst)
print(f"u = {float(sol.u[0])!r}   (the unconstrained minimum x + x^2 is cut back to -x)")
print(f"lambda = {float(sol.lam[0])!r}   (equals 2x + x^2 = {2*x + x*x!r})")
print(f"active pattern: {pattern_summary(sol.active)}   updates: {sol.iterations}")

print("\n=== ten random instances against the enumeration oracle ===")
rng = np.random.default_rng(7)
for trial in range(10):
    n, s = int(rng.integers(1, 5)), int(rng.integers(1, 4))
    lows = rng.choice([-1.0, 0.0, -np.inf], s)
    ups = rng.choice([0.0, 1.0, np.inf], s)
    inst = QPInstance(
        c=rng.uniform(-2, 2, n),
        b=rng.uniform(-2, 2, s),
        jac=rng.uniform(-2, 2, (s, n)),
        box=BoxSet(np.minimum(lows, ups), np.maximum(lows, ups)),
    )
    sol = solve_qp(inst)
    ref = brute_force_qp(inst)
    gap = np.max(np.abs(sol.u - ref.u))
    kkt = np.linalg.norm(sol.u + inst.c + inst.jac.T @ sol.lam)
    print(
        f"trial {trial}: n={n} s={s}  pattern={pattern_summary(sol.active):<4}"
        f"  |u - u_oracle| = {gap:.2e}  KKT residual = {kkt:.2e}"
    )
