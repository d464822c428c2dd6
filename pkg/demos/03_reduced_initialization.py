"""Making progress before a full model exists.

A model-based solver normally spends n+1 evaluations building its first
model. When evaluations are expensive that start-up cost hurts, so the
solver can begin from as few as 2 points: it interpolates with the
minimal-norm model, repairs the rank-deficient Jacobian through its SVD, and
grows the set by one point per iteration until the model is full.
"""

import numpy as np

import dfls
from dfls.params import SolverParams

problem = dfls.get_problem("broyden_tridiagonal_50")
n = problem.n
f0 = problem.objective(problem.x0)
target = problem.f_star + 1e-1 * (f0 - problem.f_star)

print(f"{problem.name}: n = {n}, f(x0) = {f0:.3e}")
print(f"target: 90% objective reduction, i.e. f <= {target:.3e}\n")

for label, p_init in [("full initialization (n+1 points)", None),
                      ("reduced initialization (2 points)", 1)]:
    hits = []

    def hook(n_evals, x, fbar, nsamp, hits=hits):
        if fbar <= target and not hits:
            hits.append(n_evals)

    params = SolverParams(p_init=p_init, max_evals=50 * (n + 1))
    result = dfls.solve(problem.residual, problem.x0, params=params, seed=0, eval_hook=hook)
    first = hits[0] if hits else None
    print(f"{label:36s} reduction reached after {first} evaluations "
          f"(gradient cost would be {n}); final f = {result.f:.2e}")

print("\nThe reduced start reaches a useful decrease before one finite-difference")
print("gradient would even be available, and still converges to full accuracy.")
