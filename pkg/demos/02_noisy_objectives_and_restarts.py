"""Robustness to noisy objectives: restarts versus plain trust-region descent.

A noisy objective defeats the usual convergence signal: as the trust region
shrinks, the interpolation points sit within the noise level of each other
and the solver stalls at whatever accuracy the noise allows. Restarts
re-inflate the region and move part of the set, letting the solver escape
and keep improving; stagnation is auto-detected from the radius history and
the growth of model changes.
"""

import numpy as np

import dfls
from dfls.params import RestartConfig, SolverParams
from dfls.problems import NoiseModel, NoisyProblem

problem = dfls.get_problem("osborne1")
noise = NoiseModel("mult_gaussian", 1e-2)
budget = 100 * (problem.n + 1)

print(f"{problem.name}: f* = {problem.f_star:.4e}, f(x0) = {problem.objective(problem.x0):.4e}")
print(f"noise: {noise.kind} sigma={noise.sigma}, budget {budget} evaluations\n")

for label, params in [
    ("no noise features", SolverParams(noisy=False, max_evals=budget,
                                       restarts=RestartConfig(enabled=False))),
    ("noisy defaults, no restarts", SolverParams(noisy=True, max_evals=budget,
                                                 restarts=RestartConfig(enabled=False))),
    ("soft restarts (moving)", SolverParams(noisy=True, max_evals=budget)),
]:
    best_true = np.inf
    for seed in range(5):
        noisy = NoisyProblem(problem, noise, seed=seed)
        result = dfls.solve(noisy, problem.x0, params=params, seed=seed)
        best_true = min(best_true, problem.objective(result.x))
    gap = (best_true - problem.f_star) / (problem.objective(problem.x0) - problem.f_star)
    print(f"{label:32s} best true f = {best_true:.4e}  (accuracy {gap:.1e})")

# Sample averaging is available as well; each averaged evaluation costs its
# sample count against the budget.
params = SolverParams(noisy=True, max_evals=budget, nsamples="restart-scaled")
noisy = NoisyProblem(problem, noise, seed=0)
result = dfls.solve(noisy, problem.x0, params=params, seed=0)
print(f"\nrestart-scaled averaging: true f = {problem.objective(result.x):.4e} "
      f"after {result.n_evals} evaluations")
