"""Minimize a nonlinear least-squares objective without derivatives.

The solver only ever sees residual vectors. Starting from the classic bent
valley, it builds linear models of the residuals over an interpolation set
and trust-region steps its way to the minimum in a few dozen evaluations.
"""

import numpy as np

import dfls

def residuals(x):
    return np.array([10.0 * (x[1] - x[0] ** 2), 1.0 - x[0]])

result = dfls.solve(residuals, np.array([-1.2, 1.0]), seed=0)
print("minimizer:", result.x)
print("objective:", result.f)
print("evaluations:", result.n_evals)
print("exit:", result.exit_flag)

# The same works for any problem in the built-in catalog, with bounds.
problem = dfls.get_problem("bard")
result = dfls.solve(problem.residual, problem.x0,
                    bounds=(problem.x0 - 2.0, problem.x0 + 2.0), seed=0)
print(f"\nbard: f = {result.f:.6e} (reference optimum {problem.f_star:.6e})")

# Box constraints are respected exactly; shrink the box and the solution
# lands on its face.
tight = dfls.solve(problem.residual, problem.x0,
                   bounds=(problem.x0 - 0.05, problem.x0 + 0.05), seed=0)
print(f"bard in a tiny box: f = {tight.f:.6e}, x = {tight.x}")
