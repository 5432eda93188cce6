"""Solve a lasso instance and read its certificates.

Every checkpoint of a solver run carries a duality gap: an upper bound on
how far the current objective is from the optimum, computed from the
iterate alone.  No reference solution is needed; the gap tells you when to
stop and by how much you can trust the answer.
"""

import numpy as np

from gapcert import datasets, problems
from gapcert.certificates import duality_gap, objective_value
from gapcert.solvers import SolverConfig, coordinate_descent, prox_gradient

ds = datasets.make_regression(d=50, n=120, seed=7, density=0.4)
problem = problems.lasso(ds.matrix, ds.labels, lam=0.05)

print("lasso instance: %d observations, %d coordinates, %d nonzeros"
      % (ds.matrix.shape[0], ds.matrix.shape[1], ds.matrix.nnz))
print("safe support bound B = f(0)/lam = %.4f" % problem.bound.radius)
print()

# 1. run coordinate descent until the certificate is below 1e-8
result = coordinate_descent(problem, SolverConfig(max_epochs=10000,
                                                  gap_tolerance=1e-8))
print("coordinate descent: %d steps, converged = %s"
      % (result.steps, result.converged))
print("%8s  %14s  %12s" % ("epoch", "objective", "gap"))
for rec in result.trace[:5] + result.trace[-2:]:
    print("%8.0f  %14.8f  %12.3e" % (rec.epoch, rec.objective, rec.gap))
print()

# 2. the gap really does bound the suboptimality: compare against a much
#    longer run used as a stand-in for the true optimum
long_run = coordinate_descent(problem, SolverConfig(max_epochs=20000,
                                                    gap_tolerance=1e-13,
                                                    checkpoint_every=1000))
d_star = long_run.trace[-1].objective
print("reference objective (20k epochs): %.12f" % d_star)
for rec in result.trace[:4]:
    print("  epoch %3.0f: gap %.3e  >=  suboptimality %.3e"
          % (rec.epoch, rec.gap, rec.objective - d_star))
print()

# 3. proximal gradient certifies the same problem through the same gap; the
#    two solvers agree on the value they converge to
pg = prox_gradient(problem, SolverConfig(max_epochs=5000,
                                         gap_tolerance=1e-8))
print("proximal gradient: %d steps, final objective %.10f (cd: %.10f)"
      % (pg.steps, pg.trace[-1].objective, result.trace[-1].objective))

# 4. a gap can be evaluated for any point, not just solver iterates
alpha = np.zeros(ds.matrix.shape[1])
print("gap at alpha = 0: %.4f (objective %.4f)"
      % (duality_gap(problem, alpha), objective_value(problem, alpha)))
