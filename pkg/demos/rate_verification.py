"""Compute an iteration bound, then check it against real runs.

The calculators turn problem constants into a step count T that provably
suffices for a target accuracy.  The verification harness replays seeded
runs and checks the bound empirically: mean gap at step ceil(T) must be at
most eps.  The same machinery backs `gapcert rates --verify`.
"""

import math

import numpy as np

from gapcert import datasets, problems
from gapcert.certificates import duality_gap, objective_value
from gapcert.data import SparseMatrix
from gapcert.rates import (RateInputs, cd_strongly_convex_bound,
                           verify_gap_values)
from gapcert.solvers import (SolverConfig, averaged_iterate,
                             coordinate_descent, reference_optimum)

# 1. a strongly convex case: elastic net with mu = lam * eta
ds = datasets.make_regression(d=10, n=20, seed=6)
problem = problems.elastic_net(ds.matrix, ds.labels, lam=0.1, eta=0.5)
n = ds.matrix.shape[1]

d0 = objective_value(problem, np.zeros(n))
d_star = reference_optimum(problem, epochs=50000)
eps0 = d0 - d_star
eps = 1e-3 * eps0
consts = problem.constants()

inputs = RateInputs(n=n, R=consts.R, mu=problem.reg.mu,
                    beta=problem.loss.beta, eps0=eps0)
bound = cd_strongly_convex_bound(inputs, eps)
steps = math.ceil(bound.T)
print("constants: sigma = %.4f, R = %.4f, mu = %.3f, eps0 = %.4f"
      % (consts.sigma, consts.R, problem.reg.mu, eps0))
print("bound: %s says %d steps reach eps = %.3e" % (bound.name, steps, eps))

gaps = []
for seed in range(30):
    res = coordinate_descent(problem, SolverConfig(max_steps=steps,
                                                   gap_tolerance=0.0,
                                                   checkpoint_every=steps,
                                                   seed=seed))
    gaps.append(res.trace[-1].gap)
report = verify_gap_values(gaps, bound)
print("measured: mean gap over %d seeds = %.3e  ->  %s%s"
      % (report.n_runs, report.mean_gap,
         "pass" if report.passed else "FAIL",
         " (within the documented 2x slack)" if report.slack_used else ""))
print()

# 2. a bounded-support case: the svm dual only guarantees O(1/t) for the
#    averaged iterate, so track gap(mean of alpha over [t/2, t))
rng = np.random.Generator(np.random.Philox(41))
n = 40
M = 3.0 * rng.normal(size=(5, n))
y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
svm = problems.svm_dual(SparseMatrix.from_dense(M), y, 1.0 / n)

res = coordinate_descent(svm, SolverConfig(max_steps=200 * n,
                                           gap_tolerance=0.0,
                                           averaging_start=0,
                                           checkpoint_every=200, seed=0))
print("svm dual, averaged-iterate gap over growing windows:")
for t in (10 * n, 20 * n, 50 * n, 100 * n, 200 * n):
    abar = averaged_iterate(res, t // 2, t)
    print("  t = %5d   gap(mean of [t/2, t)) = %.3e"
          % (t, duality_gap(svm, abar)))
