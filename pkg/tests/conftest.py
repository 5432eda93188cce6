"""Shared fixtures and small instance builders."""

import numpy as np
import pytest

from gapcert.data import SparseMatrix, transpose
from gapcert.solvers import SolverConfig, coordinate_descent
from gapcert import datasets, problems


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Compile the jitted kernels once so per-test timing budgets measure
    # the algorithms, not compilation.
    ds = datasets.make_regression(d=3, n=4, seed=0)
    p = problems.lasso(ds.matrix, ds.labels, 0.5)
    coordinate_descent(p, SolverConfig(max_epochs=2, gap_tolerance=0.0,
                                       averaging_start=0))
    ds2 = datasets.make_classification(d=3, n=4, seed=0)
    coordinate_descent(problems.svm_dual(ds2.matrix, ds2.labels, 0.25),
                       SolverConfig(max_epochs=2, gap_tolerance=0.0))
    # logistic problems put examples on the row side
    lg = problems.logistic_l1(transpose(ds2.matrix), ds2.labels, 0.1)
    coordinate_descent(lg, SolverConfig(max_epochs=2, gap_tolerance=0.0))


def random_dense(d, n, seed, scale=1.0):
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.normal(size=(d, n)) * scale


def random_sparse_matrix(d, n, seed, density=1.0, scale=1.0):
    rng = np.random.Generator(np.random.Philox(seed))
    dense = rng.normal(size=(d, n)) * scale
    if density < 1.0:
        dense[rng.random(size=(d, n)) >= density] = 0.0
    return SparseMatrix.from_dense(dense)


def regression_problem(kind, d=10, n=20, lam=0.1, eta=0.5, seed=0):
    ds = datasets.make_regression(d=d, n=n, seed=seed)
    if kind == "lasso":
        return problems.lasso(ds.matrix, ds.labels, lam)
    if kind == "elastic_net":
        return problems.elastic_net(ds.matrix, ds.labels, lam, eta)
    if kind == "ridge":
        return problems.ridge(ds.matrix, ds.labels, lam)
    raise ValueError(kind)


def svm_problem(d=5, n=40, seed=0, lam=None):
    ds = datasets.make_classification(d=d, n=n, seed=seed)
    if lam is None:
        lam = 1.0 / n
    return problems.svm_dual(ds.matrix, ds.labels, lam)
