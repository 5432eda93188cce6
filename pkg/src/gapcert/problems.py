"""Convenience builders for the supported problem classes.

Each returns a ProblemA wired with the right loss, regularizer and (for
indicator-conjugate regularizers) a safe support bound, so gaps are finite
from the first iterate on.
"""

import numpy as np

from .certificates import ProblemA
from .functions import (ElasticNet, GroupLasso, HingeBox, L1, LeastSquares,
                        Logistic, ScaledQuadratic, SquaredL2)
from .lipschitzing import safe_bound


def lasso(A, b, lam, bound_geometry="ball"):
    """min 0.5 ||A alpha - b||^2 + lam ||alpha||_1 with the safe bound."""
    loss = LeastSquares(b)
    return ProblemA(A, loss, L1(lam),
                    bound=safe_bound(loss, lam, geometry=bound_geometry))


def elastic_net(A, b, lam, eta=0.5):
    loss = LeastSquares(b)
    return ProblemA(A, loss, ElasticNet(lam, eta))


def ridge(A, b, lam):
    loss = LeastSquares(b)
    return ProblemA(A, loss, SquaredL2(lam))


def svm_dual(A, y, lam):
    """Dual SVM: min lam/2 ||A alpha||^2 - y^T alpha over the label boxes.

    Columns of A are the training examples; lam sits in the smooth part,
    so w(alpha) = lam * A alpha is the primal weight vector.
    """
    loss = ScaledQuadratic(lam, A.shape[0])
    return ProblemA(A, loss, HingeBox(y))


def logistic_l1(A, y, lam, normalization="mean"):
    loss = Logistic(y, normalization=normalization)
    return ProblemA(A, loss, L1(lam), bound=safe_bound(loss, lam))


def logistic_elastic_net(A, y, lam, eta=0.5, normalization="mean"):
    loss = Logistic(y, normalization=normalization)
    return ProblemA(A, loss, ElasticNet(lam, eta))


def group_lasso(A, b, lam, groups):
    loss = LeastSquares(b)
    return ProblemA(A, loss, GroupLasso(lam, groups),
                    bound=safe_bound(loss, lam))
