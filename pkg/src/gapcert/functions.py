"""Catalog of smooth losses and separable/norm regularizers.

Each loss knows its own value, gradient, convex conjugate and smoothness
constant beta (the gradient of f is (1/beta)-Lipschitz).  Each regularizer
knows its value, per-coordinate conjugate, proximal map, strong convexity
constant mu and, when its support is bounded, the support radius.

Conventions mirror the objective

    D(alpha) = f(A alpha) + sum_i g_i(alpha_i)          (separable case)
    D(alpha) = f(A alpha) + lam * ||alpha||             (norm case)

with the regularization weight folded into g.
"""

import math

import numpy as np


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _xlogx(t):
    # t*log(t) with the 0*log(0) := 0 convention, elementwise
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = t[pos] * np.log(t[pos])
    return out


# ---------------------------------------------------------------------------
# smooth losses
# ---------------------------------------------------------------------------

class LeastSquares:
    """f(z) = 0.5 * ||z - b||^2.

    beta = 1: the gradient z - b is exactly 1-Lipschitz.
    """

    kind = "least_squares"

    def __init__(self, b):
        self.b = np.ascontiguousarray(b, dtype=np.float64)
        if self.b.ndim != 1:
            raise ValueError("b must be a vector")
        self.beta = 1.0

    @property
    def dim(self):
        return len(self.b)

    def value(self, z):
        r = z - self.b
        return 0.5 * float(r @ r)

    def gradient(self, z):
        return z - self.b

    def conjugate_value(self, w):
        # f*(w) = 0.5 ||w||^2 + <w, b>
        return 0.5 * float(w @ w) + float(w @ self.b)

    def zero_value(self):
        return 0.5 * float(self.b @ self.b)


class Logistic:
    """f(z) = scale * sum_j log(1 + exp(-y_j z_j)) with y in {-1, +1}.

    normalization="mean" uses scale = 1/m (the per-example average);
    "sum" uses scale = 1.  The gradient Hessian is diag(p(1-p)) * scale
    with p a sigmoid, so the tightest smoothness constant is
    beta = 4 / scale (4m for the mean form, 4 for the sum form).

    The conjugate is the box-constrained entropy
        f*(w) = scale * sum_j [ t_j log t_j + (1-t_j) log(1-t_j) ],
        t_j = -w_j y_j / scale,
    finite only for t_j in [0, 1] (0 log 0 := 0), +inf otherwise.
    """

    kind = "logistic"

    def __init__(self, y, normalization="mean"):
        self.y = np.ascontiguousarray(y, dtype=np.float64)
        if self.y.ndim != 1 or not np.all(np.abs(self.y) == 1.0):
            raise ValueError("labels must be a vector of +/-1")
        if normalization not in ("mean", "sum"):
            raise ValueError("normalization must be 'mean' or 'sum'")
        self.normalization = normalization
        self.scale = 1.0 / len(self.y) if normalization == "mean" else 1.0
        self.beta = 4.0 / self.scale

    @property
    def dim(self):
        return len(self.y)

    def value(self, z):
        return self.scale * float(np.logaddexp(0.0, -self.y * z).sum())

    def gradient(self, z):
        return -self.scale * self.y * _sigmoid(-self.y * z)

    def conjugate_value(self, w):
        t = -w * self.y / self.scale
        if np.any(t < 0.0) or np.any(t > 1.0):
            return math.inf
        return self.scale * float((_xlogx(t) + _xlogx(1.0 - t)).sum())

    def zero_value(self):
        return self.scale * len(self.y) * math.log(2.0)


class ScaledQuadratic:
    """f(z) = 0.5 * c * ||z||^2 (the smooth half of the SVM dual).

    beta = 1/c since the gradient c*z is c-Lipschitz.
    """

    kind = "scaled_quadratic"

    def __init__(self, c, dim):
        if c <= 0:
            raise ValueError("c must be positive")
        self.c = float(c)
        self._dim = int(dim)
        self.beta = 1.0 / self.c

    @property
    def dim(self):
        return self._dim

    def value(self, z):
        return 0.5 * self.c * float(z @ z)

    def gradient(self, z):
        return self.c * z

    def conjugate_value(self, w):
        return 0.5 * float(w @ w) / self.c

    def zero_value(self):
        return 0.0


# ---------------------------------------------------------------------------
# regularizers
# ---------------------------------------------------------------------------

class L1:
    """g(alpha) = lam * ||alpha||_1.

    mu = 0 and the conjugate is the indicator of the dual-norm ball
    {max_i |x_i| <= lam}; a finite-everywhere surrogate requires a support
    bound (see the lipschitzing module).
    """

    kind = "l1"
    separable = True
    is_norm = True
    mu = 0.0
    support_radius = None

    def __init__(self, lam):
        if lam <= 0:
            raise ValueError("lam must be positive")
        self.lam = float(lam)

    def value(self, alpha):
        return self.lam * float(np.abs(alpha).sum())

    def norm(self, alpha):
        return float(np.abs(alpha).sum())

    def dual_norm(self, x):
        return float(np.abs(x).max()) if len(x) else 0.0

    def conjugate_value(self, x):
        if len(x) and np.abs(x).max() > self.lam:
            return math.inf
        return 0.0

    def conjugate_subgradient(self, x):
        # minimum-norm element: 0 everywhere inside the dual ball; the
        # indicator has empty subdifferential strictly outside it.
        if len(x) and np.abs(x).max() > self.lam:
            raise ValueError("conjugate subdifferential empty outside the "
                             "dual ball; attach a support bound")
        return np.zeros_like(x)

    def prox(self, x, tau):
        t = tau * self.lam
        return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)

    def coordinate_argmin(self, i):
        return 0.0


class ElasticNet:
    """g_i(a) = lam * (eta/2 * a^2 + (1 - eta) * |a|), eta in (0, 1].

    Strongly convex with mu = lam * eta.  The conjugate is the shifted
    Huber-type function ( [|x| - (1-eta) lam]_+ )^2 / (2 eta lam).
    """

    kind = "elastic_net"
    separable = True
    is_norm = False
    support_radius = None

    def __init__(self, lam, eta):
        if lam <= 0:
            raise ValueError("lam must be positive")
        if not 0.0 < eta <= 1.0:
            raise ValueError("eta must be in (0, 1]; use L1 for eta = 0")
        self.lam = float(lam)
        self.eta = float(eta)
        self.mu = self.lam * self.eta

    def value(self, alpha):
        return self.lam * (0.5 * self.eta * float(alpha @ alpha)
                           + (1.0 - self.eta) * float(np.abs(alpha).sum()))

    def conjugate_value(self, x):
        s = np.maximum(np.abs(x) - (1.0 - self.eta) * self.lam, 0.0)
        return float(s @ s) / (2.0 * self.eta * self.lam)

    def conjugate_subgradient(self, x):
        s = np.maximum(np.abs(x) - (1.0 - self.eta) * self.lam, 0.0)
        return np.sign(x) * s / (self.eta * self.lam)

    def prox(self, x, tau):
        t = tau * self.lam * (1.0 - self.eta)
        shr = np.sign(x) * np.maximum(np.abs(x) - t, 0.0)
        return shr / (1.0 + tau * self.lam * self.eta)

    def coordinate_argmin(self, i):
        return 0.0


class SquaredL2:
    """g(alpha) = lam/2 * ||alpha||^2 (ridge); mu = lam."""

    kind = "squared_l2"
    separable = True
    is_norm = False
    support_radius = None

    def __init__(self, lam):
        if lam <= 0:
            raise ValueError("lam must be positive")
        self.lam = float(lam)
        self.mu = self.lam

    def value(self, alpha):
        return 0.5 * self.lam * float(alpha @ alpha)

    def conjugate_value(self, x):
        return 0.5 * float(x @ x) / self.lam

    def conjugate_subgradient(self, x):
        return x / self.lam

    def prox(self, x, tau):
        return x / (1.0 + tau * self.lam)

    def coordinate_argmin(self, i):
        return 0.0


class HingeBox:
    """SVM dual terms g_i(a) = -y_i a + indicator{y_i a in [0, 1]}.

    The support is natively bounded (|a| <= 1, so support_radius = 1) and
    the conjugate g_i*(x) = max(0, 1 + y_i x) is the hinge, finite
    everywhere; no Lipschitzing is needed.  mu = 0.
    """

    kind = "hinge_box"
    separable = True
    is_norm = False
    mu = 0.0
    support_radius = 1.0

    def __init__(self, y, feas_tol=1e-9):
        self.y = np.ascontiguousarray(y, dtype=np.float64)
        if self.y.ndim != 1 or not np.all(np.abs(self.y) == 1.0):
            raise ValueError("labels must be a vector of +/-1")
        self.lam = 1.0
        self.feas_tol = float(feas_tol)
        self.dim = len(self.y)

    def value(self, alpha):
        m = self.y * alpha
        if np.any(m < -self.feas_tol) or np.any(m > 1.0 + self.feas_tol):
            return math.inf
        return -float(self.y @ alpha)

    def conjugate_value(self, x):
        return float(np.maximum(0.0, 1.0 + self.y * x).sum())

    def conjugate_subgradient(self, x):
        # argmax of a linear form over the box; 0 at the hinge corner is
        # the minimum-norm choice.
        return np.where(1.0 + self.y * x > 0.0, self.y, 0.0)

    def prox(self, x, tau):
        lo = np.minimum(0.0, self.y)
        hi = np.maximum(0.0, self.y)
        return np.clip(x + tau * self.y, lo, hi)

    def coordinate_argmin(self, i):
        return float(self.y[i])


class GroupLasso:
    """g(alpha) = lam * sum_k ||alpha_{G_k}||_2 over a partition of indices.

    The dual norm is max_k ||x_{G_k}||_2.  Not separable: coordinate
    descent refuses it, proximal gradient handles it through the
    block-wise shrinkage prox.
    """

    kind = "group_lasso"
    separable = False
    is_norm = True
    mu = 0.0
    support_radius = None

    def __init__(self, lam, groups):
        if lam <= 0:
            raise ValueError("lam must be positive")
        self.lam = float(lam)
        self.groups = [np.ascontiguousarray(g, dtype=np.int64) for g in groups]
        if not self.groups or any(len(g) == 0 for g in self.groups):
            raise ValueError("groups must be nonempty")
        allidx = np.concatenate(self.groups)
        n = len(allidx)
        if len(np.unique(allidx)) != n:
            raise ValueError("groups must not overlap")
        if allidx.min() != 0 or allidx.max() != n - 1:
            raise ValueError("groups must partition 0..n-1")
        self.n = n
        self.dim = n

    def norm(self, alpha):
        return float(sum(np.linalg.norm(alpha[g]) for g in self.groups))

    def dual_norm(self, x):
        return float(max(np.linalg.norm(x[g]) for g in self.groups))

    def value(self, alpha):
        return self.lam * self.norm(alpha)

    def conjugate_value(self, x):
        if self.dual_norm(x) > self.lam:
            return math.inf
        return 0.0

    def prox(self, x, tau):
        out = x.copy()
        t = tau * self.lam
        for g in self.groups:
            nrm = float(np.linalg.norm(x[g]))
            if nrm <= t:
                out[g] = 0.0
            else:
                out[g] = x[g] * (1.0 - t / nrm)
        return out

    def coordinate_argmin(self, i):
        return 0.0


# ---------------------------------------------------------------------------
# numeric conjugation
# ---------------------------------------------------------------------------

def conjugate_oracle(fn, x, lo=-10.0, hi=10.0, step=1e-3):
    """Brute-force Fenchel conjugate sup_u (x*u - fn(u)) on a grid.

    ``fn`` may return +inf outside its domain (such points simply never
    win the max) and may be vectorized; scalar callables are looped.
    The result is the grid maximum: for conjugates whose supremum is
    attained inside [lo, hi] it approximates fn*(x), otherwise it is the
    caller's to interpret (indicator-type conjugates diverge off-grid).
    """
    count = int(round((hi - lo) / step)) + 1
    us = np.linspace(lo, hi, count)
    try:
        vals = np.asarray(fn(us), dtype=np.float64)
        if vals.shape != us.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(fn(u)) for u in us])
    obj = x * us - vals
    return float(np.max(obj))
