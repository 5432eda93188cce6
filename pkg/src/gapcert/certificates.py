"""Duality-gap evaluators and certificate traces.

For the pair of problems

    (A)  min_alpha  D(alpha) = f(A alpha) + g(alpha)
    (B)  min_w      P(w)     = f*(w) + g*(-A^T w)

the map w(alpha) = grad f(A alpha) turns any iterate into a dual-feasible
point, and the duality gap

    G(alpha) = P(w(alpha)) + D(alpha)

is a computable upper bound on the suboptimality D(alpha) - D(alpha*).
Since w(alpha) is a gradient, Fenchel-Young holds with equality and
f*(w) + f(v) collapses to <w, v> with v = A alpha, so f* never has to be
evaluated:

    G(alpha) = <w, v> + g(alpha) + g*(-A^T w).

When g* is an indicator (L1, group norms) the last term is replaced by the
bounded-support modification from the lipschitzing module, which keeps the
gap finite on the whole space without affecting its value at certifiable
points.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import lipschitzing
from .data import matvec, transpose_matvec, matrix_constants


@dataclass
class ProblemA:
    """An instance of min f(A alpha) + g(alpha).

    ``bound`` is optional Lipschitzing metadata; it influences duality-gap
    evaluation only, never the iterates.
    """

    matrix: object
    loss: object
    reg: object
    bound: object = None
    _constants: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.loss.dim != self.matrix.shape[0]:
            raise ValueError("loss dimension %d != matrix rows %d"
                             % (self.loss.dim, self.matrix.shape[0]))
        reg_dim = getattr(self.reg, "dim", None)
        if reg_dim is not None and reg_dim != self.matrix.shape[1]:
            raise ValueError("regularizer dimension %d != matrix columns %d"
                             % (reg_dim, self.matrix.shape[1]))

    def constants(self, tol=1e-9):
        """Operator constants (sigma, R, P), computed once and cached."""
        if self._constants is None:
            self._constants = matrix_constants(self.matrix, tol=tol)
        return self._constants


def primal_map(problem, alpha=None, v=None):
    """w(alpha) = grad f(A alpha); first-order dual feasible by construction."""
    if v is None:
        v = matvec(problem.matrix, alpha)
    return problem.loss.gradient(v)


def objective_value(problem, alpha, v=None):
    """D(alpha); +inf when alpha is outside g's domain."""
    if v is None:
        v = matvec(problem.matrix, alpha)
    return problem.loss.value(v) + problem.reg.value(alpha)


def _conjugate_term(problem, u, bound):
    """g*(-A^T w) evaluated at u = -A^T w, modified when g* is an indicator."""
    reg = problem.reg
    if not getattr(reg, "is_norm", False):
        # elastic net, ridge, hinge box: finite conjugates, no modification
        return reg.conjugate_value(u)
    bound = bound if bound is not None else problem.bound
    if bound is None:
        return reg.conjugate_value(u)  # indicator: 0 or +inf
    if bound.geometry == "box":
        if reg.kind != "l1":
            raise ValueError("box geometry needs a separable L1 regularizer")
        return lipschitzing.modified_conjugate_box(u, reg.lam, bound.radius)
    return lipschitzing.modified_conjugate_norm(u, reg, bound.radius)


def duality_gap_general(problem, alpha, v=None, bound=None):
    """G(alpha) for any catalog problem; finite everywhere once a support
    bound is attached (or g* is already finite).  Returns +inf for iterates
    outside g's domain or, without a bound, for dual-infeasible w."""
    if v is None:
        v = matvec(problem.matrix, alpha)
    gval = problem.reg.value(alpha)
    if not math.isfinite(gval):
        return math.inf
    w = problem.loss.gradient(v)
    u = -transpose_matvec(problem.matrix, w)
    conj = _conjugate_term(problem, u, bound)
    if not math.isfinite(conj):
        return math.inf
    return float(w @ v) + gval + conj


def lasso_gap(problem, alpha, v=None, bound=None):
    """Closed-form gap for L1-regularized problems with a ball bound:

        <w, v> + lam ||alpha||_1 + B * max(0, ||A^T w||_inf - lam).
    """
    reg = problem.reg
    if reg.kind != "l1":
        raise ValueError("lasso_gap needs an L1 regularizer")
    bound = bound if bound is not None else problem.bound
    if bound is None:
        raise ValueError("lasso_gap needs a support bound")
    if bound.geometry != "ball":
        raise ValueError("lasso_gap is the ball-geometry closed form")
    if v is None:
        v = matvec(problem.matrix, alpha)
    w = problem.loss.gradient(v)
    u = transpose_matvec(problem.matrix, w)
    dual_inf = float(np.abs(u).max()) if len(u) else 0.0
    return (float(w @ v) + reg.lam * float(np.abs(alpha).sum())
            + bound.radius * max(0.0, dual_inf - reg.lam))


def elastic_net_gap(problem, alpha, v=None):
    """Closed-form gap for elastic-net terms; finite without any bound:

        <w, v> + lam (eta/2 ||alpha||^2 + (1-eta) ||alpha||_1)
               + sum_i ( [|a_i^T w| - (1-eta) lam]_+ )^2 / (2 eta lam).
    """
    reg = problem.reg
    if reg.kind != "elastic_net":
        raise ValueError("elastic_net_gap needs an elastic-net regularizer")
    if v is None:
        v = matvec(problem.matrix, alpha)
    w = problem.loss.gradient(v)
    u = transpose_matvec(problem.matrix, w)
    s = np.maximum(np.abs(u) - (1.0 - reg.eta) * reg.lam, 0.0)
    return (float(w @ v) + reg.value(alpha)
            + float(s @ s) / (2.0 * reg.eta * reg.lam))


def svm_gap(problem, alpha, v=None):
    """Gap for the SVM dual: f = c/2 ||.||^2 so w = c * A alpha and

        G = <w, v> - y^T alpha + sum_i max(0, 1 - y_i a_i^T w),

    +inf (flagged by the value itself) when alpha leaves the box.
    """
    reg = problem.reg
    if reg.kind != "hinge_box":
        raise ValueError("svm_gap needs hinge-box terms")
    if v is None:
        v = matvec(problem.matrix, alpha)
    gval = reg.value(alpha)
    if not math.isfinite(gval):
        return math.inf
    w = problem.loss.gradient(v)
    u = transpose_matvec(problem.matrix, w)
    hinge = float(np.maximum(0.0, 1.0 - reg.y * u).sum())
    return float(w @ v) + gval + hinge


def duality_gap(problem, alpha, v=None, bound=None):
    """Dispatch to the closed form matching the regularizer, falling back
    to the general evaluator.  All branches agree where both are defined."""
    kind = problem.reg.kind
    if kind == "l1":
        b = bound if bound is not None else problem.bound
        if b is not None and b.geometry == "ball":
            return lasso_gap(problem, alpha, v=v, bound=b)
        return duality_gap_general(problem, alpha, v=v, bound=bound)
    if kind == "elastic_net":
        return elastic_net_gap(problem, alpha, v=v)
    if kind == "hinge_box":
        return svm_gap(problem, alpha, v=v)
    return duality_gap_general(problem, alpha, v=v, bound=bound)


# ---------------------------------------------------------------------------
# certificate traces
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("step", "epoch", "objective", "gap", "B", "seconds")


@dataclass
class CertificateRecord:
    """One certified checkpoint of a solver run."""

    step: int
    epoch: float
    objective: float
    gap: float
    bound: float  # support-bound radius used for the gap; nan if unused
    seconds: float


def _fmt(x):
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def trace_to_csv(records):
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(",".join((str(r.step), _fmt(r.epoch), _fmt(r.objective),
                               _fmt(r.gap), _fmt(r.bound), _fmt(r.seconds))))
    return "\n".join(lines) + "\n"


def write_trace_csv(path_or_file, records):
    if hasattr(path_or_file, "write"):
        path_or_file.write(trace_to_csv(records))
    else:
        with open(path_or_file, "w") as fh:
            fh.write(trace_to_csv(records))


def trace_to_json(records):
    return json.dumps([
        {"step": r.step, "epoch": r.epoch, "objective": r.objective,
         "gap": r.gap, "B": r.bound, "seconds": r.seconds}
        for r in records
    ])
