"""Randomized coordinate descent and proximal gradient, with certified traces.

Both solvers start at alpha = 0, keep the product state v = A alpha
incrementally, and emit one CertificateRecord per checkpoint (the initial
point, every ``checkpoint_every`` epochs, and the final iterate).  Runs are
bitwise reproducible: the coordinate stream comes from a counter-based
Philox generator keyed by the seed, and all reductions have fixed order.

Coordinate descent performs exact one-dimensional minimization: closed-form
soft-threshold or box-clipped Newton steps for quadratic losses, a
safeguarded Newton/bisection for the logistic loss.  When averaging is
enabled the solver logs one (coordinate, previous value) pair per step, from
which the mean iterate over any step window is reconstructed exactly in one
pass.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .certificates import CertificateRecord, duality_gap, objective_value
from .data import matvec, transpose_matvec
from .lipschitzing import level_set_bound


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by both solvers.

    ``gap_tolerance = 0.0`` disables early stopping entirely (the run always
    uses its full step budget); an exact-zero gap does occur in practice on
    small problems, so 0.0 cannot mean "stop at zero".
    """

    max_epochs: int = 1000
    gap_tolerance: float = 1e-6
    seed: int = 0
    checkpoint_every: int = 1          # epochs between certified checkpoints
    averaging_start: int = None        # step T0; enables the per-step delta log
    inner_tol: float = 1e-12           # 1-D subgradient tolerance (smooth case)
    newton_max_iter: int = 100
    bound_refresh: bool = False        # refresh a level-set bound per checkpoint
    max_steps: int = None              # exact step budget, overrides max_epochs

    def __post_init__(self):
        if self.max_epochs < 0:
            raise ValueError("max_epochs must be nonnegative")
        if self.gap_tolerance < 0:
            raise ValueError("gap_tolerance must be nonnegative")
        if self.checkpoint_every < 1:
            raise ValueError("checkpoint_every must be at least 1")
        if self.max_steps is not None and self.max_steps < 0:
            raise ValueError("max_steps must be nonnegative")
        if self.averaging_start is not None and self.averaging_start < 0:
            raise ValueError("averaging_start must be nonnegative")


@dataclass
class SolverResult:
    alpha: np.ndarray
    averaged_alpha: np.ndarray          # None unless averaging was enabled
    trace: list
    converged: bool
    steps: int
    seed: int
    max_l1: float                       # largest ||alpha||_1 over all iterates
    delta_coords: np.ndarray = None     # per-step coordinate log (averaging)
    delta_old: np.ndarray = None        # value before each step
    averaging_start: int = None


_LOSS_CODES = {
    "least_squares": _kernels.LOSS_LS,
    "logistic": _kernels.LOSS_LOGISTIC,
    "scaled_quadratic": _kernels.LOSS_SQ,
}

_REG_CODES = {
    "l1": _kernels.REG_L1,
    "elastic_net": _kernels.REG_EN,
    "squared_l2": _kernels.REG_L2,
    "hinge_box": _kernels.REG_BOX,
}


def _lower_loss(loss, d):
    try:
        code = _LOSS_CODES[loss.kind]
    except (AttributeError, KeyError):
        raise ValueError("coordinate descent supports the built-in losses, "
                         "got %r" % (loss,))
    if code == _kernels.LOSS_LS:
        return code, loss.b, 1.0
    if code == _kernels.LOSS_LOGISTIC:
        return code, loss.y, loss.scale
    return code, np.zeros(0), loss.c


def _lower_reg(reg, n):
    try:
        code = _REG_CODES[reg.kind]
    except (AttributeError, KeyError):
        raise ValueError(
            "coordinate descent needs a separable regularizer; use "
            "prox_gradient for %r" % getattr(reg, "kind", reg))
    lam = reg.lam
    eta = getattr(reg, "eta", 0.0)
    labels = reg.y if code == _kernels.REG_BOX else np.zeros(0)
    return code, lam, eta, labels


def _checkpoint(problem, alpha, v, bound, refresh, records, step, n, t_start):
    obj = objective_value(problem, alpha, v=v)
    if refresh:
        bound = level_set_bound(obj, problem.reg.lam,
                                bound.geometry if bound is not None else "ball")
    gap = duality_gap(problem, alpha, v=v, bound=bound)
    radius = bound.radius if bound is not None else math.nan
    records.append(CertificateRecord(step, step / n if n else 0.0, obj, gap,
                                     radius, time.perf_counter() - t_start))
    return gap, bound


def coordinate_descent(problem, cfg=None):
    """Algorithm: uniform random coordinate, exact 1-D minimization.

    Zero columns get their separable term minimized once up front and are
    excluded from sampling.  Returns a SolverResult whose trace objectives
    are nonincreasing and whose gaps certify every checkpoint.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    A = problem.matrix
    d, n = A.shape
    if not getattr(problem.reg, "separable", False):
        raise ValueError("coordinate descent needs a separable regularizer; "
                         "use prox_gradient")
    loss_kind, loss_vec, loss_scale = _lower_loss(problem.loss, d)
    reg_kind, lam, eta, reg_labels = _lower_reg(problem.reg, n)

    total = cfg.max_steps if cfg.max_steps is not None else cfg.max_epochs * n
    if cfg.averaging_start is not None and total and cfg.averaging_start >= total:
        raise ValueError("averaging_start %d must be below the step budget %d"
                         % (cfg.averaging_start, total))

    alpha = np.zeros(n)
    v = np.zeros(d)
    col_nnz = np.diff(A.indptr)
    for i in np.nonzero(col_nnz == 0)[0]:
        alpha[i] = problem.reg.coordinate_argmin(int(i))
    eligible = np.nonzero(col_nnz > 0)[0].astype(np.int64)
    colsq = A.column_norms_sq()

    record = cfg.averaging_start is not None
    rec_coord = np.empty(total if record else 0, dtype=np.int64)
    rec_old = np.empty(total if record else 0, dtype=np.float64)
    rec_pos = 0
    l1_now = float(np.abs(alpha).sum())
    max_l1 = l1_now

    rng = np.random.Generator(np.random.Philox(cfg.seed))
    bound = problem.bound
    records = []
    t_start = time.perf_counter()
    gap, bound = _checkpoint(problem, alpha, v, bound, cfg.bound_refresh,
                             records, 0, n, t_start)
    stop_early = cfg.gap_tolerance > 0.0
    converged = stop_early and gap <= cfg.gap_tolerance
    steps_done = 0
    chunk = cfg.checkpoint_every * n

    while not converged and steps_done < total and len(eligible):
        m = min(chunk, total - steps_done)
        coords = eligible[rng.integers(0, len(eligible), size=m)]
        l1_now, max_l1, rec_pos = _kernels.cd_steps(
            A.indptr, A.indices, A.values, colsq, alpha, v,
            loss_kind, loss_vec, loss_scale,
            reg_kind, lam, eta, reg_labels,
            coords, cfg.inner_tol, cfg.newton_max_iter,
            record, rec_coord, rec_old, rec_pos,
            l1_now, max_l1)
        steps_done += m
        l1_now = float(np.abs(alpha).sum())  # eliminate incremental drift
        gap, bound = _checkpoint(problem, alpha, v, bound, cfg.bound_refresh,
                                 records, steps_done, n, t_start)
        if stop_early and gap <= cfg.gap_tolerance:
            converged = True

    averaged = None
    if record and steps_done:
        t0 = cfg.averaging_start
        if steps_done > t0:
            averaged = _kernels.window_average(rec_coord[:rec_pos],
                                               rec_old[:rec_pos], alpha,
                                               t0, steps_done, steps_done)
    return SolverResult(alpha=alpha, averaged_alpha=averaged, trace=records,
                        converged=converged, steps=steps_done, seed=cfg.seed,
                        max_l1=max_l1,
                        delta_coords=rec_coord[:rec_pos] if record else None,
                        delta_old=rec_old[:rec_pos] if record else None,
                        averaging_start=cfg.averaging_start)


def averaged_iterate(result, start=None, stop=None):
    """Mean of the iterates alpha^(t) for t in [start, stop).

    Requires the per-step delta log (averaging enabled).  Reconstructs the
    window mean exactly in a single pass over the log: each logged value
    holds over a step interval, and interval overlaps with the window are
    accumulated per coordinate.
    """
    if result.delta_coords is None:
        raise ValueError("run with averaging enabled to store iterate deltas")
    start = result.averaging_start if start is None else start
    stop = result.steps if stop is None else stop
    if start is None or not 0 <= start < stop <= result.steps + 1:
        raise ValueError("bad averaging window [%r, %r)" % (start, stop))
    return _kernels.window_average(result.delta_coords, result.delta_old,
                                   result.alpha, start, stop, result.steps)


def prox_gradient(problem, cfg=None):
    """Plain proximal gradient on D(alpha) = f(A alpha) + g(alpha).

    The composite gradient A^T grad f(A alpha) is (sigma/beta)-Lipschitz,
    so the step size is beta/sigma; each step costs one pass over the data
    and is counted as one epoch in the trace.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    if cfg.averaging_start is not None:
        raise ValueError("iterate averaging is specific to coordinate descent")
    A = problem.matrix
    d, n = A.shape
    sigma = problem.constants().sigma
    tau = problem.loss.beta / sigma if sigma > 0 else 1.0

    alpha = np.zeros(n)
    v = np.zeros(d)
    total = cfg.max_steps if cfg.max_steps is not None else cfg.max_epochs
    records = []
    bound = problem.bound
    t_start = time.perf_counter()
    gap, bound = _checkpoint(problem, alpha, v, bound, cfg.bound_refresh,
                             records, 0, 1, t_start)
    stop_early = cfg.gap_tolerance > 0.0
    converged = stop_early and gap <= cfg.gap_tolerance
    steps_done = 0
    max_l1 = float(np.abs(alpha).sum())
    while not converged and steps_done < total:
        grad = transpose_matvec(A, problem.loss.gradient(v))
        alpha = problem.reg.prox(alpha - tau * grad, tau)
        v = matvec(A, alpha)
        steps_done += 1
        max_l1 = max(max_l1, float(np.abs(alpha).sum()))
        if steps_done % cfg.checkpoint_every == 0 or steps_done == total:
            gap, bound = _checkpoint(problem, alpha, v, bound,
                                     cfg.bound_refresh, records, steps_done,
                                     1, t_start)
            if stop_early and gap <= cfg.gap_tolerance:
                converged = True
    return SolverResult(alpha=alpha, averaged_alpha=None, trace=records,
                        converged=converged, steps=steps_done, seed=cfg.seed,
                        max_l1=max_l1)


def reference_optimum(problem, epochs=100_000, seed=977_121_347):
    """High-precision optimum D(alpha*) via a long coordinate-descent run.

    The returned value is an upper bound on the true optimum that tightens
    with ``epochs``; downstream soundness checks that subtract it are
    therefore conservative.
    """
    cfg = SolverConfig(max_epochs=epochs, gap_tolerance=0.0,
                       checkpoint_every=max(1, epochs), seed=seed)
    res = coordinate_descent(problem, cfg)
    return min(r.objective for r in res.trace)


# ---------------------------------------------------------------------------
# one-dimensional building blocks (exposed for the inequality checks)
# ---------------------------------------------------------------------------

def coordinate_min_quadratic(gdot, curvature, alpha_i, thr=0.0, quad=0.0,
                             box_label=None):
    """Exact minimizer of a quadratic 1-D restriction.

    gdot and curvature are the first two derivatives of the smooth part at
    the current point; (thr, quad) describe the separable term
    thr*|t| + quad/2*t^2, or a linear-plus-box term when ``box_label`` is
    a +/-1 label.  With thr = quad = 0 this is a plain Newton step.
    """
    if box_label is not None:
        return _kernels.quad_coordinate_update(gdot, curvature, alpha_i,
                                               _kernels.REG_BOX, 0.0, 0.0,
                                               float(box_label))
    if quad == 0.0 and thr > 0.0:
        kind, lam, eta = _kernels.REG_L1, thr, 0.0
    elif thr == 0.0 and quad > 0.0:
        kind, lam, eta = _kernels.REG_L2, quad, 0.0
    elif thr == 0.0 and quad == 0.0:
        kind, lam, eta = _kernels.REG_ZERO, 0.0, 0.0
    else:
        lam = thr + quad
        kind, eta = _kernels.REG_EN, quad / lam
    return _kernels.quad_coordinate_update(gdot, curvature, alpha_i, kind,
                                           lam, eta, 0.0)


def coordinate_min_smooth(col_indices, col_values, v, loss, alpha_i,
                          thr=0.0, quad=0.0, inner_tol=1e-12, max_iter=100):
    """Safeguarded 1-D minimizer along a sparse column for any smooth loss.

    Logistic losses use the jitted Newton/bisection; other losses fall back
    to a derivative bisection with secant acceleration (quadratic losses
    agree with coordinate_min_quadratic to solver precision).
    """
    col_indices = np.ascontiguousarray(col_indices, dtype=np.int64)
    col_values = np.ascontiguousarray(col_values, dtype=np.float64)
    if loss.kind == "logistic":
        return _kernels.smooth_coordinate_update(
            col_values, col_indices, v, loss.y, loss.scale, alpha_i,
            thr, quad, inner_tol, max_iter)

    def dsmooth(t):
        z = v.copy()
        z[col_indices] += (t - alpha_i) * col_values
        return float(col_values @ loss.gradient(z)[col_indices]) + quad * t

    q = dsmooth(alpha_i)
    if thr > 0.0:
        if alpha_i > 0:
            sg = q + thr
        elif alpha_i < 0:
            sg = q - thr
        else:
            sg = max(0.0, abs(q) - thr)
    else:
        sg = q
    if abs(sg) <= inner_tol:
        return alpha_i
    if thr > 0.0:
        q0 = dsmooth(0.0)
        if abs(q0) <= thr:
            return 0.0
        target = -thr if q0 < -thr else thr
        anchor, g_anchor = 0.0, q0 - (-thr if q0 < -thr else thr)
    else:
        target, anchor, g_anchor = 0.0, alpha_i, sg

    step = 1.0 + abs(alpha_i)
    if g_anchor < 0:
        lo, hi = anchor, anchor + step
        while dsmooth(hi) - target < 0 and step < 1e18:
            lo, step = hi, step * 2
            hi = lo + step
    else:
        hi, lo = anchor, anchor - step
        while dsmooth(lo) - target > 0 and step < 1e18:
            hi, step = lo, step * 2
            lo = hi - step
    glo, ghi = dsmooth(lo) - target, dsmooth(hi) - target
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        g = dsmooth(x) - target
        if abs(g) <= inner_tol or hi - lo <= 1e-16 * (1 + abs(lo) + abs(hi)):
            return x
        if g > 0:
            hi, ghi = x, g
        else:
            lo, glo = x, g
        xn = x - g * (hi - lo) / (ghi - glo) if ghi != glo else 0.5 * (lo + hi)
        x = xn if lo < xn < hi else 0.5 * (lo + hi)
    return x


def exact_coordinate_step(problem, alpha, i, v=None, inner_tol=1e-12):
    """New value of coordinate i after one exact CD step from ``alpha``.

    Mirrors the solver's dispatch; useful for expected-improvement checks.
    """
    A = problem.matrix
    if v is None:
        v = matvec(A, alpha)
    idx, vals = A.column(i)
    reg = problem.reg
    kind = reg.kind
    thr = quad = 0.0
    if kind == "l1":
        thr = reg.lam
    elif kind == "elastic_net":
        thr, quad = reg.lam * (1 - reg.eta), reg.lam * reg.eta
    elif kind == "squared_l2":
        quad = reg.lam
    elif kind != "hinge_box":
        raise ValueError("no separable coordinate step for %r" % kind)

    if problem.loss.kind == "logistic":
        return coordinate_min_smooth(idx, vals, v, problem.loss,
                                     float(alpha[i]), thr, quad, inner_tol)
    grad = problem.loss.gradient(v)
    gdot = float(vals @ grad[idx])
    if problem.loss.kind == "scaled_quadratic":
        h = problem.loss.c * float(vals @ vals)
    else:
        h = float(vals @ vals)
    if kind == "hinge_box":
        return coordinate_min_quadratic(gdot, h, float(alpha[i]),
                                        box_label=reg.y[i])
    return coordinate_min_quadratic(gdot, h, float(alpha[i]), thr=thr,
                                    quad=quad)
