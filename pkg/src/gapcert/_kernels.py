"""Compiled inner loops shared by the sparse matrix ops and the solvers.

Everything here operates on plain numpy arrays (compressed column storage:
``indptr``, ``indices``, ``values``) so that the hot paths can be jitted.
All reductions run in column order, then stored-index order, which keeps
results bitwise reproducible for a fixed input.
"""

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


# Integer codes used to lower catalog objects into jitted kernels.
LOSS_LS = 0        # f(z) = 0.5 * ||z - b||^2
LOSS_LOGISTIC = 1  # f(z) = scale * sum_j log(1 + exp(-y_j z_j))
LOSS_SQ = 2        # f(z) = 0.5 * scale * ||z||^2

REG_ZERO = 0
REG_L1 = 1
REG_EN = 2
REG_L2 = 3
REG_BOX = 4        # g_i(a) = -y_i a + indicator{y_i a in [0, 1]}


@njit(cache=True)
def sp_matvec(indptr, indices, values, x, d):
    """y = A @ x for a column-major sparse A with ``d`` rows."""
    y = np.zeros(d)
    n = indptr.shape[0] - 1
    for i in range(n):
        xi = x[i]
        if xi != 0.0:
            for k in range(indptr[i], indptr[i + 1]):
                y[indices[k]] += xi * values[k]
    return y


@njit(cache=True)
def sp_rmatvec(indptr, indices, values, w):
    """z = A.T @ w, one sequential dot product per column."""
    n = indptr.shape[0] - 1
    z = np.empty(n)
    for i in range(n):
        acc = 0.0
        for k in range(indptr[i], indptr[i + 1]):
            acc += values[k] * w[indices[k]]
        z[i] = acc
    return z


@njit(cache=True)
def sp_col_axpy(indptr, indices, values, i, c, v):
    """In-place v += c * A[:, i]."""
    for k in range(indptr[i], indptr[i + 1]):
        v[indices[k]] += c * values[k]


@njit(cache=True)
def soft_threshold(x, t):
    if x > t:
        return x - t
    if x < -t:
        return x + t
    return 0.0


@njit(cache=True)
def quad_coordinate_update(gdot, h, alpha_i, reg_kind, lam, eta, yi):
    """Exact minimizer of the one-dimensional restriction for quadratic losses.

    ``gdot`` is the directional derivative of the smooth part at the current
    point (a_i^T grad f(v)), ``h`` its curvature along the coordinate.
    Returns the new coordinate value, not the increment.
    """
    if reg_kind == REG_BOX:
        lo = min(0.0, yi)
        hi = max(0.0, yi)
        if h <= 0.0:
            return yi
        unc = alpha_i + (yi - gdot) / h
        return min(max(unc, lo), hi)
    thr = 0.0
    quad = 0.0
    if reg_kind == REG_L1:
        thr = lam
    elif reg_kind == REG_EN:
        thr = lam * (1.0 - eta)
        quad = lam * eta
    elif reg_kind == REG_L2:
        quad = lam
    denom = h + quad
    if denom <= 0.0:
        return 0.0
    return soft_threshold(h * alpha_i - gdot, thr) / denom


@njit(cache=True)
def _logistic_dir_derivs(colvals, colidx, v, y, scale, alpha_i, theta):
    # First and second derivative of theta -> f(v + (theta - alpha_i) a)
    t = theta - alpha_i
    q = 0.0
    qp = 0.0
    for k in range(colvals.shape[0]):
        j = colidx[k]
        a = colvals[k]
        m = y[j] * (v[j] + t * a)
        if m >= 0.0:
            p = 1.0 / (1.0 + math.exp(-m))
        else:
            e = math.exp(m)
            p = e / (1.0 + e)
        q += a * (-y[j] * scale * (1.0 - p))
        qp += a * a * scale * p * (1.0 - p)
    return q, qp


@njit(cache=True)
def smooth_coordinate_update(colvals, colidx, v, y, scale, alpha_i,
                             thr, quad, inner_tol, max_iter):
    """Safeguarded Newton/bisection minimizer of the 1-D restriction.

    Handles f logistic plus a regularizer whose 1-D piece is
    quad/2 * theta^2 + thr * |theta|.  Stops once the minimum-norm
    subgradient is below ``inner_tol`` (or the bracket collapses);
    iteration count is capped at ``max_iter``.
    """
    q, qp = _logistic_dir_derivs(colvals, colidx, v, y, scale, alpha_i, alpha_i)
    qcur = q + quad * alpha_i
    if thr > 0.0:
        if alpha_i > 0.0:
            sg = qcur + thr
        elif alpha_i < 0.0:
            sg = qcur - thr
        else:
            sg = max(0.0, abs(qcur) - thr)
    else:
        sg = qcur
    if abs(sg) <= inner_tol:
        return alpha_i

    # Pick the branch (sign of the minimizer) and the root target for the
    # smooth derivative Q(theta) = q(theta) + quad * theta.
    if thr > 0.0:
        q0, _ = _logistic_dir_derivs(colvals, colidx, v, y, scale, alpha_i, 0.0)
        if abs(q0) <= thr:
            return 0.0
        anchor = 0.0
        if q0 < -thr:
            target = -thr
            g_anchor = q0 - target
        else:
            target = thr
            g_anchor = q0 - target
    else:
        anchor = alpha_i
        target = 0.0
        g_anchor = qcur

    # Expand a bracket [lo, hi] with G(lo) < 0 < G(hi).
    step = 1.0 + abs(alpha_i)
    if g_anchor < 0.0:
        lo = anchor
        hi = anchor + step
        for _ in range(200):
            q, qp = _logistic_dir_derivs(colvals, colidx, v, y, scale,
                                         alpha_i, hi)
            if q + quad * hi - target >= 0.0:
                break
            lo = hi
            step *= 2.0
            hi = lo + step
        else:
            return hi  # unbounded direction; best effort under the cap
    else:
        hi = anchor
        lo = anchor - step
        for _ in range(200):
            q, qp = _logistic_dir_derivs(colvals, colidx, v, y, scale,
                                         alpha_i, lo)
            if q + quad * lo - target <= 0.0:
                break
            hi = lo
            step *= 2.0
            lo = hi - step
        else:
            return lo

    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        q, qp = _logistic_dir_derivs(colvals, colidx, v, y, scale, alpha_i, x)
        g = q + quad * x - target
        if abs(g) <= inner_tol:
            return x
        if g > 0.0:
            hi = x
        else:
            lo = x
        gp = qp + quad
        if gp > 0.0:
            xn = x - g / gp
            if xn <= lo or xn >= hi:
                xn = 0.5 * (lo + hi)
        else:
            xn = 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * (1.0 + abs(lo) + abs(hi)):
            return xn
        x = xn
    return x


@njit(cache=True)
def window_average(delta_coords, delta_old, alpha_final, t0, t1, steps):
    """Mean of alpha^(t) for t in [t0, t1) from the per-step delta log.

    Entry k of the log holds the value coordinate ``delta_coords[k]`` had
    before step k + 1, so each logged value covers a step interval; the
    mean is the overlap-weighted sum of those interval values plus the
    final values on the tail.
    """
    n = alpha_final.shape[0]
    acc = np.zeros(n)
    last = np.zeros(n, dtype=np.int64)
    for k in range(delta_coords.shape[0]):
        c = delta_coords[k]
        lo = last[c]
        hi = k + 1
        ov = min(hi, t1) - max(lo, t0)
        if ov > 0:
            acc[c] += delta_old[k] * ov
        last[c] = hi
    for c in range(n):
        ov = min(steps + 1, t1) - max(last[c], t0)
        if ov > 0:
            acc[c] += alpha_final[c] * ov
    return acc / (t1 - t0)


@njit(cache=True)
def cd_steps(indptr, indices, values, colsq,
             alpha, v,
             loss_kind, loss_vec, loss_scale,
             reg_kind, lam, eta, reg_labels,
             coords,
             inner_tol, newton_max_iter,
             record, rec_coord, rec_old, rec_pos,
             l1_now, max_l1):
    """Run len(coords) exact coordinate-descent steps in place.

    Maintains v = A @ alpha incrementally, tracks the running and maximum
    l1 norm of the iterate, and (optionally) appends one (coordinate,
    old value) pair per step to the delta log starting at ``rec_pos``.
    Returns the updated (l1_now, max_l1, rec_pos).
    """
    thr = 0.0
    quad = 0.0
    if reg_kind == REG_L1:
        thr = lam
    elif reg_kind == REG_EN:
        thr = lam * (1.0 - eta)
        quad = lam * eta
    elif reg_kind == REG_L2:
        quad = lam

    for s in range(coords.shape[0]):
        i = coords[s]
        ai = alpha[i]
        k0 = indptr[i]
        k1 = indptr[i + 1]
        if loss_kind == LOSS_LOGISTIC:
            new = smooth_coordinate_update(values[k0:k1], indices[k0:k1], v,
                                           loss_vec, loss_scale, ai, thr,
                                           quad, inner_tol, newton_max_iter)
        else:
            gdot = 0.0
            if loss_kind == LOSS_LS:
                for k in range(k0, k1):
                    gdot += values[k] * (v[indices[k]] - loss_vec[indices[k]])
                h = colsq[i]
            else:
                for k in range(k0, k1):
                    gdot += values[k] * v[indices[k]]
                gdot *= loss_scale
                h = loss_scale * colsq[i]
            if reg_kind == REG_BOX:
                yi = reg_labels[i]
                lo = min(0.0, yi)
                hi = max(0.0, yi)
                if h > 0.0:
                    unc = ai + (yi - gdot) / h
                    new = min(max(unc, lo), hi)
                else:
                    new = yi
            else:
                denom = h + quad
                if denom > 0.0:
                    new = soft_threshold(h * ai - gdot, thr) / denom
                else:
                    new = 0.0
        if record:
            rec_coord[rec_pos] = i
            rec_old[rec_pos] = ai
            rec_pos += 1
        if new != ai:
            dlt = new - ai
            for k in range(k0, k1):
                v[indices[k]] += dlt * values[k]
            alpha[i] = new
            l1_now += abs(new) - abs(ai)
            if l1_now > max_l1:
                max_l1 = l1_now
    return l1_now, max_l1, rec_pos
