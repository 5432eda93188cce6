"""Iteration-count calculators and the empirical verification harness.

Each ``*_bound`` function turns problem constants into the number of steps
T that suffices for a target accuracy eps, following the convergence
analysis of the primal-dual certificate framework:

* generic linear rate for C-geometric algorithms on strongly convex
  separable terms;
* generic rate when the terms only have bounded support (the Lipschitz
  conjugate case), where the gap guarantee costs an extra factor;
* randomized exact coordinate descent, strongly convex case
  (kappa = n + n R^2 / (mu beta), T = kappa log(kappa eps0 / eps));
* randomized coordinate descent with B-bounded support, O(1/eps) with
  T0-averaging, and its specializations to L1 via the safe bound B and
  to the elastic net via mu = lam * eta.

``verify_trace`` replays recorded certificate traces against a bound:
the mean gap over seeds at step ceil(T) must be at most eps (a documented
2x slack is tolerated but flagged).
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class RateInputs:
    """Constants feeding the calculators; fill what the bound needs.

    ``beta``: loss smoothness (gradient is (1/beta)-Lipschitz);
    ``mu``: strong convexity of the separable terms; ``L``: their support
    radius; ``sigma``, ``R``, ``P``: data constants; ``C``, ``D0``:
    per-step contraction and initial suboptimality bound of a generic
    algorithm; ``eps0``: initial suboptimality for the CD bounds.
    """

    n: int = None
    d: int = None
    sigma: float = None
    beta: float = None
    mu: float = None
    L: float = None
    R: float = None
    P: float = None
    C: float = None
    D0: float = None
    eps0: float = None
    lam: float = None
    eta: float = None
    estimated: bool = False   # C / D0 fitted from a trace, not analytic


@dataclass
class RateBound:
    name: str
    T: float
    eps: float
    T0: float = None          # averaging start, for averaged-iterate bounds
    averaged: bool = False
    inputs: RateInputs = None
    note: str = ""

    def to_json(self):
        return json.dumps({"theorem": self.name, "T": self.T, "T0": self.T0,
                           "eps": self.eps, "averaged": self.averaged,
                           "note": self.note})


def _need(inputs, *names):
    for name in names:
        val = getattr(inputs, name)
        if val is None:
            raise ValueError("rate bound needs %r" % name)
        if name != "estimated" and not math.isfinite(val):
            raise ValueError("rate input %r must be finite" % name)


def linear_rate_bound(inputs, eps):
    """Steps to eps-suboptimality for an algorithm contracting the
    objective by (1 - C) per step, strongly convex separable terms:

        T = (1/C) log( D0 (sigma/beta + mu) / (mu eps) ), clamped at 0.
    """
    _need(inputs, "C", "D0", "sigma", "beta", "mu")
    if inputs.mu <= 0:
        raise ValueError("linear rate needs mu > 0")
    if not 0 < inputs.C <= 1:
        raise ValueError("contraction factor C must be in (0, 1]")
    if eps <= 0:
        raise ValueError("eps must be positive")
    arg = inputs.D0 * (inputs.sigma / inputs.beta + inputs.mu) / (inputs.mu * eps)
    T = max(0.0, math.log(arg) / inputs.C) if arg > 0 else 0.0
    return RateBound("generic-strongly-convex", T, eps, inputs=inputs,
                     note="estimated constants" if inputs.estimated else "")


def bounded_support_rate_bound(inputs, eps):
    """Same contraction assumption but terms with L-bounded support:

        T = (1/C) log( 2 D0 max{1, 2 sigma L^2 / (eps beta)} / eps ).
    """
    _need(inputs, "C", "D0", "sigma", "beta", "L")
    if not 0 < inputs.C <= 1:
        raise ValueError("contraction factor C must be in (0, 1]")
    if eps <= 0:
        raise ValueError("eps must be positive")
    inner = max(1.0, 2.0 * inputs.sigma * inputs.L ** 2 / (eps * inputs.beta))
    arg = 2.0 * inputs.D0 * inner / eps
    T = max(0.0, math.log(arg) / inputs.C) if arg > 0 else 0.0
    return RateBound("generic-bounded-support", T, eps, inputs=inputs,
                     note="estimated constants" if inputs.estimated else "")


def lower_bound_threshold(inputs, eps):
    """Suboptimality level below which the bounded-support gap guarantee
    cannot be improved in general:

        max{ 2 C beta / (sigma L^2), 2 C sigma L^2 / (beta eps^2) }.
    """
    _need(inputs, "C", "sigma", "beta", "L")
    if eps <= 0:
        raise ValueError("eps must be positive")
    a = 2.0 * inputs.C * inputs.beta / (inputs.sigma * inputs.L ** 2)
    b = 2.0 * inputs.C * inputs.sigma * inputs.L ** 2 / (inputs.beta * eps ** 2)
    return max(a, b)


def cd_strongly_convex_bound(inputs, eps, averaged=False):
    """Coordinate descent with mu-strongly convex separable terms.

    Last iterate: T = kappa log(kappa eps0 / eps), kappa = n + n R^2/(mu beta).
    With averaged=True the equal-split convention T = 2 T0 is used, where
    T0 = max(kappa, kappa log(eps0 / eps)) makes the averaged-window form
    of the bound hold.
    """
    _need(inputs, "n", "R", "mu", "beta", "eps0")
    if inputs.mu <= 0:
        raise ValueError("this bound needs mu > 0 (strongly convex terms)")
    if eps <= 0:
        raise ValueError("eps must be positive")
    kappa = inputs.n + inputs.n * inputs.R ** 2 / (inputs.mu * inputs.beta)
    if averaged:
        T0 = max(kappa, kappa * math.log(max(inputs.eps0 / eps, 1.0)))
        return RateBound("cd-strongly-convex", 2.0 * T0, eps, T0=T0,
                         averaged=True, inputs=inputs)
    arg = kappa * inputs.eps0 / eps
    T = max(0.0, kappa * math.log(arg)) if arg > 0 else 0.0
    return RateBound("cd-strongly-convex", T, eps, inputs=inputs)


def cd_bounded_support_bound(inputs, eps, name="cd-bounded-support"):
    """Coordinate descent with L-bounded-support separable terms; the gap
    guarantee holds for the mean iterate over [T0, T):

        T  = max{0, n log(eps0 beta / (2 L^2 R^2 n))} + n
             + 20 n^2 L^2 R^2 / (beta eps),
        T0 = max{0, n log(eps0 beta / (2 L^2 R^2 n))}
             + 16 n^2 L^2 R^2 / (beta eps).
    """
    _need(inputs, "n", "L", "R", "beta", "eps0")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if inputs.L <= 0 or inputs.R <= 0:
        raise ValueError("L and R must be positive")
    lead = inputs.eps0 * inputs.beta / (2.0 * inputs.L ** 2 * inputs.R ** 2
                                        * inputs.n)
    base = max(0.0, inputs.n * math.log(lead)) if lead > 0 else 0.0
    tail = inputs.n ** 2 * inputs.L ** 2 * inputs.R ** 2 / (inputs.beta * eps)
    T = base + inputs.n + 20.0 * tail
    T0 = base + 16.0 * tail
    return RateBound(name, T, eps, T0=T0, averaged=True, inputs=inputs)


def cd_l1_bound(inputs, eps, B):
    """L1 specialization: per-coordinate Lipschitzing with the safe bound
    B plays the role of the support radius L."""
    if B is None or B < 0:
        raise ValueError("needs a nonnegative support-bound radius B")
    patched = RateInputs(**{**inputs.__dict__, "L": float(B)})
    return cd_bounded_support_bound(patched, eps, name="cd-l1-safe")


def cd_elastic_net_bound(inputs, eps, side="primal"):
    """Elastic-net specialization, mu = lam * eta.

    side="primal": kappa = n + n R^2 / (lam eta beta) over coordinates;
    side="dual":   kappa = d + d P^2 / (lam eta beta) over rows (the same
    statement applied to the conjugate pair; beta is the loss smoothness).
    """
    _need(inputs, "lam", "eta", "beta", "eps0")
    if inputs.lam <= 0 or not 0 < inputs.eta <= 1:
        raise ValueError("needs lam > 0 and eta in (0, 1]")
    if eps <= 0:
        raise ValueError("eps must be positive")
    mu = inputs.lam * inputs.eta
    if side == "primal":
        _need(inputs, "n", "R")
        count, norm = inputs.n, inputs.R
    elif side == "dual":
        _need(inputs, "d", "P")
        count, norm = inputs.d, inputs.P
    else:
        raise ValueError("side must be 'primal' or 'dual'")
    kappa = count + count * norm ** 2 / (mu * inputs.beta)
    arg = kappa * inputs.eps0 / eps
    T = max(0.0, kappa * math.log(arg)) if arg > 0 else 0.0
    return RateBound("cd-elastic-net-%s" % side, T, eps, inputs=inputs)


# ---------------------------------------------------------------------------
# verification harness
# ---------------------------------------------------------------------------

@dataclass
class VerifyReport:
    theorem: str
    T: float
    T0: float
    eps: float
    mean_gap: float
    passed: bool
    slack_used: bool
    n_runs: int

    def to_json(self):
        return json.dumps({"theorem": self.theorem, "T": self.T,
                           "T0": self.T0, "eps": self.eps,
                           "mean_gap": self.mean_gap, "pass": self.passed,
                           "slack_used": self.slack_used})


def _build_report(gaps, bound, eps, slack):
    mean_gap = float(np.mean(gaps))
    passed = mean_gap <= eps
    slack_used = False
    if not passed and mean_gap <= slack * eps:
        passed, slack_used = True, True
    return VerifyReport(bound.name, bound.T, bound.T0, eps, mean_gap, passed,
                        slack_used, len(gaps))


def verify_trace(traces, bound, eps=None, slack=2.0):
    """Check a last-iterate bound against recorded certificate traces.

    For each trace the gap of the first checkpoint at step >= ceil(T) is
    taken; the mean over traces must be at most eps (or slack*eps, then
    flagged).  Raises on traces that end before ceil(T).
    """
    eps = bound.eps if eps is None else eps
    target = math.ceil(bound.T)
    gaps = []
    for k, trace in enumerate(traces):
        hit = next((r for r in trace if r.step >= target), None)
        if hit is None:
            raise ValueError(
                "insufficient steps in trace %d: ends at %d, bound needs %d"
                % (k, trace[-1].step if trace else -1, target))
        gaps.append(hit.gap)
    return _build_report(gaps, bound, eps, slack)


def verify_gap_values(gaps, bound, eps=None, slack=2.0):
    """Check a bound against precomputed gap values (one per seed), for
    averaged-iterate bounds where the caller evaluates gap(mean iterate)."""
    eps = bound.eps if eps is None else eps
    if not len(gaps):
        raise ValueError("no gap values supplied")
    return _build_report(list(gaps), bound, eps, slack)


def estimate_linear_rate(trace, d_star):
    """Fit (C, D0) of a geometric decay to a trace's suboptimalities.

    Least squares on log(objective - d_star) against the step count; the
    result feeds the generic bounds and is flagged as estimated.
    """
    steps = []
    logs = []
    for r in trace:
        sub = r.objective - d_star
        if sub > 0 and math.isfinite(sub):
            steps.append(r.step)
            logs.append(math.log(sub))
    if len(steps) < 2:
        raise ValueError("need at least two positive suboptimalities to fit")
    slope, intercept = np.polyfit(np.asarray(steps, dtype=float),
                                  np.asarray(logs), 1)
    C = min(max(1.0 - math.exp(slope), 1e-12), 1.0)
    return float(C), float(math.exp(intercept))
