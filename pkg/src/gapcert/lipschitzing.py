"""Support bounds and the bounded-support modification of conjugates.

The conjugate of an L1 or group norm is an indicator, so the plain duality
gap is +inf whenever the dual point leaves the dual-norm ball.  Restricting
the regularizer's support to a bounded set B fixes this: the restricted
conjugate becomes B-Lipschitz (bounded support and Lipschitz conjugate are
dual properties), hence finite everywhere, while no iterate of a monotone
solver started at zero ever notices the restriction.

Two geometries are supported:

* ``ball``: the regularizer's own norm ball of radius B.  The modified
  conjugate has the closed form  B * max(0, dual_norm(x) - lam).
* ``box``: per-coordinate intervals [-B, B] for separable L1 terms, giving
  B * max(0, |x_i| - lam) summed over coordinates.  This is the variant
  whose per-coordinate Lipschitz constants feed the coordinate-descent
  rate calculators.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SupportBound:
    """A bounded support set for the regularizer.

    radius : float, >= 0
    geometry : "ball" (regularizer norm ball) or "box" (per-coordinate)
    provenance : "safe", "level_set" or "manual"
    """

    radius: float
    geometry: str = "ball"
    provenance: str = "manual"

    def __post_init__(self):
        if self.radius < 0 or not math.isfinite(self.radius):
            raise ValueError("radius must be finite and nonnegative")
        if self.geometry not in ("ball", "box"):
            raise ValueError("geometry must be 'ball' or 'box'")
        if self.provenance not in ("safe", "level_set", "manual"):
            raise ValueError("unknown provenance %r" % (self.provenance,))


def safe_bound(loss, lam, geometry="ball"):
    """B = f(0) / lam, valid for every monotone solver started at zero.

    Any iterate with D(alpha) <= D(0) = f(0) satisfies
    lam * ||alpha|| <= D(alpha) <= f(0), so the ball of radius f(0)/lam
    contains the whole trajectory and the optimum.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    return SupportBound(loss.zero_value() / lam, geometry, "safe")


def level_set_bound(objective_value, lam, geometry="ball"):
    """B = D(alpha)/lam from the current objective; tightens as the solver
    descends.  At alpha = 0 it reproduces the safe bound."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if objective_value < 0:
        raise ValueError("level-set bound needs a nonnegative objective")
    return SupportBound(objective_value / lam, geometry, "level_set")


def modified_conjugate_l1_scalar(x, lam, B):
    """Conjugate of lam*|.| restricted to [-B, B]: the one-dimensional
    building block of the box geometry.

    Zero on [-lam, lam], then B-Lipschitz ramps B*(|x| - lam) outside.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if B < 0:
        raise ValueError("B must be nonnegative")
    return B * max(0.0, abs(x) - lam)


def modified_conjugate_norm(x, reg, B):
    """Conjugate of lam*||.|| restricted to the norm ball of radius B:

        B * max(0, dual_norm(x) - lam),

    which is B-Lipschitz with respect to the dual norm and coincides with
    the plain indicator conjugate inside the dual ball.
    """
    if not getattr(reg, "is_norm", False):
        raise ValueError("ball modification applies to norm regularizers")
    if B < 0:
        raise ValueError("B must be nonnegative")
    return B * max(0.0, reg.dual_norm(x) - reg.lam)


def modified_conjugate_box(x, lam, B):
    """Sum of per-coordinate restricted conjugates for separable L1."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if B < 0:
        raise ValueError("B must be nonnegative")
    return B * float(np.maximum(np.abs(x) - lam, 0.0).sum())


def modified_conjugate_subgradient(x, reg, bound):
    """A minimum-norm subgradient of the modified conjugate at x.

    Used by the per-step improvement checks: elements of the
    subdifferential are exactly the support points certifying the gap.
    For the ball geometry the subdifferential at dual_norm(x) > lam is
    spanned by extreme points B * sign(x_j) e_j over maximizing groups or
    coordinates; the first maximizer is chosen, deterministically.
    """
    x = np.asarray(x, dtype=np.float64)
    lam = reg.lam
    B = bound.radius
    if bound.geometry == "box":
        out = np.zeros_like(x)
        outside = np.abs(x) > lam
        out[outside] = B * np.sign(x[outside])
        return out
    if reg.kind == "l1":
        out = np.zeros_like(x)
        j = int(np.argmax(np.abs(x))) if len(x) else 0
        if len(x) and abs(x[j]) > lam:
            out[j] = B * math.copysign(1.0, x[j])
        return out
    if reg.kind == "group_lasso":
        out = np.zeros_like(x)
        norms = [float(np.linalg.norm(x[g])) for g in reg.groups]
        k = int(np.argmax(norms))
        if norms[k] > lam:
            out[reg.groups[k]] = B * x[reg.groups[k]] / norms[k]
        return out
    raise ValueError("no ball subgradient rule for %r" % (reg.kind,))
