"""End-to-end acceptance checks, one test per contract criterion.

Each test prints a single `criterion NN <label>: PASS|FAIL (detail)` line
(visible with ``pytest -s``; plain ``pytest -v`` shows the matching
PASSED/FAILED line per test) and then asserts the stated tolerance and
wall-clock budget.  Budgets are measured after the JIT warmup done by the
session fixture in conftest, so they time the algorithms rather than
compilation.  The 80 solver runs and reference optima that criteria 1 and 5
share live in one module-scoped fixture.
"""

import math
import time

import numpy as np
import pytest

from gapcert.certificates import (
    ProblemA,
    duality_gap,
    duality_gap_general,
    elastic_net_gap,
    lasso_gap,
    objective_value,
    svm_gap,
)
from gapcert.data import SparseMatrix, matrix_constants, matvec, transpose_matvec
from gapcert.functions import (
    L1,
    ElasticNet,
    GroupLasso,
    HingeBox,
    LeastSquares,
    Logistic,
    ScaledQuadratic,
    SquaredL2,
    conjugate_oracle,
)
from gapcert.lipschitzing import (
    SupportBound,
    modified_conjugate_box,
    modified_conjugate_l1_scalar,
    modified_conjugate_norm,
    modified_conjugate_subgradient,
)
from gapcert.problems import elastic_net, lasso, svm_dual
from gapcert.rates import RateInputs, cd_strongly_convex_bound, verify_gap_values
from gapcert.solvers import (
    SolverConfig,
    averaged_iterate,
    coordinate_descent,
    exact_coordinate_step,
    prox_gradient,
    reference_optimum,
)

from conftest import regression_problem, svm_problem


def _report(num, label, ok, detail=""):
    line = "criterion %02d %s: %s" % (num, label, "PASS" if ok else "FAIL")
    if detail:
        line += " (%s)" % detail
    print(line)


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


# ---------------------------------------------------------------------------
# shared runs for criteria 1 and 5

KINDS = ("lasso", "elastic_net", "svm", "ridge")


@pytest.fixture(scope="module")
def soundness_runs():
    t0 = time.perf_counter()
    runs = []
    for seed in range(20):
        for kind in KINDS:
            if kind == "svm":
                p = svm_problem(d=10, n=20, seed=seed)
            else:
                p = regression_problem(kind, d=10, n=20, lam=0.1, seed=seed)
            ref = reference_optimum(p, epochs=100_000)
            cd = coordinate_descent(p, SolverConfig(max_epochs=30,
                                                    gap_tolerance=0.0))
            pg = prox_gradient(p, SolverConfig(max_epochs=30,
                                               gap_tolerance=0.0))
            runs.append((kind, p, ref, (cd, pg)))
    return {"runs": runs, "seconds": time.perf_counter() - t0}


def test_criterion_01_certificate_soundness(soundness_runs):
    """gap(alpha) >= D(alpha) - D(alpha*) - 1e-9 at every checkpoint."""
    worst = math.inf
    checked = 0
    for kind, p, ref, results in soundness_runs["runs"]:
        for res in results:
            for rec in res.trace:
                worst = min(worst, rec.gap - (rec.objective - ref))
                checked += 1
    elapsed = soundness_runs["seconds"]
    ok = worst >= -1e-9 and elapsed < 30.0
    _report(1, "certificate soundness", ok,
            "min slack %.2e over %d checkpoints, %.1fs" % (worst, checked,
                                                           elapsed))
    assert worst >= -1e-9
    assert elapsed < 30.0


def test_criterion_02_conjugate_catalog():
    """Catalog conjugates match the brute-force grid oracle within 1e-2."""
    t0 = time.perf_counter()
    rng = _rng(2)
    ls = LeastSquares(np.array([0.7]))
    lg = Logistic(np.array([1.0]))
    sq = ScaledQuadratic(0.5, 1)
    l1 = L1(0.4)
    en = ElasticNet(0.4, 0.5)
    l2 = SquaredL2(0.5)
    hb = HingeBox(np.array([1.0]))
    gl = GroupLasso(0.4, [[0]])
    # sampling windows keep the sup attained inside the oracle's grid
    cases = [
        ("least-squares", lambda u: 0.5 * (u - 0.7) ** 2,
         lambda w: ls.conjugate_value(np.array([w])), -5.0, 5.0),
        ("logistic", lambda u: np.logaddexp(0.0, -u),
         lambda w: lg.conjugate_value(np.array([w])), -0.98, -0.02),
        ("scaled-quadratic", lambda u: 0.25 * u * u,
         lambda w: sq.conjugate_value(np.array([w])), -4.0, 4.0),
        ("l1", lambda u: 0.4 * np.abs(u),
         lambda w: l1.conjugate_value(np.array([w])), -0.4, 0.4),
        ("elastic-net", lambda u: 0.4 * (0.25 * u * u + 0.5 * np.abs(u)),
         lambda w: en.conjugate_value(np.array([w])), -2.0, 2.0),
        ("squared-l2", lambda u: 0.25 * u * u,
         lambda w: l2.conjugate_value(np.array([w])), -4.0, 4.0),
        ("hinge-box", lambda u: np.where((u >= 0.0) & (u <= 1.0), -u,
                                         math.inf),
         lambda w: hb.conjugate_value(np.array([w])), -5.0, 5.0),
        ("group-lasso", lambda u: 0.4 * np.abs(u),
         lambda w: gl.conjugate_value(np.array([w])), -0.4, 0.4),
    ]
    worst = 0.0
    for label, primal, conj, lo, hi in cases:
        for x in rng.uniform(lo, hi, size=50):
            diff = abs(conj(float(x)) - conjugate_oracle(primal, float(x)))
            worst = max(worst, diff)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-2 and elapsed < 5.0
    _report(2, "conjugate catalog vs oracle", ok,
            "max diff %.2e over %d functions, %.1fs" % (worst, len(cases),
                                                        elapsed))
    assert worst <= 1e-2
    assert elapsed < 5.0


def test_criterion_03_lipschitz_constants():
    """Modified conjugates are B-Lipschitz; scalar form matches brute force."""
    t0 = time.perf_counter()
    rng = _rng(3)
    lam, B = 0.7, 2.3
    reg = L1(lam)
    grp = GroupLasso(lam, [[0, 1, 2], [3, 4, 5]])
    ok_pairs = True
    for _ in range(1000):
        x, y = rng.uniform(-8.0, 8.0, size=2)
        lhs = abs(modified_conjugate_l1_scalar(x, lam, B)
                  - modified_conjugate_l1_scalar(y, lam, B))
        ok_pairs = ok_pairs and lhs <= B * abs(x - y) + 1e-12
        u = rng.uniform(-8.0, 8.0, size=6)
        v = rng.uniform(-8.0, 8.0, size=6)
        # the Lipschitz metric is the dual of each geometry's support norm
        lhs = abs(modified_conjugate_norm(u, reg, B)
                  - modified_conjugate_norm(v, reg, B))
        ok_pairs = ok_pairs and lhs <= B * np.abs(u - v).max() + 1e-12
        lhs = abs(modified_conjugate_box(u, lam, B)
                  - modified_conjugate_box(v, lam, B))
        ok_pairs = ok_pairs and lhs <= B * np.abs(u - v).sum() + 1e-12
        lhs = abs(modified_conjugate_norm(u, grp, B)
                  - modified_conjugate_norm(v, grp, B))
        dual_dist = max(float(np.linalg.norm((u - v)[:3])),
                        float(np.linalg.norm((u - v)[3:])))
        ok_pairs = ok_pairs and lhs <= B * dual_dist + 1e-12
    us = np.linspace(-B, B, 200_001)
    worst = 0.0
    for x in rng.uniform(-8.0, 8.0, size=50):
        brute = float(np.max(x * us - lam * np.abs(us)))
        worst = max(worst,
                    abs(modified_conjugate_l1_scalar(x, lam, B) - brute))
    elapsed = time.perf_counter() - t0
    ok = ok_pairs and worst <= 2e-3 and elapsed < 2.0
    _report(3, "lipschitz modified conjugates", ok,
            "1000 pairs x 4 geometries, brute diff %.2e, %.1fs" % (worst,
                                                                   elapsed))
    assert ok_pairs
    assert worst <= 2e-3
    assert elapsed < 2.0


def test_criterion_04_iterate_invariance():
    """Bound metadata never changes the iterate sequence (100 epochs)."""
    t0 = time.perf_counter()
    p = regression_problem("lasso", d=10, n=20, lam=0.1, seed=4)
    stripped = ProblemA(p.matrix, p.loss, p.reg, bound=None)
    cfg = SolverConfig(max_epochs=100, gap_tolerance=0.0, seed=4,
                       averaging_start=0)
    a = coordinate_descent(p, cfg)
    b = coordinate_descent(stripped, cfg)
    same = (np.array_equal(a.alpha, b.alpha)
            and np.array_equal(a.delta_coords, b.delta_coords)
            and np.array_equal(a.delta_old, b.delta_old)
            and a.max_l1 == b.max_l1)
    elapsed = time.perf_counter() - t0
    ok = same and elapsed < 2.0
    _report(4, "iterate invariance under lipschitzing", ok,
            "%d steps bitwise identical, %.1fs" % (a.steps, elapsed))
    assert same
    assert elapsed < 2.0


def test_criterion_05_safe_bound_containment(soundness_runs):
    """lam * ||alpha_t||_1 <= f(0) + 1e-9 on every criterion-1 lasso run."""
    worst = -math.inf
    runs = 0
    for kind, p, ref, results in soundness_runs["runs"]:
        if kind != "lasso":
            continue
        f0 = p.loss.zero_value()
        for res in results:
            worst = max(worst, p.reg.lam * res.max_l1 - f0)
            runs += 1
    ok = worst <= 1e-9
    _report(5, "safe bound containment", ok,
            "max excess %.2e over %d runs" % (worst, runs))
    assert worst <= 1e-9


def test_criterion_06_iteration_bound_validity():
    """Mean gap over 30 seeds at step ceil(T) is at most eps."""
    t0 = time.perf_counter()
    p = regression_problem("elastic_net", d=10, n=20, lam=0.1, eta=0.5,
                           seed=6)
    d0 = objective_value(p, np.zeros(20))
    ref = reference_optimum(p, epochs=100_000)
    eps0 = d0 - ref
    eps = 1e-3 * eps0
    consts = p.constants()
    bound = cd_strongly_convex_bound(
        RateInputs(n=20, R=consts.R, mu=p.reg.mu, beta=p.loss.beta,
                   eps0=eps0), eps)
    steps = math.ceil(bound.T)
    gaps = []
    for k in range(30):
        res = coordinate_descent(p, SolverConfig(max_steps=steps,
                                                 gap_tolerance=0.0,
                                                 checkpoint_every=steps,
                                                 seed=100 + k))
        assert res.trace[-1].step == steps
        gaps.append(res.trace[-1].gap)
    report = verify_gap_values(gaps, bound)
    elapsed = time.perf_counter() - t0
    ok = report.passed and elapsed < 60.0
    _report(6, "strongly convex iteration bound", ok,
            "T=%d, mean gap %.2e vs eps %.2e%s, %.1fs"
            % (steps, report.mean_gap, eps,
               ", 2x slack used" if report.slack_used else "", elapsed))
    assert report.passed
    assert elapsed < 60.0


def test_criterion_07_closed_form_agreement():
    """lasso/elastic-net/svm gaps match the general evaluator to 1e-10."""
    t0 = time.perf_counter()
    rng = _rng(7)
    worst = 0.0
    p = regression_problem("lasso", d=10, n=20, lam=0.1, seed=7)
    for _ in range(100):
        a = rng.normal(size=20)
        worst = max(worst, abs(lasso_gap(p, a)
                               - duality_gap_general(p, a, bound=p.bound)))
    p = regression_problem("elastic_net", d=10, n=20, lam=0.1, seed=7)
    for _ in range(100):
        a = rng.normal(size=20)
        worst = max(worst, abs(elastic_net_gap(p, a)
                               - duality_gap_general(p, a)))
    p = svm_problem(d=10, n=20, seed=7)
    for _ in range(100):
        a = p.reg.y * rng.random(20)
        worst = max(worst, abs(svm_gap(p, a) - duality_gap_general(p, a)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 5.0
    _report(7, "closed-form gap agreement", ok,
            "max diff %.2e over 300 iterates, %.1fs" % (worst, elapsed))
    assert worst <= 1e-10
    assert elapsed < 5.0


def _tight_reference(p):
    # converged run whose own certificate pins D(alpha*) to 1e-10
    res = coordinate_descent(p, SolverConfig(max_epochs=200_000,
                                             gap_tolerance=1e-11, seed=9))
    rec = res.trace[-1]
    assert rec.gap <= 1e-10, "reference run is not tight enough"
    return rec.objective


S_GRID = np.linspace(0.0, 1.0, 11)


def test_criterion_08_per_step_lemmas():
    """Suboptimality and expected-improvement inequalities, slack 1e-8.

    For each random state: u is a conjugate subgradient at -A^T w(alpha)
    (ball-modified for lasso in the global inequality, per-coordinate
    box-modified in the separable one) and both right-hand sides are
    evaluated on an 11-point s grid in [0, 1].  The reference optimum is
    certified to 1e-10, two orders below the slack.
    """
    t0 = time.perf_counter()
    rng = _rng(8)
    worst_global = math.inf
    worst_step = math.inf
    states = 0
    for inst in range(10):
        n = 3 + inst % 4
        d = 3 + inst % 5
        kind = ("lasso", "elastic_net", "svm")[inst % 3]
        if kind == "svm":
            p = svm_problem(d=d, n=n, seed=inst, lam=0.5)
        else:
            p = regression_problem(kind, d=d, n=n, lam=0.3, eta=0.5,
                                   seed=inst)
        ref = _tight_reference(p)
        beta = p.loss.beta
        mu = p.reg.mu
        colsq = p.matrix.column_norms_sq()
        box = SupportBound(p.bound.radius, "box") if kind == "lasso" else None
        for rep in range(5):
            states += 1
            if kind == "svm":
                alpha = p.reg.y * rng.random(n)
            else:
                alpha = rng.normal(size=n) * 0.8
            if kind == "lasso":  # keep the state inside the support bound
                norm1 = float(np.abs(alpha).sum())
                if norm1 > 0.9 * p.bound.radius:
                    alpha *= 0.9 * p.bound.radius / norm1
            v = matvec(p.matrix, alpha)
            D = objective_value(p, alpha, v=v)
            x = -transpose_matvec(p.matrix, p.loss.gradient(v))

            # global inequality: D(a) - D(a*) >= s G + s(1-s) mu/2 |u-a|^2
            #                                   - s^2/(2 beta) |A(u-a)|^2
            if kind == "lasso":
                u = modified_conjugate_subgradient(x, p.reg, p.bound)
            else:
                u = p.reg.conjugate_subgradient(x)
            G = duality_gap(p, alpha, v=v)
            diff = u - alpha
            nrm2 = float(diff @ diff)
            adiff = matvec(p.matrix, diff)
            anrm2 = float(adiff @ adiff)
            for s in S_GRID:
                rhs = (s * G + 0.5 * s * (1.0 - s) * mu * nrm2
                       - 0.5 * s * s * anrm2 / beta)
                worst_global = min(worst_global, (D - ref) - rhs)

            # separable inequality: mean exact-step improvement
            #   >= (s/n) G - s^2/(2n) sum |A_i|^2 d_i^2 / beta
            #      + s(1-s) mu/(2n) sum d_i^2
            if kind == "lasso":
                usep = modified_conjugate_subgradient(x, p.reg, box)
                gsep = duality_gap_general(p, alpha, v=v, bound=box)
            else:
                usep, gsep = u, G
            imp = 0.0
            for i in range(n):
                cand = alpha.copy()
                cand[i] = exact_coordinate_step(p, alpha, i, v=v)
                imp += D - objective_value(p, cand)
            imp /= n
            dsep = usep - alpha
            quad_a = float((colsq * dsep * dsep).sum()) / n
            quad_i = float(dsep @ dsep) / n
            for s in S_GRID:
                rhs = ((s / n) * gsep - 0.5 * s * s * quad_a / beta
                       + 0.5 * s * (1.0 - s) * mu * quad_i)
                worst_step = min(worst_step, imp - rhs)
    elapsed = time.perf_counter() - t0
    ok = (worst_global >= -1e-8 and worst_step >= -1e-8 and states == 50
          and elapsed < 10.0)
    _report(8, "per-step improvement inequalities", ok,
            "min slack global %.2e, separable %.2e, %d states, %.1fs"
            % (worst_global, worst_step, states, elapsed))
    assert worst_global >= -1e-8
    assert worst_step >= -1e-8
    assert states == 50
    assert elapsed < 10.0


def _svm_toy(n, seed):
    # feature magnitudes are chosen so a visible share of the optimal dual
    # mass sits strictly inside the box: with unit columns and lam = 1/n
    # every coordinate clips to a corner and the exact solver finishes in a
    # few epochs, leaving nothing for the averaged-gap trend to measure
    rng = _rng(900 + seed)
    M = 3.0 * rng.normal(size=(5, n))
    y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    return svm_dual(SparseMatrix.from_dense(M), y, 1.0 / n)


def test_criterion_09_averaged_gap_trend():
    """Mean gap of the window average drops 5x between t=20n and t=200n."""
    t0 = time.perf_counter()
    early = []
    late = []
    n = 40
    for seed in range(30):
        p = _svm_toy(n, seed)  # lam = 1/n
        res = coordinate_descent(p, SolverConfig(max_steps=200 * n,
                                                 gap_tolerance=0.0,
                                                 averaging_start=0,
                                                 checkpoint_every=200,
                                                 seed=seed))
        early.append(duality_gap(p, averaged_iterate(res, 10 * n, 20 * n)))
        late.append(duality_gap(p, averaged_iterate(res, 100 * n, 200 * n)))
    ratio = float(np.mean(late) / np.mean(early))
    elapsed = time.perf_counter() - t0
    ok = ratio <= 0.2 and elapsed < 60.0
    _report(9, "averaged gap trend", ok,
            "mean gap ratio %.3f (needs <= 0.2), %.1fs" % (ratio, elapsed))
    assert ratio <= 0.2
    assert elapsed < 60.0


def test_criterion_10_elastic_net_blowup():
    """The elastic-net gap diverges as eta -> 0 where the lasso gap stays
    finite."""
    t0 = time.perf_counter()
    A = SparseMatrix.from_dense(np.eye(2))
    b = np.array([1.0, 1.0])
    lam = 0.5
    alpha = np.zeros(2)
    g_tiny = elastic_net_gap(elastic_net(A, b, lam, 1e-3), alpha)
    g_mild = elastic_net_gap(elastic_net(A, b, lam, 0.1), alpha)
    g_lasso = lasso_gap(lasso(A, b, lam), alpha)
    elapsed = time.perf_counter() - t0
    ok = (g_tiny > 10.0 * g_mild and math.isfinite(g_lasso)
          and elapsed < 1.0)
    _report(10, "elastic-net small-eta blowup", ok,
            "gap(1e-3)=%.1f vs gap(0.1)=%.2f, lasso gap %.2f, %.2fs"
            % (g_tiny, g_mild, g_lasso, elapsed))
    assert g_tiny > 10.0 * g_mild
    assert math.isfinite(g_lasso)
    assert elapsed < 1.0


def test_criterion_11_spectral_norm_oracle():
    """Power-iteration sigma matches dense eigendecomposition to 1e-6."""
    t0 = time.perf_counter()
    rng = _rng(11)
    worst = 0.0
    for _ in range(20):
        d = int(rng.integers(1, 21))
        n = int(rng.integers(1, 21))
        M = rng.normal(size=(d, n))
        sig = matrix_constants(SparseMatrix.from_dense(M)).sigma
        dense = float(np.linalg.eigvalsh(M.T @ M)[-1])
        worst = max(worst, abs(sig - dense) / dense)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 2.0
    _report(11, "spectral constant oracle", ok,
            "max rel err %.2e over 20 matrices, %.1fs" % (worst, elapsed))
    assert worst <= 1e-6
    assert elapsed < 2.0
