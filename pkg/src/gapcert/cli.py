"""Command-line interface: solve, rates, compare.

Exit codes: 0 success/converged, 1 invalid problem specification or data,
2 finished without reaching the requested tolerance (or a failed
verification).  Trace CSVs follow the certificate schema; summaries are
single JSON objects.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import rates as rates_mod
from .certificates import trace_to_csv
from .data import load_libsvm, normalize_columns, transpose
from .datasets import BUNDLED, bundled_path
from .lipschitzing import safe_bound
from .problems import (elastic_net, lasso, logistic_elastic_net, logistic_l1,
                       ridge, svm_dual)
from .solvers import (SolverConfig, averaged_iterate, coordinate_descent,
                      prox_gradient, reference_optimum)
from .certificates import duality_gap

PROBLEMS = ("lasso", "elastic_net", "ridge", "svm", "logistic_l1",
            "logistic_en")
THEOREMS = ("cd-strongly-convex", "cd-bounded-support", "cd-l1-safe",
            "cd-elastic-net-primal", "cd-elastic-net-dual")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, but this tool uses 2 for
    # "ran out of epochs", so bad invocations exit 1 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(1)


def _add_common(p):
    p.add_argument("--data", required=True,
                   help="LIBSVM file, or a bundled name (%s)"
                        % ", ".join(BUNDLED))
    p.add_argument("--problem", required=True, choices=PROBLEMS)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="regularization weight (default 1/n)")
    p.add_argument("--eta", type=float, default=0.5,
                   help="elastic-net mixing parameter (default 0.5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-6,
                   help="stop when the duality gap falls below this")
    p.add_argument("--bound", choices=("safe", "levelset"), default="safe",
                   help="support-bound policy for gap evaluation")
    p.add_argument("--normalize", action="store_true",
                   help="rescale columns to unit norm before solving")
    p.add_argument("--checkpoint-every", type=int, default=1,
                   help="epochs between certified checkpoints")


def build_parser():
    p = _Parser(prog="gapcert",
                description="Certified solvers for norm-regularized "
                            "empirical risk minimization")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", parents=[], help="run one solver")
    _add_common(ps)
    ps.add_argument("--solver", choices=("cd", "pg"), default="cd")
    ps.add_argument("--out", default=None,
                    help="trace CSV path (default: CSV to stdout)")

    pr = sub.add_parser("rates", help="iteration bounds and verification")
    _add_common(pr)
    pr.add_argument("--theorem", choices=THEOREMS, default=None,
                    help="bound to compute (default: natural per problem)")
    pr.add_argument("--verify", choices=THEOREMS, default=None,
                    help="run the multi-seed experiment for this bound")
    pr.add_argument("--seeds", type=int, default=30)
    pr.add_argument("--eps", type=float, default=None,
                    help="target accuracy (default 1e-3 * eps0)")
    pr.add_argument("--eps0", type=float, default=None,
                    help="initial suboptimality (default: measured)")
    pr.add_argument("--ref-epochs", type=int, default=20000,
                    help="reference-run length for measuring eps0")

    pc = sub.add_parser("compare", help="run several solvers side by side")
    _add_common(pc)
    pc.add_argument("--solvers", default="cd,pg",
                    help="comma-separated subset of cd,pg")
    pc.add_argument("--out", default=None)
    return p


def _load(args):
    path = bundled_path(args.data) if args.data in BUNDLED else args.data
    return load_libsvm(path)


def _build_problem(args):
    ds = _load(args)
    if args.problem == "svm":
        A = ds.matrix
        y = ds.labels
        if not np.all(np.abs(y) == 1.0):
            raise ValueError("svm needs +/-1 labels")
    else:
        # regression/classification losses live on the row side: transpose
        # so that examples index rows and coordinates index columns
        A = transpose(ds.matrix)
        y = ds.labels
    if args.normalize:
        A = normalize_columns(A)
    n = A.shape[1]
    lam = args.lam if args.lam is not None else 1.0 / n
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if args.problem == "lasso":
        return lasso(A, y, lam)
    if args.problem == "elastic_net":
        return elastic_net(A, y, lam, args.eta)
    if args.problem == "ridge":
        return ridge(A, y, lam)
    if args.problem == "svm":
        return svm_dual(A, y, lam)
    if args.problem == "logistic_l1":
        return logistic_l1(A, y, lam)
    return logistic_elastic_net(A, y, lam, args.eta)


def _solver_config(args, **overrides):
    kw = dict(max_epochs=args.epochs, gap_tolerance=args.tol, seed=args.seed,
              checkpoint_every=args.checkpoint_every,
              bound_refresh=args.bound == "levelset")
    kw.update(overrides)
    return SolverConfig(**kw)


def _summary(result):
    last = result.trace[-1]
    return {"final_gap": last.gap, "objective": last.objective,
            "steps": result.steps, "converged": result.converged}


def cmd_solve(args):
    problem = _build_problem(args)
    run = coordinate_descent if args.solver == "cd" else prox_gradient
    result = run(problem, _solver_config(args))
    csv_text = trace_to_csv(result.trace)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
        print(json.dumps(_summary(result)))
    else:
        sys.stdout.write(csv_text)
        print(json.dumps(_summary(result)), file=sys.stderr)
    return 0 if result.converged else 2


def cmd_compare(args):
    names = [s.strip() for s in args.solvers.split(",") if s.strip()]
    if not names or any(s not in ("cd", "pg") for s in names):
        raise ValueError("--solvers must be a subset of cd,pg")
    problem = _build_problem(args)
    runs = {}
    for s in names:
        run = coordinate_descent if s == "cd" else prox_gradient
        runs[s] = run(problem, _solver_config(args))
    rows = max(len(r.trace) for r in runs.values())
    lines = ["epoch," + ",".join("gap_%s" % s for s in names)]
    for k in range(rows):
        cells = [str(k * args.checkpoint_every)]
        for s in names:
            tr = runs[s].trace
            cells.append(repr(float(tr[k].gap)) if k < len(tr) else "")
        lines.append(",".join(cells))
    csv_text = "\n".join(lines) + "\n"
    summary = json.dumps({s: _summary(r) for s, r in runs.items()})
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
        print(summary)
    else:
        sys.stdout.write(csv_text)
        print(summary, file=sys.stderr)
    return 0 if all(r.converged for r in runs.values()) else 2


_NATURAL = {"lasso": "cd-l1-safe", "logistic_l1": "cd-l1-safe",
            "elastic_net": "cd-elastic-net-primal",
            "logistic_en": "cd-elastic-net-primal",
            "ridge": "cd-strongly-convex", "svm": "cd-bounded-support"}


def _rate_inputs(args, problem, eps0):
    consts = problem.constants()
    d, n = problem.matrix.shape
    reg = problem.reg
    return rates_mod.RateInputs(
        n=n, d=d, sigma=consts.sigma, beta=problem.loss.beta,
        mu=getattr(reg, "mu", None), L=getattr(reg, "support_radius", None),
        R=consts.R, P=consts.P, eps0=eps0, lam=getattr(reg, "lam", None),
        eta=getattr(reg, "eta", None))


def _compute_bound(name, args, problem, inputs, eps):
    if name == "cd-strongly-convex":
        return rates_mod.cd_strongly_convex_bound(inputs, eps)
    if name == "cd-bounded-support":
        return rates_mod.cd_bounded_support_bound(inputs, eps)
    if name == "cd-l1-safe":
        B = problem.bound.radius if problem.bound is not None else \
            safe_bound(problem.loss, problem.reg.lam).radius
        return rates_mod.cd_l1_bound(inputs, eps, B)
    if name == "cd-elastic-net-primal":
        return rates_mod.cd_elastic_net_bound(inputs, eps, side="primal")
    return rates_mod.cd_elastic_net_bound(inputs, eps, side="dual")


def cmd_rates(args):
    problem = _build_problem(args)
    name = args.verify or args.theorem or _NATURAL[args.problem]
    eps0 = args.eps0
    if eps0 is None:
        from .certificates import objective_value
        d0 = objective_value(problem, np.zeros(problem.matrix.shape[1]))
        dstar = reference_optimum(problem, epochs=args.ref_epochs)
        eps0 = d0 - dstar
    eps = args.eps if args.eps is not None else 1e-3 * eps0
    inputs = _rate_inputs(args, problem, eps0)
    bound = _compute_bound(name, args, problem, inputs, eps)
    if args.verify is None:
        print(bound.to_json())
        return 0

    n = problem.matrix.shape[1]
    steps = max(1, math.ceil(bound.T))
    gaps = []
    for k in range(args.seeds):
        overrides = dict(max_steps=steps, gap_tolerance=0.0,
                         checkpoint_every=max(1, steps // n + 1),
                         seed=args.seed + k)
        if bound.averaged:
            overrides["averaging_start"] = min(int(bound.T0), steps - 1)
        res = coordinate_descent(problem, _solver_config(args, **overrides))
        if bound.averaged:
            abar = averaged_iterate(res)
            gaps.append(duality_gap(problem, abar))
        else:
            gaps.append(res.trace[-1].gap)
    report = rates_mod.verify_gap_values(gaps, bound)
    print(report.to_json())
    return 0 if report.passed else 2


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "rates":
            return cmd_rates(args)
        return cmd_compare(args)
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
