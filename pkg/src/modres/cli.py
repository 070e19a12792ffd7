"""Command-line entry point: ``modres <command> [options]``."""

import argparse
import json
import os
import sys

from . import charsums, thresholds
from .errors import CapacityError, InputDomainError
from .experiments import ExperimentConfig, run
from .graph import read_graph, sample_gnp
from .params import DistributionSpec, ModParams
from .subgraphs import (LocalSearchParams, count_good, count_good_alpha, exact_f,
                        exact_f_alpha, local_search_f)


def _int_list(text):
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise InputDomainError(f"expected comma-separated integers, got {text!r}") from None


def _default_workers():
    try:
        return max(1, int(os.environ.get("MODRES_WORKERS", "1")))
    except ValueError:
        return 1


def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--graph", default=None, help="graph file in the 0/1 matrix text format")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--alpha", default=None, help="comma-separated a0,a1,...; fractions allowed")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--budget", type=int, default=None, help="local-search step budget")
    p.add_argument("--timing", action="store_true", help="include wall-clock runtimes")


def build_parser():
    parser = argparse.ArgumentParser(prog="modres", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in [
        ("threshold", "threshold k(n,q) or k(n,q,alpha) as JSON"),
        ("entropy-root", "largest root x0 of h(x)"),
        ("f-exact", "exact f(G,r,q) or f(G,alpha,q)"),
        ("f-search", "local search for a good set"),
        ("count", "number of good k-subsets"),
        ("partition-exact", "p(G,r,q) per trial, capped"),
        ("partition-search", "balanced (r,q)-partition search per trial"),
        ("expect", "Monte Carlo mean of X_k against the exact expectation"),
        ("scan", "distribution of f - k(n,q) over sampled graphs"),
    ]:
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name == "partition-exact":
            p.add_argument("--cap", type=int, default=2)

    p = sub.add_parser("dist", help="exact residue probabilities")
    _common(p)
    p.add_argument("which", choices=("sum", "sym", "joint", "asym"))
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--u", default=None)
    p.add_argument("--v", default=None)
    p.add_argument("--rows", type=int, default=None, help="row count s for asym")
    p.add_argument("--method", default=None)

    p = sub.add_parser("decay", help="error-decay table as CSV")
    _common(p)
    p.add_argument("--mode", choices=("sum", "symmetric", "asym"), default="symmetric")
    p.add_argument("--m-min", type=int, default=1)
    p.add_argument("--m-max", type=int, default=6)
    return parser


def _alpha(args):
    return None if args.alpha is None else DistributionSpec.parse(args.alpha, args.q)


def _graph(args):
    if args.graph is not None:
        return read_graph(args.graph)
    return sample_gnp(args.n, args.seed)


def _emit(text, args, default_fmt="json"):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(args, default="csv"):
    if args.format:
        return args.format
    if args.out and args.out.endswith(".json"):
        return "json"
    if args.out and args.out.endswith(".csv"):
        return "csv"
    return default


def _probability_json(p):
    return json.dumps({"value": None if p.value is None else str(p.value),
                       "approx": p.approx, "method": p.method}) + "\n"


def _cmd_dist(args):
    q = args.q
    if args.which == "sum":
        p = charsums.prob_sum_mod(args.n, args.a, q, args.method or "closed-form")
    elif args.which == "sym":
        p = charsums.prob_symmetric(_int_list(args.v or ""), q, args.method or "enumeration")
    elif args.which == "asym":
        v = _int_list(args.v or "")
        s = len(v) if args.rows is None else args.rows
        p = charsums.prob_asym_rowsums(s, args.n, v, q, args.method or "closed-form")
    else:
        p = charsums.prob_joint(_int_list(args.u or ""), _int_list(args.v or ""), q,
                                args.method or "enumeration")
    return _probability_json(p)


def _config(args, kind, **extra):
    graph = read_graph(args.graph) if args.graph else None
    return ExperimentConfig(kind=kind, n=graph.n if graph else args.n, q=args.q, r=args.r,
                            alpha=_alpha(args), k=args.k, t=args.t, trials=args.trials,
                            seed=args.seed, workers=args.workers, budget=args.budget,
                            graph=graph, timing=args.timing, **extra)


def dispatch(args):
    cmd = args.command
    if cmd == "threshold":
        alpha = _alpha(args)
        rep = thresholds.threshold_k(args.n, args.q) if alpha is None else \
            thresholds.threshold_k_alpha(args.n, args.q, alpha)
        return rep.to_json() + "\n"
    if cmd == "entropy-root":
        alpha = _alpha(args) or DistributionSpec.indicator(args.q, args.r)
        x0 = thresholds.root_x0(alpha, args.q)
        return json.dumps({"q": args.q, "alpha": [float(a) for a in alpha.alpha],
                           "x0": x0, "argmax": thresholds.h_argmax(alpha, args.q)}) + "\n"
    if cmd == "dist":
        return _cmd_dist(args)
    if cmd == "decay":
        cfg = ExperimentConfig(kind="decay", q=args.q, mode=args.mode,
                               n_min=args.m_min, n_max=args.m_max)
        return run(cfg).render(_fmt(args))
    if cmd in ("f-exact", "f-search", "count"):
        G = _graph(args)
        alpha = _alpha(args)
        if cmd == "f-exact":
            res = exact_f(G, ModParams(args.q, args.r), args.workers) if alpha is None else \
                exact_f_alpha(G, args.q, alpha, args.workers)
            return res.to_json() + "\n"
        if cmd == "f-search":
            params = LocalSearchParams(seed=args.seed) if args.budget is None else \
                LocalSearchParams(seed=args.seed, max_steps=args.budget)
            return local_search_f(G, ModParams(args.q, args.r), args.k, params).to_json() + "\n"
        if args.k is None:
            raise InputDomainError("count needs --k")
        c = count_good(G, args.k, ModParams(args.q, args.r), args.workers) if alpha is None \
            else count_good_alpha(G, args.k, args.q, alpha, args.workers)
        return json.dumps({"n": G.n, "k": args.k, "q": args.q,
                           "r": None if alpha else args.r, "count": c}) + "\n"
    if cmd == "partition-exact":
        return run(_config(args, "partition", mode="exact", cap=args.cap)).render(_fmt(args))
    if cmd == "partition-search":
        return run(_config(args, "partition", mode="heuristic")).render(_fmt(args))
    if cmd == "expect":
        return run(_config(args, "expect")).render(_fmt(args))
    if cmd == "scan":
        return run(_config(args, "scan")).render(_fmt(args))
    raise InputDomainError(f"unknown command {cmd!r}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text = dispatch(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except InputDomainError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    _emit(text, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
