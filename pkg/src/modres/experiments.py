"""Seeded Monte Carlo drivers and their CSV/JSON emission.

Trial ``i`` always uses ``derive_seed(master_seed, i)`` and rows are emitted
in trial order, so the output bytes do not depend on the worker count.
Wall-clock timings are only written when explicitly requested.
"""

import csv
import io
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import charsums, rng
from .errors import InputDomainError
from .graph import Graph, sample_gnp
from .params import DistributionSpec, ModParams
from .partitions import (PartitionSearchParams, min_parts_witness, search_partition,
                         verify_partition)
from .subgraphs import count_good, count_good_alpha, exact_f
from .thresholds import threshold_k

KINDS = ("expect", "scan", "partition", "decay")


@dataclass
class ExperimentConfig:
    kind: str
    n: int = 10
    q: int = 2
    r: int = 0
    alpha: DistributionSpec | None = None
    k: int | None = None
    t: int | None = None
    trials: int = 1
    seed: int = 0
    workers: int = 1
    budget: int | None = None
    cap: int = 2
    mode: str = "exact"
    graph: Graph | None = None
    timing: bool = False
    n_min: int = 1
    n_max: int = 30

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputDomainError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise InputDomainError("trials must be >= 1")
        if self.workers < 1:
            raise InputDomainError("workers must be >= 1")
        if self.kind != "decay":
            ModParams(self.q, self.r)

    def mod_params(self):
        return ModParams(self.q, self.r)


@dataclass
class ExperimentRecord:
    kind: str
    columns: list
    rows: list
    summary: dict = field(default_factory=dict)

    def to_csv(self):
        fields = ["row"] + self.columns + [c for c in self.summary if c not in self.columns]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({"row": "trial", **{k: _fmt(v) for k, v in row.items()}})
        if self.summary:
            w.writerow({"row": "summary", **{k: _fmt(v) for k, v in self.summary.items()}})
        return buf.getvalue()

    def to_json(self):
        return json.dumps({"kind": self.kind, "rows": self.rows, "summary": self.summary},
                          indent=1, default=_json_default) + "\n"

    def render(self, fmt):
        return self.to_json() if fmt == "json" else self.to_csv()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, default=_json_default, sort_keys=True)
    if v is None:
        return ""
    return v


def _json_default(o):
    if isinstance(o, Fraction):
        return float(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def summarize(values):
    """Mean, sample standard deviation and standard error of the mean."""
    n = len(values)
    mean = float(sum(Fraction(v) for v in values) / n)
    if n > 1:
        var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
        sd = math.sqrt(var)
    else:
        sd = 0.0
    return {"trials": n, "mean": mean, "sd": sd, "se": sd / math.sqrt(n)}


def _graph_for(cfg, trial_seed):
    return cfg.graph if cfg.graph is not None else sample_gnp(cfg.n, trial_seed)


# ------------------------------------------------------------ trial bodies

def _expect_trial(cfg, i):
    s = rng.derive_seed(cfg.seed, i)
    G = _graph_for(cfg, s)
    if cfg.alpha is not None:
        x = count_good_alpha(G, cfg.k, cfg.q, cfg.alpha)
    else:
        x = count_good(G, cfg.k, cfg.mod_params())
    return {"trial": i, "seed": s, "value": x}


def _scan_trial(cfg, i):
    s = rng.derive_seed(cfg.seed, i)
    G = _graph_for(cfg, s)
    res = exact_f(G, cfg.mod_params())
    k = threshold_k(G.n, cfg.q).k
    return {"trial": i, "seed": s, "value": res.best_size, "k": k, "diff": res.best_size - k}


def _partition_trial(cfg, i):
    s = rng.derive_seed(cfg.seed, i)
    G = _graph_for(cfg, s)
    mp = cfg.mod_params()
    if cfg.mode == "exact":
        p, P = min_parts_witness(G, mp, min(cfg.cap, max(G.n, 1)))
        ok = p is not None
        verified = ok and G.n > 0 and all(
            part == 0 or _naive_good(G, part, mp) for part in P.parts)
        return {"trial": i, "seed": s, "value": "" if p is None else p,
                "success": int(ok), "verified": int(bool(verified) or G.n == 0),
                "witness": P.as_lists() if ok else None}
    t = cfg.t or cfg.q + 1
    params = PartitionSearchParams(seed=s) if cfg.budget is None else \
        PartitionSearchParams(seed=s, max_steps=cfg.budget)
    started = time.perf_counter()
    res = search_partition(G, mp, t, params)
    row = {"trial": i, "seed": s, "value": int(res.success), "success": int(res.success),
           "objective": res.best_objective, "steps": res.steps,
           "verified": int(res.success and verify_partition(G, res.partition, mp, t)),
           "witness": res.partition.as_lists() if res.success else None}
    if cfg.timing:
        row["runtime"] = time.perf_counter() - started
    return row


def _naive_good(G, part, mp):
    from .graph import members
    verts = members(part)
    return all(sum(G.has_edge(v, w) for w in verts) % mp.q == mp.r for v in verts)


_BODIES = {"expect": _expect_trial, "scan": _scan_trial, "partition": _partition_trial}


def _run_one(args):
    kind, cfg, i = args
    if cfg.timing and kind != "partition":
        started = time.perf_counter()
        row = _BODIES[kind](cfg, i)
        row["runtime"] = time.perf_counter() - started
        return row
    return _BODIES[kind](cfg, i)


def run_trials(cfg):
    """All trial rows of ``cfg`` in trial order."""
    jobs = [(cfg.kind, replace(cfg, workers=1), i) for i in range(cfg.trials)]
    if cfg.workers > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_run_one, jobs, chunksize=max(1, cfg.trials // (4 * cfg.workers))))
    else:
        rows = [_run_one(job) for job in jobs]
    rows.sort(key=lambda row: row["trial"])
    return rows


# -------------------------------------------------------------- experiments

def expectation_reference(n, k, q, r=0, alpha=None):
    """Exact E[X_k] = C(n, k) P[G(k, 1/2) is good] via character sums.

    Uses exhaustive enumeration when C(k, 2) is within the enumeration cap and
    the character-sum evaluation otherwise.
    """
    method = "enumeration" if k * (k - 1) // 2 <= charsums.ENUM_EDGE_CAP else "fourier"
    if alpha is None:
        p = charsums.prob_symmetric((r,) * k, q, method)
        return math.comb(n, k) * float(p)
    table = charsums.symmetric_table(k, q, method)
    total = Fraction(0) if method == "enumeration" else 0.0
    for idx, pv in enumerate(table):
        hist = [0] * q
        x = idx
        for _ in range(k):
            hist[x % q] += 1
            x //= q
        if alpha.histogram_ok(hist):
            total += pv
    return math.comb(n, k) * float(total)


def expectation_experiment(cfg):
    if cfg.graph is None and cfg.n > 26:
        raise InputDomainError("expectation experiments use exact counting and need n <= 26")
    if cfg.k is None or not 1 <= cfg.k <= cfg.n:
        raise InputDomainError("expectation experiments need 1 <= k <= n")
    rows = run_trials(cfg)
    summary = summarize([row["value"] for row in rows])
    summary["reference"] = expectation_reference(cfg.n, cfg.k, cfg.q, cfg.r, cfg.alpha)
    summary["asymptotic"] = math.comb(cfg.n, cfg.k) / cfg.q ** cfg.k
    columns = ["trial", "seed", "value"] + (["runtime"] if cfg.timing else [])
    return ExperimentRecord("expect", columns, rows, summary)


def threshold_scan(cfg):
    if cfg.graph is None and cfg.n > 24:
        raise InputDomainError("threshold scans use exact search and need n <= 24")
    rows = run_trials(cfg)
    summary = summarize([row["value"] for row in rows])
    summary["k"] = threshold_k(cfg.n if cfg.graph is None else cfg.graph.n, cfg.q).k
    diffs = Counter(row["diff"] for row in rows)
    summary["diff_distribution"] = {str(d): diffs[d] for d in sorted(diffs)}
    columns = ["trial", "seed", "value", "k", "diff"] + (["runtime"] if cfg.timing else [])
    return ExperimentRecord("scan", columns, rows, summary)


def partition_experiment(cfg):
    if cfg.mode not in ("exact", "heuristic"):
        raise InputDomainError(f"mode must be 'exact' or 'heuristic', got {cfg.mode!r}")
    rows = run_trials(cfg)
    successes = [row["success"] for row in rows]
    summary = summarize(successes)
    summary["success_rate"] = summary.pop("mean")
    summary["verified_all"] = int(all(row["verified"] for row in rows if row["success"]))
    if cfg.mode == "exact":
        columns = ["trial", "seed", "value", "success", "verified", "witness"]
    else:
        columns = ["trial", "seed", "value", "success", "objective", "steps", "verified",
                   "witness"]
        summary["t"] = cfg.t or cfg.q + 1
    if cfg.timing:
        columns.append("runtime")
    return ExperimentRecord("partition", columns, rows, summary)


def decay_experiment(cfg):
    """Error-decay table.

    ``sum`` mode scans n_min..n_max with the proven bound column;
    ``symmetric`` and ``asym`` wrap :func:`charsums.decay_profile`.
    """
    if cfg.mode == "sum":
        rows = []
        for n in range(cfg.n_min, cfg.n_max + 1):
            err = max(abs(charsums.prob_sum_mod(n, a, cfg.q).value - Fraction(1, cfg.q))
                      for a in range(cfg.q))
            bound = charsums.sum_mod_bound(n, cfg.q)
            rows.append({"m": n, "q": cfg.q, "mode": "sum", "error": float(err),
                         "normalized_error": float(err * cfg.q), "bound": bound,
                         "within_bound": int(float(err) <= bound + 1e-12)})
        summary = {"all_within_bound": int(all(row["within_bound"] for row in rows))}
        return ExperimentRecord("decay", ["m", "q", "mode", "error", "normalized_error",
                                          "bound", "within_bound"], rows, summary)
    profile = charsums.decay_profile(cfg.q, cfg.n_min, cfg.n_max, cfg.mode)
    rows = [{"m": m, "q": q, "mode": mode, "normalized_error": float(err)}
            for m, q, mode, err in profile.rows]
    summary = {}
    if sum(1 for row in rows if row["normalized_error"] > 0) >= 2:
        summary["log_slope"] = profile.slope()
    return ExperimentRecord("decay", ["m", "q", "mode", "normalized_error"], rows, summary)


RUNNERS = {
    "expect": expectation_experiment,
    "scan": threshold_scan,
    "partition": partition_experiment,
    "decay": decay_experiment,
}


def run(cfg):
    return RUNNERS[cfg.kind](cfg)
