"""Largest good induced subgraphs: exhaustive Gray-code search and local search."""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels, rng
from .errors import CapacityError, InputDomainError
from .graph import as_mask, is_good, is_good_alpha, members
from .params import DistributionSpec, ModParams

EXACT_GUARD = 26


@dataclass
class SearchResult:
    best_size: int
    witness: int | None
    exact: bool
    nodes_explored: int

    def witness_list(self):
        return [] if self.witness is None else members(self.witness)

    def to_dict(self):
        return {
            "best_size": self.best_size,
            "witness": self.witness_list() if self.witness is not None else None,
            "exact": self.exact,
            "nodes_explored": self.nodes_explored,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclass
class LocalSearchParams:
    max_steps: int = 20_000
    restarts: int = 50
    seed: int = 0
    w_add: float = 0.0
    w_remove: float = 0.0
    w_swap: float = 1.0
    plateau: int = 1
    noise: float = 0.1

    def __post_init__(self):
        if self.max_steps < 1:
            raise InputDomainError("max_steps must be >= 1")
        if self.restarts < 1:
            raise InputDomainError("restarts must be >= 1")
        if min(self.w_add, self.w_remove, self.w_swap) < 0 or \
                self.w_add + self.w_remove + self.w_swap <= 0:
            raise InputDomainError("move weights must be non-negative with a positive sum")


def _alpha_bounds(n, alpha):
    lo = np.zeros((n + 1, alpha.q), np.int64)
    hi = np.zeros((n + 1, alpha.q), np.int64)
    for k in range(n + 1):
        for c, (a, b) in enumerate(alpha.bounds(k)):
            lo[k, c] = a
            hi[k, c] = b
    return lo, hi


_NO_BOUNDS = np.zeros((1, 1), np.int64)


def _scan_slice(args):
    indptr, indices, n, q, r, mode, lo, hi, prefix, nfree = args
    counts, best, mask = _kernels.subset_scan(indptr, indices, n, q, r, mode, lo, hi, prefix, nfree)
    return counts, int(best), int(mask)


def _scan(G, q, r, mode, lo, hi, workers=1):
    if G.n > EXACT_GUARD:
        raise CapacityError(
            f"exhaustive search is limited to n <= {EXACT_GUARD} (got n={G.n}); use local_search_f")
    indptr, indices = G.csr()
    n = G.n
    workers = max(1, int(workers))
    top = min(n, (workers - 1).bit_length()) if workers > 1 else 0
    nfree = n - top
    jobs = [(indptr, indices, n, q, r, mode, lo, hi, p << nfree, nfree) for p in range(1 << top)]
    if top and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_slice, jobs))
    else:
        parts = [_scan_slice(job) for job in jobs]
    counts = np.zeros(n + 1, np.int64)
    best, best_mask = 0, 0
    for c, b, m in parts:
        counts += c
        if b > best or (b == best and b > 0 and _lex_less(m, best_mask)):
            best, best_mask = b, m
    return counts, best, best_mask


def _lex_less(a, b):
    d = a ^ b
    return bool(a & d & -d)


def _result(counts, best, mask, n):
    return SearchResult(best_size=best, witness=mask if best > 0 else None,
                        exact=True, nodes_explored=1 << n)


def exact_f(G, mp: ModParams, workers=1):
    """Largest good induced subgraph by exhaustive Gray-code enumeration."""
    counts, best, mask = _scan(G, mp.q, mp.r, 0, _NO_BOUNDS, _NO_BOUNDS, workers)
    return _result(counts, best, mask, G.n)


def exact_f_alpha(G, q, alpha: DistributionSpec, workers=1):
    """Largest induced subgraph whose residue histogram rounds alpha."""
    if alpha.q != q:
        raise InputDomainError(f"alpha has {alpha.q} classes, q={q}")
    lo, hi = _alpha_bounds(G.n, alpha)
    counts, best, mask = _scan(G, q, 0, 1, lo, hi, workers)
    return _result(counts, best, mask, G.n)


def good_counts(G, mp: ModParams, workers=1):
    """Number of good k-subsets for every k = 0..n (entry 0 is always 0)."""
    counts, _, _ = _scan(G, mp.q, mp.r, 0, _NO_BOUNDS, _NO_BOUNDS, workers)
    return [int(c) for c in counts]


def count_good(G, k, mp: ModParams, workers=1):
    """X_k: the number of good induced subgraphs on exactly k vertices."""
    if not 1 <= k <= G.n:
        raise InputDomainError(f"need 1 <= k <= n, got k={k}, n={G.n}")
    return good_counts(G, mp, workers)[k]


def count_good_alpha(G, k, q, alpha, workers=1):
    if not 1 <= k <= G.n:
        raise InputDomainError(f"need 1 <= k <= n, got k={k}, n={G.n}")
    if alpha.q != q:
        raise InputDomainError(f"alpha has {alpha.q} classes, q={q}")
    lo, hi = _alpha_bounds(G.n, alpha)
    counts, _, _ = _scan(G, q, 0, 1, lo, hi, workers)
    return int(counts[k])


def local_search_f(G, mp: ModParams, k_target=None, params=None):
    """Seeded multi-restart local search for a good set of size ``k_target``.

    Not exhaustive; a returned witness is always re-verified with ``is_good``.
    ``k_target`` defaults to the threshold k(n, q).
    """
    params = params or LocalSearchParams()
    if k_target is None:
        from .thresholds import threshold_k
        k_target = threshold_k(G.n, mp.q).k if G.n >= 1 else 0
    if not 0 <= k_target <= G.n:
        raise InputDomainError(f"k_target must lie in [0, n], got {k_target}")
    if G.n == 0 or k_target == 0:
        return SearchResult(0, None, False, 0)
    indptr, indices = G.csr()
    seeds = np.array([rng.derive_seed(params.seed, i) for i in range(params.restarts)],
                     dtype=np.uint64)
    best, best_in, steps = _kernels.local_search_subset(
        indptr, indices, G.n, mp.q, mp.r, k_target, seeds, params.max_steps,
        params.w_add, params.w_remove, params.w_swap, params.plateau, params.noise)
    if best == 0:
        return SearchResult(0, None, False, int(steps))
    witness = as_mask(np.flatnonzero(best_in).tolist())
    if not is_good(G, witness, mp):
        raise RuntimeError("local search produced an invalid witness")
    return SearchResult(int(best), witness, False, int(steps))


def default_workers():
    try:
        return max(1, int(os.environ.get("MODRES_WORKERS", "1")))
    except ValueError:
        return 1
