"""(r, q)-partitions: minimum part counts, balanced counts and balanced search.

Partitions are ordered tuples of parts.  The canonical balanced shape puts
the n mod t parts of size ceil(n/t) first.
"""

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import _kernels, rng
from .errors import CapacityError, InputDomainError
from .graph import is_good, members
from .params import ModParams

MIN_PARTS_GUARD = 12
BALANCED_COUNT_GUARD = 16
BALANCED_T_GUARD = 5


@dataclass(frozen=True)
class Partition:
    n: int
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        seen = 0
        for p in self.parts:
            if p < 0 or p >> self.n:
                raise InputDomainError("part contains a vertex outside [0, n)")
            if seen & p:
                raise InputDomainError("parts are not disjoint")
            seen |= p
        if seen != (1 << self.n) - 1:
            raise InputDomainError("parts do not cover every vertex")

    @classmethod
    def from_lists(cls, n, lists):
        return cls(n, tuple(sum(1 << v for v in part) for part in lists))

    @classmethod
    def from_assignment(cls, assignment, t):
        parts = [0] * t
        for v, p in enumerate(assignment):
            parts[int(p)] |= 1 << v
        return cls(len(assignment), tuple(parts))

    @property
    def t(self):
        return len(self.parts)

    def sizes(self):
        return [p.bit_count() for p in self.parts]

    def is_balanced(self):
        lo, hi = self.n // self.t, -(-self.n // self.t)
        return all(s in (lo, hi) for s in self.sizes())

    def as_lists(self):
        return [members(p) for p in self.parts]

    def to_json(self):
        return json.dumps(self.as_lists())


def balanced_sizes(n, t):
    if t < 1:
        raise InputDomainError(f"t must be >= 1, got {t}")
    lo, extra = divmod(n, t)
    return [lo + 1] * extra + [lo] * (t - extra)


def balanced_count(n, t):
    """M(n, t): number of ordered balanced partitions of n labelled vertices."""
    out = math.factorial(n)
    for s in balanced_sizes(n, t):
        out //= math.factorial(s)
    return out


def _part_good(G, part, mp):
    # the empty part only arises when n < t; it imposes no degree condition
    return part == 0 or is_good(G, part, mp)


def is_good_partition(G, P: Partition, mp: ModParams):
    return all(_part_good(G, part, mp) for part in P.parts)


def _good_table(G, mp):
    indptr, indices = G.csr()
    return _kernels.good_table(indptr, indices, G.n, mp.q, mp.r)


class _LazyGood:
    """Memoised goodness of vertex masks, computed on first lookup."""

    def __init__(self, G, mp):
        self.adj, self.q, self.r = G.adj, mp.q, mp.r
        self.memo = {}

    def __getitem__(self, mask):
        hit = self.memo.get(mask)
        if hit is None:
            adj, q, r = self.adj, self.q, self.r
            hit = True
            rest = mask
            while rest:
                low = rest & -rest
                if (adj[low.bit_length() - 1] & mask).bit_count() % q != r:
                    hit = False
                    break
                rest ^= low
            self.memo[mask] = hit
        return hit


def _split(remaining, parts_left, good):
    """A partition of ``remaining`` into exactly parts_left good blocks.

    Blocks are generated in canonical (restricted-growth) order: each new
    block contains the lowest unassigned vertex.
    """
    if parts_left == 1:
        return [remaining] if good[remaining] else None
    low = remaining & -remaining
    rest = remaining ^ low
    sub = rest
    while True:
        block = low | sub
        if block != remaining and good[block]:
            tail = _split(remaining ^ block, parts_left - 1, good)
            if tail is not None:
                return [block] + tail
        if sub == 0:
            break
        sub = (sub - 1) & rest
    return None


def min_parts_witness(G, mp: ModParams, cap=None):
    """(p, Partition) with the least number of good parts p <= cap, or (None, None)."""
    if G.n > MIN_PARTS_GUARD:
        raise CapacityError(f"exact_min_parts is limited to n <= {MIN_PARTS_GUARD}, got n={G.n}")
    cap = G.n if cap is None else cap
    if cap > max(G.n, 1) or cap < 1:
        raise InputDomainError(f"cap must lie in [1, n], got {cap}")
    if G.n == 0:
        return 0, Partition(0, ())
    good = _LazyGood(G, mp)
    full = G.full_mask
    for t in range(1, cap + 1):
        blocks = _split(full, t, good)
        if blocks is not None:
            return t, Partition(G.n, tuple(blocks))
    return None, None


def exact_min_parts(G, mp: ModParams, cap=None):
    """p(G, r, q) if it is at most ``cap``, else None."""
    return min_parts_witness(G, mp, cap)[0]


def count_balanced_good(G, mp: ModParams, t):
    """Number of ordered balanced t-part partitions with every part good."""
    if G.n > BALANCED_COUNT_GUARD or t > BALANCED_T_GUARD:
        raise CapacityError(
            f"count_balanced_good needs n <= {BALANCED_COUNT_GUARD}, t <= {BALANCED_T_GUARD}")
    if t < 1:
        raise InputDomainError(f"t must be >= 1, got {t}")
    good = _good_table(G, mp)
    sizes = balanced_sizes(G.n, t)

    @lru_cache(maxsize=None)
    def count(remaining, i):
        if i == t - 1:
            return 1 if good[remaining] else 0
        total = 0
        for combo in combinations(members(remaining), sizes[i]):
            block = sum(1 << v for v in combo)
            if good[block]:
                total += count(remaining ^ block, i + 1)
        return total

    return count(G.full_mask, 0)


@dataclass
class PartitionSearchParams:
    max_steps: int = 5_000
    restarts: int = 40
    seed: int = 0
    plateau: int = 0
    noise: float = 0.05

    def __post_init__(self):
        if self.max_steps < 1 or self.restarts < 1:
            raise InputDomainError("max_steps and restarts must be >= 1")


@dataclass
class PartitionSearchResult:
    partition: Partition | None
    best_objective: int
    steps: int
    verified: bool

    @property
    def success(self):
        return self.partition is not None


def verify_partition(G, P, mp, t):
    """Independent recheck: cover, disjointness, balance and per-part goodness."""
    if P.n != G.n or P.t != t or not P.is_balanced():
        return False
    union = 0
    for part in P.parts:
        if union & part:
            return False
        union |= part
        for v in members(part):
            deg = sum(1 for w in members(part) if w != v and G.has_edge(v, w))
            if deg % mp.q != mp.r:
                return False
    return union == G.full_mask


def search_partition(G, mp: ModParams, t=None, params=None):
    """Local search for a balanced ordered (r, q)-partition into t parts."""
    t = mp.q + 1 if t is None else t
    if t < 1:
        raise InputDomainError(f"t must be >= 1, got {t}")
    params = params or PartitionSearchParams()
    if G.n == 0:
        return PartitionSearchResult(Partition(0, (0,) * t), 0, 0, True)
    indptr, indices = G.csr()
    seeds = np.array([rng.derive_seed(params.seed, i) for i in range(params.restarts)], np.uint64)
    sizes = np.array(balanced_sizes(G.n, t), np.int64)
    obj, assignment, steps = _kernels.local_search_partition(
        indptr, indices, G.n, t, mp.q, mp.r, sizes, seeds, params.max_steps,
        params.plateau, params.noise)
    if obj != 0:
        return PartitionSearchResult(None, int(obj), int(steps), False)
    P = Partition.from_assignment(assignment.tolist(), t)
    ok = verify_partition(G, P, mp, t)
    if not ok:
        raise RuntimeError("partition search returned a partition that fails verification")
    return PartitionSearchResult(P, 0, int(steps), True)


@dataclass
class OverlapReport:
    matrix: list
    typical: bool

    def to_json(self):
        return json.dumps({"matrix": self.matrix, "typical": self.typical})


def overlap_typicality(U: Partition, V: Partition):
    """Intersection sizes |U_i & V_j| and whether all are <= n / (3t)."""
    if U.n != V.n or U.t != V.t:
        raise InputDomainError("partitions must share n and t")
    matrix = [[(a & b).bit_count() for b in V.parts] for a in U.parts]
    bound = U.n / (3 * U.t)
    typical = all(x <= bound for row in matrix for x in row)
    return OverlapReport(matrix, typical)
