"""Bit-packed undirected graphs, G(n, 1/2) sampling and residue-degree kernels.

A vertex set is an ``int`` bitmask over ``range(n)``.  Adjacency rows are
Python ints, so rows wider than 64 bits behave exactly like narrow ones.
"""

from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import GraphFormatError, InputDomainError
from .params import DistributionSpec, ModParams


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple

    def __post_init__(self):
        adj = tuple(int(row) for row in self.adj)
        object.__setattr__(self, "adj", adj)
        if self.n < 0 or len(adj) != self.n:
            raise InputDomainError(f"expected {self.n} adjacency rows, got {len(adj)}")
        full = (1 << self.n) - 1
        for i, row in enumerate(adj):
            if row & ~full:
                raise InputDomainError(f"row {i} has bits outside [0, {self.n})")
            if (row >> i) & 1:
                raise InputDomainError(f"self-loop at vertex {i}")
        for i, row in enumerate(adj):
            for j in members(row):
                if not (adj[j] >> i) & 1:
                    raise InputDomainError(f"asymmetric at ({j},{i})")

    @classmethod
    def from_edges(cls, n, edges):
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise InputDomainError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InputDomainError(f"edge ({i},{j}) out of range for n={n}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n):
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n):
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << i) for i in range(n)))

    @property
    def full_mask(self):
        return (1 << self.n) - 1

    def edges(self):
        for i, row in enumerate(self.adj):
            for j in members(row >> (i + 1) << (i + 1)):
                yield i, j

    def edge_count(self):
        return sum(row.bit_count() for row in self.adj) // 2

    def has_edge(self, i, j):
        return bool((self.adj[i] >> j) & 1)

    def rows_u64(self):
        """Adjacency rows as a ``uint64`` array (n <= 64 only)."""
        if self.n > 64:
            raise InputDomainError("uint64 rows need n <= 64")
        return np.array(self.adj, dtype=np.uint64)

    def csr(self):
        """Neighbour lists as ``(indptr, indices)`` int64 arrays."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indices = []
        for i, row in enumerate(self.adj):
            nbrs = members(row)
            indices.extend(nbrs)
            indptr[i + 1] = indptr[i] + len(nbrs)
        return indptr, np.array(indices, dtype=np.int64)


def members(mask):
    """Sorted vertex list of a bitmask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def as_mask(vertices):
    """Accept a bitmask or an iterable of vertices."""
    if isinstance(vertices, (int, np.integer)):
        if vertices < 0:
            raise InputDomainError("vertex mask must be non-negative")
        return int(vertices)
    mask = 0
    for v in vertices:
        if v < 0:
            raise InputDomainError(f"negative vertex {v}")
        mask |= 1 << v
    return mask


def pair_count(n):
    return n * (n - 1) // 2


def sample_gnp(n, seed):
    """Sample G(n, 1/2).

    Pair ``(i, j)``, ``i < j``, is decided by bit ``p`` of the splitmix64
    stream for ``seed``, where ``p`` enumerates pairs in row-major order.
    """
    if n < 0:
        raise InputDomainError(f"n must be >= 0, got {n}")
    stream = rng.bits(seed, pair_count(n))
    rows = [0] * n
    offset = 0
    for i in range(n):
        width = n - 1 - i
        upper = (stream >> offset) & ((1 << width) - 1)
        offset += width
        rows[i] |= upper << (i + 1)
        j = i + 1
        while upper:
            if upper & 1:
                rows[j] |= 1 << i
            upper >>= 1
            j += 1
    return Graph(n, tuple(rows))


def _check_subset(G, S):
    S = as_mask(S)
    if S >> G.n:
        raise InputDomainError(f"vertex set contains a vertex >= n={G.n}")
    return S


def degrees_mod(G, S, q):
    """Residues ``|N(s) & S| mod q`` for ``s`` in ``S``, ascending vertex order."""
    if q < 2:
        raise InputDomainError(f"modulus q must be >= 2, got {q}")
    S = _check_subset(G, S)
    adj = G.adj
    return tuple((adj[v] & S).bit_count() % q for v in members(S))


def is_good(G, S, mp: ModParams):
    """Every vertex of the (nonempty) induced subgraph ``G[S]`` has degree = r mod q."""
    S = _check_subset(G, S)
    if S == 0:
        raise InputDomainError("is_good needs a nonempty vertex set")
    adj, q, r = G.adj, mp.q, mp.r
    rest = S
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        if (adj[v] & S).bit_count() % q != r:
            return False
        rest ^= low
    return True


def residue_histogram(G, S, q):
    hist = [0] * q
    for d in degrees_mod(G, S, q):
        hist[d] += 1
    return tuple(hist)


def is_good_alpha(G, S, q, alpha: DistributionSpec):
    S = _check_subset(G, S)
    if S == 0:
        raise InputDomainError("is_good_alpha needs a nonempty vertex set")
    if alpha.q != q:
        raise InputDomainError(f"alpha has {alpha.q} classes but q={q}")
    return alpha.histogram_ok(residue_histogram(G, S, q))


def encode(G):
    """Text form: ``n`` then ``n`` rows of 0/1 characters, newline-terminated."""
    lines = [str(G.n)]
    for row in G.adj:
        lines.append("".join("1" if (row >> j) & 1 else "0" for j in range(G.n)))
    return "\n".join(lines) + "\n"


def decode(text):
    if not text.endswith("\n"):
        raise GraphFormatError("missing trailing newline")
    lines = text[:-1].split("\n")
    header = lines[0].strip()
    if not header.isdigit():
        raise GraphFormatError(f"malformed header {lines[0]!r}", line=1)
    n = int(header)
    body = lines[1:]
    if n == 0 and body == []:
        return Graph(0, ())
    if len(body) != n:
        raise GraphFormatError(f"expected {n} rows, found {len(body)}", line=len(lines))
    rows = []
    for i, line in enumerate(body):
        if len(line) != n or set(line) - {"0", "1"}:
            raise GraphFormatError(f"row {i} must be {n} characters of 0/1", line=i + 2)
        if line[i] == "1":
            raise GraphFormatError(f"self-loop at ({i},{i})", line=i + 2)
        row = 0
        for j, ch in enumerate(line):
            if ch == "1":
                row |= 1 << j
        rows.append(row)
    for i in range(1, n):
        for j in range(i):
            if ((rows[i] >> j) & 1) != ((rows[j] >> i) & 1):
                raise GraphFormatError(f"asymmetric at ({i},{j})", line=i + 2)
    return Graph(n, tuple(rows))


def read_graph(path):
    with open(path) as fh:
        return decode(fh.read())
