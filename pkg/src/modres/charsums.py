"""Exact degree-residue probabilities for random 0/1 matrices.

Each probability has (at least) two independent evaluation routes:

* ``enumeration`` counts all 0/1 configurations exactly (Gray-code walks);
* ``fourier`` evaluates the character-sum expansion over Z_q^m in complex
  floating point, summed with ``math.fsum``;
* ``closed-form`` (where available) uses exact binomial counts.

The routes never share code, so each serves as an oracle for the other.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels
from .errors import CapacityError, InputDomainError

ENUM_RECTANGLE_CAP = 24        # s * t
ENUM_EDGE_CAP = 28             # C(m, 2)
FOURIER_TERM_CAP = 20_000_000  # q^m
HIST_CAP = 20_000_000

METHODS = ("enumeration", "fourier", "closed-form")


@dataclass(frozen=True)
class ExactProb:
    value: Fraction | None
    approx: float
    method: str

    def __float__(self):
        return float(self.value) if self.value is not None else self.approx


def _exact(value, method):
    value = Fraction(value)
    return ExactProb(value, float(value), method)


def _check_q(q):
    if q < 2:
        raise InputDomainError(f"modulus q must be >= 2, got {q}")


def _check_vector(v, q):
    v = tuple(int(x) for x in v)
    if any(not 0 <= x < q for x in v):
        raise InputDomainError(f"residue vector {v} has entries outside [0, {q})")
    return v


def _check_method(method, allowed):
    if method not in allowed:
        raise InputDomainError(f"method must be one of {allowed}, got {method!r}")


@lru_cache(maxsize=None)
def roots_of_unity(q):
    """Table of e_q(x) = exp(2 pi i x / q) for x = 0..q-1."""
    x = np.arange(q)
    return np.cos(2 * np.pi * x / q) + 1j * np.sin(2 * np.pi * x / q)


def _real_fsum(values):
    return math.fsum(np.real(values).tolist())


def _index_grid(q, m):
    """All vectors of Z_q^m as rows, first coordinate slowest (C order)."""
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((q,) * m, dtype=np.int64).reshape(m, -1)
    return grids.T


# ------------------------------------------------------------- single sums

def prob_sum_mod(n, a, q, method="closed-form"):
    """P[xi_1 + ... + xi_n = a (mod q)] for iid fair bits."""
    _check_q(q)
    if n < 0:
        raise InputDomainError(f"n must be >= 0, got {n}")
    if not 0 <= a < q:
        raise InputDomainError(f"residue a={a} outside [0, {q})")
    _check_method(method, METHODS)
    if method == "closed-form":
        hits = sum(math.comb(n, j) for j in range(a, n + 1, q))
        return _exact(Fraction(hits, 1 << n), method)
    if method == "enumeration":
        if n > ENUM_RECTANGLE_CAP:
            raise CapacityError(f"enumeration of 2^{n} bit vectors exceeds cap 2^{ENUM_RECTANGLE_CAP}")
        hits = _kernels.matrix_count(1, n, q, np.array([a]), np.zeros(max(n, 1), np.int64), True, False)
        return _exact(Fraction(int(hits), 1 << n), method)
    e = roots_of_unity(q)
    ell = np.arange(q)
    terms = e[(-ell * a) % q] * ((1 + e[ell]) / 2) ** n
    return ExactProb(None, _real_fsum(terms) / q, method)


def prob_asym_rowsums(s, t, v, q, method="closed-form"):
    """P[M 1_t = v (mod q)] for an s x t iid Bern(1/2) matrix M."""
    _check_q(q)
    if s < 0 or t < 0:
        raise InputDomainError("dimensions must be non-negative")
    v = _check_vector(v, q)
    if len(v) != s:
        raise InputDomainError(f"target has length {len(v)}, expected s={s}")
    _check_method(method, METHODS)
    if method == "closed-form":
        value = Fraction(1)
        for vi in v:
            value *= prob_sum_mod(t, vi, q).value
        return _exact(value, method)
    if method == "enumeration":
        if s * t > ENUM_RECTANGLE_CAP:
            raise CapacityError(f"s*t={s * t} exceeds enumeration cap {ENUM_RECTANGLE_CAP}")
        hits = _kernels.matrix_count(s, t, q, np.array(v + (0,), np.int64),
                                     np.zeros(max(t, 1), np.int64), True, False)
        return _exact(Fraction(int(hits), 1 << (s * t)), method)
    if q ** s > FOURIER_TERM_CAP:
        raise CapacityError(f"q^s={q ** s} exceeds character-sum cap {FOURIER_TERM_CAP}")
    e = roots_of_unity(q)
    grid = _index_grid(q, s)
    row_factor = ((1 + e) / 2) ** t
    terms = e[(-(grid @ np.array(v, np.int64))) % q] * np.prod(row_factor[grid], axis=1)
    return ExactProb(None, _real_fsum(terms) / q ** s, method)


# ---------------------------------------------------------- symmetric case

@lru_cache(maxsize=64)
def _symmetric_hist(m, q):
    return _kernels.symmetric_histogram(m, q)


@lru_cache(maxsize=8)
def _symmetric_coefficients(m, q):
    """prod_{j<k} (1 + e_q(l_j + l_k)) / 2 for every l in Z_q^m (C order)."""
    e = roots_of_unity(q)
    half = (1 + e) / 2
    grid = _index_grid(q, m)
    coeff = np.ones(len(grid), dtype=np.complex128)
    for j in range(m):
        for k in range(j + 1, m):
            coeff *= half[(grid[:, j] + grid[:, k]) % q]
    return grid, coeff


def _vector_index(v, q):
    return sum(x * q ** i for i, x in enumerate(v))


def prob_symmetric(v, q, method="enumeration"):
    """P[degree vector of a uniform graph on len(v) vertices = v (mod q)]."""
    _check_q(q)
    v = _check_vector(v, q)
    m = len(v)
    if m < 1:
        raise InputDomainError("need m >= 1")
    _check_method(method, ("enumeration", "fourier"))
    if method == "enumeration":
        nedges = m * (m - 1) // 2
        if nedges > ENUM_EDGE_CAP:
            raise CapacityError(f"C(m,2)={nedges} exceeds enumeration cap {ENUM_EDGE_CAP}")
        if q ** m <= HIST_CAP:
            hits = int(_symmetric_hist(m, q)[_vector_index(v, q)])
        else:
            hits = int(_kernels.symmetric_count(m, q, np.array(v, np.int64)))
        return _exact(Fraction(hits, 1 << nedges), method)
    if q ** m > FOURIER_TERM_CAP:
        raise CapacityError(f"q^m={q ** m} exceeds character-sum cap {FOURIER_TERM_CAP}")
    grid, coeff = _symmetric_coefficients(m, q)
    e = roots_of_unity(q)
    phase = e[(-(grid @ np.array(v, np.int64))) % q]
    return ExactProb(None, _real_fsum(phase * coeff) / q ** m, method)


def symmetric_table(m, q, method="enumeration"):
    """Probabilities of every v in Z_q^m, indexed by sum_i v_i q^i.

    The enumeration table holds exact Fractions; the fourier table evaluates
    the same character sum for all v at once with an m-dimensional DFT.
    """
    _check_q(q)
    if method == "enumeration":
        nedges = m * (m - 1) // 2
        if nedges > ENUM_EDGE_CAP or q ** m > HIST_CAP:
            raise CapacityError(f"table for m={m}, q={q} exceeds enumeration caps")
        hist = _symmetric_hist(m, q)
        denom = 1 << nedges
        return [Fraction(int(c), denom) for c in hist]
    if q ** m > FOURIER_TERM_CAP:
        raise CapacityError(f"q^m={q ** m} exceeds character-sum cap {FOURIER_TERM_CAP}")
    _, coeff = _symmetric_coefficients(m, q)
    # fftn computes sum_l c(l) e_q(-l.v); axes are (l_0, ..., l_{m-1}) in C order
    spectrum = np.fft.fftn(coeff.reshape((q,) * m)).real / q ** m
    # reorder from C order (v_0 slowest) to index sum_i v_i q^i (v_0 fastest)
    return spectrum.transpose(tuple(reversed(range(m)))).reshape(-1).tolist()


# --------------------------------------------------------------- joint case

@lru_cache(maxsize=16)
def _joint_coefficients(s, t, q):
    e = roots_of_unity(q)
    half = (1 + e) / 2
    grid = _index_grid(q, s + t)
    coeff = np.ones(len(grid), dtype=np.complex128)
    for i in range(s):
        for j in range(t):
            coeff *= half[(grid[:, i] + grid[:, s + j]) % q]
    return grid, coeff


def prob_joint(u, v, q, method="enumeration"):
    """P[M 1_t = u and 1_s^T M = v (mod q)] for an s x t iid Bern(1/2) matrix."""
    _check_q(q)
    u = _check_vector(u, q)
    v = _check_vector(v, q)
    s, t = len(u), len(v)
    if s < 1 or t < 1:
        raise InputDomainError("need s, t >= 1")
    _check_method(method, ("enumeration", "fourier"))
    if method == "enumeration":
        if s * t > ENUM_RECTANGLE_CAP:
            raise CapacityError(f"s*t={s * t} exceeds enumeration cap {ENUM_RECTANGLE_CAP}")
        hits = _kernels.matrix_count(s, t, q, np.array(u, np.int64), np.array(v, np.int64), True, True)
        return _exact(Fraction(int(hits), 1 << (s * t)), method)
    if q ** (s + t) > FOURIER_TERM_CAP:
        raise CapacityError(f"q^(s+t)={q ** (s + t)} exceeds character-sum cap {FOURIER_TERM_CAP}")
    grid, coeff = _joint_coefficients(s, t, q)
    target = np.array(u + v, np.int64)
    phase = roots_of_unity(q)[(-(grid @ target)) % q]
    return ExactProb(None, _real_fsum(phase * coeff) / q ** (s + t), method)


# ------------------------------------------------------------ error decay

def cosine_gap(q):
    """max_{1<=l<q} |cos(pi l / q)| - exp(-2 / q^2); never positive."""
    _check_q(q)
    worst = max(abs(math.cos(math.pi * ell / q)) for ell in range(1, q))
    return worst - math.exp(-2 / q ** 2)


def sum_mod_bound(n, q):
    """Proven bound ((q-1)/q) exp(-2n/q^2) on |P[sum = a] - 1/q|."""
    return (q - 1) / q * math.exp(-2 * n / q ** 2)


@dataclass
class DecayProfile:
    rows: list = field(default_factory=list)   # (m, q, mode, normalized_error)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "q", "mode", "normalized_error"])
        for m, q, mode, err in self.rows:
            w.writerow([m, q, mode, repr(float(err))])
        return buf.getvalue()

    def slope(self):
        """Least-squares slope of log(normalized_error) against m."""
        pts = [(m, math.log(float(err))) for m, _, _, err in self.rows if err > 0]
        if len(pts) < 2:
            raise InputDomainError("need at least two positive errors to fit a slope")
        xs = np.array([p[0] for p in pts], float)
        ys = np.array([p[1] for p in pts], float)
        return float(np.polyfit(xs, ys, 1)[0])


def _symmetric_error(m, q):
    nedges = m * (m - 1) // 2
    if nedges <= ENUM_EDGE_CAP and q ** m <= HIST_CAP:
        table = symmetric_table(m, q, "enumeration")
    else:
        table = [Fraction(x) for x in symmetric_table(m, q, "fourier")]
    even = q % 2 == 0
    lead = Fraction(2 if even else 1, q ** m)
    worst = Fraction(0)
    for idx, p in enumerate(table):
        if even:
            total = 0
            x = idx
            for _ in range(m):
                total += x % q
                x //= q
            if total % 2:
                continue
        worst = max(worst, abs(p - lead))
    return worst * q ** m


def _asym_error(t, q):
    lead = Fraction(1, q)
    worst = max(abs(prob_sum_mod(t, a, q).value - lead) for a in range(q))
    return worst * q


def decay_profile(q, m_min, m_max, mode="symmetric"):
    """Normalized worst-case deviation from the leading term, per size m.

    ``symmetric``: q^m max_v |P[deg = v] - lead| over feasible v, with lead
    1/q^m (q odd) or 2/q^m (q even, sum of v even).
    ``asym``: a single row of length m, q * max_a |P[sum = a] - 1/q|.
    """
    _check_q(q)
    if m_min < 1 or m_max < m_min:
        raise InputDomainError(f"bad range m_min={m_min}, m_max={m_max}")
    if mode not in ("symmetric", "asym"):
        raise InputDomainError(f"mode must be 'symmetric' or 'asym', got {mode!r}")
    profile = DecayProfile()
    for m in range(m_min, m_max + 1):
        if mode == "symmetric":
            nedges = m * (m - 1) // 2
            if nedges > ENUM_EDGE_CAP and q ** m > FOURIER_TERM_CAP:
                raise CapacityError(f"m={m}, q={q} exceeds both enumeration and character-sum caps")
            err = _symmetric_error(m, q)
        else:
            err = _asym_error(m, q)
        profile.rows.append((m, q, mode, err))
    return profile


def feasible_pairs(s, t, q):
    """All (u, v) in Z_q^s x Z_q^t; helper for exhaustive checks."""
    for u in product(range(q), repeat=s):
        for v in product(range(q), repeat=t):
            yield u, v
