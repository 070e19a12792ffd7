"""Threshold sizes k(n, q), k(n, q, alpha) and the entropy function h(x).

log2 g(k) = log2 C(n, k) - k log2 q is evaluated with log-gamma; values
within ``TIE_TOL`` of zero are settled with exact integer arithmetic.
"""

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .errors import InputDomainError
from .params import DistributionSpec

LN2 = math.log(2)
TIE_TOL = 1e-9


@dataclass
class ThresholdReport:
    n: int
    q: int
    alpha: tuple | None
    k: int
    log2_g_k: float
    log2_g_k1: float | None
    x0: float | None = None

    def to_json(self):
        d = asdict(self)
        if d["alpha"] is not None:
            d["alpha"] = [float(a) for a in d["alpha"]]
        return json.dumps({key: d[key] for key in
                           ("n", "q", "alpha", "k", "log2_g_k", "log2_g_k1", "x0")})


def _log2_comb(n, k):
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / LN2


def _log2_multinomial(counts):
    k = sum(counts)
    return (math.lgamma(k + 1) - sum(math.lgamma(c + 1) for c in counts)) / LN2


def log2_g(n, k, q):
    """log2 of C(n, k) q^-k."""
    if not 0 <= k <= n:
        raise InputDomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    if k == 0 or k == n:
        return -k * math.log2(q)
    return _log2_comb(n, k) - k * math.log2(q)


def log2_g_alpha(n, k, q, counts):
    """log2 of C(n, k) multinomial(k; counts) q^-k."""
    return log2_g(n, k, q) + _log2_multinomial(counts)


def _g_at_least_one(n, k, q, counts=None):
    """Exact test of C(n,k) [multinomial] >= q^k."""
    lhs = math.comb(n, k)
    if counts is not None:
        mult = math.factorial(k)
        for c in counts:
            mult //= math.factorial(c)
        lhs *= mult
    return lhs >= q ** k


def _log2_g_vector(n, q):
    ks = np.arange(n + 1, dtype=np.float64)
    return (gammaln(n + 1) - gammaln(ks + 1) - gammaln(n - ks + 1)) / LN2 - ks * math.log2(q)


def threshold_k(n, q):
    """Greatest k with C(n, k) q^-k >= 1."""
    if n < 1:
        raise InputDomainError(f"n must be >= 1, got {n}")
    if q < 2:
        raise InputDomainError(f"q must be >= 2, got {q}")
    vals = _log2_g_vector(n, q)
    k = 0
    # scan down from n; sign is +...+ -...- on [n/q, n]
    for cand in range(n, -1, -1):
        val = vals[cand]
        if val >= TIE_TOL:
            k = cand
            break
        if val > -TIE_TOL and _g_at_least_one(n, cand, q):
            k = cand
            break
    return ThresholdReport(
        n=n, q=q, alpha=None, k=k,
        log2_g_k=log2_g(n, k, q),
        log2_g_k1=log2_g(n, k + 1, q) if k < n else None,
    )


def threshold_k_exact(n, q):
    """Integer-arithmetic oracle for threshold_k (practical for small n)."""
    return max(k for k in range(n + 1) if math.comb(n, k) >= q ** k)


def _worst_log2_g_alpha(n, k, q, alpha):
    patterns = alpha.roundings(k)
    if not patterns:
        raise RuntimeError(f"no rounding pattern of alpha sums to k={k}")
    return min((log2_g_alpha(n, k, q, p), p) for p in patterns)


def threshold_k_alpha(n, q, alpha: DistributionSpec):
    """Greatest k such that every rounding pattern of alpha*k gives log2 g >= 0."""
    if n < 1:
        raise InputDomainError(f"n must be >= 1, got {n}")
    if alpha.q != q:
        raise InputDomainError(f"alpha has {alpha.q} classes, q={q}")
    k = 0
    worst_k = 0.0
    for cand in range(n, -1, -1):
        val, pattern = _worst_log2_g_alpha(n, cand, q, alpha)
        ok = val >= TIE_TOL
        if not ok and val > -TIE_TOL:
            ok = all(_g_at_least_one(n, cand, q, p) for p in alpha.roundings(cand))
        if ok:
            k, worst_k = cand, val
            break
    nxt = _worst_log2_g_alpha(n, k + 1, q, alpha)[0] if k < n else None
    return ThresholdReport(n=n, q=q, alpha=alpha.alpha, k=k, log2_g_k=worst_k,
                           log2_g_k1=nxt, x0=root_x0(alpha, q))


def threshold_k_alpha_exact(n, q, alpha):
    """Integer-arithmetic oracle for threshold_k_alpha."""
    best = 0
    for k in range(n + 1):
        if all(_g_at_least_one(n, k, q, p) for p in alpha.roundings(k)):
            best = k
    return best


# ------------------------------------------------------------------ entropy

def _xlog2x(x):
    return 0.0 if x == 0 else x * math.log2(x)


def entropy(alpha):
    """Shannon entropy in bits; accepts a DistributionSpec or a sequence."""
    values = alpha.alpha if isinstance(alpha, DistributionSpec) else alpha
    if isinstance(alpha, DistributionSpec) and alpha.is_uniform():
        return math.log2(alpha.q)
    return -math.fsum(_xlog2x(float(a)) for a in values)


def binary_entropy(x):
    if not 0 <= x <= 1:
        raise InputDomainError(f"x must lie in [0, 1], got {x}")
    return -(_xlog2x(x) + _xlog2x(1 - x))


def h_of(x, alpha, q):
    """h(x) = H(alpha) x + H(x) - x log2 q."""
    if not 0 <= x <= 1:
        raise InputDomainError(f"x must lie in [0, 1], got {x}")
    if x == 0:
        return 0.0
    if x == 1 and alpha.is_uniform():
        return 0.0
    return entropy(alpha) * x + binary_entropy(x) - math.log2(q) * x


def h_prime(x, alpha, q):
    if not 0 < x < 1:
        raise InputDomainError(f"h' is defined on (0, 1) only, got {x}")
    return entropy(alpha) + math.log2((1 - x) / x) - math.log2(q)


def h_argmax(alpha, q):
    """Unique zero of h' on (0, 1): (1 - x)/x = q 2^-H(alpha)."""
    return 1.0 / (1.0 + q * 2.0 ** (-entropy(alpha)))


def root_x0(alpha, q, tol=1e-13):
    """Largest x in (0, 1] with h(x) = 0."""
    if alpha.q != q:
        raise InputDomainError(f"alpha has {alpha.q} classes, q={q}")
    if abs(h_of(1.0, alpha, q)) <= 1e-12:
        return 1.0
    lo, hi = h_argmax(alpha, q), 1.0
    # h(lo) > 0 > h(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if h_of(mid, alpha, q) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def appendix_gap(n, k, q, alpha):
    """max over rounding patterns of |log2 g(k) / n - h(k/n)|."""
    if not 0 <= k <= n or n < 1:
        raise InputDomainError(f"need 0 <= k <= n, n >= 1; got k={k}, n={n}")
    if alpha.q != q:
        raise InputDomainError(f"alpha has {alpha.q} classes, q={q}")
    target = h_of(k / n, alpha, q)
    return max(abs(log2_g_alpha(n, k, q, p) / n - target) for p in alpha.roundings(k))


def as_fraction_alpha(values):
    return tuple(Fraction(v) for v in values)
