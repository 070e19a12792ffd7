"""Small validated parameter records: modulus/residue and residue distributions."""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputDomainError

ALPHA_TOL = 1e-12
# alpha_i * k within this of an integer is treated as that integer
_SNAP = 1e-9


@dataclass(frozen=True)
class ModParams:
    q: int
    r: int

    def __post_init__(self):
        if self.q < 2:
            raise InputDomainError(f"modulus q must be >= 2, got {self.q}")
        if not 0 <= self.r < self.q:
            raise InputDomainError(f"residue r must satisfy 0 <= r < q, got r={self.r}, q={self.q}")


@dataclass(frozen=True)
class DistributionSpec:
    """Target frequencies (alpha_0, ..., alpha_{q-1}) of the degree residues."""

    q: int
    alpha: tuple

    def __post_init__(self):
        alpha = tuple(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if self.q < 2:
            raise InputDomainError(f"modulus q must be >= 2, got {self.q}")
        if len(alpha) != self.q:
            raise InputDomainError(f"alpha has {len(alpha)} entries, expected q={self.q}")
        if any(a < 0 or a > 1 for a in alpha):
            raise InputDomainError("alpha entries must lie in [0, 1]")
        exact = all(isinstance(a, (int, Fraction)) for a in alpha)
        total = sum(alpha) if exact else math.fsum(float(a) for a in alpha)
        if abs(total - 1) > ALPHA_TOL:
            raise InputDomainError(f"alpha must sum to 1, sums to {float(total)!r}")

    @classmethod
    def uniform(cls, q):
        return cls(q, tuple(Fraction(1, q) for _ in range(q)))

    @classmethod
    def indicator(cls, q, r):
        return cls(q, tuple(1 if i == r else 0 for i in range(q)))

    @classmethod
    def parse(cls, text, q=None):
        """Parse ``"a0,a1,..."``; entries may be decimals or fractions like ``1/3``."""
        try:
            alpha = tuple(Fraction(tok.strip()) for tok in text.split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputDomainError(f"cannot parse alpha {text!r}: {exc}") from None
        if q is not None and q != len(alpha):
            raise InputDomainError(f"alpha has {len(alpha)} entries but q={q}")
        return cls(len(alpha), alpha)

    def is_uniform(self):
        return all(abs(float(a) - 1.0 / self.q) <= ALPHA_TOL for a in self.alpha)

    def bounds(self, k):
        """Per-class ``(floor(alpha_i k), ceil(alpha_i k))``."""
        out = []
        for a in self.alpha:
            if isinstance(a, (int, Fraction)):
                x = Fraction(a) * k
                out.append((math.floor(x), math.ceil(x)))
                continue
            x = a * k
            nearest = round(x)
            if abs(x - nearest) <= _SNAP * max(1.0, abs(x)):
                out.append((nearest, nearest))
            else:
                out.append((math.floor(x), math.ceil(x)))
        return out

    def roundings(self, k):
        """All rounding patterns (k_0, ..., k_{q-1}) with k_i in {floor, ceil} summing to k."""
        options = [sorted({lo, hi}) for lo, hi in self.bounds(k)]
        found = []

        def walk(i, acc, total):
            if i == len(options):
                if total == k:
                    found.append(tuple(acc))
                return
            for c in options[i]:
                acc.append(c)
                walk(i + 1, acc, total + c)
                acc.pop()

        walk(0, [], 0)
        return found

    def histogram_ok(self, hist):
        """True iff the residue histogram matches some rounding pattern."""
        k = sum(hist)
        for c, (lo, hi) in zip(hist, self.bounds(k)):
            if c != lo and c != hi:
                return False
        return True
