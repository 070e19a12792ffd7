import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modres import CapacityError, InputDomainError
from modres.charsums import (cosine_gap, decay_profile, prob_asym_rowsums, prob_joint,
                             prob_sum_mod, prob_symmetric, sum_mod_bound, symmetric_table)


def brute_symmetric(v, q):
    m = len(v)
    pairs = list(itertools.combinations(range(m), 2))
    hits = 0
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        deg = [0] * m
        for (i, j), b in zip(pairs, bits):
            deg[i] += b
            deg[j] += b
        hits += all(d % q == x for d, x in zip(deg, v))
    return Fraction(hits, 2 ** len(pairs))


def brute_joint(u, v, q):
    s, t = len(u), len(v)
    hits = 0
    for bits in itertools.product((0, 1), repeat=s * t):
        rows = [sum(bits[i * t:(i + 1) * t]) % q for i in range(s)]
        cols = [sum(bits[i * t + j] for i in range(s)) % q for j in range(t)]
        hits += rows == list(u) and cols == list(v)
    return Fraction(hits, 2 ** (s * t))


def test_sum_mod_examples():
    assert prob_sum_mod(0, 0, 5).value == 1
    assert prob_sum_mod(2, 0, 3).value == Fraction(1, 4)
    assert prob_sum_mod(1, 0, 2).value == Fraction(1, 2)
    with pytest.raises(InputDomainError):
        prob_sum_mod(3, 3, 3)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_sum_mod_methods_agree(q):
    for n in range(0, 16):
        for a in range(q):
            exact = prob_sum_mod(n, a, q).value
            assert prob_sum_mod(n, a, q, "enumeration").value == exact
            assert abs(prob_sum_mod(n, a, q, "fourier").approx - float(exact)) < 1e-12


def test_asym_examples():
    assert prob_asym_rowsums(2, 0, (0, 0), 3).value == 1
    assert prob_asym_rowsums(2, 2, (0, 0), 3).value == Fraction(1, 16)
    assert prob_asym_rowsums(1, 3, (1,), 2).value == Fraction(1, 2)


@given(st.integers(1, 4), st.integers(0, 5), st.integers(2, 4), st.data())
@settings(max_examples=40, deadline=None)
def test_asym_row_product(s, t, q, data):
    v = tuple(data.draw(st.integers(0, q - 1)) for _ in range(s))
    product = math.prod(prob_sum_mod(t, a, q).value for a in v)
    assert prob_asym_rowsums(s, t, v, q).value == product
    if s * t <= 24:
        assert prob_asym_rowsums(s, t, v, q, "enumeration").value == product
    assert abs(prob_asym_rowsums(s, t, v, q, "fourier").approx - float(product)) < 1e-9


def test_asym_enumeration_cap():
    with pytest.raises(CapacityError):
        prob_asym_rowsums(5, 5, (0,) * 5, 2, "enumeration")


def test_symmetric_examples():
    assert prob_symmetric((1, 0, 0), 2).value == 0
    assert prob_symmetric((1, 1, 0), 2).value == Fraction(1, 4)
    assert prob_symmetric((0, 0, 0), 3).value == Fraction(1, 8)


@pytest.mark.parametrize("q,m", [(2, 4), (3, 4), (4, 3), (5, 3)])
def test_symmetric_matches_brute_force(q, m):
    for v in itertools.product(range(q), repeat=m):
        assert prob_symmetric(v, q).value == brute_symmetric(v, q)


@pytest.mark.parametrize("q,m", [(2, 6), (3, 5), (5, 4)])
def test_symmetric_normalisation(q, m):
    assert sum(symmetric_table(m, q, "enumeration")) == 1
    assert abs(sum(symmetric_table(m, q, "fourier")) - 1) < 1e-9


def test_odd_q_support():
    # degrees on m vertices are < m, so small m cannot reach every residue pattern
    assert prob_symmetric((1, 0, 0), 3).value == 0
    assert prob_symmetric((1, 0, 0, 0), 5).value == 0
    for m in (5, 6):
        assert all(p > 0 for p in symmetric_table(m, 3, "enumeration"))


def test_symmetric_caps():
    with pytest.raises(CapacityError):
        prob_symmetric((0,) * 9, 2, "enumeration")
    with pytest.raises(CapacityError):
        prob_symmetric((0,) * 11, 5, "fourier")


def test_joint_examples():
    assert prob_joint((1,), (1, 1), 2).value == 0
    assert prob_joint((0,), (1, 1), 2).value == Fraction(1, 4)
    # even row and column sums on a 2x2 0/1 matrix: all-zero and all-one only
    assert prob_joint((0, 0), (0, 0), 2).value == Fraction(2, 16)


@pytest.mark.parametrize("s,t,q", [(1, 2, 3), (2, 2, 2), (2, 3, 2), (2, 2, 3)])
def test_joint_matches_brute_force(s, t, q):
    for u in itertools.product(range(q), repeat=s):
        for v in itertools.product(range(q), repeat=t):
            exact = brute_joint(u, v, q)
            assert prob_joint(u, v, q).value == exact
            assert abs(prob_joint(u, v, q, "fourier").approx - float(exact)) < 1e-9


def test_cosine_gap():
    assert cosine_gap(2) == pytest.approx(-math.exp(-0.5), abs=1e-15)
    assert cosine_gap(3) == pytest.approx(0.5 - math.exp(-2 / 9))
    assert all(cosine_gap(q) <= 0 for q in range(2, 1001))


def test_sum_mod_bound_holds():
    for q in (2, 3, 4):
        for n in range(1, 25):
            err = max(abs(prob_sum_mod(n, a, q).value - Fraction(1, q)) for a in range(q))
            assert float(err) <= sum_mod_bound(n, q) + 1e-12


def test_decay_examples():
    prof = decay_profile(2, 3, 3)
    assert prof.rows[0][3] == 0
    prof = decay_profile(3, 4, 7)
    errs = [float(r[3]) for r in prof.rows]
    assert all(e > 0 for e in errs)
    assert prof.slope() < 0
    asym = decay_profile(3, 1, 1, "asym")
    assert asym.rows[0][3] == 3 * max(abs(prob_sum_mod(1, a, 3).value - Fraction(1, 3))
                                      for a in range(3))
    assert decay_profile(3, 1, 2).to_csv().splitlines()[0] == "m,q,mode,normalized_error"


def test_joint_support():
    # infeasible pairs always vanish; for q = 2 feasibility is also sufficient,
    # for q = 3 a small matrix cannot reach some feasible residues
    for q in (2, 3):
        for s, t in itertools.product(range(1, 4), repeat=2):
            for u in itertools.product(range(q), repeat=s):
                for v in itertools.product(range(q), repeat=t):
                    p = prob_joint(u, v, q).value
                    if (sum(u) - sum(v)) % q:
                        assert p == 0
                    elif q == 2:
                        assert p > 0
    assert prob_joint((2,), (2,), 3).value == 0
