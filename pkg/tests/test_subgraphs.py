import itertools
import random

import pytest

from modres import (CapacityError, DistributionSpec, Graph, ModParams, as_mask, is_good,
                    is_good_alpha, sample_gnp)
from modres.subgraphs import (LocalSearchParams, count_good, count_good_alpha, exact_f,
                              exact_f_alpha, good_counts, local_search_f)

from conftest import naive_best, naive_degrees


def test_exact_f_examples(triangle):
    res = exact_f(triangle, ModParams(2, 0))
    assert res.best_size == 3 and res.witness_list() == [0, 1, 2] and res.exact
    assert exact_f(triangle, ModParams(2, 1)).best_size == 2
    res = exact_f(Graph.empty(5), ModParams(2, 1))
    assert res.best_size == 0 and res.witness is None


def test_exact_f_alpha_examples(triangle, path3):
    assert exact_f_alpha(triangle, 2, DistributionSpec(2, (1, 0))).best_size == 3
    res = exact_f_alpha(path3, 2, DistributionSpec.parse("1/3,2/3"))
    assert res.best_size == 3 and res.witness_list() == [0, 1, 2]
    k2 = Graph.from_edges(2, [(0, 1)])
    assert exact_f_alpha(k2, 3, DistributionSpec(3, (0, 1, 0))).best_size == 2


def test_count_examples(triangle):
    assert count_good(triangle, 3, ModParams(2, 0)) == 1
    assert count_good(triangle, 2, ModParams(2, 1)) == 3


def test_guard():
    with pytest.raises(CapacityError):
        exact_f(Graph.empty(27), ModParams(2, 0))


def test_witness_is_lexicographically_least():
    rnd = random.Random(1)
    for _ in range(40):
        n = rnd.randint(2, 10)
        G = sample_gnp(n, rnd.getrandbits(64))
        q, r = 3, rnd.randint(0, 2)
        res = exact_f(G, ModParams(q, r))
        if res.best_size == 0:
            continue
        first = next(S for S in itertools.combinations(range(n), res.best_size)
                     if all(d == r for d in naive_degrees(G, S, q)))
        assert res.witness_list() == list(first)


def test_counts_match_naive_enumeration():
    rnd = random.Random(2)
    for _ in range(30):
        n = rnd.randint(1, 11)
        G = sample_gnp(n, rnd.getrandbits(64))
        q = rnd.randint(2, 4)
        r = rnd.randint(0, q - 1)
        naive = [0] * (n + 1)
        for mask in range(1, 1 << n):
            S = [v for v in range(n) if mask >> v & 1]
            naive[len(S)] += all(d == r for d in naive_degrees(G, S, q))
        assert list(good_counts(G, ModParams(q, r)))[1:] == naive[1:]
        assert sum(count_good(G, k, ModParams(q, r)) for k in range(1, n + 1)) == sum(naive)


def test_alpha_counts_match_naive():
    rnd = random.Random(4)
    alpha = DistributionSpec.parse("1/2,1/2")
    for _ in range(15):
        n = rnd.randint(2, 9)
        G = sample_gnp(n, rnd.getrandbits(64))
        for k in range(1, n + 1):
            naive = sum(is_good_alpha(G, S, 2, alpha) for S in itertools.combinations(range(n), k))
            assert count_good_alpha(G, k, 2, alpha) == naive


def test_even_q_parity_zero():
    rnd = random.Random(6)
    for _ in range(20):
        n = rnd.randint(3, 12)
        G = sample_gnp(n, rnd.getrandbits(64))
        for k in range(1, n + 1, 2):
            assert count_good(G, k, ModParams(2, 1)) == 0
            assert count_good(G, k, ModParams(4, 1)) == 0
            assert count_good(G, k, ModParams(4, 3)) == 0


def test_workers_do_not_change_result():
    G = sample_gnp(16, 99)
    mp = ModParams(3, 1)
    assert exact_f(G, mp, workers=1) == exact_f(G, mp, workers=3)
    assert good_counts(G, mp, 1) == good_counts(G, mp, 2)


def test_local_search_examples(triangle):
    res = local_search_f(triangle, ModParams(2, 0), 3, LocalSearchParams(max_steps=10, restarts=1))
    assert res.best_size == 3 and not res.exact
    assert local_search_f(Graph.empty(5), ModParams(2, 1), 3).best_size == 0


def test_local_search_witness_valid():
    for seed in range(10):
        G = sample_gnp(40, seed)
        mp = ModParams(3, seed % 3)
        res = local_search_f(G, mp, params=LocalSearchParams(max_steps=2000, restarts=3, seed=seed))
        if res.best_size:
            assert is_good(G, res.witness, mp)
            assert res.witness.bit_count() == res.best_size


def test_result_json(triangle):
    assert exact_f(triangle, ModParams(2, 0)).to_dict() == {
        "best_size": 3, "witness": [0, 1, 2], "exact": True, "nodes_explored": 8}


def test_small_oracle_equivalence():
    rnd = random.Random(8)
    for _ in range(20):
        n = rnd.randint(1, 9)
        G = sample_gnp(n, rnd.getrandbits(64))
        q = rnd.randint(2, 4)
        r = rnd.randint(0, q - 1)
        size, _ = naive_best(G, q, lambda d: all(x == r for x in d))
        assert exact_f(G, ModParams(q, r)).best_size == size
        assert as_mask([]) == 0
