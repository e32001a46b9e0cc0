import random
from fractions import Fraction

import pytest

from bowen_lab.exact_solvers import (chain_check, cov_number, cov_subadditive, graph_from_edges, is_cover,
                                     is_separated, is_spanning, oracle_brute, oracle_graph, sep_number,
                                     span_number, threshold_graph)
from bowen_lab.metric_core import bowen, make_system, random_system


def random_graph(n, p, seed):
    rng = random.Random(seed)
    return graph_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


@pytest.mark.parametrize("seed", range(40))
def test_solvers_match_oracle_on_random_graphs(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(1, 13), rng.choice([0.2, 0.4, 0.6]), seed)
    s, sw = sep_number(g)
    sp, spw = span_number(g)
    c, cells = cov_number(g)
    assert s == oracle_graph(g, "sep") and is_separated(g, sw) and len(sw) == s
    assert sp == oracle_graph(g, "span") and is_spanning(g, spw) and len(spw) == sp
    assert c == oracle_graph(g, "cov") and is_cover(g, cells) and len(cells) == c


def test_trivial_graphs():
    empty = graph_from_edges(6, [])
    full = graph_from_edges(6, [(i, j) for i in range(6) for j in range(i + 1, 6)])
    assert span_number(empty)[0] == 6
    assert sep_number(full)[0] == 1
    assert cov_number(full)[0] == 1


def test_threshold_is_strict():
    dist = [[0, Fraction(1, 2)], [Fraction(1, 2), 0]]
    assert sep_number(threshold_graph(dist, Fraction(1, 2)))[0] == 2
    assert sep_number(threshold_graph(dist, Fraction(3, 4)))[0] == 1


def test_chain_and_monotonicity():
    for seed in range(10):
        s = random_system(9, seed, levels=16)
        for T in (1, 2, 3):
            for eps in (Fraction(9, 16), Fraction(3, 4), Fraction(1)):
                assert chain_check(s, T, eps).ok
        seps = [sep_number(threshold_graph(bowen(s, 2), Fraction(k, 16)))[0] for k in range(8, 18)]
        assert seps == sorted(seps, reverse=True)
        spans_t = [span_number(threshold_graph(bowen(s, T), Fraction(3, 4)))[0] for T in (1, 2, 3, 4)]
        assert spans_t == sorted(spans_t)


def test_cov_subadditive():
    for seed in range(6):
        s = random_system(8, seed, levels=16)
        assert cov_subadditive(s, 1, 2, Fraction(3, 4))[0]


def test_oracle_limit():
    with pytest.raises(ValueError):
        oracle_brute(random_system(21, 0), 1, 1, "sep")


def test_one_point():
    s = make_system([[0]], [0])
    assert [oracle_brute(s, 1, 1, w) for w in ("cov", "sep", "span")] == [1, 1, 1]
