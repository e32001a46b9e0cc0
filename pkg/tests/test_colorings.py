import pytest

from bowen_lab.colorings import (CC1, CCI, FREE, WordDomain, dumps_coloring, free_subset, is_free, loads_coloring,
                                 max_le2_chromatic, oracle_le2, procedural_coloring, random_coloring,
                                 search_good_coloring, table_coloring, verify_cc_conditions)
from bowen_lab.symbolic import all_words


def test_rainbow_triangle():
    c = table_coloring({(0, 1): 1, (0, 2): 2, (1, 2): 3}, 3)
    assert max_le2_chromatic(c, [0, 1, 2]).size == 2
    assert oracle_le2(c, [0, 1, 2]) == 2


@pytest.mark.parametrize("seed", range(12))
def test_le2_matches_oracle(seed):
    fam = list(range(4 + seed % 9))
    c = random_coloring(fam, 3, FREE, seed)
    assert max_le2_chromatic(c, fam).size == oracle_le2(c, fam)


def test_forced_colors_and_clauses():
    dom = WordDomain(0, 3, 2, 1)
    fam = list(all_words(6))
    for variant in (CC1, CCI):
        c = procedural_coloring(3, variant, 5, dom)
        assert verify_cc_conditions(c, fam, dom).ok
    c = random_coloring(fam, 3, CCI, 1, dom)
    assert verify_cc_conditions(c, fam, dom).ok


def test_free_subsets():
    dom = WordDomain(1, 3, 2, 2)
    fam = list(all_words(6))
    for variant in (CC1, CCI):
        sub = free_subset(fam, variant, dom)
        assert is_free(sub, variant, dom)
    assert not is_free(fam, CCI, dom)


def test_search_in_guaranteed_regime():
    r = search_good_coloring(17, 15, seed=0)
    assert r.guaranteed and r.found


def test_coloring_serialization():
    fam = list(range(5))
    c = random_coloring(fam, 3, FREE, 2)
    back = loads_coloring(dumps_coloring(c))
    assert all(back(a, b) == c(a, b) for a in fam for b in fam if a < b)
    dom = WordDomain(0, 3, 2, 1)
    p = procedural_coloring(3, CCI, 9, dom)
    q = loads_coloring(dumps_coloring(p))
    assert all(q(a, b) == p(a, b) for a in all_words(6) for b in all_words(6) if a < b)


def test_distinct_pairs_only():
    c = random_coloring([0, 1], 3)
    with pytest.raises(ValueError):
        c(0, 0)
