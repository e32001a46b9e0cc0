from fractions import Fraction

import pytest

from bowen_lab.exact_bounds import PROVED
from bowen_lab.warmup_system import (WarmupConfig, build_warmup, implication_check, structure_report,
                                     warmup_experiment)


@pytest.mark.parametrize("T", [1, 2, 3])
def test_structure(T):
    ws = build_warmup(WarmupConfig(T))
    assert structure_report(ws).ok


def test_full_horizon_counts_t2():
    res = warmup_experiment(WarmupConfig(2), Fraction(5, 6), [6])
    row = res.rows[0]
    assert row.sep == row.span == 24


def test_reduction_and_certified_bound():
    res = warmup_experiment(WarmupConfig(2, seed=4), Fraction(5, 6), range(1, 7))
    assert res.ok


def test_bad_config():
    with pytest.raises(ValueError):
        WarmupConfig(2, delta0=Fraction(1, 3))
    with pytest.raises(ValueError):
        warmup_experiment(WarmupConfig(2), Fraction(1, 2), [1])
    with pytest.raises(ValueError):
        warmup_experiment(WarmupConfig(2), Fraction(5, 6), [])


def test_implication_at_sixty():
    assert implication_check(60) == PROVED
