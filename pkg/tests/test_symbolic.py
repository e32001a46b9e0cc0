import pytest

from bowen_lab.symbolic import (INFINITY, BinarySeq, IntervalPartition, PeriodicSeq, all_words, delta,
                                differing_blocks, format_seq, parse_seq, phi, spiral_index, spiral_position)


def test_spiral_enumeration():
    assert [spiral_position(m) for m in range(5)] == [0, 1, -1, 2, -2]
    for i in range(-20, 21):
        assert spiral_position(spiral_index(i)) == i


def test_delta_first_spiral_difference():
    a = BinarySeq((0, 3))
    b = BinarySeq((3,))
    assert delta(a, b) == 0
    assert delta(a, a) == INFINITY
    assert delta(BinarySeq((-1,)), BinarySeq()) == 2
    with pytest.raises(ValueError):
        delta(BinarySeq(), BinarySeq(offset=2))


def test_periodic_delta_and_shift():
    p = PeriodicSeq((0, 0, 1))
    assert delta(p, p.shift(3)) == INFINITY
    assert p.shift(1).window(0, 3) == (0, 1, 0)
    assert p.minimal_period() == 3
    assert PeriodicSeq((1, 1)).minimal_period() == 1


def test_shift_is_invertible():
    y = BinarySeq((-2, 0, 5))
    assert y.shift(3).shift(-3) == y
    assert y.shift(1).bit(-1) == y.bit(0)


def test_phi_window():
    y = BinarySeq.from_word((1, 0, 1), start=-1)
    assert phi(y, 3, 1) == (1, 0, 1)
    with pytest.raises(ValueError):
        phi(y, 3, 3)


def test_partition_blocks():
    part = IntervalPartition(0, 3, 2)
    assert list(part.block(2)) == [2, 3]
    assert part.block_of(5) == 3
    assert differing_blocks((0, 0, 1, 0, 0, 1), (0, 0, 0, 0, 1, 1), part) == {2, 3}


def test_words_and_text_round_trip():
    assert len(list(all_words(4))) == 16
    y = BinarySeq((-3, 2), offset=2)
    assert parse_seq(format_seq(y)) == y
    assert y(2) == 3 and y(0) == 2
