"""Shape, box and growth-sequence combinatorics."""

import random

import pytest
from hypothesis import given, strategies as st

from gburge.shapes import (
    Box,
    Shape,
    ShapeError,
    all_growth_sequences,
    all_shapes,
    canonical_growth_sequence,
    canonical_upper_growth_sequence,
    is_valid_growth_sequence,
    random_growth_sequence,
    random_shape,
    rectangle,
    shape_from_boxes,
    symmetric_closure,
)

shapes_to_6 = st.sampled_from(list(all_shapes(6)))


def test_parts_must_be_weakly_decreasing_positive():
    Shape((3, 3, 1))
    Shape(())
    with pytest.raises(ShapeError):
        Shape((1, 2))
    with pytest.raises(ShapeError):
        Shape((2, 0))
    with pytest.raises(ShapeError):
        Shape((2, -1))


def test_basic_queries():
    s = Shape((3, 3, 1))
    assert s.n_rows == 3
    assert s.n_cols == 3
    assert s.size == 7
    assert not s.is_rectangular
    assert rectangle(2, 4).is_rectangular
    assert s.row_length(3) == 1
    assert s.row_length(4) == 0
    assert (2, 3) in s
    assert (3, 2) not in s
    assert (0, 1) not in s


def test_boxes_row_major():
    assert list(Shape((2, 1)).boxes()) == [Box(1, 1), Box(1, 2), Box(2, 1)]


def test_border_and_corner_boxes():
    s = Shape((3, 3, 1))
    assert set(s.corner_boxes()) == {Box(2, 3), Box(3, 1)}
    assert Box(1, 3) in s.border_boxes()
    assert Box(2, 2) in s.border_boxes()
    assert Box(1, 2) not in s.border_boxes()


def test_remove_box_only_at_corners():
    s = Shape((3, 3, 1))
    assert s.remove_box((3, 1)) == Shape((3, 3))
    assert s.remove_box((2, 3)) == Shape((3, 2, 1))
    with pytest.raises(ShapeError):
        s.remove_box((1, 3))


def test_conjugate():
    assert Shape((3, 3, 1)).conjugate() == Shape((3, 2, 2))
    assert Shape((3, 2, 2)).is_self_conjugate() is False
    assert Shape((3, 1, 1)).is_self_conjugate()


@given(shapes_to_6)
def test_conjugate_is_an_involution(s):
    assert s.conjugate().conjugate() == s
    assert s.conjugate().size == s.size


@given(shapes_to_6)
def test_symmetric_closure_contains_and_fixed(s):
    c = symmetric_closure(s)
    assert c.is_self_conjugate()
    assert all(b in c for b in s.boxes())
    assert symmetric_closure(c) == c


def test_shape_from_boxes():
    assert shape_from_boxes([(1, 1), (1, 2), (2, 1)]) == Shape((2, 1))
    with pytest.raises(ShapeError):
        shape_from_boxes([(1, 1), (2, 2)])


def test_canonical_growth_sequence_is_valid():
    s = Shape((3, 2))
    seq = canonical_growth_sequence(s)
    assert is_valid_growth_sequence(s, seq)
    assert seq == list(s.boxes())


def test_invalid_growth_sequences_rejected():
    s = Shape((2, 2))
    assert not is_valid_growth_sequence(s, [(1, 1), (2, 2), (1, 2), (2, 1)])
    assert not is_valid_growth_sequence(s, [(1, 1), (1, 2), (2, 1)])
    assert not is_valid_growth_sequence(s, [(1, 1), (1, 2), (2, 1), (2, 1)])


def test_growth_sequence_counts_match_standard_tableaux():
    # one growth sequence per standard filling of the shape
    assert len(list(all_growth_sequences(Shape((2, 2))))) == 2
    assert len(list(all_growth_sequences(Shape((3, 3))))) == 5
    assert len(list(all_growth_sequences(Shape((2, 1))))) == 2
    assert len(list(all_growth_sequences(Shape((4,))))) == 1


def test_growth_sequence_totals_by_size():
    # summed over all shapes of n boxes this counts involutions of {1..n}
    totals = {}
    for s in all_shapes(7):
        totals[s.size] = totals.get(s.size, 0) + len(list(all_growth_sequences(s)))
    assert [totals[n] for n in range(1, 8)] == [1, 2, 4, 10, 26, 76, 232]


def test_all_shapes_counts_partitions():
    by_size = {}
    for s in all_shapes(6):
        by_size[s.size] = by_size.get(s.size, 0) + 1
    assert [by_size[n] for n in range(1, 7)] == [1, 2, 3, 5, 7, 11]


@given(st.integers(0, 10_000))
def test_random_growth_sequence_is_valid(seed):
    rng = random.Random(seed)
    s = random_shape(rng, 4, 4)
    assert 1 <= s.n_rows <= 4 and 1 <= s.n_cols <= 4
    seq = random_growth_sequence(s, rng)
    assert is_valid_growth_sequence(s, seq)


def test_upper_part_and_diagonal():
    s = Shape((3, 3, 3))
    assert s.upper_part() == [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]
    assert s.diagonal(0) == [(1, 1), (2, 2), (3, 3)]
    assert s.diagonal(1) == [(1, 2), (2, 3)]
    assert s.diagonal(-2) == [(3, 1)]


def test_canonical_upper_growth_sequence():
    s = Shape((3, 2, 1))
    seq = canonical_upper_growth_sequence(s)
    assert seq == [(1, 1), (1, 2), (1, 3), (2, 2)]
