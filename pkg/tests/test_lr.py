import itertools

import pytest
from hypothesis import given, settings

from conftest import ADMISSIBLE_B, LR_EXAMPLE, NON_LR_EXAMPLE, enriched_matrices, mat
from twonested.c1p import ColumnOrdering
from twonested.core import dual_matrix
from twonested.lr import (Block, BlockKind, NotAnLROrdering, check_lr_ordering, extract_blocks,
                          find_suitable_ordering, is_lr_orderable, is_suitable, lr_orderings)
from twonested.matcher import Hit
from twonested.oracle import is_lr_ordering

IDENTITY5 = (0, 1, 2, 3, 4)


def test_lr_example_identity_is_an_lr_ordering():
    assert check_lr_ordering(LR_EXAMPLE, IDENTITY5) is None
    assert isinstance(is_lr_orderable(LR_EXAMPLE), ColumnOrdering)


def test_lr_example_blocks():
    dec = extract_blocks(LR_EXAMPLE, IDENTITY5)
    got = [(b.owner_row, b.kind, b.start, b.stop) for b in dec.blocks]
    assert got == [
        (0, BlockKind.L, 0, 1), (0, BlockKind.R, 4, 5),
        (1, BlockKind.L, 0, 2), (1, BlockKind.R, 4, 5),
        (2, BlockKind.U, 1, 3),
        (3, BlockKind.L, 0, 3),
        (5, BlockKind.R, 2, 5),
    ]
    assert dec.of_row(4) == []


def test_non_lr_example_has_no_lr_ordering():
    assert next(lr_orderings(NON_LR_EXAMPLE), None) is None
    assert isinstance(is_lr_orderable(NON_LR_EXAMPLE), Hit)


def test_extract_rejects_non_lr_ordering():
    with pytest.raises(NotAnLROrdering):
        extract_blocks(mat(("L", "-", "01")), (0, 1))


@pytest.mark.parametrize("rows, perm, reason", [
    ([("U", "-", "101")], (0, 1, 2), "ones are not consecutive"),
    ([("L", "-", "010")], (0, 1, 2), "does not start"),
    ([("R", "-", "010")], (0, 1, 2), "does not end"),
    ([("LR", "-", "010")], (0, 1, 2), "zeros"),
])
def test_lr_ordering_failures(rows, perm, reason):
    assert reason in check_lr_ordering(mat(*rows), perm)


def test_all_ones_lr_row_is_one_full_block():
    dec = extract_blocks(mat(("LR", "-", "111")), (0, 1, 2))
    assert dec.blocks == (Block(0, BlockKind.L, 0, 3, full=True),)


def test_suitability_examples():
    assert is_suitable(LR_EXAMPLE, IDENTITY5)
    assert is_suitable(ADMISSIBLE_B, IDENTITY5)
    # an L block reaching into the R block of an LR row
    a = mat(("LR", "-", "101"), ("L", "-", "111"))
    assert not is_suitable(a, (0, 1, 2))
    # a U block meeting both blocks of an LR row
    b = mat(("LR", "-", "1001"), ("U", "-", "1111"))
    assert not is_suitable(b, (0, 1, 2, 3))


def test_unsuitable_only_ordering():
    a = mat(("R", "b", "0110"), ("R", "b", "1111"), ("LR", "-", "0011"))
    orders = list(lr_orderings(a))
    assert [o.perm for o in orders] == [(3, 0, 1, 2)]
    assert find_suitable_ordering(a) is None


@settings(max_examples=200, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=5))
def test_enumerated_orderings_match_brute_force(a):
    got = {o.perm for o in lr_orderings(a)}
    brute = {p for p in itertools.permutations(range(a.num_cols)) if is_lr_ordering(a, p)}
    assert got <= brute
    assert bool(got) == bool(brute)


@settings(max_examples=150, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=5))
def test_reversal_is_an_lr_ordering_of_the_dual(a):
    for o in itertools.islice(lr_orderings(a), 3):
        assert check_lr_ordering(dual_matrix(a), o.perm[::-1]) is None
