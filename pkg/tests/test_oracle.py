import pytest
from hypothesis import given, settings

from conftest import BLUE, ADMISSIBLE_B, LR_EXAMPLE, NON_LR_EXAMPLE, RED, enriched_matrices, mat
from twonested.catalog import gen_D, gen_F
from twonested.oracle import (OracleBudget, OracleBudgetExceeded, blocks_for, is_lr_ordering,
                              literal_verify, oracle_2nested, oracle_extension)

IDENTITY5 = (0, 1, 2, 3, 4)


def test_lr_example_blocks_and_coloring():
    blocks = blocks_for(LR_EXAMPLE, IDENTITY5, {})
    assert [(b.row, b.kind, b.pos) for b in blocks] == [
        (0, "L", 0b00001), (0, "R", 0b10000),
        (1, "L", 0b00011), (1, "R", 0b10000),
        (2, "U", 0b00110), (3, "L", 0b00111), (5, "R", 0b11100),
    ]
    colors = (BLUE, RED, BLUE, RED, RED, RED, BLUE)
    assert literal_verify(LR_EXAMPLE, IDENTITY5, blocks, colors) is None
    assert literal_verify(LR_EXAMPLE, IDENTITY5, blocks, (BLUE, BLUE) + colors[2:]) == 1


@pytest.mark.parametrize("a, expected", [
    (LR_EXAMPLE, True),
    (ADMISSIBLE_B, True),
    (mat("110", "011"), True),
    (NON_LR_EXAMPLE, False),
    (gen_D(1).canonical(), False),
    (gen_F("F0").canonical(), False),
])
def test_oracle_verdicts(a, expected):
    ok, wit = oracle_2nested(a)
    assert ok is expected
    assert (wit is not None) is expected


def test_reading_modes():
    # an all-ones LR row beside an L row that must stay apart from its R part
    a = mat(("LR", "-", "11"), ("L", "r", "10"), ("R", "r", "01"))
    results = {m: oracle_2nested(a, readings=m)[0] for m in ("all", "whole", "split")}
    assert results["all"] == (results["whole"] or results["split"])


def test_budget():
    with pytest.raises(OracleBudgetExceeded):
        oracle_2nested(mat("1" * 8), OracleBudget(max_cols=7))


def test_is_lr_ordering():
    assert is_lr_ordering(LR_EXAMPLE, IDENTITY5)
    assert not is_lr_ordering(mat(("L", "-", "01")), (0, 1))
    assert is_lr_ordering(mat(("L", "-", "01")), (1, 0))


def test_extension_oracle():
    none = RED.__class__.NONE
    assert oracle_extension(3, [(0, 1), (1, 2)], [RED, none, RED])
    assert not oracle_extension(3, [(0, 1), (1, 2)], [RED, none, BLUE])
    assert not oracle_extension(3, [(0, 1), (1, 2), (0, 2)], [none] * 3)


@settings(max_examples=150, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=4))
def test_witness_is_self_consistent(a):
    ok, wit = oracle_2nested(a)
    if ok:
        assert is_lr_ordering(a, wit.ordering)
        assert literal_verify(a, wit.ordering, wit.blocks, wit.colors) is None
