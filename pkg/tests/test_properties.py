"""Invariants checked on generated matrices."""

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import BLUE, RED, enriched_matrices
from twonested.core import EnrichedMatrix, Row
from twonested.decide import BlockBicoloring, apply_readings, decide_2nested, verify_total_bicoloring
from twonested.catalog import build_member
from twonested.grid import canonical_key, distinct_instances
from twonested.lr import BlockKind, extract_blocks, lr_orderings
from twonested.oracle import blocks_for, literal_verify, oracle_2nested

SWAP = {RED: BLUE, BLUE: RED}


def swap_colors(a: EnrichedMatrix) -> EnrichedMatrix:
    return EnrichedMatrix(a.num_cols, tuple(Row(r.bits, r.label, SWAP.get(r.color, r.color))
                                            for r in a.rows))


@settings(max_examples=150, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=4), st.randoms(use_true_random=False))
def test_grid_symmetries_preserve_both_verdicts(a, rnd):
    perm = list(range(a.num_cols))
    rnd.shuffle(perm)
    images = [a.permute_columns(perm), swap_colors(a), EnrichedMatrix(a.num_cols, a.rows[::-1])]
    want = (decide_2nested(a).two_nested, oracle_2nested(a)[0])
    for b in images:
        assert canonical_key(b) == canonical_key(a)
        assert (decide_2nested(b).two_nested, oracle_2nested(b)[0]) == want


@settings(max_examples=200, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=4), st.data())
def test_block_conditions_match_literal_reading(a, data):
    o = next(lr_orderings(a), None)
    assume(o is not None)
    dec = extract_blocks(a, o)
    full = [b.owner_row for b in dec.blocks if b.full]
    readings = {r: data.draw(st.sampled_from(["L", "R"] + list(range(1, a.num_cols)))) for r in full}
    blocks = apply_readings(dec, a.num_cols, readings)
    oblocks = blocks_for(a, o.perm, readings)
    assert [(b.owner_row, b.kind.value) for b in blocks] == [(b.row, b.kind) for b in oblocks]
    colors = tuple(data.draw(st.sampled_from([RED, BLUE])) for _ in blocks)
    ours = verify_total_bicoloring(a, o, BlockBicoloring(blocks, colors))
    theirs = literal_verify(a, o.perm, oblocks, colors)
    assert (ours is None) == (theirs is None)


@settings(max_examples=150, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=5))
def test_decision_agrees_with_oracle(a):
    assert decide_2nested(a).two_nested == oracle_2nested(a)[0]


@settings(max_examples=150, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=4))
def test_positive_verdicts_carry_valid_colorings(a):
    v = decide_2nested(a)
    if v.two_nested:
        assert v.coloring.total
        assert verify_total_bicoloring(a, v.ordering, v.coloring) is None
        kinds = {b.kind for b in v.coloring.blocks}
        assert kinds <= {BlockKind.L, BlockKind.R, BlockKind.U}


@pytest.mark.parametrize("family, name, params", [
    ("D", "D2", (2,)), ("S", "S3", (3,)), ("small", "M0", ()), ("M", "M4p", ())])
def test_distinct_instances_cover_every_class(family, name, params):
    pat = build_member(family, name, params)
    reps = {canonical_key(a) for a in distinct_instances(pat)}
    every = {canonical_key(a) for a in pat.instantiations(free_colors=False)}
    assert reps == every
    assert len(reps) == len(list(distinct_instances(pat)))
