from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import LR_EXAMPLE, enriched_matrices, mat
from twonested.catalog import gem_patterns, gen_D, gen_small, smallest_members
from twonested.core import EnrichedMatrix, RowColor
from twonested.matcher import (Embedding, check_embedding, find_any, find_member,
                               find_subconfiguration)


def test_gem_embeds_in_itself():
    g = gem_patterns()["gem0"]
    e = find_subconfiguration(mat("110", "011"), g)
    assert e.row_map == (0, 1) and e.col_map == (0, 1, 2)


def test_gem_in_tucker_cycle():
    e = find_subconfiguration(mat("110", "011", "101"), gem_patterns()["gem0"])
    assert e is not None
    assert e.row_map == (0, 1) and e.col_map == (0, 1, 2)


def test_lr_example_has_no_d1():
    assert find_subconfiguration(LR_EXAMPLE, gen_D(1), allow_dual=True) is None


def test_find_any_examples():
    hit = find_any(gen_D(0).canonical())
    assert (hit.family, hit.params) == ("D", (0,))
    assert hit.embedding.row_map == (0, 1) and hit.embedding.col_map == (0, 1)
    assert find_any(mat("0")) is None
    s0 = find_any(gen_small("S0", 4).canonical())
    assert (s0.family, s0.name, s0.params) == ("small", "S0", (4,))


def test_colors_must_match_variables():
    same = mat(("L", "r", "1"), ("R", "r", "1"))
    differ = mat(("L", "r", "1"), ("R", "b", "1"))
    uncolored = mat(("L", "-", "1"), ("R", "-", "1"))
    d1 = gen_D(1)
    assert find_subconfiguration(same, d1) is not None
    assert find_subconfiguration(differ, d1) is None
    assert find_subconfiguration(uncolored, d1) is None
    assert find_subconfiguration(differ, gen_D(2)) is None
    e = find_subconfiguration(mat(("L", "b", "10"), ("R", "r", "10")), gen_D(2))
    assert dict(e.color_assignment) == {"g": RowColor.BLUE, "o": RowColor.RED}


def test_dual_patterns_are_tried():
    d = gen_D(0).dual().canonical()
    assert find_subconfiguration(d, gen_D(0)) is None
    e = find_subconfiguration(d, gen_D(0), allow_dual=True)
    assert e.dual_used


def test_fixed_columns():
    a = mat("0110", "0011")
    g = gem_patterns()["gem0"]
    assert find_subconfiguration(a, g, fixed_cols={0: 1}) is not None
    assert find_subconfiguration(a, g, fixed_cols={0: 0}) is None


def test_check_embedding_rejects_tampering():
    a = mat(("L", "r", "10"), ("R", "r", "11"))
    hit = find_any(a)
    assert check_embedding(a, hit_pattern(hit), hit.embedding) is None
    e = hit.embedding
    bad = Embedding(e.row_map[::-1], e.col_map, e.color_assignment, e.dual_used, e.view)
    assert check_embedding(a, hit_pattern(hit), bad) is not None


def hit_pattern(hit):
    from twonested.catalog import build_member
    return build_member(hit.family, hit.name, hit.params)


@settings(max_examples=150, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=4))
def test_every_hit_replays(a):
    hit = find_any(a)
    if hit is not None:
        assert check_embedding(a, hit_pattern(hit), hit.embedding) is None


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(smallest_members("D", 1) + smallest_members("S", 1)), st.data())
def test_members_embed_in_their_instantiations(member, data):
    pat = member.build()
    inst = data.draw(st.sampled_from(list(pat.instantiations())))
    assert find_member(inst, member) is not None


@settings(max_examples=100, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=4), st.randoms(use_true_random=False))
def test_column_permutation_invariance(a, rnd):
    perm = list(range(a.num_cols))
    rnd.shuffle(perm)
    b = a.permute_columns(perm)
    assert (find_any(a) is None) == (find_any(b) is None)


def test_empty_matrix_has_no_hit():
    assert find_any(EnrichedMatrix(0)) is None
