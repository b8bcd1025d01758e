import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (A_SPRIME_K2, BLUE, ADMISSIBLE_B, ADMISSIBLE_B_PLUS, LR_EXAMPLE, NON_LR_EXAMPLE, NONE, RED,
                      enriched_matrices, mat)
from twonested.catalog import gen_D, gen_F
from twonested.core import dual_matrix
from twonested.decide import (PROPERTY_PATTERNS, AuxGraph, BlockBicoloring, ColoringObstruction,
                              ExhaustiveRefutation, ImproperPrecoloring, NoLROrdering,
                              NotSuitable, NotTwoNested, ObstructionKind, PartialViolation,
                              TwoNested, build_Aplus, build_H, check_admissibility_properties,
                              classify_structure, decide_2nested, decide_2nested_unlabeled,
                              enumerate_extension_obstructions, exact_search,
                              extend_two_coloring, gem_defects, is_admissible,
                              is_partially_2nested, verify_total_bicoloring)
from twonested.lr import BlockKind, extract_blocks, find_suitable_ordering
from twonested.matcher import Hit, find_member
from twonested.catalog import FamilyMember
from twonested.oracle import oracle_extension

IDENTITY5 = (0, 1, 2, 3, 4)


# admissibility

@pytest.mark.parametrize("rows, prop", [
    ([("L", "-", "110"), ("L", "-", "011")], "a"),
    ([("L", "r", "110"), ("R", "r", "011")], "b"),
    ([("L", "r", "110"), ("R", "b", "010")], "c"),
])
def test_property_violations(rows, prop):
    got = check_admissibility_properties(mat(*rows))
    assert prop in {v.prop for v in got}
    assert is_admissible(mat(*rows)) is not None


def test_fixtures_are_admissible():
    for a in (LR_EXAMPLE, ADMISSIBLE_B, A_SPRIME_K2):
        assert check_admissibility_properties(a) == []
        assert is_admissible(a) is None


@settings(max_examples=200, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=4))
def test_violated_property_implies_its_d_members(a):
    for v in check_admissibility_properties(a):
        members = [FamilyMember("D", f"D{i}", (i,)) for i in PROPERTY_PATTERNS[v.prop]]
        assert any(find_member(a, m) for m in members), v


# partial 2-nestedness

def test_partial_examples():
    assert is_partially_2nested(LR_EXAMPLE) is None
    assert isinstance(is_partially_2nested(NON_LR_EXAMPLE), Hit)
    assert isinstance(is_partially_2nested(gen_D(1).canonical()), Hit)


def test_no_lr_ordering_fallback_type():
    assert NoLROrdering().reason


def test_precoloring_violation_type():
    assert PartialViolation(2, (0, 1)).assertion == 2


# A+ and H

def test_admissible_b_aplus():
    ap = build_Aplus(ADMISSIBLE_B, IDENTITY5)
    assert ap.matrix == ADMISSIBLE_B_PLUS
    assert ap.companion_cols == {1: 5, 2: 6}
    assert ap.readings == {2: 3}


def test_aplus_needs_suitable_ordering():
    a = mat(("LR", "-", "101"), ("L", "-", "111"))
    with pytest.raises(NotSuitable):
        build_Aplus(a, (0, 1, 2))


def test_admissible_b_conflict_graph():
    g = build_H(build_Aplus(ADMISSIBLE_B, IDENTITY5))
    assert g.num_vertices == 8
    assert g.precolors() == [NONE] * 6 + [RED, BLUE]
    edges = {tuple(sorted(e)) for e in g.edges}
    assert edges == {(0, 6), (1, 2), (1, 5), (1, 6), (2, 7), (3, 4)}


# extending a precoloring

def path(n, pre):
    return AuxGraph.plain(n, [(i, i + 1) for i in range(n - 1)], pre)


def cycle(n, pre):
    return AuxGraph.plain(n, [(i, (i + 1) % n) for i in range(n)], pre)


def test_even_path_with_distinct_ends():
    got = extend_two_coloring(path(3, [RED, NONE, BLUE]))
    assert got == ColoringObstruction(ObstructionKind.EVEN_PATH_DISTINCT, (0, 1, 2))


def test_odd_path_with_equal_ends():
    got = extend_two_coloring(path(4, [RED, NONE, NONE, RED]))
    assert got.kind is ObstructionKind.ODD_PATH_SAME


def test_path_extends():
    assert extend_two_coloring(path(3, [RED, NONE, RED])) == [RED, BLUE, RED]


def test_uncolored_triangle():
    got = extend_two_coloring(cycle(3, [NONE] * 3))
    assert got.kind is ObstructionKind.UNCOLORED_ODD_CYCLE
    assert sorted(got.vertices) == [0, 1, 2]


def test_five_cycle_with_one_colored_vertex():
    got = extend_two_coloring(cycle(5, [BLUE] + [NONE] * 4))
    assert got.kind is ObstructionKind.ODD_CYCLE_ONE_COLORED


def test_improper_precoloring_rejected():
    with pytest.raises(ImproperPrecoloring):
        extend_two_coloring(path(2, [RED, RED]))


def test_classify_rejects_non_induced():
    g = AuxGraph.plain(3, [(0, 1), (1, 2), (0, 2)], [RED, NONE, BLUE])
    assert classify_structure(g, (0, 1, 2), cycle=False) is None


@st.composite
def precolored_graphs(draw):
    n = draw(st.integers(1, 8))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    pre = draw(st.lists(st.sampled_from([NONE, NONE, RED, BLUE]), min_size=n, max_size=n))
    return n, edges, pre


@settings(max_examples=300, deadline=None)
@given(precolored_graphs())
def test_extension_matches_brute_force(graph):
    n, edges, pre = graph
    if any(pre[u] is not NONE and pre[u] is pre[v] for u, v in edges):
        return
    g = AuxGraph.plain(n, edges, pre)
    got = extend_two_coloring(g)
    assert isinstance(got, list) == oracle_extension(n, edges, pre)
    if isinstance(got, list):
        assert all(c is not NONE for c in got)
        assert all(got[u] is not got[v] for u, v in edges)
        assert all(p is NONE or p is c for p, c in zip(pre, got))
    else:
        assert classify_structure(g, got.vertices, got.kind.name.startswith(("UNCOLORED", "ODD_CYCLE"))) \
            is got.kind
        assert enumerate_extension_obstructions(g, limit=1)


# bi-colorings

def example_coloring():
    dec = extract_blocks(LR_EXAMPLE, IDENTITY5)
    want = {(0, "L"): BLUE, (0, "R"): RED, (1, "L"): BLUE, (1, "R"): RED,
            (2, "U"): RED, (3, "L"): RED, (5, "R"): BLUE}
    return BlockBicoloring(dec.blocks, tuple(want[(b.owner_row, b.kind.value)] for b in dec.blocks))


def test_example_coloring_is_valid():
    chi = example_coloring()
    assert verify_total_bicoloring(LR_EXAMPLE, IDENTITY5, chi) is None
    assert verify_total_bicoloring(LR_EXAMPLE, IDENTITY5, chi.swapped()) is not None
    assert gem_defects(LR_EXAMPLE, chi) == []
    assert chi.color_of(0, BlockKind.L) is BLUE


def test_lr_blocks_must_differ():
    chi = example_coloring()
    bad = BlockBicoloring(chi.blocks, (BLUE, BLUE) + chi.colors[2:])
    v = verify_total_bicoloring(LR_EXAMPLE, IDENTITY5, bad)
    assert v.assertion == 1
    assert [d.kind for d in gem_defects(LR_EXAMPLE, bad)][0] == "lr-same"


def test_d1_breaks_disjointness_of_same_colored_l_and_r():
    d1 = gen_D(1).canonical()
    dec = extract_blocks(d1, (0,))
    v = verify_total_bicoloring(d1, (0,), BlockBicoloring(dec.blocks, (RED, RED)))
    assert v.assertion == 5


def test_partial_coloring_rejected():
    chi = example_coloring()
    with pytest.raises(ValueError):
        verify_total_bicoloring(LR_EXAMPLE, IDENTITY5, BlockBicoloring(chi.blocks, (NONE,) * 7))


# decisions

def test_admissible_b_is_two_nested_by_characterization():
    v = decide_2nested(ADMISSIBLE_B)
    assert isinstance(v, TwoNested) and v.route == "characterization"
    assert verify_total_bicoloring(ADMISSIBLE_B, v.ordering, v.coloring) is None


@pytest.mark.parametrize("a", [LR_EXAMPLE, A_SPRIME_K2, mat("110", "011"), mat("111", "010"),
                               mat(("LR", "-", "1001"))])
def test_positive_examples(a):
    v = decide_2nested(a)
    assert v.two_nested
    assert verify_total_bicoloring(a, v.ordering, v.coloring) is None


@pytest.mark.parametrize("a, family", [
    (gen_F("F0").canonical(), "F"),
    (gen_F("F1", 5).canonical(), "F"),
    (gen_D(1).canonical(), "D"),
    (NON_LR_EXAMPLE, "D"),
])
def test_negative_examples(a, family):
    v = decide_2nested(a)
    assert isinstance(v, NotTwoNested) and v.confirmed
    assert isinstance(v.certificate, Hit) and v.certificate.family == family


def test_unsuitable_only_ordering_is_refuted_exhaustively():
    a = mat(("R", "b", "0110"), ("R", "b", "1111"), ("LR", "-", "0011"))
    assert find_suitable_ordering(a) is None
    v = decide_2nested(a)
    assert not v.two_nested
    assert isinstance(v.certificate, ExhaustiveRefutation)
    assert "no suitable LR-ordering" in v.diagnostics


def test_exact_search_finds_lr_example():
    o, chi = exact_search(LR_EXAMPLE)
    assert verify_total_bicoloring(LR_EXAMPLE, o, chi) is None


@settings(max_examples=100, deadline=None)
@given(enriched_matrices(max_rows=4, max_cols=4))
def test_dual_symmetry(a):
    assert decide_2nested(a).two_nested == decide_2nested(dual_matrix(a)).two_nested


def test_unlabeled_route():
    assert decide_2nested_unlabeled([[1, 1, 0], [0, 1, 1]]).two_nested
    assert not decide_2nested_unlabeled([[1, 1, 0], [0, 1, 1], [1, 0, 1]]).two_nested
    v = decide_2nested_unlabeled(gen_F("F0").canonical())
    assert v.certificate.family == "F"
    with pytest.raises(ValueError):
        decide_2nested_unlabeled(mat(("L", "-", "1")))
