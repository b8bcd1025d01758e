"""Admissibility, partial 2-nestedness, the A+ / H(A+) construction and the
2-nested decision.

The decision runs the characterization first: a suitable LR-ordering, the
auxiliary matrix A+, its conflict graph H and a precolored 2-coloring of H.
A coloring found that way is mapped back to blocks and verified against the
nine block conditions.  Whenever that route does not end in a verified
coloring, an exact search over every LR-ordering settles the question, so
the boolean answer always matches the block-coloring definition itself.
"""

from __future__ import annotations

import enum
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .c1p import ColumnOrdering, c1p_order, consecutive_orderings, starred_tagged
from .core import EnrichedMatrix, Row, RowColor, RowLabel, RowRelation, relate_masks
from .lr import (Block, BlockDecomposition, BlockKind, NotAnLROrdering, check_lr_ordering,
                 extract_blocks, find_suitable_ordering, is_suitable, lr_orderings)
from .matcher import Hit, find_any

log = logging.getLogger(__name__)

RED, BLUE, NONE = RowColor.RED, RowColor.BLUE, RowColor.NONE
L, R, U, LR = RowLabel.L, RowLabel.R, RowLabel.U, RowLabel.LR


class InternalInconsistency(AssertionError):
    """A positive verdict failed its own verification."""


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_orderings: int = 200_000      # (ordering, reading) pairs tried by the exact search
    max_reading_candidates: int = 64  # all-ones LR-row readings tried on the characterization route


# ---------------------------------------------------------------------------
# admissibility


ADMISSIBILITY_FAMILIES = ("D", "S", "P")
SMALL_FAMILIES = ("small",)

# forbidden D-members whose presence the violation of each property implies
PROPERTY_PATTERNS = {
    "a": (0,), "b": (1,), "c": (2,), "d": (2, 3), "e": (0, 4), "f": (5,),
    "g": (0, 1, 4, 6), "h": (7, 8, 9), "i": (5, 9, 10), "j": (11, 12, 13),
}


def is_admissible(a: EnrichedMatrix) -> Hit | None:
    """First D, S or P member (or dual) embedded in ``a``, or None when admissible."""
    return find_any(a, ADMISSIBILITY_FAMILIES)


@dataclass(frozen=True)
class PropertyViolation:
    prop: str
    rows: tuple[int, ...]


def _sub(x: int, y: int) -> bool:
    return x & ~y == 0


def _nested(x: int, y: int) -> bool:
    return _sub(x, y) or _sub(y, x)


def check_admissibility_properties(a: EnrichedMatrix) -> list[PropertyViolation]:
    """Evaluate the ten admissibility properties directly on the rows.

    Every violated property is reported once per witnessing row tuple.
    """
    rows = a.rows
    m = a.masks()
    full = (1 << a.num_cols) - 1
    lab = [r.label for r in rows]
    col = [r.color for r in rows]
    idx = range(len(rows))
    lrs = [i for i in idx if lab[i] is LR]
    lettered = [i for i in idx if lab[i] in (L, R) and m[i]]  # empty rows carry no block
    out: list[PropertyViolation] = []

    def same_color(i, j):
        return col[i] is not NONE and col[i] is col[j]

    def distinct_colors(i, j):
        return NONE not in (col[i], col[j]) and col[i] is not col[j]

    for i, j in itertools.combinations(lettered, 2):
        if lab[i] is lab[j]:
            if not _nested(m[i], m[j]):
                out.append(PropertyViolation("a", (i, j)))
            if distinct_colors(i, j):
                for r in lrs:
                    if not _sub(m[i], m[r]) and not _sub(m[j], m[r]):
                        out.append(PropertyViolation("e", (i, j, r)))
                        out.append(PropertyViolation("g", (i, j, r)))
            continue
        meet = m[i] & m[j]
        if same_color(i, j):
            if meet:
                out.append(PropertyViolation("b", (i, j)))
            for r in lrs:
                if not _sub(m[i], m[r]) and not _sub(m[j], m[r]):
                    out.append(PropertyViolation("g", (i, j, r)))
        if distinct_colors(i, j):
            if meet and (m[i] | m[j]) != full:
                out.append(PropertyViolation("c", (i, j)))
            for r in lrs:
                if m[r] and not m[r] & (m[i] | m[j]):
                    out.append(PropertyViolation("d", (i, j, r)))
                if meet and m[r] & meet:
                    out.append(PropertyViolation("f", (i, j, r)))
            li, ri = (i, j) if lab[i] is L else (j, i)
            for r3, r4 in itertools.permutations(lrs, 2):
                if (m[li] & m[r3] and not _sub(m[li], m[r3])
                        and m[ri] & m[r4] and not _sub(m[ri], m[r4])
                        and not _nested(m[r3], m[r4])):
                    out.append(PropertyViolation("i", (li, ri, r3, r4)))
    for f in lettered:
        for r1, r2 in itertools.combinations(lrs, 2):
            trio = (m[f], m[r1], m[r2])
            if all(x & y for x, y in itertools.combinations(trio, 2)) and \
                    not any(_nested(x, y) for x, y in itertools.combinations(trio, 2)):
                out.append(PropertyViolation("h", (f, r1, r2)))
    for trio in itertools.combinations(lrs, 3):
        if not any(_nested(m[x], m[y]) for x, y in itertools.combinations(trio, 2)):
            out.append(PropertyViolation("j", trio))
    return sorted(set(out), key=lambda v: (v.prop, v.rows))


# ---------------------------------------------------------------------------
# partial 2-nestedness


@dataclass(frozen=True)
class PartialViolation:
    """A broken precoloring condition: the assertion number and its rows."""
    assertion: int
    rows: tuple[int, ...]


@dataclass(frozen=True)
class NoLROrdering:
    """Fallback certificate when no named family explains a missing LR-ordering."""
    reason: str = "the tagged A* has no consecutive-ones ordering with cL first"


def _precolor_violation(a: EnrichedMatrix) -> PartialViolation | None:
    m = a.masks()
    colored = [i for i, r in enumerate(a.rows) if r.label is not LR and r.color is not NONE]
    for i, j in itertools.combinations(colored, 2):
        if a.rows[i].color is a.rows[j].color and m[i] & m[j] and not _nested(m[i], m[j]):
            return PartialViolation(2, (i, j))
    # Input LR-rows carry a color only when empty, so no LR block is
    # precolored and the two conditions on colored LR blocks hold vacuously.
    return None


def is_partially_2nested(a: EnrichedMatrix) -> Hit | PartialViolation | NoLROrdering | None:
    """The first reason ``a`` is not partially 2-nested, or None.

    LR-orderability is tested first (it is cheap); then the small matrices,
    admissibility and the precoloring condition.
    """
    if next(lr_orderings(a), None) is None:
        return find_any(a, ("tucker", "M")) or NoLROrdering()
    return find_any(a, SMALL_FAMILIES + ADMISSIBILITY_FAMILIES) or _precolor_violation(a)


# ---------------------------------------------------------------------------
# A+


class NotSuitable(ValueError):
    pass


# reading of an all-ones LR row: "L" or "R" (one undivided block) or a split
# position s (L-block on positions [0, s), R-block on [s, n))
Reading = object


@dataclass(frozen=True)
class RowOrigin:
    source_row: int
    kind: BlockKind
    from_lr: bool
    source_mask: int


@dataclass(frozen=True)
class AplusResult:
    matrix: EnrichedMatrix
    origin: tuple[RowOrigin, ...]
    companion_cols: dict
    ordering: ColumnOrdering
    readings: dict                      # all-ones LR row -> Reading
    lacks_block: tuple[bool, bool]      # some LR row of A has no L-block / no R-block


def default_reading(a: EnrichedMatrix, dec: BlockDecomposition, row: int) -> Reading:
    """Split an all-ones LR row after the largest L-block when some row is
    labeled L or R; otherwise keep it as one L-block."""
    n = a.num_cols
    if not any(r.label in (L, R) and r.mask for r in a.rows):
        return "L"
    others = [b for b in dec.blocks if not b.full and b.owner_row != row]
    lstops = [b.stop for b in others if b.kind is BlockKind.L]
    if lstops:
        s = max(lstops)
    else:
        rstarts = [b.start for b in others if b.kind is BlockKind.R]
        s = min(rstarts) if rstarts else n
    if s <= 0:
        return "R"
    if s >= n:
        return "L"
    return s


def reading_options(n: int) -> list:
    return ["L", "R"] + list(range(1, n))


def apply_readings(dec: BlockDecomposition, n: int, readings: dict) -> tuple[Block, ...]:
    """Blocks of ``dec`` with every all-ones LR row read as ``readings`` says."""
    out = []
    for b in dec.blocks:
        if not b.full:
            out.append(b)
            continue
        rd = readings.get(b.owner_row, "L")
        if rd == "L":
            out.append(b)
        elif rd == "R":
            out.append(Block(b.owner_row, BlockKind.R, 0, n, full=True))
        else:
            out.append(Block(b.owner_row, BlockKind.L, 0, rd))
            out.append(Block(b.owner_row, BlockKind.R, rd, n))
    return tuple(out)


def build_Aplus(a: EnrichedMatrix, ordering: ColumnOrdering | Sequence[int],
                readings: dict | None = None) -> AplusResult:
    """Replace LR rows by labeled block rows under a suitable LR-ordering.

    Empty rows are dropped; an LR row with one block becomes an L or R row;
    an LR row with two blocks becomes an L row and an R row tied by a new
    companion column.  All-ones LR rows follow ``readings`` (default: the
    split after the largest L-block when a row labeled L or R exists).
    Companion columns are appended in LR-row order.  Columns keep the
    input's indexing.
    """
    if not isinstance(ordering, ColumnOrdering):
        ordering = ColumnOrdering(tuple(ordering))
    if not is_suitable(a, ordering):
        raise NotSuitable("the ordering is not a suitable LR-ordering")
    n = a.num_cols
    perm = ordering.perm
    dec = extract_blocks(a, ordering)
    chosen = {}
    for b in dec.blocks:
        if b.full:
            rd = (readings or {}).get(b.owner_row)
            chosen[b.owner_row] = default_reading(a, dec, b.owner_row) if rd is None else rd
    blocks = apply_readings(dec, n, chosen)
    by_row: dict[int, list[Block]] = {}
    for b in blocks:
        by_row.setdefault(b.owner_row, []).append(b)

    def cols_of(b: Block) -> frozenset[int]:
        return frozenset(perm[p] for p in b.positions)

    staged = []   # (columns, label, color, origin, companion index or None)
    companions: dict[int, int] = {}
    for i, row in enumerate(a.rows):
        if not row.mask:
            continue
        if row.label is not LR:
            kind = {L: BlockKind.L, R: BlockKind.R, U: BlockKind.U}[row.label]
            staged.append((frozenset(c for c in range(n) if row.bits[c]), row.label, row.color,
                           RowOrigin(i, kind, False, row.mask), None))
            continue
        own = by_row.get(i, [])
        cf = None
        if len(own) == 2:
            cf = len(companions)
            companions[i] = n + cf
        for b in own:
            label = L if b.kind is BlockKind.L else R
            staged.append((cols_of(b), label, NONE, RowOrigin(i, b.kind, True, row.mask), cf))
    rows = []
    for cols, label, color, _, cf in staged:
        bits = [1 if c in cols else 0 for c in range(n)] + [0] * len(companions)
        if cf is not None:
            bits[n + cf] = 1
        rows.append(Row(tuple(bits), label, color))
    mat = EnrichedMatrix(n + len(companions), tuple(rows))
    kinds_present = {(b.owner_row, b.kind) for b in blocks}
    lr_rows = [i for i, r in enumerate(a.rows) if r.label is LR]
    lacks = (any((i, BlockKind.L) not in kinds_present for i in lr_rows),
             any((i, BlockKind.R) not in kinds_present for i in lr_rows))
    return AplusResult(mat, tuple(s[3] for s in staged), companions, ordering, chosen, lacks)


# ---------------------------------------------------------------------------
# the conflict graph H(A+)


class VertexKind(enum.Enum):
    LR = "LR"
    NON_LR = "non-LR"
    HUB = "hub"     # forces its neighbours to one color


@dataclass(frozen=True)
class AuxVertex:
    source_row: int | None
    kind: VertexKind
    label: RowLabel
    precolor: RowColor = NONE


@dataclass
class AuxGraph:
    vertices: list[AuxVertex]
    edges: set = field(default_factory=set)
    companion_cols: dict = field(default_factory=dict)

    @classmethod
    def plain(cls, num_vertices: int, edges: Iterable, precolor: Sequence[RowColor]) -> "AuxGraph":
        vs = [AuxVertex(None, VertexKind.NON_LR, U, precolor[v]) for v in range(num_vertices)]
        return cls(vs, {frozenset(e) for e in edges})

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.vertices]
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def precolors(self) -> list[RowColor]:
        return [v.precolor for v in self.vertices]


def has_gem(x: int, y: int) -> bool:
    """Rows ``x`` and ``y`` contain a 0-gem, i.e. they overlap."""
    return relate_masks(x, y) is RowRelation.OVERLAP


def has_weak_gem(x: int, lx: RowLabel, y: int, ly: RowLabel) -> bool:
    """A 1-gem with ``x`` as its one-entry row: x meets y and misses part of y,
    where x is labeled L/R and y unlabeled, or x is LR and y is not."""
    if not (x & y and y & ~x):
        return False
    return (lx in (L, R) and ly is U) or (lx is LR and ly is not LR)


def build_H(ap: AplusResult) -> AuxGraph:
    """Conflict graph over the rows of A+.

    Besides the four adjacency rules for H, an L row and an R row of A that
    intersect are adjacent, and when some LR row of A lacks an L-block (or
    R-block) a hub vertex ties all L rows (R rows) of A to one color.
    """
    mat = ap.matrix
    n0 = len(ap.ordering)
    base = (1 << n0) - 1
    masks = [m & base for m in mat.masks()]
    verts = []
    for row, o in zip(mat.rows, ap.origin):
        verts.append(AuxVertex(o.source_row, VertexKind.LR if o.from_lr else VertexKind.NON_LR,
                               row.label, row.color))
    edges = set()
    for v, w in itertools.combinations(range(len(verts)), 2):
        ov, ow = ap.origin[v], ap.origin[w]
        mv, mw = masks[v], masks[w]
        lv, lw = verts[v].label, verts[w].label
        if not ov.from_lr and not ow.from_lr:
            adj = (has_gem(mv, mw) or has_weak_gem(mv, lv, mw, lw) or has_weak_gem(mw, lw, mv, lv)
                   or ({lv, lw} == {L, R} and bool(mv & mw)))
        elif ov.from_lr and ow.from_lr:
            if ov.source_row == ow.source_row:
                adj = True
            else:
                adj = lv is lw and has_gem(ov.source_mask, ow.source_mask)
        else:
            mlr, mo = (mv, mw) if ov.from_lr else (mw, mv)
            adj = bool(mlr & mo) and not _sub(mo, mlr)
        if adj:
            edges.add(frozenset((v, w)))
    nrows = len(verts)
    for lacking, label in zip(ap.lacks_block, (L, R)):
        group = [v for v in range(nrows)
                 if not ap.origin[v].from_lr and verts[v].label is label and masks[v]]
        if lacking and len(group) >= 2:
            hub = len(verts)
            verts.append(AuxVertex(None, VertexKind.HUB, label))
            edges.update(frozenset((hub, v)) for v in group)
    return AuxGraph(verts, edges, dict(ap.companion_cols))


# ---------------------------------------------------------------------------
# extending a precoloring


class ImproperPrecoloring(ValueError):
    pass


class ObstructionKind(enum.Enum):
    EVEN_PATH_DISTINCT = "even induced path, endpoints colored differently"
    ODD_PATH_SAME = "odd induced path, endpoints colored alike"
    UNCOLORED_ODD_CYCLE = "uncolored induced odd cycle"
    ODD_CYCLE_ONE_COLORED = "induced odd cycle with one colored vertex"
    ODD_CYCLE_TWO_ADJACENT = "induced odd cycle with exactly two adjacent colored vertices"


@dataclass(frozen=True)
class ColoringObstruction:
    kind: ObstructionKind
    vertices: tuple[int, ...]   # the path, or the cycle in cyclic order


def classify_structure(g: AuxGraph, seq: Sequence[int], cycle: bool) -> ObstructionKind | None:
    """Which of the five forbidden structures ``seq`` is, or None.

    ``seq`` must be an induced path (``cycle=False``) or induced cycle.
    """
    adj = g.adjacency()
    pc = g.precolors()
    k = len(seq)
    if len(set(seq)) != k:
        return None
    for x, y in itertools.combinations(range(k), 2):
        consecutive = y == x + 1 or (cycle and x == 0 and y == k - 1)
        if (seq[y] in adj[seq[x]]) != consecutive:
            return None
    colored = [i for i in range(k) if pc[seq[i]] is not NONE]
    if not cycle:
        if k < 2 or colored != [0, k - 1]:
            return None
        same = pc[seq[0]] is pc[seq[-1]]
        edges = k - 1
        if edges % 2 == 0 and not same:
            return ObstructionKind.EVEN_PATH_DISTINCT
        if edges % 2 == 1 and same:
            return ObstructionKind.ODD_PATH_SAME
        return None
    if k < 3 or k % 2 == 0:
        return None
    if not colored:
        return ObstructionKind.UNCOLORED_ODD_CYCLE
    if len(colored) == 1:
        return ObstructionKind.ODD_CYCLE_ONE_COLORED
    if len(colored) == 2 and (colored[1] - colored[0] == 1 or colored == [0, k - 1]):
        return ObstructionKind.ODD_CYCLE_TWO_ADJACENT
    return None


def _check_precoloring(g: AuxGraph):
    pc = g.precolors()
    for e in g.edges:
        u, v = tuple(e)
        if pc[u] is not NONE and pc[u] is pc[v]:
            raise ImproperPrecoloring(f"adjacent vertices {u} and {v} share a precolor")


def _shortest_odd_cycle(adj: list[set[int]]) -> list[int] | None:
    best = None
    for root in range(len(adj)):
        dist = {root: 0}
        parent = {root: None}
        q = deque([root])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
        for u in range(len(adj)):
            for w in adj[u]:
                if u < w and u in dist and w in dist and dist[u] == dist[w]:
                    length = 2 * dist[u] + 1
                    if best is not None and length >= len(best):
                        continue
                    pu, pw = [u], [w]
                    while parent[pu[-1]] is not None:
                        pu.append(parent[pu[-1]])
                    while parent[pw[-1]] is not None:
                        pw.append(parent[pw[-1]])
                    cyc = pu[::-1] + pw[:-1]
                    # the two tree paths share only the root when the cycle is simple
                    if len(set(cyc)) == len(cyc) and len(cyc) == length:
                        best = cyc
    return best


def _obstruction(g: AuxGraph) -> ColoringObstruction:
    """A forbidden structure, read off a shortest odd cycle of G plus two
    adjacent anchor vertices joined to the opposite-colored vertices."""
    nv = g.num_vertices
    pc = g.precolors()
    adj = [set(s) for s in g.adjacency()] + [set(), set()]
    red_anchor, blue_anchor = nv, nv + 1
    adj[red_anchor].add(blue_anchor)
    adj[blue_anchor].add(red_anchor)
    for v in range(nv):
        if pc[v] is RED:
            adj[v].add(blue_anchor)
            adj[blue_anchor].add(v)
        elif pc[v] is BLUE:
            adj[v].add(red_anchor)
            adj[red_anchor].add(v)
    cyc = _shortest_odd_cycle(adj)
    if cyc is None:  # pragma: no cover - only called when extension failed
        raise AssertionError("no odd cycle although the extension failed")
    anchors = {red_anchor, blue_anchor}
    if not anchors & set(cyc):
        kind = classify_structure(g, cyc, cycle=True)
        if kind is not None:
            return ColoringObstruction(kind, tuple(cyc))
        path = cyc
        closed = True
    else:
        # rotate so the anchors sit at the end, leaving a path of G
        k = len(cyc)
        start = next(i for i in range(k) if cyc[i] not in anchors and cyc[i - 1] in anchors)
        rot = cyc[start:] + cyc[:start]
        path = [v for v in rot if v not in anchors]
        closed = False
    # an inconsistent stretch between consecutive colored vertices exists
    colored = [i for i, v in enumerate(path) if pc[v] is not NONE]
    pairs = list(zip(colored, colored[1:]))
    if closed:
        pairs.append((colored[-1], colored[0] + len(path)))
    for i, j in pairs:
        seg = [path[t % len(path)] for t in range(i, j + 1)]
        kind = classify_structure(g, seg, cycle=False)
        if kind is not None:
            return ColoringObstruction(kind, tuple(seg))
    raise AssertionError("odd cycle without a forbidden structure")  # pragma: no cover


def extend_two_coloring(g: AuxGraph) -> list[RowColor] | ColoringObstruction:
    """Extend the precoloring of ``g`` to a proper 2-coloring, or explain why not.

    Colors spread breadth-first from the precolored vertices of each
    component; a component with no precolored vertex starts from red at
    its lowest vertex.
    """
    _check_precoloring(g)
    adj = g.adjacency()
    col = g.precolors()
    seeds = [v for v in range(g.num_vertices) if col[v] is not NONE]
    seed_set = set(seeds)
    for s in seeds + [v for v in range(g.num_vertices) if col[v] is NONE]:
        if col[s] is NONE:
            col[s] = RED
        elif s not in seed_set:
            continue   # reached from an earlier start
        q = deque([s])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if col[w] is NONE:
                    col[w] = col[u].other()
                    q.append(w)
                elif col[w] is col[u]:
                    return _obstruction(g)
    return col


def enumerate_extension_obstructions(g: AuxGraph, limit: int | None = None) -> list[ColoringObstruction]:
    """Every forbidden structure of ``g``, found by listing induced paths
    between colored vertices and induced odd cycles.  Exponential; for tests."""
    adj = g.adjacency()
    pc = g.precolors()
    nv = g.num_vertices
    found: list[ColoringObstruction] = []

    def full() -> bool:
        return limit is not None and len(found) >= limit

    # induced paths: colored endpoints, uncolored interior
    for s in range(nv):
        if pc[s] is NONE:
            continue
        stack = [(s, [s])]
        while stack and not full():
            u, path = stack.pop()
            for w in adj[u]:
                if w in path or any(w in adj[x] for x in path[:-1]):
                    continue
                if pc[w] is not NONE:
                    if w > s:
                        kind = classify_structure(g, path + [w], cycle=False)
                        if kind is not None:
                            found.append(ColoringObstruction(kind, tuple(path + [w])))
                    continue
                stack.append((w, path + [w]))
    # induced cycles, each listed from its smallest vertex
    for s in range(nv):
        stack = [(s, [s])]
        while stack and not full():
            u, path = stack.pop()
            for w in adj[u]:
                if w <= s or w in path:
                    if w == s and len(path) >= 3 and path[1] < path[-1]:
                        kind = classify_structure(g, path, cycle=True)
                        if kind is not None:
                            found.append(ColoringObstruction(kind, tuple(path)))
                    continue
                if any(w in adj[x] for x in path[1:-1]):
                    continue
                stack.append((w, path + [w]))
    return found


# ---------------------------------------------------------------------------
# block bi-colorings and their verification


@dataclass(frozen=True)
class BlockBicoloring:
    blocks: tuple[Block, ...]
    colors: tuple[RowColor, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.colors):
            raise ValueError("one color per block")

    @property
    def total(self) -> bool:
        return all(c is not NONE for c in self.colors)

    def color_of(self, row: int, kind: BlockKind) -> RowColor | None:
        for b, c in zip(self.blocks, self.colors):
            if b.owner_row == row and b.kind is kind:
                return c
        return None

    def swapped(self) -> "BlockBicoloring":
        return BlockBicoloring(self.blocks, tuple(c.other() if c is not NONE else c for c in self.colors))


@dataclass(frozen=True)
class BicoloringViolation:
    assertion: int
    blocks: tuple[Block, ...]


@dataclass(frozen=True)
class _Constraint:
    op: str                  # "neq", "eq", "fix" or "fail"
    ids: tuple[int, ...]
    assertion: int
    color: RowColor = NONE   # for "fix"


def _constraints(a: EnrichedMatrix, blocks: Sequence[Block]) -> list[_Constraint]:
    """Every instance of the nine block conditions over ``blocks``, in
    assertion order."""
    rows = a.rows
    masks = a.masks()
    lr_owned = [rows[b.owner_row].label is LR for b in blocks]
    pm = [b.pmask for b in blocks]
    kinds = [b.kind for b in blocks]
    nb = len(blocks)
    out: list[_Constraint] = []
    by_row: dict[int, dict[BlockKind, int]] = {}
    for k, b in enumerate(blocks):
        by_row.setdefault(b.owner_row, {})[b.kind] = k
    # 1
    for r, own in by_row.items():
        if rows[r].label is LR and BlockKind.L in own and BlockKind.R in own:
            out.append(_Constraint("neq", (own[BlockKind.L], own[BlockKind.R]), 1))
    # 2
    for k, b in enumerate(blocks):
        c = rows[b.owner_row].color
        if c is not NONE:
            out.append(_Constraint("fix", (k,), 2, c))
    # 3
    for x, y in itertools.permutations(range(nb), 2):
        if lr_owned[x] and not lr_owned[y] and kinds[x] is kinds[y] is not BlockKind.U \
                and rows[blocks[y].owner_row].label.value == kinds[y].value \
                and _sub(pm[x], pm[y]) and pm[x] != pm[y]:
            out.append(_Constraint("neq", (x, y), 3))
    # 4
    for x, y in itertools.permutations(range(nb), 2):
        if lr_owned[x] and {kinds[x], kinds[y]} == {BlockKind.L, BlockKind.R} and pm[x] & pm[y]:
            out.append(_Constraint("fail", (x, y), 4))
    # 5
    for x, y in itertools.permutations(range(nb), 2):
        if kinds[x] is BlockKind.L and kinds[y] is BlockKind.R and pm[x] & pm[y]:
            out.append(_Constraint("neq", (x, y), 5))
    # 6
    for x, y in itertools.combinations(range(nb), 2):
        if kinds[x] is kinds[y] is BlockKind.U and pm[x] & pm[y] and not _nested(pm[x], pm[y]):
            out.append(_Constraint("neq", (x, y), 6))
    # 7
    for x, y in itertools.permutations(range(nb), 2):
        if kinds[x] is not BlockKind.U and kinds[y] is BlockKind.U \
                and pm[x] & pm[y] and not _sub(pm[y], pm[x]):
            out.append(_Constraint("neq", (x, y), 7))
    # 8
    lr_rows = [r for r, row in enumerate(rows) if row.label is LR]
    for kind in (BlockKind.L, BlockKind.R):
        if all(kind in by_row.get(r, {}) for r in lr_rows):
            continue
        group = [k for k in range(nb) if kinds[k] is kind and not lr_owned[k]]
        for x, y in zip(group, group[1:]):
            out.append(_Constraint("eq", (x, y), 8))
    # 9
    for r1, r2 in itertools.permutations(lr_rows, 2):
        if has_gem(masks[r1], masks[r2]):
            o1, o2 = by_row.get(r1, {}), by_row.get(r2, {})
            if BlockKind.L in o1 and BlockKind.R in o2:
                out.append(_Constraint("eq", (o1[BlockKind.L], o2[BlockKind.R]), 9))
    return out


def _check_blocks(a: EnrichedMatrix, dec: BlockDecomposition, blocks: Sequence[Block]):
    """Raise unless ``blocks`` are the blocks of ``dec`` up to the reading of
    all-ones LR rows."""
    n = a.num_cols
    want: dict[int, set] = {}
    for b in dec.blocks:
        want.setdefault(b.owner_row, set()).add((b.kind, b.start, b.stop))
    got: dict[int, set] = {}
    for b in blocks:
        got.setdefault(b.owner_row, set()).add((b.kind, b.start, b.stop))
    full_rows = {b.owner_row for b in dec.blocks if b.full}
    for r in set(want) | set(got):
        g = got.get(r, set())
        if r in full_rows:
            ok = g in ({(BlockKind.L, 0, n)}, {(BlockKind.R, 0, n)}) or (
                len(g) == 2 and any(g == {(BlockKind.L, 0, s), (BlockKind.R, s, n)}
                                    for s in range(1, n)))
        else:
            ok = g == want.get(r, set())
        if not ok:
            raise ValueError(f"blocks of row {r} do not match the ordering")


def verify_total_bicoloring(a: EnrichedMatrix, ordering: ColumnOrdering | Sequence[int],
                            chi: BlockBicoloring) -> BicoloringViolation | None:
    """First of the nine block conditions ``chi`` breaks, or None."""
    perm = ordering.perm if isinstance(ordering, ColumnOrdering) else tuple(ordering)
    reason = check_lr_ordering(a, perm)
    if reason:
        raise NotAnLROrdering(reason)
    if not chi.total:
        raise ValueError("the bi-coloring is not total")
    _check_blocks(a, extract_blocks(a, perm), chi.blocks)
    col = chi.colors
    for c in _constraints(a, chi.blocks):
        vals = [col[i] for i in c.ids]
        ok = {"neq": lambda: vals[0] is not vals[1],
              "eq": lambda: vals[0] is vals[1],
              "fix": lambda: vals[0] is c.color,
              "fail": lambda: False}[c.op]()
        if not ok:
            return BicoloringViolation(c.assertion, tuple(chi.blocks[i] for i in c.ids))
    return None


# ---------------------------------------------------------------------------
# exact search


class _ParityUnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n

    def find(self, x: int) -> tuple[int, int]:
        p = 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            p ^= self.parity[x]
            x = self.parent[x]
        root, acc = x, p
        for y in path:   # path compression
            nxt = self.parity[y]
            self.parent[y], self.parity[y] = root, acc
            acc ^= nxt
        return root, p

    def union(self, x: int, y: int, differ: int) -> bool:
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == differ
        self.parent[rx] = ry
        self.parity[rx] = px ^ py ^ differ
        return True


def solve_block_coloring(a: EnrichedMatrix, blocks: Sequence[Block]) -> tuple[RowColor, ...] | None:
    """A coloring of ``blocks`` meeting all nine conditions, or None.

    Every condition is an equality, an inequality or a fixed color, so a
    parity union-find decides it exactly.
    """
    nb = len(blocks)
    red, blue = nb, nb + 1
    uf = _ParityUnionFind(nb + 2)
    uf.union(red, blue, 1)
    for c in _constraints(a, blocks):
        if c.op == "fail":
            return None
        if c.op == "fix":
            ok = uf.union(c.ids[0], red if c.color is RED else blue, 0)
        else:
            ok = uf.union(c.ids[0], c.ids[1], 1 if c.op == "neq" else 0)
        if not ok:
            return None
    rr, rp = uf.find(red)
    out = []
    for k in range(nb):
        root, p = uf.find(k)
        if root == rr:
            out.append(RED if p == rp else BLUE)
        else:
            # a free component: its root takes red
            out.append(RED if p == 0 else BLUE)
    return tuple(out)


@dataclass(frozen=True)
class ExhaustiveRefutation:
    """Every LR-ordering and reading was tried; none admits a coloring."""
    pairs_checked: int


def _all_lr_orderings(a: EnrichedMatrix) -> Iterator[ColumnOrdering]:
    tm = starred_tagged(a)
    for o in consecutive_orderings(tm.base, collapse_twins=False, first=tm.cL):
        yield ColumnOrdering(tuple(c - 1 for c in o.perm[1:-1]))


def exact_search(a: EnrichedMatrix, budget: SearchBudget | None = None):
    """(ordering, bi-coloring) for the first LR-ordering and reading that
    admit a coloring, or an :class:`ExhaustiveRefutation`."""
    budget = budget or SearchBudget()
    n = a.num_cols
    tried = 0
    for o in _all_lr_orderings(a):
        dec = extract_blocks(a, o)
        full_rows = [b.owner_row for b in dec.blocks if b.full]
        for combo in itertools.product(*(reading_options(n) for _ in full_rows)):
            tried += 1
            if tried > budget.max_orderings:
                raise SearchBudgetExceeded(f"more than {budget.max_orderings} orderings and readings")
            blocks = apply_readings(dec, n, dict(zip(full_rows, combo)))
            cols = solve_block_coloring(a, blocks)
            if cols is not None:
                return o, BlockBicoloring(blocks, cols)
    return ExhaustiveRefutation(tried)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class TwoNested:
    ordering: ColumnOrdering
    coloring: BlockBicoloring
    route: str = "characterization"      # or "exhaustive"
    tolerated: object = None             # a forbidden-family hit the definition still accepts
    diagnostics: tuple[str, ...] = ()

    two_nested = True


@dataclass(frozen=True)
class NotTwoNested:
    certificate: object
    confirmed: bool = True               # False when the exact search ran out of budget
    diagnostics: tuple[str, ...] = ()

    two_nested = False


Verdict = TwoNested | NotTwoNested


def _to_bicoloring(ap: AplusResult, dec: BlockDecomposition, n: int,
                   colors: Sequence[RowColor]) -> BlockBicoloring:
    blocks = apply_readings(dec, n, ap.readings)
    where = {(b.owner_row, b.kind): k for k, b in enumerate(blocks)}
    out = [NONE] * len(blocks)
    for v, o in enumerate(ap.origin):
        out[where[(o.source_row, o.kind)]] = colors[v]
    return BlockBicoloring(blocks, tuple(out))


def _reading_candidates(a, dec, budget: SearchBudget) -> list[dict]:
    full_rows = [b.owner_row for b in dec.blocks if b.full]
    first = {r: default_reading(a, dec, r) for r in full_rows}
    out = [first]
    for combo in itertools.product(*(reading_options(a.num_cols) for _ in full_rows)):
        if len(out) >= budget.max_reading_candidates:
            break
        rd = dict(zip(full_rows, combo))
        if rd != first:
            out.append(rd)
    return out


def _breaks_disjointness(a: EnrichedMatrix, blocks: Sequence[Block]) -> bool:
    """An LR block meets a block of the opposite letter, whatever the colors."""
    return any(c.op == "fail" for c in _constraints(a, blocks))


def _characterization(a: EnrichedMatrix, o: ColumnOrdering, budget: SearchBudget,
                      notes: list[str]) -> TwoNested | ColoringObstruction | None:
    dec = extract_blocks(a, o)
    first_obstruction = None
    for rd in _reading_candidates(a, dec, budget):
        if _breaks_disjointness(a, apply_readings(dec, a.num_cols, rd)):
            continue
        ap = build_Aplus(a, o, rd)
        ext = extend_two_coloring(build_H(ap))
        if isinstance(ext, ColoringObstruction):
            first_obstruction = first_obstruction or ext
            continue
        chi = _to_bicoloring(ap, dec, a.num_cols, ext[:len(ap.origin)])
        bad = verify_total_bicoloring(a, o, chi)
        if bad is None:
            return TwoNested(o, chi, "characterization", None, tuple(notes))
        msg = f"H coloring under readings {rd} breaks assertion {bad.assertion}"
        log.warning(msg)
        notes.append(msg)
    return first_obstruction


def decide_2nested(a: EnrichedMatrix, budget: SearchBudget | None = None) -> Verdict:
    """Decide 2-nestedness with a certificate either way."""
    budget = budget or SearchBudget()
    notes: list[str] = []
    if next(lr_orderings(a), None) is None:
        return NotTwoNested(find_any(a) or NoLROrdering())
    witness = find_any(a, SMALL_FAMILIES + ADMISSIBILITY_FAMILIES) or _precolor_violation(a)
    obstruction = None
    if witness is None:
        o = find_suitable_ordering(a)
        if o is None:
            notes.append("no suitable LR-ordering")
        else:
            got = _characterization(a, o, budget, notes)
            if isinstance(got, TwoNested):
                return _checked(a, got)
            obstruction = got
    try:
        found = exact_search(a, budget)
    except SearchBudgetExceeded:
        if witness is not None or obstruction is not None:
            notes.append("exact search budget exhausted")
            return NotTwoNested(witness or find_any(a) or obstruction, False, tuple(notes))
        raise
    if not isinstance(found, ExhaustiveRefutation):
        o, chi = found
        if witness is not None or obstruction is not None:
            notes.append("the block conditions hold although the characterization route failed")
        return _checked(a, TwoNested(o, chi, "exhaustive", witness, tuple(notes)))
    if witness is not None:
        return NotTwoNested(witness, True, tuple(notes))
    return NotTwoNested(find_any(a) or obstruction or found, True, tuple(notes))


def _checked(a: EnrichedMatrix, v: TwoNested) -> TwoNested:
    bad = verify_total_bicoloring(a, v.ordering, v.coloring)
    if bad is not None:
        raise InternalInconsistency(f"positive verdict breaks assertion {bad.assertion}")
    return v


def decide_2nested_unlabeled(m) -> Verdict:
    """Decide 2-nestedness of a matrix without labels or colors.

    Such a matrix needs the consecutive-ones property, and then only the
    overlapping rows constrain each other, so it is 2-nested iff it also
    contains no F0, F1(k) or F2(k).
    """
    a = m if isinstance(m, EnrichedMatrix) else EnrichedMatrix.build([tuple(r) for r in m])
    if any(r.label is not U or r.color is not NONE for r in a.rows):
        raise ValueError("the matrix has labeled or colored rows")
    c = c1p_order(a)
    if not isinstance(c, ColumnOrdering):
        return NotTwoNested(c)
    hit = find_any(a, ("F",))
    if hit is not None:
        return NotTwoNested(hit)
    dec = extract_blocks(a, c)
    masks = a.masks()
    # one vertex per nonempty row, adjacent when the rows overlap
    g = AuxGraph.plain(len(dec.blocks), [
        (x, y) for x, y in itertools.combinations(range(len(dec.blocks)), 2)
        if has_gem(masks[dec.blocks[x].owner_row], masks[dec.blocks[y].owner_row])],
        [NONE] * len(dec.blocks))
    ext = extend_two_coloring(g)
    if isinstance(ext, ColoringObstruction):
        return NotTwoNested(ext, True, ("overlap graph is not bipartite but no F member was found",))
    return _checked(a, TwoNested(c, BlockBicoloring(dec.blocks, tuple(ext))))


# ---------------------------------------------------------------------------
# gem defects of a colored matrix


@dataclass(frozen=True)
class GemDefect:
    kind: str           # "lr-same", "mono-gem", "mono-weak-gem", "bad-doubly-weak-gem"
    blocks: tuple[Block, ...]


def gem_defects(a: EnrichedMatrix, chi: BlockBicoloring) -> list[GemDefect]:
    """LR rows whose two blocks share a color, and monochromatic gems, monochromatic
    weak gems and badly-colored doubly-weak gems between colored blocks."""
    rows = a.rows
    masks = a.masks()
    out = []
    bl, cl = chi.blocks, chi.colors
    for x, y in itertools.combinations(range(len(bl)), 2):
        bx, by = bl[x], bl[y]
        if bx.owner_row == by.owner_row:
            if cl[x] is cl[y]:
                out.append(GemDefect("lr-same", (bx, by)))
            continue
        lx, ly = rows[bx.owner_row].label, rows[by.owner_row].label
        if lx is LR and ly is LR:
            if has_gem(masks[bx.owner_row], masks[by.owner_row]) and cl[x] is cl[y] \
                    and bx.pmask & by.pmask:
                out.append(GemDefect("bad-doubly-weak-gem", (bx, by)))
            continue
        if cl[x] is not cl[y]:
            continue
        px, py = bx.pmask, by.pmask
        if has_gem(px, py):
            out.append(GemDefect("mono-gem", (bx, by)))
        elif has_weak_gem(px, lx, py, ly) or has_weak_gem(py, ly, px, lx):
            out.append(GemDefect("mono-weak-gem", (bx, by)))
    return out
