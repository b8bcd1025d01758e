"""Consecutive-ones orderings and the starred/tagged matrix constructions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import EnrichedMatrix, Row, RowColor, RowLabel, complement_row, to_mask


@dataclass(frozen=True)
class ColumnOrdering:
    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(self.perm))
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")

    def __len__(self):
        return len(self.perm)

    def __iter__(self):
        return iter(self.perm)

    def reversed(self) -> "ColumnOrdering":
        return ColumnOrdering(self.perm[::-1])


@dataclass(frozen=True)
class TuckerWitness:
    name: str
    params: tuple[int, ...]
    embedding: object   # matcher.Embedding


def _as_masks(m) -> tuple[list[int], int]:
    if isinstance(m, EnrichedMatrix):
        return m.masks(), m.num_cols
    rows = [list(r) for r in m]
    n = len(rows[0]) if rows else 0
    return [to_mask(r) for r in rows], n


def _twin_classes(masks: Sequence[int], n: int) -> list[list[int]]:
    """Columns grouped by identical column vectors, each group ascending."""
    groups: dict[tuple[int, ...], list[int]] = {}
    for c in range(n):
        key = tuple((m >> c) & 1 for m in masks)
        groups.setdefault(key, []).append(c)
    return sorted(groups.values())


def consecutive_orderings(m, collapse_twins: bool = True,
                          first: int | None = None) -> Iterator[ColumnOrdering]:
    """Lazily yield consecutive-ones orderings in lexicographic order.

    Columns are placed left to right; a row is "open" once one of its
    columns is placed and "closed" as soon as a placed column misses it,
    after which none of its columns may appear.  With ``collapse_twins``
    identical columns stay adjacent in ascending order, which loses no
    order type of the rows.  ``first`` restricts the leftmost column.
    """
    masks, n = _as_masks(m)
    masks = [x for x in masks if x]
    if collapse_twins:
        units = _twin_classes(masks, n)
    else:
        units = [[c] for c in range(n)]
    unit_mask = []
    for u in units:
        um = 0
        for c in u:
            um |= 1 << c
        unit_mask.append(um)
    k = len(units)
    order: list[int] = []

    def rec(used: int, placed: int, opened: int, closed: int):
        if len(order) == k:
            out = []
            for ui in order:
                out.extend(units[ui])
            yield ColumnOrdering(tuple(out))
            return
        for ui in range(k):
            if used >> ui & 1:
                continue
            um = unit_mask[ui]
            if not order and first is not None and not um >> first & 1:
                continue
            ok = True
            new_open, new_closed = opened, closed
            for ri, rm in enumerate(masks):
                hit = bool(rm & um)
                bit = 1 << ri
                if hit:
                    if closed & bit:
                        ok = False
                        break
                    new_open |= bit
                elif opened & bit and not closed & bit:
                    # row stops here, so all its columns must already be placed
                    if rm & ~placed:
                        ok = False
                        break
                    new_closed |= bit
            if not ok:
                continue
            order.append(ui)
            yield from rec(used | 1 << ui, placed | um, new_open, new_closed)
            order.pop()

    yield from rec(0, 0, 0, 0)


def has_c1p(m) -> bool:
    return next(consecutive_orderings(m), None) is not None


def is_consecutive_ordering(m, perm: Sequence[int]) -> bool:
    masks, n = _as_masks(m)
    pos = {c: p for p, c in enumerate(perm)}
    for rm in masks:
        ps = [pos[c] for c in range(n) if rm >> c & 1]
        if ps and max(ps) - min(ps) + 1 != len(ps):
            return False
    return True


def c1p_order(m) -> ColumnOrdering | TuckerWitness:
    """A consecutive-ones ordering, or a Tucker submatrix certifying there is none."""
    found = next(consecutive_orderings(m), None)
    if found is not None:
        return found
    from .matcher import find_tucker
    if isinstance(m, EnrichedMatrix):
        target = m
    else:
        target = EnrichedMatrix.build([tuple(r) for r in m])
    hit = find_tucker(target)
    if hit is None:  # pragma: no cover - Tucker's theorem
        raise AssertionError("no consecutive ordering and no Tucker submatrix")
    return hit


# ---------------------------------------------------------------------------
# A*, A_tagg, A*_tagg


@dataclass(frozen=True)
class StarMatrix(EnrichedMatrix):
    """A* with bookkeeping: which rows are distinguished or complemented,
    and which row of the original matrix each row came from (None for
    distinguished rows)."""
    distinguished: tuple[bool, ...] = ()
    complemented: tuple[bool, ...] = ()
    source: tuple[int | None, ...] = ()


def build_Astar(a: EnrichedMatrix) -> StarMatrix:
    """Complement every LR row and prepend the two all-ones distinguished rows.

    The distinguished rows come first (R-labeled, then L-labeled) and an
    empty LR row contributes nothing, matching the printed example.
    Complemented rows are uncolored.
    """
    n = a.num_cols
    ones = tuple([1] * n)
    rows = [Row(ones, RowLabel.R), Row(ones, RowLabel.L)]
    dist = [True, True]
    comp = [False, False]
    src: list[int | None] = [None, None]
    for i, r in enumerate(a.rows):
        if r.label is RowLabel.LR:
            if r.empty:
                continue
            rows.append(Row(complement_row(r.bits), RowLabel.LR, RowColor.NONE))
            comp.append(True)
        else:
            rows.append(r)
            comp.append(False)
        dist.append(False)
        src.append(i)
    return StarMatrix(n, tuple(rows), tuple(dist), tuple(comp), tuple(src))


@dataclass(frozen=True)
class TaggedMatrix:
    """A matrix with tag columns ``cL`` (first) and ``cR`` (last) appended."""
    base: EnrichedMatrix
    tag_cols: tuple[int, int]

    def __post_init__(self):
        a, b = self.tag_cols
        if a == b or not (0 <= a < self.base.num_cols and 0 <= b < self.base.num_cols):
            raise ValueError("tag columns must be distinct and in range")

    @property
    def cL(self) -> int:
        return self.tag_cols[0]

    @property
    def cR(self) -> int:
        return self.tag_cols[1]

    def inner_cols(self) -> list[int]:
        return [c for c in range(self.base.num_cols) if c not in self.tag_cols]


def build_tagged(a: EnrichedMatrix) -> TaggedMatrix:
    """Add ``cL`` (1 for L and LR rows) first and ``cR`` (1 for R and LR rows) last.

    Rows of a :class:`StarMatrix` that were complemented from LR rows get
    zero tags: they only ask for their zeros to be consecutive, which is
    what a tagless row expresses.
    """
    comp = a.complemented if isinstance(a, StarMatrix) else (False,) * a.num_rows
    rows = []
    for r, c in zip(a.rows, comp):
        if c:
            tl = tr = 0
        else:
            tl = int(r.label in (RowLabel.L, RowLabel.LR))
            tr = int(r.label in (RowLabel.R, RowLabel.LR))
        # tagged rows keep label and color for reference; the color rule of
        # enriched matrices does not apply to tagged matrices
        rows.append(Row((tl,) + r.bits + (tr,), r.label, r.color))
    base = _TaggedBase(a.num_cols + 2, tuple(rows))
    return TaggedMatrix(base, (0, a.num_cols + 1))


@dataclass(frozen=True)
class _TaggedBase(EnrichedMatrix):
    """EnrichedMatrix without the coloring rule (tagged rows may be colored freely)."""

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        for i, row in enumerate(self.rows):
            if len(row.bits) != self.num_cols:
                raise ValueError(f"row {i} has wrong length")


def starred_tagged(a: EnrichedMatrix) -> TaggedMatrix:
    return build_tagged(build_Astar(a))
