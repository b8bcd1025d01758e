"""Enriched matrices, row relations and the nestedness test."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class RowLabel(enum.Enum):
    U = "U"
    L = "L"
    R = "R"
    LR = "LR"


class RowColor(enum.Enum):
    NONE = "-"
    RED = "r"
    BLUE = "b"

    def other(self) -> "RowColor":
        if self is RowColor.RED:
            return RowColor.BLUE
        if self is RowColor.BLUE:
            return RowColor.RED
        raise ValueError("uncolored has no opposite")


class RowRelation(enum.Enum):
    DISJOINT = "disjoint"
    FIRST_IN_SECOND = "first_in_second"
    SECOND_IN_FIRST = "second_in_first"
    EQUAL = "equal"
    OVERLAP = "overlap"


class MatrixError(ValueError):
    """An enriched matrix violates its structural invariants."""


def to_mask(bits: Sequence[int]) -> int:
    m = 0
    for j, b in enumerate(bits):
        if b:
            m |= 1 << j
    return m


def from_mask(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> j) & 1 for j in range(n))


def row_bounds(row: Sequence[int]) -> tuple[int, int] | None:
    ones = [j for j, b in enumerate(row) if b]
    if not ones:
        return None
    return ones[0], ones[-1]


def relate_masks(a: int, b: int) -> RowRelation:
    if a == b:
        return RowRelation.EQUAL
    if a & b == 0:
        # an empty row is nested in every row
        if a == 0:
            return RowRelation.FIRST_IN_SECOND
        if b == 0:
            return RowRelation.SECOND_IN_FIRST
        return RowRelation.DISJOINT
    if a & ~b == 0:
        return RowRelation.FIRST_IN_SECOND
    if b & ~a == 0:
        return RowRelation.SECOND_IN_FIRST
    return RowRelation.OVERLAP


def relate_rows(a: Sequence[int], b: Sequence[int]) -> RowRelation:
    if len(a) != len(b):
        raise ValueError(f"row lengths differ: {len(a)} != {len(b)}")
    return relate_masks(to_mask(a), to_mask(b))


def complement_row(a: Sequence[int]) -> tuple[int, ...]:
    return tuple(1 - (1 if b else 0) for b in a)


@dataclass(frozen=True)
class Row:
    bits: tuple[int, ...]
    label: RowLabel = RowLabel.U
    color: RowColor = RowColor.NONE
    mask: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise MatrixError("row entries must be 0 or 1")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "mask", to_mask(bits))

    @property
    def empty(self) -> bool:
        return self.mask == 0


@dataclass(frozen=True)
class EnrichedMatrix:
    num_cols: int
    rows: tuple[Row, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if self.num_cols < 0:
            raise MatrixError("negative column count")
        empty_lr_colors = set()
        for i, row in enumerate(self.rows):
            if len(row.bits) != self.num_cols:
                raise MatrixError(f"row {i} has {len(row.bits)} entries, expected {self.num_cols}")
            if row.color is not RowColor.NONE:
                ok = row.label in (RowLabel.L, RowLabel.R) or (
                    row.label is RowLabel.LR and row.empty)
                if not ok:
                    raise MatrixError(f"row {i} may not be colored")
            if row.label is RowLabel.LR and row.empty:
                empty_lr_colors.add(row.color)
        if len(empty_lr_colors) > 1:
            raise MatrixError("empty LR rows must share one color")

    @classmethod
    def build(cls, rows: Iterable, num_cols: int | None = None) -> "EnrichedMatrix":
        """Build from ``(label, color, bits)`` triples or bare bit rows.

        Labels and colors may be given as enum members or their string
        values; bits may be a ``"0110"`` string or a sequence of ints.
        """
        out = []
        for item in rows:
            if isinstance(item, Row):
                out.append(item)
                continue
            if (isinstance(item, (tuple, list)) and len(item) == 3
                    and isinstance(item[0], (str, RowLabel))):
                label, color, bits = item
            else:
                label, color, bits = RowLabel.U, RowColor.NONE, item
            if isinstance(bits, str):
                bits = tuple(int(c) for c in bits)
            out.append(Row(tuple(bits), RowLabel(label), RowColor(color)))
        if num_cols is None:
            num_cols = len(out[0].bits) if out else 0
        return cls(num_cols, tuple(out))

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.num_cols

    def masks(self) -> list[int]:
        return [r.mask for r in self.rows]

    def labels(self) -> list[RowLabel]:
        return [r.label for r in self.rows]

    def colors(self) -> list[RowColor]:
        return [r.color for r in self.rows]

    def entries(self) -> list[list[int]]:
        return [list(r.bits) for r in self.rows]

    def is_unlabeled(self) -> bool:
        return all(r.label is RowLabel.U for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int] | None = None) -> "EnrichedMatrix":
        if cols is None:
            cols = range(self.num_cols)
        cols = list(cols)
        new = [Row(tuple(self.rows[i].bits[j] for j in cols), self.rows[i].label,
                   self.rows[i].color) for i in rows]
        return EnrichedMatrix(len(cols), tuple(new))

    def permute_columns(self, perm: Sequence[int]) -> "EnrichedMatrix":
        """Column ``k`` of the result is column ``perm[k]`` of this matrix."""
        return self.submatrix(range(self.num_rows), perm)

    def __str__(self) -> str:
        lines = []
        for r in self.rows:
            lines.append(f"{r.label.value:2} {r.color.value} {''.join(map(str, r.bits))}")
        return "\n".join(lines)


def dual_matrix(a: EnrichedMatrix) -> EnrichedMatrix:
    swap = {RowLabel.L: RowLabel.R, RowLabel.R: RowLabel.L}
    return EnrichedMatrix(a.num_cols, tuple(
        Row(r.bits, swap.get(r.label, r.label), r.color) for r in a.rows))


def underlying_matrix(a: EnrichedMatrix) -> EnrichedMatrix:
    return EnrichedMatrix(a.num_cols, tuple(Row(r.bits) for r in a.rows))


def is_nested(m: EnrichedMatrix | Sequence[Sequence[int]]) -> bool:
    """True iff no two rows form a 0-gem, i.e. every pair is disjoint or nested.

    Pairwise disjoint-or-nested supports form a laminar family, which always
    admits a consecutive-ones ordering, so the pairwise test is complete.
    """
    if isinstance(m, EnrichedMatrix):
        masks = m.masks()
    else:
        masks = [to_mask(r) for r in m]
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if relate_masks(masks[i], masks[j]) is RowRelation.OVERLAP:
                return False
    return True


@dataclass(frozen=True)
class SplitPartitionInput:
    s_vertices: tuple[str, ...]
    k_vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]


class NotSplitPartition(ValueError):
    pass


def build_split_adjacency(inp: SplitPartitionInput) -> EnrichedMatrix:
    edges = {frozenset(e) for e in inp.edges}
    for e in edges:
        if len(e) != 2:
            raise NotSplitPartition(f"malformed edge {set(e)}")
    ks, ss = list(inp.k_vertices), list(inp.s_vertices)
    if set(ks) & set(ss):
        raise NotSplitPartition("S and K share a vertex")
    for i, a in enumerate(ks):
        for b in ks[i + 1:]:
            if frozenset((a, b)) not in edges:
                raise NotSplitPartition(f"K is not a clique: {a} {b}")
    for i, a in enumerate(ss):
        for b in ss[i + 1:]:
            if frozenset((a, b)) in edges:
                raise NotSplitPartition(f"S is not stable: {a} {b}")
    rows = [Row(tuple(int(frozenset((s, k)) in edges) for k in ks)) for s in ss]
    return EnrichedMatrix(len(ks), tuple(rows))
