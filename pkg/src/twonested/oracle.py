"""Brute-force ground truth for 2-nestedness and precolored 2-coloring.

Everything here is deliberately naive and shares no logic with the
decision pipeline: every column permutation is tried, blocks are read off
directly, and colorings are searched against a clause-by-clause
transcription of the nine block bi-coloring conditions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import EnrichedMatrix, RowColor, RowLabel


class OracleBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_cols: int = 7
    max_rows: int = 7
    max_colorings: int = 1 << 16


# reading of an all-ones LR row: "L" (one block, read as its L-block), "R",
# or an integer split point s meaning L-block = positions [0, s), R-block = [s, n)
Reading = object


@dataclass(frozen=True)
class OBlock:
    row: int
    kind: str          # "L", "R" or "U"
    pos: int           # bitmask over positions of the ordering
    lr: bool           # owner is an LR row


@dataclass(frozen=True)
class OracleWitness:
    ordering: tuple[int, ...]
    blocks: tuple[OBlock, ...]
    colors: tuple[RowColor, ...]   # aligned with blocks
    readings: tuple[tuple[int, object], ...]


def _contiguous(m: int) -> bool:
    if m == 0:
        return True
    m >>= (m & -m).bit_length() - 1
    return m & (m + 1) == 0


def _positional(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for p, c in enumerate(perm):
        if (mask >> c) & 1:
            out |= 1 << p
    return out


def is_lr_ordering(a: EnrichedMatrix, perm: Sequence[int]) -> bool:
    """Direct check of the three LR-ordering conditions."""
    n = a.num_cols
    full = (1 << n) - 1
    for row in a.rows:
        pm = _positional(row.mask, perm)
        if row.label is RowLabel.LR:
            if not _contiguous(full & ~pm):
                return False
            continue
        if not _contiguous(pm):
            return False
        if pm and row.label is RowLabel.L and not pm & 1:
            return False
        if pm and row.label is RowLabel.R and not (pm >> (n - 1)) & 1:
            return False
    return True


def _prefix_run(pm: int) -> int:
    run, bit = 0, 1
    while pm & bit:
        run |= bit
        bit <<= 1
    return run


def _suffix_run(pm: int, n: int) -> int:
    run = 0
    for p in range(n - 1, -1, -1):
        if not (pm >> p) & 1:
            break
        run |= 1 << p
    return run


def blocks_for(a: EnrichedMatrix, perm: Sequence[int], readings: dict[int, object]) -> list[OBlock]:
    n = a.num_cols
    full = (1 << n) - 1
    out = []
    for i, row in enumerate(a.rows):
        pm = _positional(row.mask, perm)
        if pm == 0:
            continue
        if row.label is RowLabel.U:
            out.append(OBlock(i, "U", pm, False))
        elif row.label is RowLabel.L:
            out.append(OBlock(i, "L", _prefix_run(pm), False))
        elif row.label is RowLabel.R:
            out.append(OBlock(i, "R", _suffix_run(pm, n), False))
        elif pm == full:
            rd = readings[i]
            if rd == "L":
                out.append(OBlock(i, "L", full, True))
            elif rd == "R":
                out.append(OBlock(i, "R", full, True))
            else:
                left = (1 << rd) - 1
                out.append(OBlock(i, "L", left, True))
                out.append(OBlock(i, "R", full & ~left, True))
        else:
            if pm & 1:
                out.append(OBlock(i, "L", _prefix_run(pm), True))
            if (pm >> (n - 1)) & 1:
                out.append(OBlock(i, "R", _suffix_run(pm, n), True))
    return out


Clause = tuple[tuple[int, ...], Callable[..., bool], int]


def _clauses(a: EnrichedMatrix, blocks: list[OBlock]) -> list[Clause]:
    """One entry per instance of each condition: (block ids, predicate, condition number).

    The predicate receives the colors of the listed blocks in order.
    """
    cl: list[Clause] = []
    rows = a.rows
    idx = range(len(blocks))

    def sub(x: int, y: int) -> bool:
        return x & ~y == 0

    # 1: both blocks of one LR row get distinct colors
    for i in idx:
        for j in idx:
            bi, bj = blocks[i], blocks[j]
            if i < j and bi.lr and bi.row == bj.row and {bi.kind, bj.kind} == {"L", "R"}:
                cl.append(((i, j), lambda x, y: x != y, 1))
    # 2: a nonempty colored row has its only block in its own color
    for i in idx:
        row = rows[blocks[i].row]
        if row.color is not RowColor.NONE and row.mask:
            c = row.color
            cl.append(((i,), lambda x, c=c: x == c, 2))
    # 3: LR L-block properly inside an L row's L-block gets the other color
    for i in idx:
        for j in idx:
            bi, bj = blocks[i], blocks[j]
            for kind in ("L", "R"):
                if (bi.kind == bj.kind == kind and bi.lr and not bj.lr
                        and rows[bj.row].label.value == kind
                        and sub(bi.pos, bj.pos) and bi.pos != bj.pos):
                    cl.append(((i, j), lambda x, y: x != y, 3))
    # 4: an LR row's L-block misses every R-block, and its R-block every L-block
    for i in idx:
        for j in idx:
            bi, bj = blocks[i], blocks[j]
            if i != j and bi.lr and {bi.kind, bj.kind} == {"L", "R"} and bi.pos & bj.pos:
                cl.append(((), lambda: False, 4))
    # 5: intersecting L-block and R-block get distinct colors
    for i in idx:
        for j in idx:
            bi, bj = blocks[i], blocks[j]
            if bi.kind == "L" and bj.kind == "R" and bi.pos & bj.pos:
                cl.append(((i, j), lambda x, y: x != y, 5))
    # 6: equally colored U-blocks are disjoint or nested
    for i in idx:
        for j in idx:
            bi, bj = blocks[i], blocks[j]
            if i < j and bi.kind == bj.kind == "U":
                if bi.pos & bj.pos and not sub(bi.pos, bj.pos) and not sub(bj.pos, bi.pos):
                    cl.append(((i, j), lambda x, y: x != y, 6))
    # 7: an L- or R-block and a U-block of one color are disjoint or the U-block lies inside
    for i in idx:
        for j in idx:
            bi, bj = blocks[i], blocks[j]
            if bi.kind in ("L", "R") and bj.kind == "U":
                if bi.pos & bj.pos and not sub(bj.pos, bi.pos):
                    cl.append(((i, j), lambda x, y: x != y, 7))
    # 8: differently colored L-blocks of non-LR rows demand an L-block in every LR row
    for kind in ("L", "R"):
        lr_rows = [r for r, row in enumerate(rows) if row.label is RowLabel.LR]
        every = all(any(b.row == r and b.kind == kind for b in blocks) for r in lr_rows)
        if not every:
            ids = tuple(i for i in idx if blocks[i].kind == kind and not blocks[i].lr)
            if len(ids) >= 2:
                cl.append((ids, lambda *xs: len(set(xs)) <= 1, 8))
    # 9: overlapping LR rows: L-block of one and R-block of the other share a color
    for i in idx:
        for j in idx:
            bi, bj = blocks[i], blocks[j]
            if bi.lr and bj.lr and bi.row != bj.row and bi.kind == "L" and bj.kind == "R":
                ma, mb = rows[bi.row].mask, rows[bj.row].mask
                if ma & mb and ma & ~mb and mb & ~ma:
                    cl.append(((i, j), lambda x, y: x == y, 9))
    return cl


def literal_verify(a: EnrichedMatrix, perm: Sequence[int], blocks: Sequence[OBlock],
                   colors: Sequence[RowColor]) -> int | None:
    """First violated condition number, or None when the coloring is valid."""
    for ids, pred, num in sorted(_clauses(a, list(blocks)), key=lambda c: c[2]):
        if not pred(*(colors[i] for i in ids)):
            return num
    return None


def _search(blocks: list[OBlock], clauses: list[Clause], budget: OracleBudget):
    nb = len(blocks)
    if 2 ** nb > budget.max_colorings:
        raise OracleBudgetExceeded(f"{nb} blocks exceed the coloring budget")
    due: list[list[Clause]] = [[] for _ in range(nb + 1)]
    for c in clauses:
        ids = c[0]
        due[max(ids) + 1 if ids else 0].append(c)
    for c in due[0]:
        if not c[1]():
            return None
    colors: list[RowColor] = [RowColor.NONE] * nb

    def rec(k: int) -> bool:
        if k == nb:
            return True
        for col in (RowColor.RED, RowColor.BLUE):
            colors[k] = col
            if all(pred(*(colors[i] for i in ids)) for ids, pred, _ in due[k + 1]):
                if rec(k + 1):
                    return True
        colors[k] = RowColor.NONE
        return False

    return tuple(colors) if rec(0) else None


def reading_options(a: EnrichedMatrix) -> dict[int, list]:
    n = a.num_cols
    full = (1 << n) - 1
    return {i: ["L", "R"] + list(range(1, n))
            for i, r in enumerate(a.rows)
            if r.label is RowLabel.LR and n and r.mask == full}


def oracle_2nested(a: EnrichedMatrix, budget: OracleBudget | None = None,
                   readings: str = "all") -> tuple[bool, OracleWitness | None]:
    """Decide 2-nestedness by exhaustive search.

    ``readings`` selects how all-ones LR rows may be read: ``"all"`` (the
    union), ``"whole"`` (one undivided block only) or ``"split"`` (split
    points only).
    """
    budget = budget or OracleBudget()
    if a.num_cols > budget.max_cols or a.num_rows > budget.max_rows:
        raise OracleBudgetExceeded(f"matrix {a.shape} exceeds oracle budget")
    opts = reading_options(a)
    if readings == "whole":
        opts = {i: ["L", "R"] for i in opts}
    elif readings == "split":
        opts = {i: [s for s in o if isinstance(s, int)] for i, o in opts.items()}
    keys = sorted(opts)
    for perm in itertools.permutations(range(a.num_cols)):
        if not is_lr_ordering(a, perm):
            continue
        for combo in itertools.product(*(opts[k] for k in keys)):
            rd = dict(zip(keys, combo))
            blocks = blocks_for(a, perm, rd)
            found = _search(blocks, _clauses(a, blocks), budget)
            if found is not None:
                return True, OracleWitness(tuple(perm), tuple(blocks), found,
                                           tuple(sorted(rd.items())))
    return False, None


# ---------------------------------------------------------------------------
# precolored 2-coloring extension


def oracle_extension(num_vertices: int, edges, precolor: Sequence[RowColor]) -> bool:
    """True iff the precoloring extends to a proper 2-coloring (tries all 2^n)."""
    free = [v for v in range(num_vertices) if precolor[v] is RowColor.NONE]
    if len(free) > 20:
        raise OracleBudgetExceeded("more than 20 uncolored vertices")
    edges = [tuple(e) for e in edges]
    for bits in range(1 << len(free)):
        col = list(precolor)
        for k, v in enumerate(free):
            col[v] = RowColor.RED if (bits >> k) & 1 else RowColor.BLUE
        if all(col[u] != col[v] for u, v in edges):
            return True
    return False
