"""Enumeration and seeded sampling of small enriched matrices."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .core import EnrichedMatrix, Row, RowColor, RowLabel

U, L, R, LR = RowLabel.U, RowLabel.L, RowLabel.R, RowLabel.LR
NONE, RED, BLUE = RowColor.NONE, RowColor.RED, RowColor.BLUE
_SWAP_COLOR = {NONE: NONE, RED: BLUE, BLUE: RED}


def row_options(n: int) -> list[Row]:
    """Every legal single row of width ``n``."""
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        out.append(Row(bits, U))
        for lab in (L, R):
            for c in (NONE, RED, BLUE):
                out.append(Row(bits, lab, c))
        out.append(Row(bits, LR))
        if not any(bits):
            out += [Row(bits, LR, RED), Row(bits, LR, BLUE)]
    return out


def _code(row: Row) -> tuple:
    return (row.bits, row.label.value, row.color.value)


def canonical_key(a: EnrichedMatrix, swap_colors: bool = True) -> tuple:
    """A key shared by matrices equal up to row order, column order and
    (optionally) exchanging red and blue."""
    best = None
    swaps = (False, True) if swap_colors else (False,)
    for perm in itertools.permutations(range(a.num_cols)):
        for sw in swaps:
            key = tuple(sorted(
                (tuple(r.bits[c] for c in perm), r.label.value,
                 (_SWAP_COLOR[r.color] if sw else r.color).value)
                for r in a.rows))
            if best is None or key < best:
                best = key
    return (a.num_cols, best)


def enumerate_grid(max_rows: int, max_cols: int, dedup: bool = True) -> Iterator[EnrichedMatrix]:
    """All enriched matrices up to the given size, up to row order.

    With ``dedup`` only one matrix per class of :func:`canonical_key` is
    yielded; 2-nestedness is invariant under those symmetries.
    """
    for n in range(max_cols + 1):
        opts = row_options(n)
        index = {_code(r): i for i, r in enumerate(opts)}
        # image of every row option under each column permutation and color swap
        images = []
        for perm in itertools.permutations(range(n)):
            for sw in (False, True):
                images.append([index[(tuple(r.bits[c] for c in perm), r.label.value,
                                      (_SWAP_COLOR[r.color] if sw else r.color).value)]
                               for r in opts])
        for k in range(max_rows + 1):
            seen: set = set()
            for idx in itertools.combinations_with_replacement(range(len(opts)), k):
                if dedup:
                    key = min(tuple(sorted(im[i] for i in idx)) for im in images)
                    if key in seen:
                        continue
                    seen.add(key)
                try:
                    a = EnrichedMatrix(n, tuple(opts[i] for i in idx))
                except ValueError:
                    continue
                yield a


def random_matrix(rng: random.Random, num_rows: int, num_cols: int,
                  lr_rate: float = 0.2, color_rate: float = 0.5) -> EnrichedMatrix:
    """A random legal enriched matrix; row densities vary per row."""
    rows = []
    empty_lr_color = None
    for _ in range(num_rows):
        label = LR if rng.random() < lr_rate else rng.choice((U, L, L, R))
        dens = rng.choice((0.3, 0.5, 0.7))
        bits = tuple(int(rng.random() < dens) for _ in range(num_cols))
        color = NONE
        if label in (L, R) and rng.random() < color_rate:
            color = rng.choice((RED, BLUE))
        if label is LR and not any(bits):
            if empty_lr_color is None:
                empty_lr_color = rng.choice((NONE, RED, BLUE))
            color = empty_lr_color
        rows.append(Row(bits, label, color))
    return EnrichedMatrix(num_cols, tuple(rows))


def distinct_instances(pattern, free_colors: bool = False) -> Iterator[EnrichedMatrix]:
    """Instantiations of ``pattern``, one per class up to the column
    permutations that fix its entries and exchanging red and blue."""
    n = pattern.shape[1]
    base = sorted(pattern.entries)
    autos = [p for p in itertools.permutations(range(n))
             if sorted(tuple(r[c] for c in p) for r in pattern.entries) == base]
    seen: set = set()
    for a in pattern.instantiations(free_colors):
        key = min(tuple(sorted((tuple(r.bits[c] for c in p), r.label.value,
                                (_SWAP_COLOR[r.color] if sw else r.color).value) for r in a.rows))
                  for p in autos for sw in (False, True))
        if key not in seen:
            seen.add(key)
            yield a
