"""Subconfiguration search: does a pattern occur in an enriched matrix?"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .catalog import (FAMILY_ORDER, FamilyMember, PatternMatrix, gen_tucker, members,
                      tagged_entries)
from .core import EnrichedMatrix, RowColor


@dataclass(frozen=True)
class Embedding:
    row_map: tuple[int, ...]                 # pattern row -> target row
    col_map: tuple[int, ...]                 # pattern col -> target col
    color_assignment: tuple[tuple[str, RowColor], ...] = ()
    dual_used: bool = False
    view: str = "A"                          # "A" or "A*tagg": which matrix the maps index


@dataclass(frozen=True)
class Hit:
    family: str
    name: str
    params: tuple[int, ...]
    embedding: Embedding


def _col_vectors(masks: list[int], cols: Iterable[int]) -> dict[int, int]:
    out = {}
    for c in cols:
        v = 0
        for i, m in enumerate(masks):
            if m >> c & 1:
                v |= 1 << i
        out[c] = v
    return out


def _columns_fit(p_masks, t_masks, p_cols, t_cols, fixed) -> dict[int, int] | None:
    """Injective column map with equal column vectors over the chosen rows, or None."""
    pv = _col_vectors(p_masks, p_cols)
    tv = _col_vectors(t_masks, t_cols)
    cmap = {}
    used = set()
    for pc, tc in fixed.items():
        if pv[pc] != tv[tc]:
            return None
        cmap[pc] = tc
        used.add(tc)
    pool: dict[int, list[int]] = {}
    for tc in t_cols:
        if tc not in used:
            pool.setdefault(tv[tc], []).append(tc)
    need = Counter(pv[pc] for pc in p_cols if pc not in fixed)
    for vec, cnt in need.items():
        if len(pool.get(vec, ())) < cnt:
            return None
    taken: Counter = Counter()
    for pc in p_cols:
        if pc in fixed:
            continue
        vec = pv[pc]
        cmap[pc] = pool[vec][taken[vec]]
        taken[vec] += 1
    return cmap


def _match(entries, labels, colors, target: EnrichedMatrix, fixed: dict[int, int],
           ignore_labels: bool):
    np_rows = len(entries)
    if np_rows == 0:
        return (), tuple(range(len(entries[0]) if entries else 0)), ()
    p_ncols = len(entries[0])
    if np_rows > target.num_rows or p_ncols > target.num_cols:
        return None
    p_masks_full = [sum(b << j for j, b in enumerate(r)) for r in entries]
    order = sorted(range(np_rows), key=lambda i: (-bin(p_masks_full[i]).count("1"), i))
    t_masks = target.masks()
    t_cols = list(range(target.num_cols))
    p_cols = list(range(p_ncols))
    variables = sorted({c for c in colors if c is not None})
    row_map = [-1] * np_rows
    used_rows: set[int] = set()
    assign: dict[str, RowColor] = {}

    def row_ok(pi: int, ti: int) -> bool:
        row = target.rows[ti]
        if not ignore_labels and row.label not in labels[pi]:
            return False
        term = colors[pi]
        if term is not None:
            if row.color is RowColor.NONE:
                return False
            have = assign.get(term)
            if have is not None and have is not row.color:
                return False
            if have is None and row.color in assign.values():
                return False
        return True

    def rec(k: int):
        chosen = order[:k]
        if k:
            pm = [p_masks_full[i] for i in chosen]
            tm = [t_masks[row_map[i]] for i in chosen]
            cmap = _columns_fit(pm, tm, p_cols, t_cols, fixed)
            if cmap is None:
                return None
            if k == np_rows:
                return cmap
        pi = order[k]
        for ti in range(target.num_rows):
            if ti in used_rows or not row_ok(pi, ti):
                continue
            term = colors[pi]
            fresh = term is not None and term not in assign
            if fresh:
                assign[term] = target.rows[ti].color
            row_map[pi] = ti
            used_rows.add(ti)
            got = rec(k + 1)
            if got is not None:
                return got
            used_rows.discard(ti)
            row_map[pi] = -1
            if fresh:
                del assign[term]
        return None

    cmap = rec(0)
    if cmap is None:
        return None
    return (tuple(row_map), tuple(cmap[j] for j in p_cols),
            tuple((v, assign[v]) for v in variables if v in assign))


def find_subconfiguration(a: EnrichedMatrix, p: PatternMatrix, allow_dual: bool = False,
                          fixed_cols: dict[int, int] | None = None,
                          ignore_labels: bool = False) -> Embedding | None:
    """Embed ``p`` into ``a`` (exhaustive backtracking), or return None.

    ``fixed_cols`` pins pattern columns to target columns.  With
    ``allow_dual`` the dual pattern is tried after the pattern itself.
    """
    fixed = dict(fixed_cols or {})
    tries = [(p, False)]
    if allow_dual and not p.is_self_dual():
        tries.append((p.dual(), True))
    for pat, dual in tries:
        got = _match(pat.entries, pat.row_labels, pat.row_colors, a, fixed, ignore_labels)
        if got is not None:
            rows, cols, colors = got
            return Embedding(rows, cols, colors, dual)
    return None


# ---------------------------------------------------------------------------
# the tagged view


def _tagged_view(a: EnrichedMatrix):
    from .c1p import starred_tagged
    return starred_tagged(a)


def find_tucker(a: EnrichedMatrix, view: str = "A") -> Hit | None:
    """First Tucker submatrix of ``a`` (labels and colors ignored)."""
    for m in members("tucker", a.num_rows, a.num_cols):
        pat = m.build()
        emb = find_subconfiguration(a, pat, ignore_labels=True)
        if emb is not None:
            return Hit("tucker", m.name, m.params, _with_view(emb, view))
    return None


def _with_view(e: Embedding, view: str) -> Embedding:
    return Embedding(e.row_map, e.col_map, e.color_assignment, e.dual_used, view)


def find_tagged_member(a: EnrichedMatrix, p: PatternMatrix, allow_dual: bool = True) -> Embedding | None:
    """Embed a tagged pattern into the tagged form of A*, tag columns pinned."""
    tm = _tagged_view(a)
    return find_tagged_in(tm, p, allow_dual)


def find_tagged_in(tm, p: PatternMatrix, allow_dual: bool = True) -> Embedding | None:
    tries = [(p, False)]
    if allow_dual and not p.is_self_dual():
        tries.append((p.dual(), True))
    for pat, dual in tries:
        ents = tagged_entries(pat)
        tags = pat.tag_cols
        fixed = {}
        if "cL" in tags:
            fixed[0] = tm.cL
        if "cR" in tags:
            fixed[len(ents[0]) - 1] = tm.cR
        got = _match(ents, [frozenset()] * len(ents), [None] * len(ents), tm.base, fixed, True)
        if got is not None:
            rows, cols, _ = got
            return Embedding(rows, cols, (), dual, "A*tagg")
    return None


# ---------------------------------------------------------------------------
# family search


def find_any(a: EnrichedMatrix, families: Iterable[str] = FAMILY_ORDER,
             exclude: Iterable[str] = ()) -> Hit | None:
    """First family member found in ``a`` in the fixed iteration order.

    Families are tried in the given order, members by name then ascending
    parameters, each pattern before its dual.  Tucker matrices and the M
    family are searched in the tagged form of A* (``view == "A*tagg"``);
    everything else in ``a`` itself.
    """
    skip = set(exclude)
    tm = None
    for fam in families:
        if fam in skip:
            continue
        if fam in ("tucker", "M"):
            if tm is None:
                tm = _tagged_view(a)
            for m in members(fam, tm.base.num_rows, tm.base.num_cols):
                pat = m.build()
                if fam == "tucker":
                    emb = find_subconfiguration(tm.base, pat, ignore_labels=True)
                    emb = emb and _with_view(emb, "A*tagg")
                else:
                    emb = find_tagged_in(tm, pat)
                if emb is not None:
                    return Hit(fam, m.name, m.params, emb)
            continue
        for m in members(fam, a.num_rows, a.num_cols):
            emb = find_subconfiguration(a, m.build(), allow_dual=True)
            if emb is not None:
                return Hit(fam, m.name, m.params, emb)
    return None


def find_member(a: EnrichedMatrix, member: FamilyMember) -> Embedding | None:
    pat = member.build()
    if member.family in ("tucker", "M"):
        tm = _tagged_view(a)
        if member.family == "tucker":
            e = find_subconfiguration(tm.base, pat, ignore_labels=True)
            return e and _with_view(e, "A*tagg")
        return find_tagged_in(tm, pat)
    return find_subconfiguration(a, pat, allow_dual=True)


def tucker_pattern(name: str, params: tuple[int, ...]) -> PatternMatrix:
    return gen_tucker(name, *params)


def check_embedding(a: EnrichedMatrix, p: PatternMatrix, emb: Embedding) -> str | None:
    """Why ``emb`` fails to place ``p`` (or its dual) in ``a``, or None.

    The check is direct: entries, labels and colors of the mapped rows and
    columns are compared without any search.
    """
    pat = p.dual() if emb.dual_used else p
    rows, cols = list(emb.row_map), list(emb.col_map)
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        return "row or column map is not injective"
    if emb.view == "A*tagg":
        tm = _tagged_view(a)
        target, check_labels = tm.base, False
        if p.family == "tucker":
            ents = pat.entries
        else:
            ents = tagged_entries(pat)
            tags = pat.tag_cols
            if "cL" in tags and cols[0] != tm.cL:
                return "first column is not the cL tag column"
            if "cR" in tags and cols[-1] != tm.cR:
                return "last column is not the cR tag column"
    else:
        target, ents = a, pat.entries
        check_labels = p.family != "tucker"
    if len(rows) != len(ents) or (ents and len(cols) != len(ents[0])):
        return "maps do not match the pattern shape"
    if any(not 0 <= r < target.num_rows for r in rows) or any(
            not 0 <= c < target.num_cols for c in cols):
        return "map points outside the matrix"
    assign = dict(emb.color_assignment)
    if len(set(assign.values())) != len(assign):
        return "distinct color variables share a color"
    for i, r in enumerate(rows):
        row = target.rows[r]
        for j, c in enumerate(cols):
            if row.bits[c] != ents[i][j]:
                return f"entry ({i}, {j}) differs"
        if check_labels and row.label not in pat.row_labels[i]:
            return f"label of row {i} differs"
        term = pat.row_colors[i] if emb.view == "A" else None
        if term is not None and (term not in assign or row.color is not assign[term]):
            return f"color of row {i} differs"
    return None
