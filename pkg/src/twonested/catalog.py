"""Named forbidden matrices and families, as label/color patterns."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import EnrichedMatrix, Row, RowColor, RowLabel, dual_matrix

U, L, R, LR = RowLabel.U, RowLabel.L, RowLabel.R, RowLabel.LR
ANY = frozenset(RowLabel)
LABEL_SET = {
    "U": frozenset({U}), "L": frozenset({L}), "R": frozenset({R}), "LR": frozenset({LR}),
    "L/LR": frozenset({L, LR}), "R/LR": frozenset({R, LR}), "*": ANY,
}
SWAP = {L: R, R: L}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class PatternMatrix:
    """A forbidden configuration.

    ``row_colors`` entries are ``None`` (any color, including none) or a
    variable name; distinct variables must take distinct colors.
    """
    entries: tuple[tuple[int, ...], ...]
    row_labels: tuple[frozenset, ...]
    row_colors: tuple[str | None, ...]
    name: str
    params: tuple[int, ...] = ()
    family: str = ""
    tagged: bool = False
    variables: tuple[str, ...] = field(init=False, compare=False)

    def __post_init__(self):
        n = len(self.entries)
        if not (len(self.row_labels) == len(self.row_colors) == n):
            raise CatalogError(f"{self.name}: inconsistent row metadata")
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise CatalogError(f"{self.name}: ragged entries")
        if any(not s for s in self.row_labels):
            raise CatalogError(f"{self.name}: empty label set")
        seen = []
        for c in self.row_colors:
            if c is not None and c not in seen:
                seen.append(c)
        object.__setattr__(self, "variables", tuple(seen))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), (len(self.entries[0]) if self.entries else 0)

    @property
    def tag_cols(self) -> tuple[str, ...]:
        """Tag columns implied by the labels of a tagged pattern."""
        if not self.tagged:
            return ()
        used = set().union(*self.row_labels)
        return tuple(t for t, lab in (("cL", L), ("cR", R)) if lab in used)

    def dual(self) -> "PatternMatrix":
        labels = tuple(frozenset(SWAP.get(x, x) for x in s) for s in self.row_labels)
        return PatternMatrix(self.entries, labels, self.row_colors, self.name,
                             self.params, self.family, self.tagged)

    def is_self_dual(self) -> bool:
        return self.dual().row_labels == self.row_labels

    def instantiations(self, free_colors: bool = True):
        """Every concrete enriched matrix this pattern describes.

        Label sets range over their members; variables over distinct
        red/blue assignments; ``None`` colors over uncolored, red and blue
        where the label allows a color (only uncolored when ``free_colors``
        is false).  Illegal combinations are skipped.
        """
        var_opts = list(itertools.permutations((RowColor.RED, RowColor.BLUE), len(self.variables)))
        if not self.variables:
            var_opts = [()]
        label_opts = [sorted(s, key=lambda x: x.value) for s in self.row_labels]
        for labels in itertools.product(*label_opts):
            for vcols in var_opts:
                vmap = dict(zip(self.variables, vcols))
                per_row = []
                for bits, lab, term in zip(self.entries, labels, self.row_colors):
                    if term is not None:
                        per_row.append([vmap[term]])
                    elif free_colors and (lab in (L, R) or (lab is LR and not any(bits))):
                        per_row.append([RowColor.NONE, RowColor.RED, RowColor.BLUE])
                    else:
                        per_row.append([RowColor.NONE])
                for cols in itertools.product(*per_row):
                    try:
                        m = EnrichedMatrix(len(self.entries[0]) if self.entries else 0, tuple(
                            Row(b, lab, c) for b, lab, c in zip(self.entries, labels, cols)))
                    except ValueError:
                        continue
                    yield m

    def canonical(self, colors: dict[str, RowColor] | None = None) -> EnrichedMatrix:
        """One representative: first label of each set, variables g/o as red/blue."""
        vmap = {v: (RowColor.RED, RowColor.BLUE)[i % 2] for i, v in enumerate(self.variables)}
        vmap.update(colors or {})
        rows = []
        for bits, labs, term in zip(self.entries, self.row_labels, self.row_colors):
            lab = U if U in labs else sorted(labs, key=lambda x: ("L", "R", "LR", "U").index(x.value))[0]
            rows.append(Row(bits, lab, vmap[term] if term is not None else RowColor.NONE))
        return EnrichedMatrix(self.shape[1], tuple(rows))


def _pattern(rows, name, params=(), family="", tagged=False) -> PatternMatrix:
    """``rows`` holds ``(label-set key, color term, bits)`` triples."""
    entries = tuple(tuple(int(c) for c in bits) for _, _, bits in rows)
    return PatternMatrix(entries, tuple(LABEL_SET[k] for k, _, _ in rows),
                         tuple(c for _, c, _ in rows), name, tuple(params), family, tagged)


def _bits(n: int, ones) -> str:
    s = set(ones)
    return "".join("1" if j in s else "0" for j in range(n))


def _windows(n: int, first: int, last: int) -> list[str]:
    """Rows with ones at (j, j+1) for j = first..last."""
    return [_bits(n, (j, j + 1)) for j in range(first, last + 1)]


def _need(cond: bool, msg: str):
    if not cond:
        raise CatalogError(msg)


# ---------------------------------------------------------------------------
# Tucker matrices and the small matrices


def gen_tucker(kind: str, k: int | None = None) -> PatternMatrix:
    kind = kind.upper()
    if kind == "I":
        _need(k is not None and k >= 3, "M_I(k) needs k >= 3")
        rows = _windows(k, 0, k - 2) + [_bits(k, (0, k - 1))]
    elif kind == "II":
        _need(k is not None and k >= 4, "M_II(k) needs k >= 4")
        rows = ([_bits(k, range(1, k))] + _windows(k, 0, k - 3)
                + [_bits(k, [j for j in range(k) if j != k - 2])])
    elif kind == "III":
        _need(k is not None and k >= 3, "M_III(k) needs k >= 3")
        rows = _windows(k + 1, 0, k - 2) + [_bits(k + 1, list(range(1, k - 1)) + [k])]
    elif kind == "IV":
        rows, k = ["110000", "001100", "000011", "010101"], None
    elif kind == "V":
        rows, k = ["11000", "00110", "11110", "10011"], None
    else:
        raise CatalogError(f"unknown Tucker kind {kind}")
    params = (k,) if k is not None else ()
    return _pattern([("U", None, r) for r in rows], f"M_{kind}", params, "tucker")


def gen_small(name: str, k: int | None = None) -> PatternMatrix:
    if name == "M0":
        rows = ["1011", "1110", "0111"]
    elif name == "MII4":
        rows = ["0111", "1100", "0110", "1101"]
    elif name == "MV":
        rows = gen_tucker("V").entries
        rows = ["".join(map(str, r)) for r in rows]
    elif name == "S0":
        _need(k is not None and k >= 4 and k % 2 == 0, "S0(k) needs even k >= 4")
        rows = [_bits(k, range(k))] + _windows(k, 0, k - 2) + [_bits(k, (0, k - 1))]
    else:
        raise CatalogError(f"unknown small matrix {name}")
    # rows of these matrices are constrained by entries only
    return _pattern([("*", None, r) for r in rows], name, (k,) if name == "S0" else (), "small")


# ---------------------------------------------------------------------------
# family D

_D = {
    0: [("L", None, "10"), ("L", None, "01")],
    1: [("L", "g", "1"), ("R", "g", "1")],
    2: [("L", "g", "10"), ("R", "o", "10")],
    3: [("L", "g", "100"), ("R", "o", "001"), ("LR", None, "010")],
    4: [("L", "g", "1"), ("L", "o", "1"), ("LR", None, "0")],
    5: [("L", "g", "1"), ("R", "o", "1"), ("LR", None, "1")],
    6: [("L", "g", "10"), ("R", "g", "01"), ("LR", None, "00")],
    7: [("L", None, "100"), ("LR", None, "010"), ("LR", None, "001")],
    8: [("L", None, "110"), ("LR", None, "101"), ("LR", None, "011")],
    9: [("L", None, "1110"), ("LR", None, "1100"), ("LR", None, "1001")],
    10: [("L", "g", "1100"), ("R", "o", "0011"), ("LR", None, "1011"), ("LR", None, "1101")],
    11: [("LR", None, "100"), ("LR", None, "010"), ("LR", None, "001")],
    12: [("LR", None, "101"), ("LR", None, "110"), ("LR", None, "011")],
    13: [("LR", None, "1100"), ("LR", None, "0110"), ("LR", None, "0011")],
}


def gen_D(i: int) -> PatternMatrix:
    _need(i in _D, f"D_{i} does not exist")
    return _pattern(_D[i], f"D{i}", (i,), "D")


# ---------------------------------------------------------------------------
# family F


def gen_F(name: str, k: int | None = None) -> PatternMatrix:
    if name in ("F1", "F2", "F1p", "F2p"):
        _need(k is not None and k >= 5 and k % 2 == 1, f"{name}(k) needs odd k >= 5")
    if name == "F0":
        rows = [("U", None, r) for r in ("11100", "01110", "00111")]
    elif name == "F0p":
        rows = [("L/LR", None, "1100"), ("U", None, "1110"), ("U", None, "0111")]
    elif name == "F0pp":
        rows = [("L", None, "110"), ("U", None, "111"), ("R", None, "011")]
    elif name == "F1":
        m = k - 1
        bits = [_bits(m, range(1, m)), _bits(m, range(m - 1))] + _windows(m, 0, m - 2)[::-1]
        rows = [("U", None, b) for b in bits]
    elif name == "F2":
        m = k
        bits = [_bits(m, range(1, m - 1))] + _windows(m, 0, m - 2)
        rows = [("U", None, b) for b in bits]
    elif name == "F1p":
        m = k - 2
        rows = ([("U", None, _bits(m, range(m))), ("L/LR", None, _bits(m, range(m - 1)))]
                + [("U", None, b) for b in _windows(m, 0, m - 2)[::-1]]
                + [("L/LR", None, _bits(m, (0,)))])
    elif name == "F2p":
        m = k - 1
        rows = ([("U", None, _bits(m, range(m - 1))), ("L/LR", None, _bits(m, (0,)))]
                + [("U", None, b) for b in _windows(m, 0, m - 2)])
    else:
        raise CatalogError(f"unknown F member {name}")
    params = (k,) if name in ("F1", "F2", "F1p", "F2p") else ()
    return _pattern(rows, name, params, "F")


# ---------------------------------------------------------------------------
# family S


def _end_colors(k: int, same_when_even: bool) -> tuple[str, str]:
    same = (k % 2 == 0) == same_when_even
    return ("g", "g") if same else ("o", "g")


def gen_S(name: str, k: int) -> PatternMatrix:
    if name == "S1":
        _need(k >= 3, "S1(k) needs k >= 3")
        if k % 2:
            m = k
            rows = ([("L", None, _bits(m, (0,)))] + [("U", None, b) for b in _windows(m, 0, m - 2)]
                    + [("LR", None, _bits(m, (m - 1,)))])
        else:
            _need(k >= 4, "S1(k) needs k >= 4 when even")
            m = k - 2
            rows = ([("L", None, _bits(m, (0,)))] + [("U", None, b) for b in _windows(m, 0, m - 2)]
                    + [("LR", None, _bits(m, (m - 1,))), ("L", None, _bits(m, range(m)))])
    elif name in ("S2", "S3"):
        _need(k >= 3, f"{name}(k) needs k >= 3")
        m = k - 1
        first, last = _end_colors(k, True)
        tail = (("L", last, _bits(m, range(m - 1))) if name == "S2"
                else ("R", last, _bits(m, (m - 1,))))
        rows = ([("L", first, _bits(m, (0,)))] + [("U", None, b) for b in _windows(m, 0, m - 2)]
                + [tail])
    elif name == "S4":
        _need(k >= 4, "S4(k) needs k >= 4")
        m = k - 1
        first, last = _end_colors(k, False)
        rows = ([("LR", None, _bits(m, range(m))), ("L", first, _bits(m, (0,)))]
                + [("U", None, b) for b in _windows(m, 0, m - 2)]
                + [("R", last, _bits(m, (m - 1,)))])
    elif name == "S5":
        _need(k >= 4, "S5(k) needs k >= 4")
        m = k - 2
        first, last = _end_colors(k, True)
        rows = ([("L", first, _bits(m, (0,)))] + [("U", None, b) for b in _windows(m, 0, m - 2)]
                + [("LR", None, _bits(m, range(m - 1))), ("L", last, _bits(m, range(m)))])
    elif name == "S6":
        _need(k >= 3, "S6(k) needs k >= 3")
        if k == 3:
            rows = [("LR", None, "110"), ("R", None, "011"), ("U", None, "110")]
        else:
            m = k
            rows = ([("LR", None, _bits(m, range(m - 1))), ("R", None, _bits(m, range(1, m)))]
                    + [("U", None, b) for b in _windows(m, 0, m - 3)])
    elif name == "S6p":
        _need(k == 3, "S6'(k) exists only for k = 3")
        rows = [("LR", None, "110"), ("R", None, "011"), ("U", None, "111")]
    elif name == "S7":
        _need(k >= 3, "S7(k) needs k >= 3")
        if k == 3:
            rows = [("LR", None, "11001"), ("LR", None, "10011"), ("U", None, "11100")]
        else:
            _need(k % 2 == 0, "S7(k) exists for k = 3 and even k >= 4")
            m = k
            rows = ([("LR", None, _bits(m, (0, 1))), ("LR", None, _bits(m, (0, m - 1)))]
                    + [("U", None, b) for b in _windows(m, 1, m - 2)])
    elif name == "S8":
        _need(k >= 4 and k % 2 == 0, "S8(2j) needs j >= 2")
        m = k
        rows = [("LR", None, _bits(m, (0, m - 1)))] + [("U", None, b) for b in _windows(m, 0, m - 2)]
    else:
        raise CatalogError(f"unknown S member {name}")
    return _pattern(rows, name, (k,), "S")


# ---------------------------------------------------------------------------
# family P


def gen_P(name: str, k: int, l: int = 0) -> PatternMatrix:
    _need(l >= 0, "l must be nonnegative")
    first, last = ("g", "o") if k % 2 == 0 else ("g", "g")
    if name == "P0":
        if l == 0:
            _need(k >= 4, "P0(k,0) needs k >= 4")
            m = k
            mid = [("LR", None, _bits(m, [j for j in range(m) if j not in (1, 2)]))]
            head = [("L", first, _bits(m, (0, 1)))]
            after = _windows(m, 2, m - 2)
        else:
            _need(k >= 5, "P0(k,l) needs k >= 5")
            m = k - 1
            head = [("L", first, _bits(m, (0,)))] + [("U", None, b) for b in _windows(m, 0, l - 1)]
            mid = [("LR", None, _bits(m, [j for j in range(m) if j not in (l, l + 1)]))]
            after = _windows(m, l + 1, m - 2)
    elif name == "P1":
        if l == 0:
            _need(k >= 5, "P1(k,0) needs k >= 5")
            m = k - 1
            head = [("L", first, _bits(m, (0, 1)))]
            zeros = [(1,), (2,)]
            after = _windows(m, 2, m - 2)
        else:
            _need(k >= 6, "P1(k,l) needs k >= 6")
            m = k - 2
            head = [("L", first, _bits(m, (0,)))] + [("U", None, b) for b in _windows(m, 0, l - 1)]
            zeros = [(l,), (l + 1,)]
            after = _windows(m, l + 1, m - 2)
        mid = [("LR", None, _bits(m, [j for j in range(m) if j not in z])) for z in zeros]
    elif name == "P2":
        if l == 0:
            _need(k >= 7, "P2(k,0) needs k >= 7")
            m = k - 1
            head = [("L", first, _bits(m, (0, 1)))]
            a = 0
        else:
            _need(k >= 8, "P2(k,l) needs k >= 8")
            m = k - 2
            head = [("L", first, _bits(m, (0,)))] + [("U", None, b) for b in _windows(m, 0, l - 1)]
            a = l - 1
        zeros = [(a + 1,), (a + 3,), (a + 2,), (a + 3, a + 4)]
        mid = [("LR", None, _bits(m, [j for j in range(m) if j not in z])) for z in zeros]
        after = _windows(m, a + 4, m - 2)
    else:
        raise CatalogError(f"unknown P member {name}")
    _need(all(bits[-1] == "1" for _, _, bits in mid), f"{name}({k},{l}): l too large for k")
    rows = head + mid + [("U", None, b) for b in after] + [("R", last, _bits(m, (m - 1,)))]
    _need(len(rows) == k, f"{name}({k},{l}) template does not fit")
    return _pattern(rows, name, (k, l), "P")


# ---------------------------------------------------------------------------
# family M (matched against the tagged form of A*)


def gen_M(name: str, k: int | None = None) -> PatternMatrix:
    if name == "M2p":
        _need(k is not None and k >= 4, "M2'(k) needs k >= 4")
        m = k - 1
        rows = ([("U", None, _bits(m, range(m))), ("L", None, _bits(m, (0,)))]
                + [("U", None, b) for b in _windows(m, 0, m - 3)]
                + [("L", None, _bits(m, [j for j in range(m) if j != m - 2]))])
    elif name == "M2pp":
        _need(k is not None and k >= 5, "M2''(k) needs k >= 5")
        m = k - 2
        rows = ([("R", None, _bits(m, range(m))), ("L", None, _bits(m, (0,)))]
                + [("U", None, b) for b in _windows(m, 0, m - 3)]
                + [("R", None, _bits(m, (m - 2,))), ("L", None, _bits(m, range(m)))])
    elif name == "M3p":
        _need(k is not None and k >= 4, "M3'(k) needs k >= 4")
        m = k
        rows = ([("L", None, _bits(m, (0,)))] + [("U", None, b) for b in _windows(m, 0, m - 3)]
                + [("U", None, _bits(m, [j for j in range(m) if j != m - 2]))])
    elif name == "M3pp":
        _need(k is not None and k >= 4, "M3''(k) needs k >= 4")
        m = k
        rows = ([("U", None, b) for b in _windows(m, 0, m - 2)]
                + [("R", None, _bits(m, range(1, m - 1)))])
    elif name == "M4p":
        rows = [("L", None, "10000"), ("U", None, "01100"), ("U", None, "00011"), ("U", None, "10101")]
    elif name == "M4pp":
        rows = [("L", None, "1000"), ("R", None, "0100"), ("U", None, "0011"), ("U", None, "1101")]
    elif name == "M5p":
        rows = [("U", None, "1100"), ("U", None, "0011"), ("R", None, "1001"), ("U", None, "1111")]
    elif name == "M5pp":
        rows = [("L", None, "1000"), ("U", None, "0110"), ("U", None, "1011"), ("L", None, "1110")]
    else:
        raise CatalogError(f"unknown M member {name}")
    params = (k,) if name in ("M2p", "M2pp", "M3p", "M3pp") else ()
    return _pattern(rows, name, params, "M", tagged=True)


def tagged_entries(p: PatternMatrix) -> tuple[tuple[int, ...], ...]:
    """Entries of a tagged pattern with its tag columns made explicit (cL first, cR last)."""
    tags = p.tag_cols
    out = []
    for bits, labs in zip(p.entries, p.row_labels):
        row = list(bits)
        if "cL" in tags:
            row = [int(L in labs)] + row
        if "cR" in tags:
            row = row + [int(R in labs)]
        out.append(tuple(row))
    return tuple(out)


# ---------------------------------------------------------------------------
# gems


def gem_patterns() -> dict[str, PatternMatrix]:
    return {
        "gem0": _pattern([("*", None, "110"), ("*", None, "011")], "gem0", (), "gems"),
        "gem1": _pattern([("*", None, "10"), ("*", None, "11")], "gem1", (), "gems"),
        "gem2": _pattern([("LR", None, "110"), ("LR", None, "101")], "gem2", (), "gems"),
        # a gem between two rows precolored alike
        "mono_gem": _pattern([("L", "g", "110"), ("R", "g", "011")], "mono_gem", (), "gems"),
    }


# ---------------------------------------------------------------------------
# parameter ranges


@dataclass(frozen=True)
class FamilyMember:
    family: str
    name: str
    params: tuple[int, ...]

    def build(self) -> PatternMatrix:
        return build_member(self.family, self.name, self.params)


def build_member(family: str, name: str, params: tuple[int, ...]) -> PatternMatrix:
    if family == "tucker":
        return gen_tucker(name, *params)
    if family == "small":
        return gen_small(name, *params)
    if family == "D":
        return gen_D(params[0])
    if family == "F":
        return gen_F(name, *params)
    if family == "S":
        return gen_S(name, *params)
    if family == "P":
        return gen_P(name, *params)
    if family == "M":
        return gen_M(name, *params)
    if family == "gems":
        return gem_patterns()[name]
    raise CatalogError(f"unknown family {family}")


def _sized(family, name, param_seq, max_rows, max_cols, extra=()):
    """Members along ``param_seq`` until they stop fitting the bounds."""
    out = []
    for p in param_seq:
        params = (p,) + tuple(extra) if p is not None else tuple(extra)
        try:
            pat = build_member(family, name, params)
        except CatalogError:
            continue
        r, c = pat.shape
        if pat.tagged:
            c += len(pat.tag_cols)
        if r > max_rows or c > max_cols:
            if r > max_rows and p is not None:
                break
            continue
        out.append(FamilyMember(family, name, params))
    return out


# label-aware families first, so certificates name the most specific
# obstruction; Tucker and M are searched in the tagged form of A*
FAMILY_ORDER = ("small", "D", "F", "S", "P", "gems", "tucker", "M")
FORBIDDEN_GEMS = ("mono_gem",)


def members(family: str, max_rows: int, max_cols: int) -> list[FamilyMember]:
    """All members of a family that fit in ``max_rows`` x ``max_cols``, ascending k."""
    hi = max(max_rows, max_cols) + 3
    out: list[FamilyMember] = []
    if family == "tucker":
        for kind in ("I", "II", "III"):
            out += _sized("tucker", kind, range(3, hi), max_rows, max_cols)
        out += _sized("tucker", "IV", [None], max_rows, max_cols)
        out += _sized("tucker", "V", [None], max_rows, max_cols)
    elif family == "small":
        for nm in ("M0", "MII4", "MV"):
            out += _sized("small", nm, [None], max_rows, max_cols)
        out += _sized("small", "S0", range(4, hi, 2), max_rows, max_cols)
    elif family == "D":
        for i in range(14):
            out += _sized("D", f"D{i}", [i], max_rows, max_cols)
    elif family == "F":
        for nm in ("F0", "F0p", "F0pp"):
            out += _sized("F", nm, [None], max_rows, max_cols)
        for nm in ("F1", "F2", "F1p", "F2p"):
            out += _sized("F", nm, range(5, hi, 2), max_rows, max_cols)
    elif family == "S":
        for nm in ("S1", "S2", "S3", "S4", "S5", "S6", "S7"):
            out += _sized("S", nm, range(3, hi), max_rows, max_cols)
        out += _sized("S", "S6p", [3], max_rows, max_cols)
        out += _sized("S", "S8", range(4, hi, 2), max_rows, max_cols)
    elif family == "P":
        for nm in ("P0", "P1", "P2"):
            for k in range(4, hi):
                for l in range(0, k):
                    out += _sized("P", nm, [k], max_rows, max_cols, extra=(l,))
    elif family == "M":
        for nm in ("M2p", "M2pp", "M3p", "M3pp"):
            out += _sized("M", nm, range(4, hi), max_rows, max_cols)
        for nm in ("M4p", "M4pp", "M5p", "M5pp"):
            out += _sized("M", nm, [None], max_rows, max_cols)
    elif family == "gems":
        out = [FamilyMember("gems", nm, ()) for nm in FORBIDDEN_GEMS]
    else:
        raise CatalogError(f"unknown family {family}")
    return out


def smallest_members(family: str, count: int = 2) -> list[FamilyMember]:
    """The ``count`` smallest parameter values of every member of a family."""
    allm = members(family, 40, 40)
    by_name: dict[str, list[FamilyMember]] = {}
    for m in allm:
        by_name.setdefault(m.name, []).append(m)
    out = []
    for nm, ms in by_name.items():
        if family == "P":
            # two smallest k for l = 0 and for l > 0
            zero = [m for m in ms if m.params[1] == 0][:count]
            pos = sorted((m for m in ms if m.params[1] > 0), key=lambda m: (m.params[0], m.params[1]))[:count]
            out += zero + pos
        else:
            out += ms[:count]
    return out
