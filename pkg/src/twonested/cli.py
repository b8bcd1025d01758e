"""Command line: matrix files, property checks, catalog dumps and oracle comparison."""

from __future__ import annotations

import argparse
import hashlib
import random
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import __version__
from .c1p import ColumnOrdering
from .catalog import CatalogError, build_member
from .core import EnrichedMatrix, MatrixError, Row, RowColor, RowLabel, dual_matrix, is_nested
from .decide import (BlockBicoloring, ColoringObstruction, ExhaustiveRefutation, NoLROrdering,
                     NotTwoNested, PartialViolation, SearchBudgetExceeded, decide_2nested,
                     exact_search, is_admissible, is_partially_2nested, verify_total_bicoloring)
from .grid import enumerate_grid, random_matrix
from .lr import Block, BlockKind, NotAnLROrdering, is_lr_orderable, lr_orderings
from .matcher import Embedding, Hit, check_embedding
from .oracle import OracleBudget, OracleBudgetExceeded, oracle_2nested

EXIT_HOLDS, EXIT_FAILS, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
PROPERTIES = ("nested", "admissible", "lr-orderable", "partially-2nested", "2nested")
_COLOR_CODE = {"-": RowColor.NONE, "r": RowColor.RED, "b": RowColor.BLUE}
_CODE_COLOR = {v: k for k, v in _COLOR_CODE.items()}


# ---------------------------------------------------------------------------
# matrix files


class ParseError(ValueError):
    def __init__(self, line: int, col: int, msg: str, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.line, self.col, self.msg = line, col, msg


def _fields(text: str):
    """(line number, [(column, token), ...]) for non-comment, non-blank lines."""
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks, col = [], 0
        for part in body.split():
            col = body.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield ln, toks


def parse_matrix(text: str, source: str = "<input>") -> EnrichedMatrix:
    lines = list(_fields(text))
    if not lines:
        raise ParseError(1, 1, "missing 'n m' header", source)
    ln, head = lines[0]
    if len(head) != 2 or not all(t.isdigit() for _, t in head):
        raise ParseError(ln, head[0][0], "header must be two non-negative integers 'n m'", source)
    n, m = int(head[0][1]), int(head[1][1])
    body = lines[1:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (lines[-1][0] + 1)
        raise ParseError(where, 1, f"expected {n} rows, found {len(body)}", source)
    rows = []
    for ln, toks in body:
        if len(toks) != 3:
            raise ParseError(ln, toks[0][0], "row must be 'LABEL COLOR BITS'", source)
        (cl, lab), (cc, col), (cb, bits) = toks
        if lab not in ("U", "L", "R", "LR"):
            raise ParseError(ln, cl, f"unknown label {lab!r}", source)
        if col not in _COLOR_CODE:
            raise ParseError(ln, cc, f"unknown color {col!r} (use -, r or b)", source)
        if len(bits) != m:
            raise ParseError(ln, cb, f"expected {m} bits, found {len(bits)}", source)
        bad = next((k for k, ch in enumerate(bits) if ch not in "01"), None)
        if bad is not None:
            raise ParseError(ln, cb + bad, f"bit {bits[bad]!r} is not 0 or 1", source)
        row = Row(tuple(int(ch) for ch in bits), RowLabel(lab), _COLOR_CODE[col])
        try:
            EnrichedMatrix(m, (row,))
        except MatrixError as e:
            raise ParseError(ln, cc, str(e).replace("row 0 ", ""), source) from None
        rows.append(row)
    try:
        return EnrichedMatrix(m, tuple(rows))
    except MatrixError as e:
        raise ParseError(body[-1][0] if body else ln, 1, str(e), source) from None


def format_matrix(a: EnrichedMatrix, comment: str | None = None) -> str:
    out = [f"# {comment}"] if comment else []
    out.append(f"{a.num_rows} {a.num_cols}")
    for r in a.rows:
        out.append(f"{r.label.value} {_CODE_COLOR[r.color]} {''.join(map(str, r.bits))}")
    return "\n".join(out) + "\n"


def input_digest(a: EnrichedMatrix) -> str:
    return "sha256:" + hashlib.sha256(format_matrix(a).encode()).hexdigest()


# ---------------------------------------------------------------------------
# certificates


@dataclass
class CertificateDoc:
    """Ordered ``key: value`` pairs; keys may repeat (``block``)."""
    items: list[tuple[str, str]] = field(default_factory=list)

    def add(self, key: str, value) -> "CertificateDoc":
        self.items.append((key, str(value)))
        return self

    def get(self, key: str, default: str | None = None) -> str | None:
        return next((v for k, v in self.items if k == key), default)

    def all(self, key: str) -> list[str]:
        return [v for k, v in self.items if k == key]

    def to_text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.items)

    @classmethod
    def from_text(cls, text: str) -> "CertificateDoc":
        doc = cls()
        for ln, raw in enumerate(text.splitlines(), 1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            if ": " not in raw and not raw.rstrip().endswith(":"):
                raise ParseError(ln, 1, "expected 'key: value'")
            k, _, v = raw.partition(":")
            doc.items.append((k.strip(), v.strip()))
        return doc


def _ints(xs: Sequence[int]) -> str:
    return " ".join(map(str, xs))


def _parse_ints(s: str | None) -> tuple[int, ...]:
    return tuple(int(x) for x in (s or "").split())


def _header(a: EnrichedMatrix, prop: str, holds: bool) -> CertificateDoc:
    doc = CertificateDoc()
    doc.add("tool", f"twonested {__version__}")
    doc.add("input", input_digest(a))
    doc.add("property", prop)
    doc.add("verdict", "holds" if holds else "fails")
    return doc


def _add_hit(doc: CertificateDoc, hit: Hit):
    e = hit.embedding
    doc.add("kind", "subconfiguration")
    doc.add("family", hit.family)
    doc.add("name", hit.name)
    doc.add("params", _ints(hit.params))
    doc.add("dual", str(e.dual_used).lower())
    doc.add("view", e.view)
    doc.add("row-map", _ints(e.row_map))
    doc.add("col-map", _ints(e.col_map))
    doc.add("color-assignment", " ".join(f"{v}={_CODE_COLOR[c]}" for v, c in e.color_assignment))


def _add_negative(doc: CertificateDoc, cert):
    if isinstance(cert, Hit):
        _add_hit(doc, cert)
    elif isinstance(cert, PartialViolation):
        doc.add("kind", "precoloring").add("assertion", cert.assertion).add("rows", _ints(cert.rows))
    elif isinstance(cert, NoLROrdering):
        doc.add("kind", "no-lr-ordering")
    elif isinstance(cert, ExhaustiveRefutation):
        doc.add("kind", "exhaustive").add("pairs-checked", cert.pairs_checked)
    elif isinstance(cert, ColoringObstruction):
        doc.add("kind", "coloring-obstruction").add("structure", cert.kind.value)
        doc.add("vertices", _ints(cert.vertices))
    else:  # pragma: no cover - every certificate type is listed above
        doc.add("kind", type(cert).__name__)


def _add_bicoloring(doc: CertificateDoc, ordering: ColumnOrdering, chi: BlockBicoloring):
    doc.add("kind", "bicoloring")
    doc.add("ordering", _ints(ordering.perm))
    for b, c in zip(chi.blocks, chi.colors):
        doc.add("block", f"{b.owner_row} {b.kind.value} {b.start} {b.stop} {_CODE_COLOR[c]}")


def certify(a: EnrichedMatrix, prop: str) -> tuple[bool, CertificateDoc]:
    """Evaluate ``prop`` on ``a`` and describe the evidence."""
    if prop == "nested":
        m = a.masks()
        pair = next(((i, j) for i in range(len(m)) for j in range(i + 1, len(m))
                     if m[i] & m[j] and m[i] & ~m[j] and m[j] & ~m[i]), None)
        holds = is_nested(a)
        doc = _header(a, prop, holds)
        if pair is not None:
            doc.add("kind", "overlapping-rows").add("rows", _ints(pair))
        else:
            doc.add("kind", "recheck")
        return holds, doc
    if prop == "admissible":
        hit = is_admissible(a)
        doc = _header(a, prop, hit is None)
        if hit is not None:
            _add_hit(doc, hit)
        else:
            doc.add("kind", "recheck")
        return hit is None, doc
    if prop == "lr-orderable":
        got = is_lr_orderable(a)
        holds = isinstance(got, ColumnOrdering)
        doc = _header(a, prop, holds)
        if holds:
            doc.add("kind", "lr-ordering").add("ordering", _ints(got.perm))
        else:
            _add_hit(doc, got)
        return holds, doc
    if prop == "partially-2nested":
        bad = is_partially_2nested(a)
        doc = _header(a, prop, bad is None)
        if bad is None:
            doc.add("kind", "lr-ordering").add("ordering", _ints(next(lr_orderings(a)).perm))
        else:
            _add_negative(doc, bad)
        return bad is None, doc
    if prop == "2nested":
        v = decide_2nested(a)
        doc = _header(a, prop, v.two_nested)
        if v.two_nested:
            doc.add("route", v.route)
            _add_bicoloring(doc, v.ordering, v.coloring)
        else:
            if not v.confirmed:
                doc.add("confirmed", "false")
            _add_negative(doc, v.certificate)
        for note in v.diagnostics:
            doc.add("note", note)
        return v.two_nested, doc
    raise ValueError(f"unknown property {prop!r}")


def _blocks_from(doc: CertificateDoc) -> BlockBicoloring:
    blocks, colors = [], []
    for line in doc.all("block"):
        row, kind, start, stop, col = line.split()
        blocks.append(Block(int(row), BlockKind(kind), int(start), int(stop)))
        colors.append(_COLOR_CODE[col])
    return BlockBicoloring(tuple(blocks), tuple(colors))


def replay(a: EnrichedMatrix, doc: CertificateDoc) -> str | None:
    """Re-verify a certificate against ``a``; the reason it fails, or None."""
    if doc.get("input") != input_digest(a):
        return "certificate was issued for a different matrix"
    kind = doc.get("kind")
    try:
        if kind == "bicoloring":
            chi = _blocks_from(doc)
            bad = verify_total_bicoloring(a, _parse_ints(doc.get("ordering")), chi)
            return None if bad is None else f"bi-coloring breaks block condition {bad.assertion}"
        if kind == "lr-ordering":
            from .lr import check_lr_ordering
            return check_lr_ordering(a, _parse_ints(doc.get("ordering")))
        if kind == "subconfiguration":
            params = _parse_ints(doc.get("params"))
            pat = build_member(doc.get("family"), doc.get("name"), params)
            assign = tuple((v, _COLOR_CODE[c]) for v, _, c in
                           (x.partition("=") for x in (doc.get("color-assignment") or "").split()))
            emb = Embedding(_parse_ints(doc.get("row-map")), _parse_ints(doc.get("col-map")),
                            assign, doc.get("dual") == "true", doc.get("view", "A"))
            return check_embedding(a, pat, emb)
        if kind == "overlapping-rows":
            i, j = _parse_ints(doc.get("rows"))
            m = a.masks()
            ok = m[i] & m[j] and m[i] & ~m[j] and m[j] & ~m[i]
            return None if ok else "rows do not overlap"
        if kind == "precoloring":
            i, j = _parse_ints(doc.get("rows"))
            ri, rj = a.rows[i], a.rows[j]
            ok = (ri.label is not RowLabel.LR and rj.label is not RowLabel.LR
                  and ri.color is rj.color and ri.color is not RowColor.NONE
                  and ri.mask & rj.mask and ri.mask & ~rj.mask and rj.mask & ~ri.mask)
            return None if ok else "rows do not form a same-color overlap"
        if kind == "recheck":
            # absence of a pattern has no witness; the check is simply repeated
            holds, _ = certify(a, doc.get("property"))
            return None if (doc.get("verdict") == "holds") == holds else "the verdict does not repeat"
        if kind == "no-lr-ordering":
            return None if next(lr_orderings(a), None) is None else "an LR-ordering exists"
        if kind in ("exhaustive", "coloring-obstruction"):
            # these certificates carry no witness, so the exhaustive search is re-run
            found = exact_search(a)
            return None if isinstance(found, ExhaustiveRefutation) else "a bi-coloring exists"
    except (ValueError, KeyError, IndexError, TypeError, CatalogError, NotAnLROrdering) as e:
        return f"malformed certificate: {e}"
    return f"unknown certificate kind {kind!r}"


# ---------------------------------------------------------------------------
# commands


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _within(a: EnrichedMatrix, args) -> bool:
    return ((args.budget_rows is None or a.num_rows <= args.budget_rows)
            and (args.budget_cols is None or a.num_cols <= args.budget_cols))


def cmd_check(args, out, err) -> int:
    a = parse_matrix(_read(args.path), args.path)
    if not _within(a, args):
        print(f"matrix {a.num_rows}x{a.num_cols} exceeds the budget", file=err)
        return EXIT_BUDGET
    if args.replay:
        doc = CertificateDoc.from_text(_read(args.replay))
        if doc.get("property") != args.property:
            print(f"certificate is for {doc.get('property')!r}, not {args.property!r}", file=err)
            return EXIT_FAILS
        why = replay(a, doc)
        if why:
            print(f"REJECTED: {why}", file=out)
            return EXIT_FAILS
        print(f"VERIFIED: {args.property} {doc.get('verdict')}", file=out)
        return EXIT_HOLDS
    try:
        holds, doc = certify(a, args.property)
    except SearchBudgetExceeded as e:
        print(f"budget exceeded: {e}", file=err)
        return EXIT_BUDGET
    out.write(doc.to_text())
    return EXIT_HOLDS if holds else EXIT_FAILS


_NAMED_FAMILIES = ("F", "S", "P", "M")


def resolve_member(family: str, tokens: Sequence[str]):
    """(pattern, variable colors) for a catalog request such as ``D 1 r b``,
    ``tucker I 3`` or ``S 8 4``."""
    colors = [t for t in tokens if t in ("r", "b")]
    rest = [t for t in tokens if t not in ("r", "b")]
    if family == "D":
        if not rest:
            raise CatalogError("D needs an index")
        name, params = f"D{rest[0]}", (int(rest[0]),)
    else:
        if not rest:
            raise CatalogError(f"{family} needs a member name")
        name = rest[0]
        if family in _NAMED_FAMILIES and not name.startswith(family):
            name = family + name
        params = tuple(int(t) for t in rest[1:])
    pat = build_member(family, name, params)
    # colors are given for green then orange, whether or not both occur
    names = ["g", "o"] + [v for v in pat.variables if v not in ("g", "o")]
    if len(colors) > len(names):
        raise CatalogError(f"too many colors for {pat.name}")
    if len(set(colors)) != len(colors):
        raise CatalogError("green and orange need distinct colors")
    chosen = {v: _COLOR_CODE[c] for v, c in zip(names, colors) if v in pat.variables}
    return pat, chosen


def cmd_catalog(args, out, err) -> int:
    tokens = list(args.tokens)
    if tokens and tokens[0] == "dump":
        tokens = tokens[1:]
    if not tokens:
        print("usage: catalog FAMILY NAME [PARAMS...] [COLORS...]", file=err)
        return EXIT_USAGE
    try:
        pat, chosen = resolve_member(tokens[0], tokens[1:])
        # fill unspecified variables with the remaining colors in order
        free = [c for c in (RowColor.RED, RowColor.BLUE) if c not in chosen.values()]
        for v in pat.variables:
            if v not in chosen:
                chosen[v] = free.pop(0)
        a = pat.canonical(chosen)
    except (CatalogError, ValueError, IndexError) as e:
        print(f"catalog: {e}", file=err)
        return EXIT_USAGE
    if args.dual:
        a = dual_matrix(a)
    label = pat.name + (f"({', '.join(map(str, pat.params))})" if pat.params and pat.family != "D" else "")
    out.write(format_matrix(a, label + (" dual" if args.dual else "")))
    return EXIT_HOLDS


def cmd_oracle_compare(args, out, err) -> int:
    budget = OracleBudget(max_cols=args.budget_cols or 7, max_rows=args.budget_rows or 7)
    if args.grid:
        cases = ((f"grid#{k}", a) for k, a in enumerate(enumerate_grid(*args.grid)))
    elif args.random:
        rng = random.Random(args.seed)
        nr, nc = args.random
        cases = ((f"random#{k}", random_matrix(rng, nr, nc)) for k in range(args.count))
    elif args.path:
        cases = iter([(args.path, parse_matrix(_read(args.path), args.path))])
    else:
        print("oracle-compare needs a file, --grid N M or --random N M", file=err)
        return EXIT_USAGE
    total = bad = 0
    try:
        for name, a in cases:
            verdict = decide_2nested(a).two_nested
            truth, _ = oracle_2nested(a, budget)
            total += 1
            tag = "AGREE" if verdict == truth else "DISAGREE"
            bad += verdict != truth
            if not args.quiet or verdict != truth:
                print(f"{tag} {name} decide={int(verdict)} oracle={int(truth)}", file=out)
                if verdict != truth:
                    out.write(format_matrix(a))
    except (OracleBudgetExceeded, SearchBudgetExceeded) as e:
        print(f"budget exceeded: {e}", file=err)
        return EXIT_BUDGET
    print(f"{total} instances, {bad} disagreements", file=out)
    return EXIT_FAILS if bad else EXIT_HOLDS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twonested", description="2-nested matrix toolkit")
    p.add_argument("--version", action="version", version=f"twonested {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def budgets(sp):
        sp.add_argument("--budget-rows", type=int, default=None, metavar="N")
        sp.add_argument("--budget-cols", type=int, default=None, metavar="M")

    c = sub.add_parser("check", help="test a property and print a certificate")
    c.add_argument("property", choices=PROPERTIES)
    c.add_argument("path", help="matrix file, or - for stdin")
    c.add_argument("--replay", metavar="CERT", help="re-verify a certificate instead")
    budgets(c)
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("catalog", help="print a named forbidden matrix")
    k.add_argument("tokens", nargs="+", metavar="FAMILY NAME [PARAMS] [COLORS]")
    k.add_argument("--dual", action="store_true", help="exchange L and R labels")
    k.set_defaults(func=cmd_catalog)

    o = sub.add_parser("oracle-compare", help="compare the decision procedure with brute force")
    o.add_argument("path", nargs="?")
    o.add_argument("--grid", nargs=2, type=int, metavar=("N", "M"))
    o.add_argument("--random", nargs=2, type=int, metavar=("N", "M"))
    o.add_argument("--count", type=int, default=100)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--quiet", action="store_true", help="print disagreements only")
    budgets(o)
    o.set_defaults(func=cmd_oracle_compare)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_HOLDS
    try:
        return args.func(args, out, err)
    except ParseError as e:
        print(str(e), file=err)
        return EXIT_USAGE
    except OSError as e:
        print(f"{e.filename}: {e.strerror}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
