"""Plain-text bundle files.

Grammar (EBNF; see ``docs/bundle-format.md`` for the commented version)::

    file      = { comment | blank } , header , { block | blank | comment } ;
    header    = "field" , FIELD , NL , "dim" , INT , NL , [ "kind" , NAME , NL ] ;
    block     = ( "product" | "comul" ) , NAME , NL , { INT , INT , INT , SCALAR , NL } , "end" , NL
              | "map" , NAME , NL , dim * ( dim * SCALAR , NL ) , "end" , NL
              | "tensor" , NAME , NL , { INT , INT , SCALAR , NL } , "end" , NL ;
    comment   = "#" , { any character } , NL ;
    SCALAR    = [ "-" ] , DIGITS , [ "/" , DIGITS ] ;

Comment lines are the provenance block: they are kept, in order, and written
back at the top of the file by :func:`save_bundle`; they play no part in
bundle equality. Saving is canonical (names sorted, entries sorted, zero
entries omitted), so ``save(load(save(b)))`` reproduces the same bytes.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .bundle import StructureBundle
from .errors import BihomError, InvariantViolation, ParseError
from .field import FieldDescriptor, parse_field
from .multilinear import BilinearProduct, Comultiplication, LinearOperator, Tensor2

__all__ = ["load_bundle", "save_bundle", "loads_bundle", "dumps_bundle"]

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_BLOCKS = {"product": 3, "comul": 3, "tensor": 2, "map": None}


def _tokens(line: str) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with their 1-based columns."""
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def loads_bundle(text: str) -> StructureBundle:
    provenance: list[str] = []
    field: FieldDescriptor | None = None
    dim: int | None = None
    kind = "algebra"
    tables: dict[str, dict] = {"product": {}, "comul": {}, "map": {}, "tensor": {}}
    block: tuple[str, str, int] | None = None  # (keyword, name, start line)
    entries: dict = {}
    rows: list = []
    seen_header = set()

    def scalar(tok, lineno, col):
        try:
            return field.parse(tok)
        except ParseError as exc:
            raise ParseError(str(exc), lineno, col) from None
        except BihomError as exc:
            raise ParseError(str(exc), lineno, col) from None

    def index(tok, lineno, col):
        if not tok.isdigit():
            raise ParseError(f"expected a non-negative index, got {tok!r}", lineno, col)
        i = int(tok)
        if i >= dim:
            raise InvariantViolation(f"line {lineno}, column {col}: index {i} out of range for dim {dim}")
        return i

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if block is not None:
                continue
            provenance.append(stripped[1:].strip())
            continue
        toks = _tokens(raw)
        head, col = toks[0]
        if block is not None:
            kw, name, _ = block
            if head == "end":
                if len(toks) != 1:
                    raise ParseError("unexpected text after 'end'", lineno, toks[1][1])
                if kw == "map":
                    if len(rows) != dim:
                        raise ParseError(f"map {name!r} has {len(rows)} rows, expected {dim}", lineno, col)
                    tables["map"][name] = LinearOperator(field, field.array(rows))
                elif kw == "tensor":
                    t = field.zeros((dim, dim))
                    for (i, j), v in entries.items():
                        t[i, j] = v
                    tables["tensor"][name] = Tensor2(field, t)
                else:
                    arr = field.zeros((dim, dim, dim))
                    for (i, j, k), v in entries.items():
                        arr[i, j, k] = v
                    cls = BilinearProduct if kw == "product" else Comultiplication
                    tables[kw][name] = cls(field, arr)
                block, entries, rows = None, {}, []
                continue
            if kw == "map":
                if len(toks) != dim:
                    raise ParseError(f"map row needs {dim} entries, got {len(toks)}", lineno, col)
                rows.append([scalar(t, lineno, c) for t, c in toks])
                continue
            arity = _BLOCKS[kw]
            if len(toks) != arity + 1:
                raise ParseError(f"{kw} entry needs {arity} indices and a scalar", lineno, col)
            key = tuple(index(t, lineno, c) for t, c in toks[:arity])
            if key in entries:
                raise InvariantViolation(f"line {lineno}: duplicate entry {key} in {kw} {name!r}")
            tok, tcol = toks[arity]
            entries[key] = scalar(tok, lineno, tcol)
            continue

        if head in ("field", "dim", "kind"):
            if len(toks) != 2:
                raise ParseError(f"'{head}' takes exactly one argument", lineno, col)
            if head in seen_header:
                raise ParseError(f"duplicate '{head}' line", lineno, col)
            seen_header.add(head)
            arg, acol = toks[1]
            if head == "field":
                try:
                    field = parse_field(arg)
                except ParseError as exc:
                    raise ParseError(str(exc), lineno, acol) from None
            elif head == "dim":
                if not arg.isdigit() or int(arg) < 1:
                    raise ParseError(f"dim must be a positive integer, got {arg!r}", lineno, acol)
                dim = int(arg)
            else:
                kind = arg
            continue
        if head in _BLOCKS:
            if field is None or dim is None:
                raise ParseError("'field' and 'dim' must precede blocks", lineno, col)
            if len(toks) != 2 or not _NAME.match(toks[1][0]):
                raise ParseError(f"'{head}' needs a single name", lineno, col)
            name = toks[1][0]
            if name in tables[head]:
                raise InvariantViolation(f"line {lineno}: duplicate {head} {name!r}")
            block = (head, name, lineno)
            continue
        raise ParseError(f"unknown key {head!r}", lineno, col)

    if block is not None:
        raise ParseError(f"{block[0]} {block[1]!r} is missing 'end'", block[2], 1)
    if field is None or dim is None:
        raise ParseError("missing 'field' or 'dim' line", max(len(lines), 1), 1)
    return StructureBundle(
        field, dim, products=tables["product"], comuls=tables["comul"], maps=tables["map"],
        tensors=tables["tensor"], kind=kind, provenance=tuple(provenance),
    )


def dumps_bundle(bundle: StructureBundle) -> str:
    F = bundle.field
    out: list[str] = [f"# {p}".rstrip() for p in bundle.provenance]
    out += [f"field {F.name}", f"dim {bundle.dim}", f"kind {bundle.kind}"]

    def sparse(kw, name, arr):
        out.append(f"{kw} {name}")
        for idx in np.argwhere(arr != 0):
            idx = tuple(int(i) for i in idx)
            out.append("  " + " ".join(map(str, idx)) + " " + F.format(arr[idx]))
        out.append("end")

    for name, p in bundle.products.items():
        sparse("product", name, p.c)
    for name, d in bundle.comuls.items():
        sparse("comul", name, d.d)
    for name, m in bundle.maps.items():
        out.append(f"map {name}")
        for row in m.m:
            out.append("  " + " ".join(F.format(v) for v in row))
        out.append("end")
    for name, t in bundle.tensors.items():
        sparse("tensor", name, t.coeffs)
    return "\n".join(out) + "\n"


def load_bundle(path) -> StructureBundle:
    return loads_bundle(Path(path).read_text(encoding="utf-8"))


def save_bundle(bundle: StructureBundle, path) -> None:
    Path(path).write_text(dumps_bundle(bundle), encoding="utf-8")
