from __future__ import annotations

from fractions import Fraction

import pytest
from conftest import CORPUS, corpus_names, unit
from hypothesis import given, settings
from hypothesis import strategies as st

from bihom import GF, Q, StructureBundle
from bihom.errors import InvariantViolation, ParseError
from bihom.fileformat import dumps_bundle, load_bundle, loads_bundle, save_bundle
from bihom.multilinear import BilinearProduct, Comultiplication, LinearOperator, Tensor2


def test_minimal_file():
    b = loads_bundle("field Q\ndim 1\nproduct mul\n  0 0 0 1\nend\n")
    assert b.field == Q and b.dim == 1 and b.kind == "algebra"
    assert b.product("mul").c.tolist() == [[[Fraction(1)]]]


def test_m2_corpus_file():
    b = load_bundle(CORPUS / "m2_rational.bundle")
    c = b.product("mul").c
    assert int((c != 0).sum()) == 8
    for a in (1, 2):
        for k in (1, 2):
            for d in (1, 2):
                assert c[unit(a, k), unit(k, d), unit(a, d)] == 1
    assert b.map("alpha") == LinearOperator.identity(Q, 4)


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_round_trip_bytes(name, tmp_path):
    path = CORPUS / f"{name}.bundle"
    text = path.read_text()
    b = load_bundle(path)
    assert dumps_bundle(b) == text
    save_bundle(b, tmp_path / "x.bundle")
    again = load_bundle(tmp_path / "x.bundle")
    assert again == b and again.provenance == b.provenance
    assert (tmp_path / "x.bundle").read_text() == text


def test_canonical_order():
    F = GF(3)
    I = LinearOperator.identity(F, 2)
    b1 = StructureBundle(F, 2, maps={"z": I, "a": I}, products={"star": BilinearProduct.zero(F, 2),
                                                               "mul": BilinearProduct.zero(F, 2)})
    b2 = StructureBundle(F, 2, maps={"a": I, "z": I}, products={"mul": BilinearProduct.zero(F, 2),
                                                               "star": BilinearProduct.zero(F, 2)})
    assert dumps_bundle(b1) == dumps_bundle(b2)


def test_all_components_and_scalars():
    F = Q
    b = StructureBundle(
        F, 2,
        products={"mul": BilinearProduct.from_triples(F, 2, [(0, 1, 1, Fraction(-3, 4))])},
        comuls={"Delta": Comultiplication.from_triples(F, 2, [(1, 0, 1, 5)])},
        maps={"alpha": LinearOperator.from_rows(F, [[Fraction(1, 2), 0], [-1, 1]])},
        tensors={"r": Tensor2.from_pairs(F, 2, [(1, 1, Fraction(7, 3))])},
        kind="custom", provenance=("made by hand",),
    )
    text = dumps_bundle(b)
    assert "-3/4" in text and "7/3" in text and "# made by hand" in text
    assert loads_bundle(text) == b


def test_provenance_ignored_by_equality():
    a = loads_bundle("# one\nfield Q\ndim 1\n")
    b = loads_bundle("# two\n# three\nfield Q\ndim 1\n")
    assert a == b and a.provenance == ("one",) and b.provenance == ("two", "three")


@pytest.mark.parametrize("text,line,col", [
    ("field Q\ndim 2\nwhat 3\n", 3, 1),
    ("field Q\ndim 2\nproduct mul\n  0 0 x 1\nend\n", 4, 7),
    ("field Q\ndim 2\nproduct mul\n  0 0 0 1/0\nend\n", 4, 9),
    ("field Q\ndim 2\nproduct mul\n  0 0 0\nend\n", 4, 3),
    ("field Q\ndim 2\nmap alpha\n  1 0\nend\n", 5, 1),
    ("field Q\ndim 2\nmap alpha\n  1 0 0\n", 4, 3),
    ("field GF(4)\ndim 2\n", 1, 7),
    ("field Q\ndim 0\n", 2, 5),
    ("field Q\nfield Q\ndim 1\n", 2, 1),
    ("dim 2\nproduct mul\nend\n", 2, 1),
    ("field GF(2)\ndim 2\nproduct mul\n  0 0 0 1\n", 3, 1),
    ("field GF(2)\ndim 2\nproduct mul\n  0 0 0 1\nend extra\n", 5, 5),
])
def test_parse_errors_report_position(text, line, col):
    with pytest.raises(ParseError) as info:
        loads_bundle(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert f"line {line}" in str(info.value)


def test_missing_header():
    with pytest.raises(ParseError, match="missing"):
        loads_bundle("# nothing\n")


@pytest.mark.parametrize("text", [
    "field Q\ndim 4\nproduct mul\n  5 0 0 1\nend\n",
    "field Q\ndim 2\nproduct mul\n  0 0 0 1\n  0 0 0 2\nend\n",
    "field Q\ndim 2\nproduct mul\nend\nproduct mul\nend\n",
    "field Q\ndim 2\ntensor r\n  0 2 1\nend\n",
])
def test_invariant_violations(text):
    with pytest.raises(InvariantViolation):
        loads_bundle(text)


def test_gf_scalars_are_reduced_on_load():
    b = loads_bundle("field GF(3)\ndim 1\nproduct mul\n  0 0 0 -1\nend\n")
    assert int(b.product("mul").c[0, 0, 0]) == 2
    assert "0 0 0 2" in dumps_bundle(b)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_random_round_trip(data):
    F = data.draw(st.sampled_from([Q, GF(2), GF(5)]))
    n = data.draw(st.integers(1, 3))
    scal = st.fractions(min_value=-5, max_value=5, max_denominator=6) if F == Q else st.integers(0, F.order - 1)
    entries = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(0, n - 1),
                                           scal), max_size=6, unique_by=lambda t: t[:3]))
    rows = data.draw(st.lists(st.lists(scal, min_size=n, max_size=n), min_size=n, max_size=n))
    b = StructureBundle(F, n, products={"mul": BilinearProduct.from_triples(F, n, entries)},
                        maps={"alpha": LinearOperator.from_rows(F, rows)})
    text = dumps_bundle(b)
    assert loads_bundle(text) == b
    assert dumps_bundle(loads_bundle(text)) == text
