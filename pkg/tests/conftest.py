from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bihom import GF, Q, load_bundle  # noqa: E402
from bihom.multilinear import BilinearProduct, LinearOperator  # noqa: E402

CORPUS = Path(__file__).resolve().parent.parent / "src" / "bihom" / "corpus"
INF_CORPUS = ("trivial_delta0", "m2_coboundary", "m2_yau_inf_rational")


def corpus(name: str):
    return load_bundle(CORPUS / f"{name}.bundle")


def corpus_names() -> list[str]:
    return sorted(p.stem for p in CORPUS.glob("*.bundle"))


def unit(a: int, b: int) -> int:
    """Index of the matrix unit e_ab in the basis e11, e12, e21, e22."""
    return 2 * (a - 1) + (b - 1)


def vec(F, n, **coords):
    v = F.zeros(n)
    for k, val in coords.items():
        v[int(k[1:])] = F.coerce(val)
    return v


def matrix(F, rows):
    return LinearOperator.from_rows(F, rows)


@pytest.fixture
def m2():
    return corpus("m2_rational")


@pytest.fixture
def t2():
    """Classical Q[x]/(x^2), identity structure maps."""
    from bihom import StructureBundle

    c = BilinearProduct.from_triples(Q, 2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)])
    I = LinearOperator.identity(Q, 2)
    return StructureBundle(Q, 2, products={"mul": c}, maps={"alpha": I, "beta": I})


@pytest.fixture
def t2_gf2():
    from bihom import StructureBundle

    F = GF(2)
    c = BilinearProduct.from_triples(F, 2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)])
    I = LinearOperator.identity(F, 2)
    return StructureBundle(F, 2, products={"mul": c}, maps={"alpha": I, "beta": I})
