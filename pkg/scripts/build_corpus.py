"""Regenerate the bundled fixture corpus under src/bihom/corpus/.

Every file is produced from a few lines of structure constants or by running a
construction on an earlier file, so the corpus is reproducible byte for byte:

    python3 scripts/build_corpus.py [--check]

With ``--check`` nothing is written; the script exits 1 if any committed file
differs from what it would generate.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from bihom import Q, GF, StructureBundle
from bihom.constructions import yau_twist
from bihom.fileformat import dumps_bundle
from bihom.multilinear import BilinearProduct, Comultiplication, LinearOperator, Tensor2
from bihom.quasitriangular import coboundary_bialgebra

CORPUS = Path(__file__).resolve().parent.parent / "src" / "bihom" / "corpus"


def truncated(F, n):
    """k[x]/(x^n) on the basis 1, x, ..., x^{n-1}."""
    return BilinearProduct.from_triples(F, n, [(i, j, i + j, 1) for i in range(n) for j in range(n) if i + j < n])


def diag(F, *vals):
    return LinearOperator(F, F.array(np.diag(np.array(vals, dtype=object))))


def unit(a, b):
    """Index of the matrix unit e_{ab} (1-based a, b) in the basis e11, e12, e21, e22."""
    return 2 * (a - 1) + (b - 1)


def m2_product(F):
    entries = []
    for a in (1, 2):
        for b in (1, 2):
            for d in (1, 2):
                entries.append((unit(a, b), unit(b, d), unit(a, d), 1))
    return BilinearProduct.from_triples(F, 4, entries)


def conjugation(F, u):
    """X -> U X U^{-1} on M_2 for a 2x2 invertible U, as a 4x4 operator."""
    U = np.array(u, dtype=object)
    det = U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0]
    Ui = np.array([[U[1, 1], -U[0, 1]], [-U[1, 0], U[0, 0]]], dtype=object) * Fraction(1, 1) / det
    images = []
    for j in range(4):
        E = np.zeros((2, 2), dtype=object)
        E[j // 2, j % 2] = 1
        images.append((U.dot(E).dot(Ui)).reshape(4))
    return LinearOperator.from_images(F, images)


def ident_maps(F, n, names=("alpha", "beta")):
    return {k: LinearOperator.identity(F, n) for k in names}


def build() -> dict[str, StructureBundle]:
    out: dict[str, StructureBundle] = {}
    inf_maps = ("alpha", "beta", "psi", "omega")

    t2 = truncated(Q, 2)
    out["trivial_delta0"] = StructureBundle(
        Q, 2, products={"mul": t2}, comuls={"Delta": Comultiplication.zero(Q, 2)},
        maps=ident_maps(Q, 2, inf_maps), kind="inf-bialgebra",
        provenance=("Q[x]/(x^2) with the zero comultiplication; all structure maps identity",),
    )

    # classical Q[x]/(x^2) with the scaling morphisms x -> 2x, x -> 3x kept as twisting maps
    out["t2_classical_rational"] = StructureBundle(
        Q, 2, products={"mul": t2}, maps={"ta": diag(Q, 1, 2), "tb": diag(Q, 1, 3), "D": diag(Q, 0, 1)},
        kind="commutative",
        provenance=("Q[x]/(x^2); twisting maps ta(x)=2x, tb(x)=3x; derivation D(x)=x",),
    )
    twisted = yau_twist(out["t2_classical_rational"], "commutative").bundle
    out["t2_rational"] = twisted.with_(
        provenance=("Yau twist of Q[x]/(x^2) by alpha(x)=2x, beta(x)=3x; 1*x=3x, x*1=2x;"
                    " D(x)=x is a derivation of the twisted product",),
    )
    out["t2_morphisms_rational"] = StructureBundle(
        Q, 2, products={"mul": t2}, maps={"alpha": diag(Q, 1, 2), "beta": diag(Q, 1, 3), "D": diag(Q, 0, 1)},
        kind="commutative",
        provenance=("classical Q[x]/(x^2) with commuting morphisms alpha(x)=2x, beta(x)=3x and D(x)=x",),
    )

    g2 = truncated(GF(2), 2)
    D = LinearOperator.from_images(GF(2), [[0, 0], [1, 0]])  # D(1)=0, D(x)=1
    gd_star = BilinearProduct.from_triples(GF(2), 2, [(1, 1, 1, 1), (0, 1, 0, 1)])
    out["gd_gf2"] = StructureBundle(
        GF(2), 2, products={"mul": g2, "star": gd_star}, maps={**ident_maps(GF(2), 2), "D": D},
        kind="novikov-poisson",
        provenance=("GF(2)[x]/(x^2) with D(x)=1; star is a*b = a.D(b): x*x=x, 1*x=1",),
    )

    out["trunc3_gf3"] = StructureBundle(
        GF(3), 3, products={"mul": truncated(GF(3), 3)}, maps=ident_maps(GF(3), 3), kind="commutative",
        provenance=("GF(3)[x]/(x^3) on the basis 1, x, x^2",),
    )

    twist = out["trunc3_gf3"].with_(maps={"ta": diag(GF(3), 1, 2, 1), "tb": LinearOperator.identity(GF(3), 3)})
    out["trunc3_twisted_gf3"] = yau_twist(twist, "commutative", "ta", "tb").bundle.with_(
        provenance=("Yau twist of GF(3)[x]/(x^3) by x -> 2x (alpha) and the identity (beta)",),
    )

    m2 = m2_product(Q)
    out["m2_rational"] = StructureBundle(
        Q, 4, products={"mul": m2}, maps=ident_maps(Q, 4), kind="assoc",
        provenance=("M_2(Q) on the matrix units e11, e12, e21, e22 (indices 0..3)",),
    )
    r = Tensor2.from_pairs(Q, 4, [(unit(1, 2), unit(1, 2), 1)])
    out["m2_r_e12e12"] = out["m2_rational"].with_(
        tensors={"r": r}, provenance=("M_2(Q) with r = e12 (x) e12, a solution of the AYBE",),
    )
    cob = coboundary_bialgebra(out["m2_r_e12e12"], "r").bundle
    out["m2_coboundary"] = cob.with_(
        provenance=("coboundary infinitesimal bialgebra of M_2(Q) with r = e12 (x) e12; Delta = Delta_r",),
    )

    # four commuting conjugations by unipotent matrices; each fixes e12, so it
    # preserves r and Delta_r as well as the product
    names = {"ta": 1, "tb": 2, "tpsi": -1, "tomega": 3}
    twist_in = cob.with_(maps={n: conjugation(Q, [[1, b], [0, 1]]) for n, b in names.items()}, drop=("r",))
    yau = yau_twist(twist_in, "inf-bialgebra", "ta", "tb", "tpsi", "tomega").bundle
    out["m2_yau_inf_rational"] = yau.with_(
        drop=("r",),
        provenance=("Yau twist of the M_2(Q) coboundary bialgebra (r = e12 (x) e12) by conjugations",
                    "X -> U_b X U_b^{-1}, U_b = [[1, b], [0, 1]], with b = 1, 2, -1, 3 for alpha, beta, psi, omega"),
    )

    F2 = GF(2)
    out["upper2_gf2"] = StructureBundle(
        F2, 2, products={"mul": BilinearProduct.from_triples(F2, 2, [(0, 0, 0, 1), (0, 1, 1, 1)])},
        maps=ident_maps(F2, 2), kind="assoc",
        provenance=("span(e11, e12) in M_2(GF(2)): e11.e11 = e11, e11.e12 = e12",),
    )

    out["m2_lie_rational"] = StructureBundle(
        Q, 4, products={"bracket": BilinearProduct(Q, m2.c - m2.c.transpose(1, 0, 2))},
        maps={**ident_maps(Q, 4), "f": LinearOperator.from_images(
            Q, [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])},
        kind="lie",
        provenance=("commutator bracket of M_2(Q); f is the projection onto span(e12)",),
    )

    Rm = LinearOperator.from_images(Q, [[0] * 4, [0] * 4, [0, 1, 0, 0], [0] * 4])
    out["m2_rb_rational"] = out["m2_rational"].with_(
        maps={"R": Rm, "eta": LinearOperator.identity(Q, 4)}, kind="rota-baxter",
        provenance=("M_2(Q) with the Rota-Baxter operator R(e21) = e12 obtained from r = e12 (x) e12",),
    )

    z = BilinearProduct.zero(Q, 2)
    out["dend_singular_rational"] = StructureBundle(
        Q, 2, products={"prec": z, "succ": z}, maps={"alpha": diag(Q, 0, 1), "beta": diag(Q, 1, 1)},
        kind="dendriform",
        provenance=("zero dendriform structure whose alpha is singular",),
    )
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare instead of writing")
    args = ap.parse_args(argv)
    CORPUS.mkdir(parents=True, exist_ok=True)
    stale = 0
    for name, bundle in build().items():
        path = CORPUS / f"{name}.bundle"
        text = dumps_bundle(bundle)
        if args.check:
            if not path.exists() or path.read_text() != text:
                print(f"stale: {path.name}")
                stale += 1
        else:
            path.write_text(text)
            print(f"wrote {path.name}")
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main())
