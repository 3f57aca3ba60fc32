from __future__ import annotations

import random

import numpy as np
import pytest
from conftest import corpus, unit
from oracle import Oracle, basis_failures, catalog, random_failures

from bihom import GF, Q, StructureBundle
from bihom import checkers as ck
from bihom.errors import MissingComponent, Singular
from bihom.multilinear import BilinearProduct, Comultiplication, LinearOperator, Tensor2
from bihom.quasitriangular import delta_r

I2 = LinearOperator.identity(Q, 2)


def bundle(F, n, products, maps=None, comuls=None, **kw):
    I = LinearOperator.identity(F, n)
    maps = {"alpha": I, "beta": I, **(maps or {})}
    prods = {k: BilinearProduct.from_triples(F, n, v) for k, v in products.items()}
    cos = {k: Comultiplication.from_triples(F, n, v) for k, v in (comuls or {}).items()}
    return StructureBundle(F, n, products=prods, maps=maps, comuls=cos, **kw)


def agrees_with_oracle(b, kind, report, **kw):
    o = Oracle.from_bundle(b)
    ref = basis_failures(o, catalog(o, kind, **kw))
    return [(v.identity, v.witness) for v in report.violations] == ref


# -- structure maps -----------------------------------------------------------


def test_identity_maps_commute_and_multiply(m2):
    assert ck.check_commuting_multiplicative(m2).passed


def test_scaling_maps_are_algebra_maps(t2):
    b = t2.with_(maps={"alpha": LinearOperator.from_rows(Q, [[1, 0], [0, 2]]),
                       "beta": LinearOperator.from_rows(Q, [[1, 0], [0, 3]])})
    assert ck.check_commuting_multiplicative(b).passed


def test_swap_is_not_multiplicative(t2):
    swap = LinearOperator.from_rows(Q, [[0, 1], [1, 0]])
    rep = ck.check_commuting_multiplicative(t2.with_(maps={"alpha": swap}))
    assert not rep.passed
    assert (1, 1) in rep.witnesses("mult:alpha:mul")


# -- BiHom-associativity ----------------------------------------------------------


def test_associative_with_identity_maps(m2, t2):
    assert ck.check_bihom_associative(m2).passed
    assert ck.check_bihom_associative(t2).passed


def test_yau_twisted_m2_is_bihom_associative():
    assert ck.check_bihom_associative(corpus("m2_yau_inf_rational")).passed


def test_non_associative_witness():
    b = bundle(Q, 2, {"mul": [(0, 0, 1, 1), (1, 0, 0, 1)]})
    rep = ck.check_bihom_associative(b)
    assert not rep.passed
    # (e1 e1) e1 = e1 but e1 (e1 e1) = 0; basis indices are 0-based
    assert (0, 0, 0) in rep.witnesses("BHassoc")
    assert agrees_with_oracle(b, "assoc", rep)


def test_coassociative_examples(m2):
    z = bundle(Q, 2, {"mul": []}, maps={"psi": I2, "omega": I2}, comuls={"Delta": []})
    assert ck.check_bihom_coassociative(z).passed
    r = Tensor2.from_pairs(Q, 4, [(1, 1, 1)])
    d = delta_r(m2.with_(tensors={"r": r}), "r")
    I4 = LinearOperator.identity(Q, 4)
    b = m2.with_(comuls={"Delta": d}, maps={"psi": I4, "omega": I4})
    assert ck.check_bihom_coassociative(b).passed
    # d[0][0][0] = d[0][1][1] = 1: decided against the oracle
    odd = bundle(Q, 2, {"mul": []}, maps={"psi": I2, "omega": I2}, comuls={"Delta": [(0, 0, 0, 1), (0, 1, 1, 1)]})
    rep = ck.check_bihom_coassociative(odd)
    o = Oracle.from_bundle(odd)
    assert [(v.identity, v.witness) for v in rep.violations] == basis_failures(o, catalog(o, "coassoc"))


def test_commutative_examples(t2, m2):
    assert ck.check_bihom_commutative(t2).passed
    rep = ck.check_bihom_commutative(m2)
    assert not rep.passed
    assert (unit(1, 2), unit(2, 1)) in rep.witnesses("commnovi")
    assert ck.check_bihom_commutative(corpus("t2_rational")).passed


def test_prelie_examples():
    assert ck.check_left_bihom_prelie(corpus("m2_yau_inf_rational")).passed
    gd = corpus("gd_gf2")
    assert ck.check_left_bihom_prelie(gd, "star").passed
    b = bundle(Q, 2, {"mul": [(0, 0, 0, 1), (0, 1, 1, 1), (1, 1, 0, 1)]})
    assert agrees_with_oracle(b, "prelie", ck.check_left_bihom_prelie(b))


def test_novikov_examples():
    assert ck.check_bihom_novikov(corpus("t2_rational")).passed
    assert ck.check_bihom_novikov(corpus("gd_gf2"), "star").passed


def test_prelie_not_novikov_found_by_scan():
    from bihom.search import scan_products

    prelie = {b.product("mul") for b in scan_products(GF(2), 2, "prelie")}
    novikov = {b.product("mul") for b in scan_products(GF(2), 2, "novikov")}
    assert novikov < prelie
    witness = next(iter(prelie - novikov))
    b = bundle(GF(2), 2, {"mul": []}).with_(products={"mul": witness})
    assert not ck.check_bihom_novikov(b).passed


def test_leibniz_and_lie():
    ab = bundle(Q, 2, {"bracket": []})
    for side in ("left", "right"):
        assert ck.check_bihom_leibniz(ab, side).passed
        assert ck.check_bihom_lie(ab, side).passed
    lie = corpus("m2_lie_rational")
    assert ck.check_bihom_leibniz(lie, "left").passed
    assert ck.check_bihom_lie(lie, "left").passed
    b = bundle(Q, 2, {"bracket": [(0, 0, 1, 1)]})
    for side in ("left", "right"):
        assert agrees_with_oracle(b, f"leibniz-{side}", ck.check_bihom_leibniz(b, side), product="bracket")
    sym = bundle(Q, 1, {"bracket": [(0, 0, 0, 1)]})
    rep = ck.check_bihom_lie(sym, "left")
    assert (0, 0) in rep.witnesses("BHskewsym")


def test_commutator_of_associative_is_lie(m2):
    c = m2.product("mul").c
    b = m2.with_(products={"bracket": BilinearProduct(Q, c - c.transpose(1, 0, 2))})
    assert ck.check_bihom_lie(b, "left").passed
    assert ck.check_bihom_lie(b, "right").passed


def test_dendriform_examples(m2):
    z = bundle(Q, 2, {"prec": [], "succ": []})
    assert ck.check_bihom_dendriform(z).passed
    # prec = mul with succ = 0 is dendriform; prec = succ = mul is not
    half = m2.with_(products={"prec": m2.product("mul"), "succ": BilinearProduct.zero(Q, 4)})
    assert ck.check_bihom_dendriform(half).passed
    b = m2.with_(products={"prec": m2.product("mul"), "succ": m2.product("mul")})
    rep = ck.check_bihom_dendriform(b)
    assert not rep.passed
    assert agrees_with_oracle(b, "dendriform", rep)


def test_novikov_poisson_examples(t2_gf2):
    assert ck.check_novikov_poisson(corpus("gd_gf2")).passed
    t = corpus("t2_rational")
    assert ck.check_novikov_poisson(t.with_(products={"star": t.product("mul")})).passed
    # opposite Gel'fand-Dorfman product D(a) . b
    gd = corpus("gd_gf2")
    c = gd.product("star").c
    opp = gd.with_(products={"star": BilinearProduct(GF(2), c.transpose(1, 0, 2))})
    assert agrees_with_oracle(opp, "novikov-poisson", ck.check_novikov_poisson(opp))


def test_modules(m2):
    assert ck.check_bimodule(ck.regular_module(m2)).passed
    for name in ("m2_coboundary", "m2_yau_inf_rational"):
        assert ck.check_bimodule(ck.coproduct_bimodule(corpus(name))).passed
    zero = ck.regular_module(m2)
    Z = np.zeros_like(zero.left)
    Z[...] = Q.zero()
    zmod = ck.Module(Q, zero.mul, zero.alpha_a, zero.beta_a, zero.alpha_m, zero.beta_m, left=Z, right=Z)
    assert ck.check_module(zmod, "left").passed
    assert ck.check_module(zmod, "right").passed
    assert ck.check_bimodule(zmod).passed


def test_derivation_examples(t2):
    D = lambda rows: t2.with_(maps={"D": LinearOperator.from_rows(Q, rows)})  # noqa: E731
    assert ck.check_derivation(D([[0, 0], [0, 0]])).passed
    assert ck.check_derivation(D([[0, 0], [0, 1]])).passed
    rep = ck.check_derivation(D([[0, 1], [0, 0]]))
    assert (1, 1) in rep.witnesses("derivation")


def test_coalgebra_morphism_data(t2):
    zero = t2.with_(comuls={"Delta": Comultiplication.zero(Q, 2)}, maps={"psi": I2, "omega": I2})
    assert ck.check_coalgebra_morphism_data(zero).passed
    scal = zero.with_(maps={"alpha": LinearOperator.from_rows(Q, [[1, 0], [0, 2]])})
    assert ck.check_coalgebra_morphism_data(scal).passed
    swap = zero.with_(maps={"psi": LinearOperator.from_rows(Q, [[0, 1], [1, 0]])})
    assert "mult:psi:mul" in ck.check_coalgebra_morphism_data(swap).failed_ids()


def test_infinitesimal_compat(t2):
    zero = t2.with_(comuls={"Delta": Comultiplication.zero(Q, 2)}, maps={"psi": I2, "omega": I2})
    assert ck.check_infinitesimal_compat(zero).passed
    assert ck.check_infinitesimal_compat(corpus("m2_coboundary")).passed
    diag = zero.with_(comuls={"Delta": Comultiplication.from_triples(Q, 2, [(0, 0, 0, 1), (1, 1, 1, 1)])})
    rep = ck.check_infinitesimal_compat(diag)
    assert not rep.passed


def test_rota_baxter_examples(m2):
    R = lambda m: m2.with_(maps={"R": m})  # noqa: E731
    assert ck.check_rota_baxter(R(LinearOperator.zero(Q, 4))).passed
    assert ck.check_rota_baxter(corpus("m2_rb_rational")).passed
    rep = ck.check_rota_baxter(R(LinearOperator.identity(Q, 4)))
    assert (unit(1, 1), unit(1, 1)) in rep.witnesses("generRB")


def test_missing_component(m2):
    with pytest.raises(MissingComponent):
        ck.check_bihom_associative(m2, "nope")
    with pytest.raises(MissingComponent):
        ck.check_derivation(m2)


# -- implications and the split of the Novikov-Poisson compatibility ----------


def test_associative_implies_prelie_and_commutative_implies_novikov():
    from bihom.search import scan_products

    for b in scan_products(GF(2), 2, "assoc"):
        assert ck.check_left_bihom_prelie(b, "mul", None, None).passed
    for b in scan_products(GF(2), 2, "commutative"):
        assert ck.check_bihom_novikov(b, "mul", None, None).passed


def test_np_split_refuses_singular_maps(t2):
    b = t2.with_(products={"star": t2.product("mul")}, maps={"alpha": LinearOperator.zero(Q, 2)})
    with pytest.raises(Singular, match="alpha"):
        ck.check_lemma_3_1(b)


def test_np_split_on_twisted_gf3():
    rng = np.random.default_rng(3)
    F = GF(3)
    base = corpus("trunc3_gf3")
    checked = 0
    for _ in range(60):
        star = BilinearProduct(F, F.random(rng, (3, 3, 3)))
        b = base.with_(products={"star": star})
        hyp, np42, npnew = ck.check_lemma_3_1(b)
        if hyp.passed:
            checked += 1
            assert np42.passed == npnew.passed
    assert checked > 0


# -- basis sufficiency ------------------------------------------------------------


@pytest.mark.parametrize("name", ["m2_rational", "t2_rational", "upper2_gf2", "trunc3_gf3"])
def test_random_oracle_matches(name):
    b = corpus(name)
    o = Oracle.from_bundle(b)
    rng = random.Random(7)
    for kind, fn in (("assoc", ck.check_bihom_associative), ("commutative", ck.check_bihom_commutative),
                     ("prelie", ck.check_left_bihom_prelie), ("novikov", ck.check_bihom_novikov)):
        assert set(fn(b).failed_ids()) == random_failures(o, catalog(o, kind), rng, 100)


# -- determinism ------------------------------------------------------------------


@pytest.mark.parametrize("workers", [1, 2, 3, 8])
def test_worker_count_does_not_change_reports(workers):
    b = corpus("m2_rational")
    base = ck.check_bihom_novikov(b, workers=1)
    assert ck.check_bihom_novikov(b, workers=workers) == base


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv("BIHOM_WORKERS", "4")
    assert ck.resolve_workers() == 4
    monkeypatch.delenv("BIHOM_WORKERS")
    assert ck.resolve_workers() == 1
