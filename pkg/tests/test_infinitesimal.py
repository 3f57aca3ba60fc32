from __future__ import annotations

import numpy as np
import pytest
from conftest import INF_CORPUS, corpus, unit

from bihom import Q
from bihom import checkers as ck
from bihom.constructions import _gd_star
from bihom.errors import HypothesisFailed, MissingComponent
from bihom.infinitesimal import (
    bihomify_equal_formula,
    commutative_gd_inputs,
    delta_is_bimodule_derivation,
    inf_prelie,
    mu_delta_operator,
    validate_inf_bialgebra,
)
from bihom.multilinear import Comultiplication, bil_eval
from bihom.quasitriangular import coboundary_bialgebra
from bihom.search import enumerate_r


def e(n, i):
    return Q.eye(n)[i]


def zero_delta(b):
    return b.with_(comuls={"Delta": Comultiplication.zero(b.field, b.dim)},
                   maps={"psi": b.map("beta"), "omega": b.map("alpha")})


@pytest.mark.parametrize("name", INF_CORPUS)
def test_corpus_bundles_validate(name):
    b = corpus(name)
    assert validate_inf_bialgebra(b).passed
    assert delta_is_bimodule_derivation(b).passed
    assert bihomify_equal_formula(b).passed
    mu_delta_operator(b)  # verify mode raises on failure
    res = inf_prelie(b)
    assert res.conclusion.passed


def test_zero_delta_on_twisted_algebras():
    for name in ("t2_rational", "m2_rational", "trunc3_twisted_gf3"):
        b = zero_delta(corpus(name))
        assert validate_inf_bialgebra(b).passed
        assert delta_is_bimodule_derivation(b).passed
        assert not np.any(mu_delta_operator(b).m != 0)
        assert not np.any(inf_prelie(b).bundle.product("mul").c != 0)


def test_m2_coboundary_values():
    b = corpus("m2_coboundary")
    assert not np.any(mu_delta_operator(b).m != 0)
    out = inf_prelie(b).bundle
    p = out.product("mul")
    assert list(bil_eval(p, e(4, unit(2, 1)), e(4, unit(2, 2)))) == list(e(4, unit(1, 2)))
    assert not np.any(bil_eval(p, e(4, unit(1, 1)), e(4, unit(2, 2))) != 0)


def test_output_maps():
    b = corpus("m2_yau_inf_rational")
    out = inf_prelie(b).bundle
    a, be, p, w = (b.map(n).m for n in ("alpha", "beta", "psi", "omega"))
    mm = lambda *ms: np.linalg.multi_dot(ms)  # noqa: E731
    assert out.map("alpha").m.tolist() == mm(a, a, be).tolist()
    assert out.map("beta").m.tolist() == mm(a, a, be, be, p, w).tolist()
    assert ck.check_commuting_multiplicative(out).passed


def test_validation_is_a_precondition(m2):
    bad = m2.with_(comuls={"Delta": Comultiplication.from_triples(Q, 4, [(0, 0, 0, 1)])},
                   maps={"psi": m2.identity(), "omega": m2.identity()})
    assert not validate_inf_bialgebra(bad).passed
    with pytest.raises(HypothesisFailed):
        inf_prelie(bad)
    assert inf_prelie(bad, skip_validate=True, verify=False).bundle.dim == 4


def test_missing_components(m2):
    with pytest.raises(MissingComponent):
        validate_inf_bialgebra(m2)


@pytest.mark.parametrize("name", ["trunc3_gf3", "trunc3_twisted_gf3", "gd_gf2"])
def test_commutative_reduction(name):
    b = corpus(name)
    seen = 0
    for rm in enumerate_r(b, "central", max_results=40):
        cob = coboundary_bialgebra(b.with_(tensors={"r": rm.r}), verify=False).bundle
        if not np.any(cob.comul("Delta").d != 0):
            continue
        seen += 1
        g = commutative_gd_inputs(cob)
        assert inf_prelie(cob, verify=False).bundle.product("mul") == _gd_star(g, "D", "lambda", "xi")
        if seen <= 3:
            mu_delta_operator(cob)
            assert delta_is_bimodule_derivation(cob).passed
    assert seen > 0
