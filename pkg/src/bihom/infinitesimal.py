"""Infinitesimal BiHom-bialgebras: validation, the derivation lemmas, and the pre-Lie product.

An InfBundle is a :class:`StructureBundle` with product ``mul``, comultiplication
``Delta`` and maps ``alpha``, ``beta``, ``psi``, ``omega``.
"""

from __future__ import annotations

from . import checkers as ck
from .bundle import StructureBundle
from .checkers import CheckReport, Identity, evaluate
from .constructions import ConstructionResult, _conclude, _provenance, _require
from .errors import ConclusionFailed
from .multilinear import BilinearProduct, Kernel, LinearOperator, op_compose, op_power

__all__ = [
    "INF_MAPS",
    "validate_inf_bialgebra",
    "delta_is_bimodule_derivation",
    "mu_delta_operator",
    "inf_prelie",
    "inf_prelie_maps",
    "bihomify_equal_formula",
    "commutative_gd_inputs",
]

INF_MAPS = ("alpha", "beta", "psi", "omega")


def _maps(bundle: StructureBundle):
    return tuple(bundle.map(n) for n in INF_MAPS)


def validate_inf_bialgebra(bundle: StructureBundle, *, workers=None, fail_fast=False) -> CheckReport:
    """BiHom-associative, BiHom-coassociative, structure-map compatibilities, and the compatibility law."""
    bundle.product("mul")
    bundle.comul("Delta")
    _maps(bundle)
    kw = dict(workers=workers, fail_fast=fail_fast)
    rep = ck.check_bihom_associative(bundle, **kw)
    rep = rep + ck.check_bihom_coassociative(bundle, **kw)
    rep = rep + ck.check_coalgebra_morphism_data(bundle, **kw)
    return rep + ck.check_infinitesimal_compat(bundle, **kw)


def delta_is_bimodule_derivation(bundle: StructureBundle, *, workers=None) -> CheckReport:
    """A (x) A is a bimodule for the twisted actions, and Delta is a derivation into it."""
    F, K = bundle.field, Kernel(bundle.field)
    n = bundle.dim
    mod = ck.coproduct_bimodule(bundle)
    rep = ck.check_bimodule(mod, workers=workers).prefixed("bimodule")
    c, d = bundle.product("mul").c, bundle.comul("Delta").d
    flat = lambda t: t.reshape(t.shape[:-2] + (n * n,))  # noqa: E731
    ident = Identity("genGD-deriv", 2, lambda x, y: (
        flat(K.comul(d, K.mul(c, x, y))),
        K.add(K.mul(mod.left, x, flat(K.comul(d, y))), K.mul(mod.right, flat(K.comul(d, x)), y)),
    ))
    return rep + evaluate(F, n, [ident], workers=workers)


def mu_delta_operator(bundle: StructureBundle, *, verify: bool = True) -> LinearOperator:
    """D = mu o Delta; in verify mode checks it is a (beta psi, alpha omega)-derivation."""
    K = Kernel(bundle.field)
    D = LinearOperator(bundle.field, K.ein("ijk,jkm->mi", bundle.comul("Delta").d, bundle.product("mul").c))
    if verify:
        a, b, p, w = _maps(bundle)
        tmp = bundle.with_(maps={"_D": D, "_tau": op_compose(b, p), "_sigma": op_compose(a, w)})
        rep = ck.check_derivation(tmp, "_D", "_tau", "_sigma")
        if not rep.passed:
            raise ConclusionFailed("inf-mu-delta", rep)
    return D


def inf_prelie_maps(bundle: StructureBundle) -> tuple[LinearOperator, LinearOperator]:
    """(alpha^2 beta, alpha^2 beta^2 psi omega)."""
    a, b, p, w = _maps(bundle)
    a2 = op_power(a, 2)
    return op_compose(a2, b), op_compose(op_compose(a2, op_power(b, 2)), op_compose(p, w))


def inf_prelie(bundle: StructureBundle, *, verify: bool = True, skip_validate: bool = False) -> ConstructionResult:
    """a * b = alpha beta^2 psi(b_1) . [alpha(a) . alpha^2 omega(b_2)],
    with maps (alpha^2 beta, alpha^2 beta^2 psi omega)."""
    F, K = bundle.field, Kernel(bundle.field)
    hyp = CheckReport()
    if not skip_validate:
        hyp = _require(validate_inf_bialgebra(bundle), "infinitesimal BiHom-bialgebra")
    a, b, p, w = _maps(bundle)
    X = op_compose(op_compose(a, op_power(b, 2)), p).m
    Y = op_compose(op_power(a, 2), w).m
    c, d = bundle.product("mul").c, bundle.comul("Delta").d
    inner = K.ein("ai,bq,abm->iqm", a.m, Y, c)  # alpha(e_i) . Y(e_q)
    star = K.ein("jpq,xp,iqm,xmk->ijk", d, X, inner, c)
    new_a, new_b = inf_prelie_maps(bundle)
    out = StructureBundle(
        F, bundle.dim, products={"mul": BilinearProduct(F, star)}, maps={"alpha": new_a, "beta": new_b},
        kind="prelie", provenance=_provenance(bundle, "inf-prelie"),
    )
    conclusion = _conclude("inf-prelie", ck.check_left_bihom_prelie(out)) if verify else None
    return ConstructionResult(out, "inf-prelie", hyp, conclusion)


def bihomify_equal_formula(bundle: StructureBundle, *, workers=None) -> CheckReport:
    """The two expressions for the pre-Lie product agree on all basis pairs."""
    K = Kernel(bundle.field)
    a, b, p, w = _maps(bundle)
    c, d = bundle.product("mul").c, bundle.comul("Delta").d
    a2 = op_power(a, 2)
    X = op_compose(op_compose(a, op_power(b, 2)), p).m
    Y = op_compose(a2, w).m
    Z = op_compose(op_power(b, 2), p).m
    V = op_compose(op_compose(a2, b), w).m

    def sides(x, y):
        t = K.comul(d, y)
        ax = K.ap(a.m, x)
        left = K.mul_legs(c, K.ein("...pq,...i,iqm->...pm", K.ap2(X, Y, t), ax, c))
        right = K.mul_legs(c, K.ein("...pq,...i,pim->...mq", K.ap2(Z, V, t), ax, c))
        return left, right

    return evaluate(bundle.field, bundle.dim, [Identity("infprelie-forms", 2, sides)], workers=workers)


def commutative_gd_inputs(bundle: StructureBundle) -> StructureBundle:
    """Add gamma = alpha^2 beta psi omega, lambda = alpha beta, xi = id and
    D(a) = alpha beta psi(a_1) . alpha^2 omega(a_2), the Gel'fand-Dorfman data of a
    BiHom-commutative infinitesimal BiHom-bialgebra."""
    K = Kernel(bundle.field)
    a, b, p, w = _maps(bundle)
    ab = op_compose(a, b)
    a2 = op_power(a, 2)
    X = op_compose(ab, p).m
    Y = op_compose(a2, w).m
    D = K.ein("ipq,xp,yq,xym->mi", bundle.comul("Delta").d, X, Y, bundle.product("mul").c)
    gamma = op_compose(op_compose(a2, b), op_compose(p, w))
    return StructureBundle(
        bundle.field, bundle.dim, products={"mul": bundle.product("mul")},
        maps={"alpha": a, "beta": b, "gamma": gamma, "lambda": ab, "xi": bundle.identity(),
              "D": LinearOperator(bundle.field, D)},
        kind="commutative", provenance=bundle.provenance,
    )
