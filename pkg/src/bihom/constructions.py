"""Constructive results: Yau twists, Gel'fand-Dorfman products, Lie star products,
dendriform structures from Rota-Baxter operators, pre-Lie from dendriform.

Every construction checks its hypotheses eagerly (raising :class:`HypothesisFailed`
with a witness) and, unless ``verify=False``, re-checks the conclusion on the
output (raising :class:`ConclusionFailed`).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import checkers as ck
from .bundle import StructureBundle
from .checkers import CheckReport, Identity, evaluate
from .errors import ConclusionFailed, HypothesisFailed, NonCommutingMaps, NotAMorphism
from .multilinear import BilinearProduct, Comultiplication, Kernel, LinearOperator, op_compose, op_invert, op_power

__all__ = [
    "ConstructionResult",
    "yau_twist",
    "power_twist",
    "gelfand_dorfman",
    "gd_cor_p_r",
    "gd_commhom",
    "gd_gamma",
    "np_from_gd",
    "cor_4_6",
    "lie_star",
    "lie_star_conditions",
    "centralizer",
    "prelie_from_dendriform",
    "dendriform_from_rb",
]


@dataclass(frozen=True)
class ConstructionResult:
    bundle: StructureBundle
    theorem: str
    hypotheses: CheckReport = CheckReport()
    conclusion: CheckReport | None = None


def _opt(bundle: StructureBundle, name: str | None) -> str | None:
    """A map name that is absent from the bundle stands for the identity."""
    return name if name is not None and name in bundle.maps else None


def _op(bundle: StructureBundle, name: str | None) -> LinearOperator:
    return bundle.map(_opt(bundle, name))


def _require(report: CheckReport, hypothesis: str) -> CheckReport:
    if not report.passed:
        raise HypothesisFailed(hypothesis, report)
    return report


def _conclude(theorem: str, report: CheckReport) -> CheckReport:
    if not report.passed:
        raise ConclusionFailed(theorem, report)
    return report


def _provenance(bundle: StructureBundle, theorem: str, **params) -> tuple[str, ...]:
    extra = " ".join(f"{k}={v}" for k, v in params.items() if v is not None)
    return bundle.provenance + (f"construct {theorem}" + (f" {extra}" if extra else ""),)


def _product(K: Kernel, spec: str, *ops) -> BilinearProduct:
    return BilinearProduct(K.F, K.ein(spec, *ops))


def _commute_all(bundle, names, hypothesis="maps commute pairwise") -> CheckReport:
    K = Kernel(bundle.field)
    ids = []
    named = [(n, _op(bundle, n).m) for n in names if _opt(bundle, n) is not None]
    for (na, a), (nb, b) in combinations(named, 2):
        ids.append(ck.commute_identity(K, na, a, nb, b))
    return _require(evaluate(bundle.field, bundle.dim, ids), hypothesis)


def _mult(bundle, name, product="mul") -> CheckReport:
    K = Kernel(bundle.field)
    if _opt(bundle, name) is None:
        return CheckReport()
    ident = ck.mult_identity(K, name, _op(bundle, name).m, product, bundle.product(product).c)
    return evaluate(bundle.field, bundle.dim, [ident])


# ---------------------------------------------------------------------------
# Yau twists

_TWIST_PRODUCTS = {
    "assoc": ("mul",),
    "commutative": ("mul",),
    "prelie": ("mul",),
    "novikov": ("mul",),
    "novikov-poisson": ("mul", "star"),
    "inf-bialgebra": ("mul",),
}


def _input_report(bundle, kind) -> CheckReport:
    if kind == "assoc":
        return ck.check_bihom_associative(bundle, "mul", _opt(bundle, "alpha"), _opt(bundle, "beta"))
    if kind == "commutative":
        return ck.check_bihom_commutative(bundle, "mul", _opt(bundle, "alpha"), _opt(bundle, "beta"))
    if kind == "prelie":
        return ck.check_left_bihom_prelie(bundle, "mul", _opt(bundle, "alpha"), _opt(bundle, "beta"))
    if kind == "novikov":
        return ck.check_bihom_novikov(bundle, "mul", _opt(bundle, "alpha"), _opt(bundle, "beta"))
    if kind == "novikov-poisson":
        return ck.check_novikov_poisson(bundle, "mul", "star", _opt(bundle, "alpha"), _opt(bundle, "beta"))
    raise ValueError(f"unknown twist kind {kind!r}")


def _is_coalgebra_morphism(K, m, d) -> bool:
    lhs = K.ein("ja,kb,iab->ijk", m, m, d)  # (M (x) M) Delta(e_i)
    rhs = K.ein("ai,ajk->ijk", m, d)  # Delta(M e_i)
    return bool(np.all(K.F.equal(lhs, rhs)))


def yau_twist(
    bundle: StructureBundle,
    kind: str,
    a_name: str = "ta",
    b_name: str = "tb",
    psi_name: str | None = None,
    omega_name: str | None = None,
    *,
    verify: bool = True,
) -> ConstructionResult:
    """Twist along commuting morphisms.

    For algebra kinds: products become ``p o (A (x) B)`` and the structure maps
    ``alpha o A``, ``beta o B``. For ``inf-bialgebra`` the input must be classical
    (all structure maps identity); the four twisting maps must be algebra and
    coalgebra morphisms, and the output is ``(mu o (A (x) B), (W (x) P) o Delta, A, B, P, W)``.
    """
    if kind not in _TWIST_PRODUCTS:
        raise ValueError(f"unknown twist kind {kind!r}")
    F, K = bundle.field, Kernel(bundle.field)
    twisting = [a_name, b_name] + ([psi_name, omega_name] if kind == "inf-bialgebra" else [])
    ops = {n: bundle.map(n) for n in twisting}
    products = _TWIST_PRODUCTS[kind]

    if kind == "inf-bialgebra":
        from .infinitesimal import validate_inf_bialgebra

        for n in ("alpha", "beta", "psi", "omega"):
            if n in bundle.maps and not bundle.maps[n].is_identity():
                raise HypothesisFailed(f"input is classical ({n} is not the identity)")
        ident = bundle.identity()
        base = bundle.with_(maps={n: ident for n in ("alpha", "beta", "psi", "omega")})
        hyp = _require(validate_inf_bialgebra(base), "input is an infinitesimal bialgebra")
        d = bundle.comul("Delta").d
        for n, op in ops.items():
            if not _mult(bundle, n).passed:
                raise NotAMorphism(f"{n} is not an algebra morphism")
            if not _is_coalgebra_morphism(K, op.m, d):
                raise NotAMorphism(f"{n} is not a coalgebra morphism")
        structure = []
    else:
        hyp = _require(_input_report(bundle, kind), f"input is {kind}")
        structure = [n for n in ("alpha", "beta") if _opt(bundle, n) is not None]
        for n in twisting:
            for p in products:
                if not _mult(bundle, n, p).passed:
                    raise NotAMorphism(f"{n} is not multiplicative for {p}")
    names = list(dict.fromkeys(structure + twisting))
    for x, y in combinations(names, 2):
        mx, my = bundle.map(x).m, bundle.map(y).m
        if not np.all(F.equal(K.ein("ij,jk->ik", mx, my), K.ein("ij,jk->ik", my, mx))):
            raise NonCommutingMaps(f"{x} and {y} do not commute")

    A, B = ops[a_name], ops[b_name]
    new_products = {p: _product(K, "ai,bj,abk->ijk", A.m, B.m, bundle.product(p).c) for p in products}
    new_comuls = {}
    if kind == "inf-bialgebra":
        P, W = ops[psi_name], ops[omega_name]
        new_comuls["Delta"] = Comultiplication(F, K.ein("iab,ja,kb->ijk", bundle.comul("Delta").d, W.m, P.m))
        new_maps = {"alpha": A, "beta": B, "psi": P, "omega": W}
    else:
        new_maps = {"alpha": op_compose(_op(bundle, "alpha"), A), "beta": op_compose(_op(bundle, "beta"), B)}
    theorem = f"yau-{kind}"
    out = bundle.with_(
        products=new_products, comuls=new_comuls, maps=new_maps, drop=tuple(twisting), kind=kind,
        provenance=_provenance(bundle, theorem, twist=",".join(twisting)),
    )
    conclusion = None
    if verify:
        if kind == "inf-bialgebra":
            from .infinitesimal import validate_inf_bialgebra

            conclusion = _conclude(theorem, validate_inf_bialgebra(out))
        else:
            conclusion = _conclude(theorem, _input_report(out, kind))
    return ConstructionResult(out, theorem, hyp, conclusion)


def power_twist(bundle: StructureBundle, n: int, kind: str = "novikov-poisson", *, verify=True) -> ConstructionResult:
    """A^n: twist by (alpha^n, beta^n); structure maps become (alpha^{n+1}, beta^{n+1})."""
    if n < 0:
        raise ValueError("n must be non-negative")
    a, b = _op(bundle, "alpha"), _op(bundle, "beta")
    tmp = bundle.with_(maps={"_pow_a": op_power(a, n), "_pow_b": op_power(b, n)})
    res = yau_twist(tmp, kind, "_pow_a", "_pow_b", verify=verify)
    out = res.bundle.with_(provenance=_provenance(bundle, "yau-power", kind=kind, n=n))
    return ConstructionResult(out, "yau-power", res.hypotheses, res.conclusion)


# ---------------------------------------------------------------------------
# Gel'fand-Dorfman family


def _gd_star(bundle, D, lam, xi) -> BilinearProduct:
    """a * b = lambda(a) . xi(D(b))."""
    K = Kernel(bundle.field)
    xd = op_compose(_op(bundle, xi), bundle.map(D)).m
    return _product(K, "ai,bj,abk->ijk", _op(bundle, lam).m, xd, bundle.product("mul").c)


def gelfand_dorfman(
    bundle: StructureBundle,
    D: str = "D",
    gamma: str | None = "gamma",
    lam: str | None = "lambda",
    xi: str | None = "xi",
    *,
    verify: bool = True,
    theorem: str = "gd-general",
) -> ConstructionResult:
    """a * b = lambda(a) . xi D(b) on a BiHom-commutative algebra; maps (lambda alpha, xi beta gamma).

    Absent map names (gamma, lambda, xi, alpha, beta) stand for the identity.
    """
    al, be, ga = _opt(bundle, "alpha"), _opt(bundle, "beta"), _opt(bundle, gamma)
    hyp = _require(ck.check_bihom_commutative(bundle, "mul", al, be), "mul is BiHom-commutative")
    for nm in (gamma, lam, xi):
        hyp = hyp + _require(_mult(bundle, nm), f"{nm} is multiplicative")
    bundle.map(D)
    hyp = hyp + _commute_all(bundle, ["alpha", "beta", gamma, lam, xi, D], "alpha, beta, gamma, lambda, xi, D commute")
    hyp = hyp + _require(ck.check_derivation(bundle, D, ga, ga), f"{D} is a {_label(ga)}-derivation")

    star = _gd_star(bundle, D, lam, xi)
    new_a = op_compose(_op(bundle, lam), _op(bundle, "alpha"))
    new_b = op_compose(op_compose(_op(bundle, xi), _op(bundle, "beta")), _op(bundle, gamma))
    out = StructureBundle(
        bundle.field, bundle.dim, products={"mul": star}, maps={"alpha": new_a, "beta": new_b},
        kind="novikov", provenance=_provenance(bundle, theorem),
    )
    conclusion = _conclude(theorem, ck.check_bihom_novikov(out)) if verify else None
    return ConstructionResult(out, theorem, hyp, conclusion)


def _label(name):
    return "id" if name is None else name


def gd_cor_p_r(bundle: StructureBundle, p: int, r: int, D: str = "D", *, verify=True) -> ConstructionResult:
    """lambda = alpha^p, gamma = beta^r, xi = id: a * b = alpha^p(a) . D(b), maps (alpha^{p+1}, beta^{r+1})."""
    tmp = bundle.with_(maps={
        "_lambda": op_power(_op(bundle, "alpha"), p),
        "_gamma": op_power(_op(bundle, "beta"), r),
    }, provenance=bundle.provenance)
    res = gelfand_dorfman(tmp, D, "_gamma", "_lambda", None, verify=verify, theorem="gd-cor-p-r")
    out = res.bundle.with_(provenance=_provenance(bundle, "gd-cor-p-r", p=p, r=r))
    return ConstructionResult(out, res.theorem, res.hypotheses, res.conclusion)


def gd_commhom(bundle: StructureBundle, D: str = "D", *, verify=True) -> ConstructionResult:
    """Ordinary derivation D commuting with alpha, beta: a * b = a . D(b), maps (alpha, beta)."""
    res = gelfand_dorfman(bundle, D, None, None, None, verify=verify, theorem="gd-commhom")
    return res


def gd_gamma(bundle: StructureBundle, D: str = "D", gamma: str = "gamma", *, verify=True) -> ConstructionResult:
    """Commutative associative input, (gamma, gamma)-derivation D commuting with gamma: maps (id, gamma)."""
    base = bundle.with_(drop=("alpha", "beta"))
    return gelfand_dorfman(base, D, gamma, None, None, verify=verify, theorem="gd-gamma")


def np_from_gd(bundle: StructureBundle, D: str = "D", *, verify=True) -> ConstructionResult:
    """The pair (mul, a * b = a . D(b)) as a BiHom-Novikov-Poisson bundle."""
    res = gd_commhom(bundle, D, verify=False)
    out = StructureBundle(
        bundle.field, bundle.dim,
        products={"mul": bundle.product("mul"), "star": res.bundle.product("mul")},
        maps={"alpha": _op(bundle, "alpha"), "beta": _op(bundle, "beta")},
        kind="novikov-poisson", provenance=_provenance(bundle, "np-from-gd"),
    )
    conclusion = _conclude("np-from-gd", ck.check_novikov_poisson(out)) if verify else None
    return ConstructionResult(out, "np-from-gd", res.hypotheses, conclusion)


def cor_4_6(bundle: StructureBundle, D: str = "D", *, verify=True) -> ConstructionResult:
    """Classical commutative associative mul, commuting morphisms alpha, beta, derivation D
    commuting with both: x . y = alpha(x) beta(y), x * y = alpha(x) D(beta(y))."""
    F, K = bundle.field, Kernel(bundle.field)
    hyp = _require(ck.check_bihom_commutative(bundle, "mul", None, None), "mul is commutative and associative")
    hyp = hyp + _require(ck.check_commuting_multiplicative(bundle, [_opt(bundle, "alpha"), _opt(bundle, "beta")]),
                         "alpha, beta are commuting algebra maps")
    hyp = hyp + _commute_all(bundle, ["alpha", "beta", D], "D commutes with alpha and beta")
    hyp = hyp + _require(ck.check_derivation(bundle, D), f"{D} is a derivation")
    a, b, d = _op(bundle, "alpha").m, _op(bundle, "beta").m, bundle.map(D).m
    c = bundle.product("mul").c
    bullet = _product(K, "ai,bj,abk->ijk", a, b, c)
    star = _product(K, "ai,bj,abk->ijk", a, K.ein("ij,jk->ik", d, b), c)
    out = StructureBundle(
        F, bundle.dim, products={"mul": bullet, "star": star},
        maps={"alpha": _op(bundle, "alpha"), "beta": _op(bundle, "beta")},
        kind="novikov-poisson", provenance=_provenance(bundle, "cor-4-6"),
    )
    conclusion = _conclude("cor-4-6", ck.check_novikov_poisson(out)) if verify else None
    return ConstructionResult(out, "cor-4-6", hyp, conclusion)


# ---------------------------------------------------------------------------
# Lie star products


def _lie_pre(bundle, f, side, bracket):
    bundle.product(bracket)
    fm = bundle.map(f)
    a, b = _op(bundle, "alpha"), _op(bundle, "beta")
    F, K = bundle.field, Kernel(bundle.field)
    for nm, m in (("alpha", a), ("beta", b)):
        if not np.all(F.equal(K.ein("ij,jk->ik", fm.m, m.m), K.ein("ij,jk->ik", m.m, fm.m))):
            raise NonCommutingMaps(f"{f} and {nm} do not commute")
    if side == "right":
        op_invert(a, "alpha")
        op_invert(b, "beta")
    elif side != "left":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return F, K, fm.m, a.m, b.m, bundle.product(bracket).c


def lie_star(bundle: StructureBundle, f: str = "f", side: str = "left", bracket: str = "bracket") -> ConstructionResult:
    """x * y = [f(x), y] (left) or x *' y = [x, f(y)] (right), maps unchanged."""
    F, K, fm, a, b, c = _lie_pre(bundle, f, side, bracket)
    if side == "left":
        star = _product(K, "ai,abk->ibk", fm, c)
    else:
        star = _product(K, "bj,abk->ajk", fm, c)
    theorem = f"lie-star-{side}"
    out = StructureBundle(
        F, bundle.dim, products={"mul": star}, maps={"alpha": bundle.map(_opt(bundle, "alpha")),
                                                     "beta": bundle.map(_opt(bundle, "beta"))},
        kind="novikov", provenance=_provenance(bundle, theorem),
    )
    return ConstructionResult(out, theorem)


def centralizer(bundle: StructureBundle, side: str = "left", bracket: str = "bracket") -> list[np.ndarray]:
    """Z_l = {x : [x, beta(e_j)] = 0 for all j} or Z_r = {x : [alpha(e_j), x] = 0 for all j}."""
    F, K = bundle.field, Kernel(bundle.field)
    c = bundle.product(bracket).c
    n = bundle.dim
    if side == "left":
        b = _op(bundle, "beta").m
        # coefficient of x_i in [x, beta(e_j)]_k
        system = K.ein("bj,ibk->jki", b, c)
    elif side == "right":
        a = _op(bundle, "alpha").m
        system = K.ein("aj,aik->jki", a, c)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return F.nullspace(system.reshape(n * n, n), n)


def _annihilator(F, basis: list[np.ndarray], n: int) -> np.ndarray:
    """Rows W with W v = 0 exactly for v in span(basis)."""
    if not basis:
        return F.eye(n)
    rows = F.nullspace(np.stack(basis), n)
    if not rows:
        return F.zeros((1, n))
    return np.stack(rows)


def lie_star_conditions(bundle: StructureBundle, f: str = "f", side: str = "left", bracket: str = "bracket", *,
                        workers=None) -> CheckReport:
    """The centralizer criteria equivalent to the star product being BiHom-Novikov."""
    F, K, fm, a, b, c = _lie_pre(bundle, f, side, bracket)
    br = lambda x, y: K.mul(c, x, y)  # noqa: E731
    fa = lambda x: K.ap(fm, x)  # noqa: E731
    A = lambda x: K.ap(a, x)  # noqa: E731
    B = lambda x: K.ap(b, x)  # noqa: E731
    W = _annihilator(F, centralizer(bundle, side, bracket), bundle.dim)

    if side == "left":
        def elem(x, y):
            inner = K.add(br(fa(B(x)), A(y)), br(B(x), fa(A(y))))
            return K.sub(fa(inner), br(fa(B(x)), fa(A(y))))

        ids = [
            Identity("LieNo", 2, lambda x, y: (K.ap(W, elem(x, y)), K.F.zeros(W.shape[0]))),
            Identity("LieNovi", 3, lambda x, y, z: (
                br(fa(br(fa(x), B(y))), A(B(z))),
                br(fa(br(fa(x), B(z))), A(B(y))),
            )),
        ]
    else:
        def lhs(x, y, z):
            first = br(K.add(br(B(x), fa(A(y))), br(fa(B(x)), A(y))), fa(B(z)))
            return K.add(K.sub(first, br(A(B(x)), fa(br(A(y), fa(z))))), br(A(B(y)), fa(br(A(x), fa(z)))))

        ids = [
            Identity("LieNoviko", 3, lambda x, y, z: (lhs(x, y, z), K.F.zeros(bundle.dim))),
            Identity("LieNovikov", 2, lambda x, y: (K.ap(W, br(fa(B(x)), fa(A(y)))), K.F.zeros(W.shape[0]))),
        ]
    return evaluate(F, bundle.dim, ids, workers=workers)


# ---------------------------------------------------------------------------
# dendriform / pre-Lie


def prelie_from_dendriform(bundle: StructureBundle, prec: str = "prec", succ: str = "succ", *,
                           verify: bool = True) -> ConstructionResult:
    """x * y = x > y - (alpha^{-1} beta(y)) < (alpha beta^{-1}(x)), maps (alpha, beta)."""
    F, K = bundle.field, Kernel(bundle.field)
    a, b = _op(bundle, "alpha"), _op(bundle, "beta")
    ai, bi = op_invert(a, "alpha"), op_invert(b, "beta")
    hyp = _require(ck.check_bihom_dendriform(bundle, prec, succ, _opt(bundle, "alpha"), _opt(bundle, "beta")),
                   "input is BiHom-dendriform")
    L, R = bundle.product(prec).c, bundle.product(succ).c
    left = K.ein("ij,jk->ik", ai.m, b.m)  # alpha^{-1} beta
    right = K.ein("ij,jk->ik", a.m, bi.m)  # alpha beta^{-1}
    second = K.ein("pj,qi,pqk->ijk", left, right, L)
    star = BilinearProduct(F, K.sub(R, second))
    out = StructureBundle(F, bundle.dim, products={"mul": star}, maps={"alpha": a, "beta": b}, kind="prelie",
                          provenance=_provenance(bundle, "prelie-from-dend"))
    conclusion = _conclude("prelie-from-dend", ck.check_left_bihom_prelie(out)) if verify else None
    return ConstructionResult(out, "prelie-from-dend", hyp, conclusion)


def dendriform_from_rb(bundle: StructureBundle, R: str = "R", eta: str | None = "eta", *,
                       verify: bool = True) -> ConstructionResult:
    """x < y = alpha beta(x) . R eta(y), x > y = R(x) . alpha beta eta(y); maps (alpha^2 beta, alpha beta^2 eta)."""
    F, K = bundle.field, Kernel(bundle.field)
    al, be, et = _opt(bundle, "alpha"), _opt(bundle, "beta"), _opt(bundle, eta)
    hyp = _require(ck.check_bihom_associative(bundle, "mul", al, be), "mul is BiHom-associative")
    hyp = hyp + _require(ck.check_rota_baxter(bundle, R, "mul", al, be), f"{R} is an alpha-beta-Rota-Baxter operator")
    hyp = hyp + _commute_all(bundle, ["alpha", "beta", R, eta], "eta commutes with alpha, beta, R")
    hyp = hyp + _require(_mult(bundle, et), "eta is multiplicative")
    a, b, r, e = _op(bundle, "alpha"), _op(bundle, "beta"), bundle.map(R), _op(bundle, eta)
    ab = op_compose(a, b)
    c = bundle.product("mul").c
    prec = _product(K, "ai,bj,abk->ijk", ab.m, op_compose(r, e).m, c)
    succ = _product(K, "ai,bj,abk->ijk", r.m, op_compose(ab, e).m, c)
    out = StructureBundle(
        F, bundle.dim, products={"prec": prec, "succ": succ},
        maps={"alpha": op_compose(a, ab), "beta": op_compose(ab, op_compose(b, e))},
        kind="dendriform", provenance=_provenance(bundle, "dend-from-rb"),
    )
    conclusion = _conclude("dend-from-rb", ck.check_bihom_dendriform(out)) if verify else None
    return ConstructionResult(out, "dend-from-rb", hyp, conclusion)
