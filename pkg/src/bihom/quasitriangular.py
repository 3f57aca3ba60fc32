"""r-matrices: the coboundary comultiplication, the associative BiHom-Yang-Baxter
equation, Rota-Baxter operators built from solutions, and the coincidence of the
two pre-Lie products attached to a quasitriangular structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import checkers as ck
from .bundle import StructureBundle
from .checkers import CheckReport, Identity, Violation, evaluate
from .constructions import ConstructionResult, _conclude, _provenance, dendriform_from_rb, prelie_from_dendriform
from .errors import AybeFailed, CentralityFailed, ConclusionFailed, DimMismatch, HypothesisFailed, InvarianceFailed
from .field import FieldDescriptor
from .infinitesimal import inf_prelie, validate_inf_bialgebra
from .multilinear import Comultiplication, Kernel, LinearOperator, Tensor2, Tensor3, op_compose, op_invert, op_power

__all__ = [
    "RMatrix",
    "AybeComponents",
    "make_rmatrix",
    "aybe_components",
    "check_aybe",
    "check_centrality",
    "delta_r",
    "coboundary_bialgebra",
    "check_quasitriangular_characterization",
    "rb_from_r",
    "coincidence_check",
]


@dataclass(frozen=True)
class RMatrix:
    r: Tensor2

    @property
    def coeffs(self) -> np.ndarray:
        return self.r.coeffs

    @property
    def field(self) -> FieldDescriptor:
        return self.r.field


@dataclass(frozen=True)
class AybeComponents:
    r13r12: Tensor3
    r12r23: Tensor3
    r23r13: Tensor3
    A_r: Tensor3


def _maps(bundle):
    return bundle.map("alpha").m if "alpha" in bundle.maps else bundle.identity().m, \
        bundle.map("beta").m if "beta" in bundle.maps else bundle.identity().m


def make_rmatrix(bundle: StructureBundle, coeffs="r") -> RMatrix:
    """Wrap r (a tensor name, Tensor2, RMatrix or array) after checking (alpha (x) alpha) r = r = (beta (x) beta) r."""
    F, K = bundle.field, Kernel(bundle.field)
    if isinstance(coeffs, RMatrix):
        t = coeffs.r
    elif isinstance(coeffs, str):
        t = bundle.tensor(coeffs)
    elif isinstance(coeffs, Tensor2):
        t = coeffs
    else:
        t = Tensor2(F, F.array(coeffs))
    if t.field != F or t.dim != bundle.dim:
        raise DimMismatch(f"r has dimension {t.dim}, bundle {bundle.dim}")
    a, b = _maps(bundle)
    for name, m in (("alpha", a), ("beta", b)):
        if not np.all(F.equal(K.ap2(m, m, t.coeffs), t.coeffs)):
            raise InvarianceFailed(name)
    return RMatrix(t)


def aybe_components(bundle: StructureBundle, r) -> AybeComponents:
    F, K = bundle.field, Kernel(bundle.field)
    r = make_rmatrix(bundle, r)
    t, c = r.coeffs, bundle.product("mul").c
    a, b = _maps(bundle)
    r12r23 = K.ein("pq,st,xp,qsy,zt->xyz", t, t, a, c, b)
    r13r12 = K.ein("pq,st,psx,yt,zq->xyz", t, t, c, b, b)
    r23r13 = K.ein("pq,st,xp,ys,tqz->xyz", t, t, a, a, c)
    A = K.add(K.sub(r13r12, r12r23), r23r13)
    return AybeComponents(Tensor3(F, r13r12), Tensor3(F, r12r23), Tensor3(F, r23r13), Tensor3(F, A))


def _coefficient_report(F, identity: str, lhs: np.ndarray, rhs: np.ndarray) -> CheckReport:
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    out = []
    for w in np.argwhere(~F.equal(lhs, rhs)):
        w = tuple(int(i) for i in w)
        out.append(Violation(identity, w, F.to_python(lhs[w]), F.to_python(rhs[w])))
    return CheckReport(tuple(out), (identity,))


def check_aybe(bundle: StructureBundle, r="r") -> CheckReport:
    """A(r) = 0 coefficientwise; witnesses are the index triples of nonzero coefficients."""
    F = bundle.field
    A = aybe_components(bundle, r).A_r.coeffs
    return _coefficient_report(F, "AYBE", A, F.zeros(A.shape))


def check_centrality(bundle: StructureBundle, r="r", *, workers=None) -> CheckReport:
    """a . A(r) = A(r) . a for every basis a, with the three-fold tensor actions."""
    F, K = bundle.field, Kernel(bundle.field)
    T = aybe_components(bundle, r).A_r.coeffs
    c = bundle.product("mul").c
    a, b = _maps(bundle)
    Tl = K.ap3(None, b, b, T)
    Tr = K.ap3(a, a, None, T)
    ident = Identity("centrality", 1, lambda x: (
        K.ein("...i,jyz,ijx->...xyz", K.ap(a, x), Tl, c),
        K.ein("xyj,...i,jiz->...xyz", Tr, K.ap(b, x), c),
    ))
    return evaluate(F, bundle.dim, [ident], workers=workers)


def delta_r(bundle: StructureBundle, r="r") -> Comultiplication:
    """Delta_r(a) = sum alpha(x_i) (x) y_i . a - sum a . x_i (x) beta(y_i)."""
    F, K = bundle.field, Kernel(bundle.field)
    t = make_rmatrix(bundle, r).coeffs
    c = bundle.product("mul").c
    a, b = _maps(bundle)
    first = K.ein("pq,jp,qik->ijk", t, a, c)
    second = K.ein("pq,ipj,kq->ijk", t, c, b)
    return Comultiplication(F, K.sub(first, second))


def coboundary_bialgebra(bundle: StructureBundle, r="r", *, verify: bool = True) -> ConstructionResult:
    """(A, mu, Delta_r, alpha, beta, psi = beta, omega = alpha) for r with central A(r)."""
    rm = make_rmatrix(bundle, r)
    hyp = ck.check_bihom_associative(bundle, "mul", _name(bundle, "alpha"), _name(bundle, "beta"))
    if not hyp.passed:
        raise HypothesisFailed("mul is BiHom-associative", hyp)
    cent = check_centrality(bundle, rm)
    if not cent.passed:
        raise CentralityFailed(cent)
    a, b = _maps(bundle)
    F = bundle.field
    out = bundle.with_(
        comuls={"Delta": delta_r(bundle, rm)},
        maps={"alpha": LinearOperator(F, a), "beta": LinearOperator(F, b),
              "psi": LinearOperator(F, b), "omega": LinearOperator(F, a)},
        tensors={"r": rm.r}, kind="inf-bialgebra", provenance=_provenance(bundle, "coboundary"),
    )
    conclusion = _conclude("coboundary", validate_inf_bialgebra(out)) if verify else None
    return ConstructionResult(out, "coboundary", hyp + cent, conclusion)


def _name(bundle, n):
    return n if n in bundle.maps else None


def check_quasitriangular_characterization(bundle: StructureBundle, r="r") -> CheckReport:
    """(i) Delta = Delta_r, (ii) (Delta (x) beta)(r) = r23r13, (iii) (alpha (x) Delta)(r) = -r13r12."""
    F, K = bundle.field, Kernel(bundle.field)
    a, b = _maps(bundle)
    for name, expected in (("psi", b), ("omega", a)):
        if not np.all(F.equal(bundle.map(name).m, expected)):
            raise HypothesisFailed(f"{name} equals {'beta' if name == 'psi' else 'alpha'}")
    rm = make_rmatrix(bundle, r)
    comp = aybe_components(bundle, rm)
    d = bundle.comul("Delta").d
    t = rm.coeffs
    rep = _coefficient_report(F, "qt-i", d, delta_r(bundle, rm).d)
    rep = rep + _coefficient_report(F, "qt-ii", K.ein("pq,pxy,zq->xyz", t, d, b), comp.r23r13.coeffs)
    rep = rep + _coefficient_report(F, "qt-iii", K.ein("pq,xp,qyz->xyz", t, a, d), K.neg(comp.r13r12.coeffs))
    return rep


def _rb_forms(bundle, t):
    K = Kernel(bundle.field)
    a, b = (LinearOperator(bundle.field, m) for m in _maps(bundle))
    c = bundle.product("mul").c
    X = op_compose(a, op_power(b, 3)).m
    Y = op_power(a, 3).m
    inner = K.ein("bq,ibm->iqm", Y, c)  # e_i . alpha^3(e_q)
    first = K.ein("pq,xp,iqm,xmk->ki", t, X, inner, c)
    Xs = op_power(b, 3).m
    Ys = op_compose(op_power(a, 3), b).m
    left = K.ein("xp,xim->pim", Xs, c)  # beta^3(e_p) . e_i
    second = K.ein("pq,pim,yq,myk->ki", t, left, Ys, c)
    return first, second


def rb_from_r(bundle: StructureBundle, r="r", *, verify: bool = True) -> LinearOperator:
    """R(a) = sum alpha beta^3(x_i) . (a . alpha^3(y_i))."""
    rm = make_rmatrix(bundle, r)
    aybe = check_aybe(bundle, rm)
    if not aybe.passed:
        raise AybeFailed(aybe)
    first, second = _rb_forms(bundle, rm.coeffs)
    R = LinearOperator(bundle.field, first)
    if verify:
        rep = _coefficient_report(bundle.field, "rb-forms", first, second)
        rep = rep + ck.check_rota_baxter(bundle.with_(maps={"_R": R}), "_R", "mul",
                                         _name(bundle, "alpha"), _name(bundle, "beta"))
        if not rep.passed:
            raise ConclusionFailed("rb-from-r", rep)
    return R


def coincidence_check(bundle: StructureBundle, r="r") -> CheckReport:
    """The pre-Lie product from the coboundary bialgebra equals the one from the
    dendriform structure of R with eta = alpha^2 beta; both carry (alpha^2 beta, alpha^3 beta^3)."""
    F = bundle.field
    rm = make_rmatrix(bundle, r)
    aybe = check_aybe(bundle, rm)
    if not aybe.passed:
        raise AybeFailed(aybe)
    a, b = (LinearOperator(F, m) for m in _maps(bundle))
    op_invert(a, "alpha")
    op_invert(b, "beta")
    star = inf_prelie(coboundary_bialgebra(bundle, rm).bundle).bundle
    R = rb_from_r(bundle, rm)
    eta = op_compose(op_power(a, 2), b)
    dend = dendriform_from_rb(bundle.with_(maps={"alpha": a, "beta": b, "R": R, "eta": eta}), "R", "eta").bundle
    other = prelie_from_dendriform(dend).bundle
    rep = _coefficient_report(F, "coincidence", star.product("mul").c, other.product("mul").c)
    target_a = eta.m
    target_b = op_compose(op_power(a, 3), op_power(b, 3)).m
    for nm, tgt in (("alpha", target_a), ("beta", target_b)):
        rep = rep + _coefficient_report(F, f"coincidence:{nm}", star.map(nm).m, tgt)
        rep = rep + _coefficient_report(F, f"coincidence:{nm}", other.map(nm).m, tgt)
    return rep
