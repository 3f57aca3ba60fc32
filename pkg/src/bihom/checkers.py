"""Axiom checkers with witnesses.

Every axiom system is split into named identities. An identity is a pair of
multilinear expressions in its vector arguments; by multilinearity it holds on
the whole space iff it holds on every tuple of basis vectors, and that is what
:func:`evaluate` tests. The basis tuples are fed in as broadcast stacks of unit
vectors so that a single batched contraction produces the whole table of values.

Identity ids are a stable vocabulary (see ``docs/identities.md``):
``BHassoc``, ``BHcoassoc``, ``commnovi``, ``lBHpL``, ``BiNoviko``, ``Binovikov``,
``leftBHleibniz``, ``rightBHleibniz``, ``BHskewsym``, ``dend1`` .. ``dend8``,
``NP-4.1``, ``NP-4.2``, ``NP-new``, ``lmod*``/``rmod*``/``BHbim``, ``derivation``,
``infinb``/``infinbi``/``infinbia`` (as ``commute:``/``comult:``/``mult:`` ids),
``infin``, ``generRB``, plus the generic ``commute:a,b``, ``mult:m:prod``
and ``comult:m:comul`` structure-map laws.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .bundle import StructureBundle
from .errors import DimMismatch, Singular
from .field import FieldDescriptor
from .multilinear import Kernel, kron_power

__all__ = [
    "Violation",
    "CheckReport",
    "Identity",
    "Module",
    "evaluate",
    "resolve_workers",
    "check_commuting_multiplicative",
    "check_bihom_associative",
    "check_bihom_coassociative",
    "check_bihom_commutative",
    "check_left_bihom_prelie",
    "check_bihom_novikov",
    "check_bihom_leibniz",
    "check_bihom_lie",
    "check_bihom_dendriform",
    "check_novikov_poisson",
    "check_lemma_3_1",
    "check_module",
    "check_bimodule",
    "check_derivation",
    "check_coalgebra_morphism_data",
    "check_infinitesimal_compat",
    "check_rota_baxter",
    "regular_module",
    "tensor_power_module",
    "coproduct_bimodule",
]

WORKERS_ENV = "BIHOM_WORKERS"


@dataclass(frozen=True)
class Violation:
    identity: str
    witness: tuple[int, ...]
    lhs: tuple
    rhs: tuple

    def describe(self) -> str:
        return f"{self.identity} at {self.witness}"


@dataclass(frozen=True)
class CheckReport:
    violations: tuple[Violation, ...] = ()
    checked: tuple[str, ...] = field(default=(), compare=False)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def __add__(self, other: CheckReport) -> CheckReport:
        return CheckReport(self.violations + other.violations, self.checked + other.checked)

    def failed_ids(self) -> list[str]:
        seen: dict[str, None] = {}
        for v in self.violations:
            seen.setdefault(v.identity, None)
        return list(seen)

    def witnesses(self, identity: str) -> list[tuple[int, ...]]:
        return [v.witness for v in self.violations if v.identity == identity]

    def prefixed(self, prefix: str) -> CheckReport:
        return CheckReport(
            tuple(Violation(f"{prefix}/{v.identity}", v.witness, v.lhs, v.rhs) for v in self.violations),
            tuple(f"{prefix}/{c}" for c in self.checked),
        )

    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None


@dataclass(frozen=True)
class Identity:
    """``sides(*args)`` returns (lhs, rhs) for broadcast stacks of argument vectors."""

    id: str
    arity: int
    sides: Callable
    dims: tuple[int, ...] | None = None  # per-argument dimensions; default: bundle dim


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    return max(1, int(workers))


def _basis_args(F: FieldDescriptor, dims: Sequence[int], first: slice) -> list[np.ndarray]:
    arity = len(dims)
    args = []
    for m, d in enumerate(dims):
        e = F.eye(d)
        if m == 0:
            e = e[first]
        shape = [1] * arity
        shape[m] = e.shape[0]
        args.append(e.reshape(*shape, d))
    return args


def _eval_chunk(F: FieldDescriptor, ident: Identity, dims, start: int, stop: int) -> list[Violation]:
    arity = ident.arity
    if arity == 0:
        lhs, rhs = ident.sides()
        lhs, rhs = np.asarray(lhs), np.asarray(rhs)
        if np.all(F.equal(lhs, rhs)):
            return []
        return [Violation(ident.id, (), F.to_python(lhs), F.to_python(rhs))]
    args = _basis_args(F, dims, slice(start, stop))
    lhs, rhs = ident.sides(*args)
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    shape = np.broadcast_shapes(lhs.shape, rhs.shape)
    lead = (stop - start,) + tuple(dims[1:])
    shape = lead + shape[arity:]
    lhs, rhs = np.broadcast_to(lhs, shape), np.broadcast_to(rhs, shape)
    bad = ~F.equal(lhs, rhs)
    if bad.ndim > arity:
        bad = bad.reshape(lead + (-1,)).any(axis=-1)
    out = []
    for w in np.argwhere(bad):
        w = tuple(int(i) for i in w)
        out.append(
            Violation(ident.id, (w[0] + start,) + w[1:], F.to_python(lhs[w]), F.to_python(rhs[w]))
        )
    return out


def evaluate(
    F: FieldDescriptor,
    n: int,
    identities: Sequence[Identity],
    *,
    workers: int | None = None,
    fail_fast: bool = False,
) -> CheckReport:
    """Evaluate identities on all basis tuples.

    Violations come out grouped by identity (in the given order) and, inside an
    identity, in lexicographic witness order, whatever the worker count: the
    first argument's index range is split into contiguous chunks and the chunk
    results are concatenated in range order.
    """
    workers = resolve_workers(workers)
    violations: list[Violation] = []
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for ident in identities:
            dims = ident.dims or (n,) * ident.arity
            first = dims[0] if dims else 1
            nchunks = min(workers, first) if ident.arity else 1
            bounds = [(first * i // nchunks, first * (i + 1) // nchunks) for i in range(nchunks)]
            if pool is not None and nchunks > 1:
                parts = pool.map(lambda b: _eval_chunk(F, ident, dims, *b), bounds)
            else:
                parts = (_eval_chunk(F, ident, dims, *b) for b in bounds)
            for part in parts:
                violations.extend(part)
            if fail_fast and violations:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return CheckReport(tuple(violations), tuple(i.id for i in identities))


# ---------------------------------------------------------------------------
# identity builders


def _map_arr(bundle: StructureBundle, name: str | None):
    return bundle.map(name).m


def _label(name: str | None) -> str:
    return "id" if name is None else name


def commute_identity(K: Kernel, na, a, nb, b) -> Identity:
    na, nb = _label(na), _label(nb)
    return Identity(f"commute:{na},{nb}", 1, lambda x: (K.ap(a, K.ap(b, x)), K.ap(b, K.ap(a, x))))


def mult_identity(K: Kernel, nm, m, nc, c) -> Identity:
    return Identity(
        f"mult:{_label(nm)}:{nc}", 2, lambda x, y: (K.ap(m, K.mul(c, x, y)), K.mul(c, K.ap(m, x), K.ap(m, y)))
    )


def comult_identity(K: Kernel, nm, m, nd, d) -> Identity:
    return Identity(f"comult:{_label(nm)}:{nd}", 1, lambda x: (K.ap2(m, m, K.comul(d, x)), K.comul(d, K.ap(m, x))))


def _structure_identities(bundle, K, map_names, products) -> list[Identity]:
    """Pairwise commutation of the named maps and their multiplicativity for each product."""
    out = []
    named = [(n, _map_arr(bundle, n)) for n in map_names if n is not None]
    for (na, a), (nb, b) in combinations(named, 2):
        out.append(commute_identity(K, na, a, nb, b))
    for pname in products:
        c = bundle.product(pname).c
        for nm, m in named:
            out.append(mult_identity(K, nm, m, pname, c))
    return out


def _ctx(bundle, product, alpha, beta):
    K = Kernel(bundle.field)
    return K, bundle.product(product).c, _map_arr(bundle, alpha), _map_arr(bundle, beta)


def _run(bundle, identities, workers, fail_fast) -> CheckReport:
    return evaluate(bundle.field, bundle.dim, identities, workers=workers, fail_fast=fail_fast)


# ---------------------------------------------------------------------------
# algebras


def check_commuting_multiplicative(
    bundle: StructureBundle, maps: Sequence[str] = ("alpha", "beta"), product: str = "mul", *,
    workers=None, fail_fast=False,
) -> CheckReport:
    K = Kernel(bundle.field)
    return _run(bundle, _structure_identities(bundle, K, maps, [product]), workers, fail_fast)


def _bhassoc_identities(bundle, product, alpha, beta):
    K, c, a, b = _ctx(bundle, product, alpha, beta)
    ids = _structure_identities(bundle, K, [alpha, beta], [product])
    ids.append(Identity("BHassoc", 3, lambda x, y, z: (
        K.mul(c, K.ap(a, x), K.mul(c, y, z)),
        K.mul(c, K.mul(c, x, y), K.ap(b, z)),
    )))
    return ids


def check_bihom_associative(bundle, product="mul", alpha="alpha", beta="beta", *, workers=None, fail_fast=False):
    return _run(bundle, _bhassoc_identities(bundle, product, alpha, beta), workers, fail_fast)


def _commutative_identities(bundle, product, alpha, beta):
    K, c, a, b = _ctx(bundle, product, alpha, beta)
    ids = _bhassoc_identities(bundle, product, alpha, beta)
    ids.append(Identity("commnovi", 2, lambda x, y: (
        K.mul(c, K.ap(b, x), K.ap(a, y)),
        K.mul(c, K.ap(b, y), K.ap(a, x)),
    )))
    return ids


def check_bihom_commutative(bundle, product="mul", alpha="alpha", beta="beta", *, workers=None, fail_fast=False):
    return _run(bundle, _commutative_identities(bundle, product, alpha, beta), workers, fail_fast)


def _prelie_side(K, c, a, b):
    ab = K.F.reduce(np.einsum("ij,jk->ik", a, b))

    def side(x, y, z):
        first = K.mul(c, K.ap(ab, x), K.mul(c, K.ap(a, y), z))
        second = K.mul(c, K.mul(c, K.ap(b, x), K.ap(a, y)), K.ap(b, z))
        return K.sub(first, second)

    return side, ab


def _prelie_identities(bundle, product, alpha, beta, ident_id):
    K, c, a, b = _ctx(bundle, product, alpha, beta)
    ids = _structure_identities(bundle, K, [alpha, beta], [product])
    side, _ = _prelie_side(K, c, a, b)
    ids.append(Identity(ident_id, 3, lambda x, y, z: (side(x, y, z), side(y, x, z))))
    return ids


def check_left_bihom_prelie(bundle, product="mul", alpha="alpha", beta="beta", *, workers=None, fail_fast=False):
    return _run(bundle, _prelie_identities(bundle, product, alpha, beta, "lBHpL"), workers, fail_fast)


def _novikov_identities(bundle, product, alpha, beta):
    K, c, a, b = _ctx(bundle, product, alpha, beta)
    ids = _prelie_identities(bundle, product, alpha, beta, "BiNoviko")
    ab = K.F.reduce(np.einsum("ij,jk->ik", a, b))
    ids.append(Identity("Binovikov", 3, lambda x, y, z: (
        K.mul(c, K.mul(c, x, K.ap(b, y)), K.ap(ab, z)),
        K.mul(c, K.mul(c, x, K.ap(b, z)), K.ap(ab, y)),
    )))
    return ids


def check_bihom_novikov(bundle, product="mul", alpha="alpha", beta="beta", *, workers=None, fail_fast=False):
    return _run(bundle, _novikov_identities(bundle, product, alpha, beta), workers, fail_fast)


def _leibniz_identities(bundle, side, product, alpha, beta):
    K, c, a, b = _ctx(bundle, product, alpha, beta)
    ab = K.F.reduce(np.einsum("ij,jk->ik", a, b))
    ids = _structure_identities(bundle, K, [alpha, beta], [product])
    br = lambda x, y: K.mul(c, x, y)  # noqa: E731
    if side == "left":
        ids.append(Identity("leftBHleibniz", 3, lambda x, y, z: (
            br(K.ap(ab, x), br(y, z)),
            K.add(br(br(K.ap(b, x), y), K.ap(b, z)), br(K.ap(b, y), br(K.ap(a, x), z))),
        )))
    elif side == "right":
        ids.append(Identity("rightBHleibniz", 3, lambda x, y, z: (
            br(br(x, y), K.ap(ab, z)),
            K.add(br(br(x, K.ap(b, z)), K.ap(a, y)), br(K.ap(a, x), br(y, K.ap(a, z)))),
        )))
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return ids


def check_bihom_leibniz(bundle, side="left", product="bracket", alpha="alpha", beta="beta", *,
                        workers=None, fail_fast=False):
    return _run(bundle, _leibniz_identities(bundle, side, product, alpha, beta), workers, fail_fast)


def _skew_identity(K, c, a, b):
    return Identity("BHskewsym", 2, lambda x, y: (
        K.mul(c, K.ap(b, x), K.ap(a, y)),
        K.neg(K.mul(c, K.ap(b, y), K.ap(a, x))),
    ))


def check_bihom_lie(bundle, side="left", product="bracket", alpha="alpha", beta="beta", *,
                    workers=None, fail_fast=False):
    K, c, a, b = _ctx(bundle, product, alpha, beta)
    ids = _leibniz_identities(bundle, side, product, alpha, beta) + [_skew_identity(K, c, a, b)]
    return _run(bundle, ids, workers, fail_fast)


def check_bihom_dendriform(bundle, prec="prec", succ="succ", alpha="alpha", beta="beta", *,
                           workers=None, fail_fast=False):
    K = Kernel(bundle.field)
    L, R = bundle.product(prec).c, bundle.product(succ).c
    a, b = _map_arr(bundle, alpha), _map_arr(bundle, beta)
    pl = lambda x, y: K.mul(L, x, y)  # noqa: E731
    sc = lambda x, y: K.mul(R, x, y)  # noqa: E731
    ids = [
        Identity("dend1", 1, lambda x: (K.ap(a, K.ap(b, x)), K.ap(b, K.ap(a, x)))),
        Identity("dend3:prec", 2, lambda x, y: (K.ap(a, pl(x, y)), pl(K.ap(a, x), K.ap(a, y)))),
        Identity("dend3:succ", 2, lambda x, y: (K.ap(a, sc(x, y)), sc(K.ap(a, x), K.ap(a, y)))),
        Identity("dend5:prec", 2, lambda x, y: (K.ap(b, pl(x, y)), pl(K.ap(b, x), K.ap(b, y)))),
        Identity("dend5:succ", 2, lambda x, y: (K.ap(b, sc(x, y)), sc(K.ap(b, x), K.ap(b, y)))),
        Identity("dend6", 3, lambda x, y, z: (
            pl(pl(x, y), K.ap(b, z)),
            pl(K.ap(a, x), K.add(pl(y, z), sc(y, z))),
        )),
        Identity("dend7", 3, lambda x, y, z: (
            pl(sc(x, y), K.ap(b, z)),
            sc(K.ap(a, x), pl(y, z)),
        )),
        Identity("dend8", 3, lambda x, y, z: (
            sc(K.ap(a, x), sc(y, z)),
            sc(K.add(pl(x, y), sc(x, y)), K.ap(b, z)),
        )),
    ]
    return _run(bundle, ids, workers, fail_fast)


def _np_compat_identities(bundle, mul, star, alpha, beta):
    K = Kernel(bundle.field)
    c, s = bundle.product(mul).c, bundle.product(star).c
    a, b = _map_arr(bundle, alpha), _map_arr(bundle, beta)
    ab = K.F.reduce(np.einsum("ij,jk->ik", a, b))
    dot = lambda x, y: K.mul(c, x, y)  # noqa: E731
    st = lambda x, y: K.mul(s, x, y)  # noqa: E731

    def side41(x, y, z):
        return K.sub(dot(st(K.ap(b, x), K.ap(a, y)), K.ap(b, z)), st(K.ap(ab, x), dot(K.ap(a, y), z)))

    return [
        Identity("NP-4.1", 3, lambda x, y, z: (side41(x, y, z), side41(y, x, z))),
        Identity("NP-4.2", 3, lambda x, y, z: (
            st(dot(x, K.ap(b, y)), K.ap(ab, z)),
            dot(st(x, K.ap(b, z)), K.ap(ab, y)),
        )),
        Identity("NP-new", 3, lambda x, y, z: (
            dot(K.ap(a, x), st(y, z)),
            st(dot(x, y), K.ap(b, z)),
        )),
    ]


def check_novikov_poisson(bundle, mul="mul", star="star", alpha="alpha", beta="beta", *,
                          workers=None, fail_fast=False):
    """BiHom-commutative ``mul`` + BiHom-Novikov ``star`` + the three compatibilities."""
    rep = evaluate(bundle.field, bundle.dim, _commutative_identities(bundle, mul, alpha, beta),
                   workers=workers, fail_fast=fail_fast).prefixed(mul)
    if fail_fast and not rep.passed:
        return rep
    rep = rep + evaluate(bundle.field, bundle.dim, _novikov_identities(bundle, star, alpha, beta),
                         workers=workers, fail_fast=fail_fast).prefixed(star)
    if fail_fast and not rep.passed:
        return rep
    return rep + _run(bundle, _np_compat_identities(bundle, mul, star, alpha, beta), workers, fail_fast)


def check_lemma_3_1(bundle, mul="mul", star="star", alpha="alpha", beta="beta", *, workers=None):
    """Return (hypotheses, ``NP-4.2`` report, ``NP-new`` report).

    Under the hypotheses the two identities hold or fail together. The
    hypotheses are: ``mul`` BiHom-commutative, alpha/beta multiplicative for
    ``star``, alpha and beta bijective (a non-bijective map raises Singular).
    """
    F = bundle.field
    for name in (alpha, beta):
        if F.inverse(_map_arr(bundle, name)) is None:
            raise Singular(name)
    K = Kernel(F)
    hyp = check_bihom_commutative(bundle, mul, alpha, beta, workers=workers)
    hyp = hyp + _run(bundle, _structure_identities(bundle, K, [alpha, beta], [star])[1:], workers, False)
    compat = _np_compat_identities(bundle, mul, star, alpha, beta)
    np42 = _run(bundle, [compat[1]], workers, False)
    npnew = _run(bundle, [compat[2]], workers, False)
    return hyp, np42, npnew


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True, eq=False)
class Module:
    """Data for a (bi)module M over a BiHom-associative algebra (A, mul, alpha_a, beta_a).

    ``left[i, m, k]``: coefficient of f_k in e_i . f_m; ``right[m, i, k]``: in f_m . e_i.
    """

    field: FieldDescriptor
    mul: np.ndarray
    alpha_a: np.ndarray
    beta_a: np.ndarray
    alpha_m: np.ndarray
    beta_m: np.ndarray
    left: np.ndarray | None = None
    right: np.ndarray | None = None

    @property
    def dim_a(self) -> int:
        return self.mul.shape[0]

    @property
    def dim_m(self) -> int:
        return self.alpha_m.shape[0]


def _module_identities(mod: Module, side: str) -> list[Identity]:
    K = Kernel(mod.field)
    c, aA, bA, aM, bM = mod.mul, mod.alpha_a, mod.beta_a, mod.alpha_m, mod.beta_m
    nA, nM = mod.dim_a, mod.dim_m
    ids = [Identity("commute:alpha_M,beta_M", 1, lambda m: (K.ap(aM, K.ap(bM, m)), K.ap(bM, K.ap(aM, m))),
                    dims=(nM,))]
    if side == "left":
        if mod.left is None:
            raise DimMismatch("module has no left action")
        L = mod.left
        act = lambda x, m: K.mul(L, x, m)  # noqa: E731
        ids += [
            Identity("lmod-alpha", 2, lambda x, m: (K.ap(aM, act(x, m)), act(K.ap(aA, x), K.ap(aM, m))),
                     dims=(nA, nM)),
            Identity("lmod-beta", 2, lambda x, m: (K.ap(bM, act(x, m)), act(K.ap(bA, x), K.ap(bM, m))),
                     dims=(nA, nM)),
            Identity("lmod4", 3, lambda x, y, m: (
                act(K.ap(aA, x), act(y, m)), act(K.mul(c, x, y), K.ap(bM, m))), dims=(nA, nA, nM)),
        ]
    elif side == "right":
        if mod.right is None:
            raise DimMismatch("module has no right action")
        Rt = mod.right
        act = lambda m, x: K.mul(Rt, m, x)  # noqa: E731
        ids += [
            Identity("rmod-alpha", 2, lambda m, x: (K.ap(aM, act(m, x)), act(K.ap(aM, m), K.ap(aA, x))),
                     dims=(nM, nA)),
            Identity("rmod-beta", 2, lambda m, x: (K.ap(bM, act(m, x)), act(K.ap(bM, m), K.ap(bA, x))),
                     dims=(nM, nA)),
            Identity("rmod4", 3, lambda m, x, y: (
                act(K.ap(aM, m), K.mul(c, x, y)), act(act(m, x), K.ap(bA, y))), dims=(nM, nA, nA)),
        ]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return ids


def check_module(mod: Module, side: str = "left", *, workers=None, fail_fast=False) -> CheckReport:
    return evaluate(mod.field, mod.dim_a, _module_identities(mod, side), workers=workers, fail_fast=fail_fast)


def check_bimodule(mod: Module, *, workers=None, fail_fast=False) -> CheckReport:
    K = Kernel(mod.field)
    L, Rt = mod.left, mod.right
    ids = _module_identities(mod, "left") + _module_identities(mod, "right")[1:]
    ids.append(Identity("BHbim", 3, lambda x, m, y: (
        K.mul(L, K.ap(mod.alpha_a, x), K.mul(Rt, m, y)),
        K.mul(Rt, K.mul(L, x, m), K.ap(mod.beta_a, y)),
    ), dims=(mod.dim_a, mod.dim_m, mod.dim_a)))
    return evaluate(mod.field, mod.dim_a, ids, workers=workers, fail_fast=fail_fast)


def regular_module(bundle, product="mul", alpha="alpha", beta="beta") -> Module:
    """A acting on itself on both sides by its multiplication."""
    c = bundle.product(product).c
    a, b = _map_arr(bundle, alpha), _map_arr(bundle, beta)
    return Module(bundle.field, c, a, b, a, b, left=c, right=c)


def tensor_power_module(bundle, k: int, product="mul", alpha="alpha", beta="beta") -> Module:
    """A^{(x)k} with a.(b1..bk) = alpha(a)b1 (x) beta(b2) .. and (b1..bk).a = alpha(b1) .. (x) bk beta(a)."""
    if not 2 <= k <= 4:
        raise ValueError("tensor powers are supported for 2 <= k <= 4")
    F, K = bundle.field, Kernel(bundle.field)
    n = bundle.dim
    c = bundle.product(product).c
    a, b = _map_arr(bundle, alpha), _map_arr(bundle, beta)
    eye = F.eye(n)
    # left: (alpha(e_i) e_j) (x) beta^{(x)(k-1)}
    first = K.mul(c, K.ap(a, eye)[:, None, :], eye[None, :, :])  # [i, j, out]
    rest_b = kron_power(b, k - 1, F)  # [out_rest, in_rest]
    left = K.ein("ijo,pq->ijqop", first, rest_b).reshape(n, n ** k, n ** k)
    last = K.mul(c, eye[:, None, :], K.ap(b, eye)[None, :, :])  # [j, i, out]: e_j beta(e_i)
    rest_a = kron_power(a, k - 1, F)
    right = K.ein("jio,pq->qjipo", last, rest_a).reshape(n ** k, n, n ** k)
    return Module(F, c, a, b, kron_power(a, k, F), kron_power(b, k, F), left=left, right=right)


def coproduct_bimodule(bundle, product="mul", alpha="alpha", beta="beta", psi="psi", omega="omega") -> Module:
    """A (x) A with a.(b (x) c) = omega(a)b (x) beta(c) and (b (x) c).a = alpha(b) (x) c psi(a)."""
    F, K = bundle.field, Kernel(bundle.field)
    n = bundle.dim
    c = bundle.product(product).c
    a, b = _map_arr(bundle, alpha), _map_arr(bundle, beta)
    p, w = _map_arr(bundle, psi), _map_arr(bundle, omega)
    eye = F.eye(n)
    first = K.mul(c, K.ap(w, eye)[:, None, :], eye[None, :, :])  # [a, b, out]
    left = K.ein("ibo,qc->ibcoq", first, b).reshape(n, n * n, n * n)
    last = K.mul(c, eye[:, None, :], K.ap(p, eye)[None, :, :])  # [c, a, out]
    right = K.ein("cio,pb->bcipo", last, a).reshape(n * n, n, n * n)
    return Module(F, c, a, b, kron_power(a, 2, F), kron_power(b, 2, F), left=left, right=right)


# ---------------------------------------------------------------------------
# derivations, coalgebra data, infinitesimal compatibility, Rota-Baxter


def check_derivation(bundle, D="D", tau=None, sigma=None, product="mul", *, workers=None, fail_fast=False):
    """D(a.b) = D(a).tau(b) + sigma(a).D(b); ``None`` for tau/sigma means identity."""
    K = Kernel(bundle.field)
    c = bundle.product(product).c
    d, t, s = _map_arr(bundle, D), _map_arr(bundle, tau), _map_arr(bundle, sigma)
    ids = []
    seen = set()
    for nm in (tau, sigma):
        if nm is not None and nm not in seen:
            seen.add(nm)
            ids.append(mult_identity(K, nm, _map_arr(bundle, nm), product, c))
    ids.append(Identity("derivation", 2, lambda x, y: (
        K.ap(d, K.mul(c, x, y)),
        K.add(K.mul(c, K.ap(d, x), K.ap(t, y)), K.mul(c, K.ap(s, x), K.ap(d, y))),
    )))
    return _run(bundle, ids, workers, fail_fast)


def check_coalgebra_morphism_data(bundle, product="mul", comul="Delta", alpha="alpha", beta="beta",
                                  psi="psi", omega="omega", *, workers=None, fail_fast=False):
    K = Kernel(bundle.field)
    c, d = bundle.product(product).c, bundle.comul(comul).d
    m = {n: _map_arr(bundle, n) for n in (alpha, beta, psi, omega)}
    ids = []
    for x in (alpha, beta):
        for y in (psi, omega):
            ids.append(commute_identity(K, x, m[x], y, m[y]))
    ids += [comult_identity(K, alpha, m[alpha], comul, d), comult_identity(K, beta, m[beta], comul, d)]
    ids += [mult_identity(K, psi, m[psi], product, c), mult_identity(K, omega, m[omega], product, c)]
    return _run(bundle, ids, workers, fail_fast)


def check_bihom_coassociative(bundle, comul="Delta", psi="psi", omega="omega", *, workers=None, fail_fast=False):
    K = Kernel(bundle.field)
    d = bundle.comul(comul).d
    p, w = _map_arr(bundle, psi), _map_arr(bundle, omega)
    ids = [
        commute_identity(K, psi, p, omega, w),
        comult_identity(K, psi, p, comul, d),
        comult_identity(K, omega, w, comul, d),
        Identity("BHcoassoc", 1, lambda x: (
            K.ap3(None, None, p, K.comul_leg(d, K.comul(d, x), 0)),
            K.comul_leg(d, K.ap2(w, None, K.comul(d, x)), 1),
        )),
    ]
    return _run(bundle, ids, workers, fail_fast)


def infin_identity(K: Kernel, c, d, a, b, p, w) -> Identity:
    """Delta(x.y) = omega(x).y_1 (x) beta(y_2) + alpha(x_1) (x) x_2.psi(y)."""
    return Identity("infin", 2, lambda x, y: (
        K.comul(d, K.mul(c, x, y)),
        K.add(
            K.ap2(None, b, K.lmul1(c, K.ap(w, x), K.comul(d, y))),
            K.ap2(a, None, K.rmul2(c, K.comul(d, x), K.ap(p, y))),
        ),
    ))


def check_infinitesimal_compat(bundle, product="mul", comul="Delta", alpha="alpha", beta="beta",
                               psi="psi", omega="omega", *, workers=None, fail_fast=False):
    K = Kernel(bundle.field)
    ident = infin_identity(
        K, bundle.product(product).c, bundle.comul(comul).d,
        *(_map_arr(bundle, n) for n in (alpha, beta, psi, omega)),
    )
    return _run(bundle, [ident], workers, fail_fast)


def check_rota_baxter(bundle, R="R", product="mul", alpha="alpha", beta="beta", *, workers=None, fail_fast=False):
    K, c, a, b = _ctx(bundle, product, alpha, beta)
    r = _map_arr(bundle, R)
    ab = K.F.reduce(np.einsum("ij,jk->ik", a, b))
    ids = [
        commute_identity(K, R, r, alpha, a),
        commute_identity(K, R, r, beta, b),
        Identity("generRB", 2, lambda x, y: (
            K.mul(c, K.ap(r, K.ap(ab, x)), K.ap(r, K.ap(ab, y))),
            K.ap(r, K.add(K.mul(c, K.ap(ab, x), K.ap(r, y)), K.mul(c, K.ap(r, x), K.ap(ab, y)))),
        )),
    ]
    return _run(bundle, ids, workers, fail_fast)
