"""Solvers and enumerators for construction ingredients.

Derivations are a linear problem and are solved exactly. Morphisms, r-matrices
and products are enumerated over small prime fields, in lexicographic order of
the row-major flattened coefficient array, in vectorized chunks. Chunks may be
processed by several workers; results are merged back in chunk order, so the
output stream does not depend on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import checkers as ck
from .bundle import StructureBundle
from .checkers import CheckReport, resolve_workers
from .errors import SpaceTooLarge
from .field import FieldDescriptor
from .multilinear import BilinearProduct, Kernel, LinearOperator, Tensor2
from .quasitriangular import RMatrix

__all__ = [
    "TARGETS",
    "SearchSpec",
    "DEFAULT_CEILING",
    "HARD_CEILING",
    "derivation_space",
    "enumerate_morphisms",
    "enumerate_commuting_pairs",
    "enumerate_r",
    "scan_products",
    "PRODUCT_CHECKS",
    "candidate_count",
    "commuting_map_pairs",
]

DEFAULT_CEILING = 1 << 24
HARD_CEILING = 1 << 40
CHUNK = 1 << 14

TARGETS = (
    "derivations",
    "gamma_derivations",
    "tau_sigma_derivations",
    "algebra_morphisms",
    "commuting_morphism_pairs",
    "aybe_solutions",
    "central_r",
    "bihom_assoc_products",
)


@dataclass(frozen=True)
class SearchSpec:
    field: FieldDescriptor
    dim: int
    target: str
    seed: int = 0
    max_candidates: int = DEFAULT_CEILING
    max_results: int | None = None
    randomized: bool = False
    samples: int = 1000
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown search target {self.target!r}; expected one of {', '.join(TARGETS)}")
        limit = 8 if self.randomized else 4
        if not 1 <= self.dim <= limit:
            raise SpaceTooLarge(f"dimension {self.dim} outside 1..{limit} for this mode")


# ---------------------------------------------------------------------------
# derivations


def derivation_space(bundle: StructureBundle, tau: str | None = None, sigma: str | None = None,
                     product: str = "mul", commutes_with: Sequence[str | None] = ()) -> list[LinearOperator]:
    """Basis of {D : D(e_i e_j) = D(e_i) tau(e_j) + sigma(e_i) D(e_j)} by exact nullspace.

    Unknowns are the entries D[x, y] (coefficient of e_x in D(e_y)), flattened row-major.
    Maps named in ``commutes_with`` add the (also linear) equations DM = MD.
    """
    F, K = bundle.field, Kernel(bundle.field)
    n = bundle.dim
    c = bundle.product(product).c
    T, S = bundle.map(tau).m, bundle.map(sigma).m
    eye = F.eye(n)
    # equation (i, j, k); unknown (x, y)
    t1 = K.ein("xk,ijy->ijkxy", eye, c)
    t2 = K.ein("yi,sj,xsk->ijkxy", eye, T, c)
    t3 = K.ein("yj,ui,uxk->ijkxy", eye, S, c)
    rows = [K.sub(t1, K.add(t2, t3)).reshape(n ** 3, n * n)]
    for name in commutes_with:
        M = bundle.map(name).m
        # (DM - MD)[u, v] = sum_x D[u, x] M[x, v] - M[u, x] D[x, v]
        dm = K.ein("ux,yv->uvxy", eye, M)
        md = K.ein("ux,yv->uvxy", M, eye)
        rows.append(K.sub(dm, md).reshape(n * n, n * n))
    system = np.concatenate(rows, axis=0)
    return [LinearOperator(F, v.reshape(n, n)) for v in F.nullspace(system, n * n)]


# ---------------------------------------------------------------------------
# enumeration plumbing


def candidate_count(F: FieldDescriptor, length: int) -> int:
    if not F.is_finite:
        raise SpaceTooLarge("exhaustive enumeration needs a finite field")
    return F.order ** length


def _check_space(F: FieldDescriptor, length: int, ceiling: int) -> int:
    total = candidate_count(F, length)
    if total > min(ceiling, HARD_CEILING):
        raise SpaceTooLarge(f"{total} candidates exceed the ceiling {min(ceiling, HARD_CEILING)}")
    return total


def _digits(start: int, stop: int, q: int, length: int) -> np.ndarray:
    """Rows = base-q expansions of start..stop-1, most significant digit first."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, length), dtype=np.int64)
    for pos in range(length - 1, -1, -1):
        out[:, pos] = idx % q
        idx //= q
    return out


def _chunked(total: int, fn: Callable[[int, int], list], workers: int | None) -> Iterator:
    bounds = [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]
    workers = resolve_workers(workers)
    if workers == 1 or len(bounds) == 1:
        for b in bounds:
            yield from fn(*b)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves order; consume lazily in windows to bound memory
        for i in range(0, len(bounds), workers * 4):
            for part in pool.map(lambda b: fn(*b), bounds[i:i + workers * 4]):
                yield from part


def _limit(stream: Iterator, max_results: int | None) -> Iterator:
    for i, x in enumerate(stream):
        if max_results is not None and i >= max_results:
            return
        yield x


def _batch_mult_mask(F, M: np.ndarray, c: np.ndarray) -> np.ndarray:
    """M: (N, n, n); True where M(e_i e_j) = M(e_i) M(e_j) for all i, j."""
    lhs = F.reduce(np.einsum("ijl,Nkl->Nijk", c, M))
    rhs = F.reduce(np.einsum("Nai,Nbj,abk->Nijk", M, M, c))
    return np.all((lhs == rhs).reshape(len(M), -1), axis=1)


def _batch_commute_mask(F, M: np.ndarray, others: Sequence[np.ndarray]) -> np.ndarray:
    mask = np.ones(len(M), dtype=bool)
    for o in others:
        lhs = F.reduce(np.einsum("Nij,jk->Nik", M, o))
        rhs = F.reduce(np.einsum("ij,Njk->Nik", o, M))
        mask &= np.all((lhs == rhs).reshape(len(M), -1), axis=1)
    return mask


def _batch_det_nonzero(F, M: np.ndarray) -> np.ndarray:
    return np.array([F.rank(m) == m.shape[0] for m in M], dtype=bool)


def _batch_comorphism_mask(F, M: np.ndarray, d: np.ndarray) -> np.ndarray:
    lhs = F.reduce(np.einsum("Nja,Nkb,iab->Nijk", M, M, d))
    rhs = F.reduce(np.einsum("Nai,ajk->Nijk", M, d))
    return np.all((lhs == rhs).reshape(len(M), -1), axis=1)


# ---------------------------------------------------------------------------
# morphisms


def enumerate_morphisms(
    bundle: StructureBundle,
    *,
    product: str = "mul",
    commutes_with: Sequence[str] = (),
    invertible: bool = False,
    coalgebra: str | None = None,
    max_candidates: int = DEFAULT_CEILING,
    max_results: int | None = None,
    workers: int | None = None,
) -> Iterator[LinearOperator]:
    """All M with M(xy) = M(x)M(y), filtered by the constraints, in lexicographic order."""
    F = bundle.field
    n = bundle.dim
    total = _check_space(F, n * n, max_candidates)
    c = bundle.product(product).c
    others = [bundle.map(nm).m for nm in commutes_with]
    d = bundle.comul(coalgebra).d if coalgebra else None

    def chunk(s, e):
        M = _digits(s, e, F.order, n * n).reshape(-1, n, n).astype(F.dtype)
        mask = _batch_mult_mask(F, M, c) & _batch_commute_mask(F, M, others)
        if d is not None:
            mask &= _batch_comorphism_mask(F, M, d)
        M = M[mask]
        if invertible and len(M):
            M = M[_batch_det_nonzero(F, M)]
        return [LinearOperator(F, m) for m in M]

    return _limit(_chunked(total, chunk, workers), max_results)


def enumerate_commuting_pairs(bundle: StructureBundle, **kw) -> Iterator[tuple[LinearOperator, LinearOperator]]:
    """Ordered pairs (A, B) of morphisms with A, B, alpha, beta pairwise commuting."""
    F, K = bundle.field, Kernel(bundle.field)
    max_results = kw.pop("max_results", None)
    ms = list(enumerate_morphisms(bundle, **kw))

    def commute(x, y):
        return bool(np.all(F.equal(K.ein("ij,jk->ik", x.m, y.m), K.ein("ij,jk->ik", y.m, x.m))))

    def pairs():
        for A in ms:
            for B in ms:
                if commute(A, B):
                    yield A, B

    return _limit(pairs(), max_results)


# ---------------------------------------------------------------------------
# r-matrices


def _batch_aybe(F, R: np.ndarray, c, a, b) -> np.ndarray:
    r12r23 = F.reduce(np.einsum("Npq,Nst,xp,qsy,zt->Nxyz", R, R, a, c, b, optimize=True))
    r13r12 = F.reduce(np.einsum("Npq,Nst,psx,yt,zq->Nxyz", R, R, c, b, b, optimize=True))
    r23r13 = F.reduce(np.einsum("Npq,Nst,xp,ys,tqz->Nxyz", R, R, a, a, c, optimize=True))
    return F.reduce(r13r12 - r12r23 + r23r13)


def enumerate_r(
    bundle: StructureBundle,
    mode: str = "aybe",
    *,
    max_candidates: int = DEFAULT_CEILING,
    max_results: int | None = None,
    workers: int | None = None,
) -> Iterator[RMatrix]:
    """All r invariant under alpha (x) alpha and beta (x) beta with A(r) = 0 (``aybe``)
    or A(r) central (``central``)."""
    if mode not in ("aybe", "central"):
        raise ValueError("mode must be 'aybe' or 'central'")
    F = bundle.field
    n = bundle.dim
    total = _check_space(F, n * n, max_candidates)
    c = bundle.product("mul").c
    a = bundle.map("alpha").m if "alpha" in bundle.maps else F.eye(n)
    b = bundle.map("beta").m if "beta" in bundle.maps else F.eye(n)

    def chunk(s, e):
        R = _digits(s, e, F.order, n * n).reshape(-1, n, n).astype(F.dtype)
        mask = np.ones(len(R), dtype=bool)
        for m in (a, b):
            moved = F.reduce(np.einsum("ka,lb,Nab->Nkl", m, m, R))
            mask &= np.all((moved == R).reshape(len(R), -1), axis=1)
        R = R[mask]
        if not len(R):
            return []
        A = _batch_aybe(F, R, c, a, b)
        if mode == "aybe":
            keep = np.all((A == 0).reshape(len(R), -1), axis=1)
        else:
            Tl = F.reduce(np.einsum("Nxpq,yp,zq->Nxyz", A, b, b))
            Tr = F.reduce(np.einsum("Npqz,xp,yq->Nxyz", A, a, a))
            eye = F.eye(n)
            left = F.reduce(np.einsum("ui,Njyz,ijx->Nuxyz", F.reduce(a @ eye), Tl, c))
            right = F.reduce(np.einsum("Nxyj,ui,jiz->Nuxyz", Tr, F.reduce(b @ eye), c))
            keep = np.all((left == right).reshape(len(R), -1), axis=1)
        return [RMatrix(Tensor2(F, r)) for r in R[keep]]

    return _limit(_chunked(total, chunk, workers), max_results)


# ---------------------------------------------------------------------------
# products


def _lie(side):
    return lambda b: ck.check_bihom_lie(b, side, "mul", _m(b, "alpha"), _m(b, "beta"))


def _leib(side):
    return lambda b: ck.check_bihom_leibniz(b, side, "mul", _m(b, "alpha"), _m(b, "beta"))


def _m(b, name):
    return name if name in b.maps else None


PRODUCT_CHECKS: dict[str, Callable[[StructureBundle], CheckReport]] = {
    "assoc": lambda b: ck.check_bihom_associative(b, "mul", _m(b, "alpha"), _m(b, "beta")),
    "commutative": lambda b: ck.check_bihom_commutative(b, "mul", _m(b, "alpha"), _m(b, "beta")),
    "prelie": lambda b: ck.check_left_bihom_prelie(b, "mul", _m(b, "alpha"), _m(b, "beta")),
    "novikov": lambda b: ck.check_bihom_novikov(b, "mul", _m(b, "alpha"), _m(b, "beta")),
    "lie-left": _lie("left"),
    "lie-right": _lie("right"),
    "leibniz-left": _leib("left"),
    "leibniz-right": _leib("right"),
}


def scan_products(
    F: FieldDescriptor,
    dim: int,
    checker: str | Callable[[StructureBundle], CheckReport],
    *,
    alpha: LinearOperator | None = None,
    beta: LinearOperator | None = None,
    randomized: bool = False,
    seed: int = 0,
    samples: int = 1000,
    max_candidates: int = DEFAULT_CEILING,
    max_results: int | None = None,
    workers: int | None = None,
) -> Iterator[StructureBundle]:
    """Products ``mul`` (with the given structure maps) accepted by ``checker``.

    Candidates on which alpha or beta fail to be multiplicative are discarded in
    a vectorized prefilter, since every checker requires multiplicativity.
    """
    check = PRODUCT_CHECKS[checker] if isinstance(checker, str) else checker
    maps = {}
    if alpha is not None:
        maps["alpha"] = alpha
    if beta is not None:
        maps["beta"] = beta
    length = dim ** 3

    def build(consts: np.ndarray) -> list[StructureBundle]:
        mask = np.ones(len(consts), dtype=bool)
        for m in maps.values():
            mask &= _mult_mask_products(F, consts, m.m)
        out = []
        for c in consts[mask]:
            bun = StructureBundle(F, dim, products={"mul": BilinearProduct(F, c)}, maps=maps)
            if check(bun).passed:
                out.append(bun)
        return out

    if randomized:
        if not F.is_finite:
            raise SpaceTooLarge("randomized scans are over finite fields")
        rng = np.random.default_rng(seed)

        def stream():
            done = 0
            while done < samples:
                k = min(CHUNK, samples - done)
                consts = F.random(rng, (k, dim, dim, dim))
                done += k
                yield from build(consts)

        return _limit(stream(), max_results)

    total = _check_space(F, length, max_candidates)

    def chunk(s, e):
        consts = _digits(s, e, F.order, length).reshape(-1, dim, dim, dim).astype(F.dtype)
        return build(consts)

    return _limit(_chunked(total, chunk, workers), max_results)


def _mult_mask_products(F, consts: np.ndarray, m: np.ndarray) -> np.ndarray:
    """consts: (N, n, n, n); True where m is multiplicative for the product."""
    lhs = F.reduce(np.einsum("Nijl,kl->Nijk", consts, m))
    rhs = F.reduce(np.einsum("ai,bj,Nabk->Nijk", m, m, consts))
    return np.all((lhs == rhs).reshape(len(consts), -1), axis=1)


def commuting_map_pairs(
    F: FieldDescriptor, dim: int, *, invertible: bool = True
) -> list[tuple[LinearOperator, LinearOperator]]:
    """All ordered pairs of commuting (optionally invertible) matrices over a small field."""
    total = _check_space(F, dim * dim, DEFAULT_CEILING)
    M = _digits(0, total, F.order, dim * dim).reshape(-1, dim, dim).astype(F.dtype)
    if invertible:
        M = M[_batch_det_nonzero(F, M)]
    ops = [LinearOperator(F, m) for m in M]
    out = []
    for x in ops:
        for y in ops:
            if np.array_equal(F.reduce(x.m @ y.m), F.reduce(y.m @ x.m)):
                out.append((x, y))
    return out
