"""Naive reference evaluator used as an independent oracle by the test suite.

Nothing here imports package code: a bundle is read once into nested Python
lists (``from_bundle``) and every identity is re-typed from its defining
formula with explicit loops over coordinates. Vectors are lists, elements of
A (x) A are n x n nested lists, elements of A (x) A (x) A are n x n x n lists.

The oracle exposes two evaluation modes for each named axiom system:

* ``basis_failures``: every basis tuple, in lexicographic order, returning the
  list of (identity id, witness) pairs; used to compare witnesses exactly.
* ``random_failures``: evaluation on random vectors of the full space, the
  basis-free check that the basis-tuple verdicts are compared against.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction


class Oracle:
    def __init__(self, p: int, n: int, products=None, maps=None, comuls=None, tensors=None):
        self.p = p
        self.n = n
        self.products = {k: v for k, v in (products or {}).items()}
        self.maps = {k: v for k, v in (maps or {}).items()}
        self.comuls = {k: v for k, v in (comuls or {}).items()}
        self.tensors = {k: v for k, v in (tensors or {}).items()}

    @classmethod
    def from_bundle(cls, b) -> Oracle:
        p = b.field.characteristic
        conv = (lambda x: int(x)) if p else (lambda x: Fraction(x))

        def lists(arr):
            if hasattr(arr, "tolist"):
                arr = arr.tolist()
            if isinstance(arr, list):
                return [lists(a) for a in arr]
            return conv(arr)

        return cls(
            p, b.dim,
            products={k: lists(v.c) for k, v in b.products.items()},
            maps={k: lists(v.m) for k, v in b.maps.items()},
            comuls={k: lists(v.d) for k, v in b.comuls.items()},
            tensors={k: lists(v.coeffs) for k, v in b.tensors.items()},
        )

    # -- scalars and vectors ------------------------------------------------

    def norm(self, x):
        return x % self.p if self.p else Fraction(x)

    def zero(self):
        return [self.norm(0)] * self.n

    def e(self, i):
        v = self.zero()
        v[i] = self.norm(1)
        return v

    def add(self, *vs):
        return [self.norm(sum(xs)) for xs in zip(*vs)]

    def neg(self, v):
        return [self.norm(-x) for x in v]

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def rand_scalar(self, rng: random.Random):
        if self.p:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-4, 4), rng.randint(1, 3))

    def rand_vec(self, rng):
        return [self.rand_scalar(rng) for _ in range(self.n)]

    def rand_t2(self, rng):
        return [[self.rand_scalar(rng) for _ in range(self.n)] for _ in range(self.n)]

    # -- maps and products --------------------------------------------------

    def matrix(self, name):
        if name is None:
            return [[self.norm(int(i == j)) for j in range(self.n)] for i in range(self.n)]
        if isinstance(name, str):
            return self.maps[name]
        return name

    def ap(self, name, v):
        """Apply a named map (None = identity); a tuple of names composes right to left."""
        if isinstance(name, tuple):
            for nm in reversed(name):
                v = self.ap(nm, v)
            return v
        M = self.matrix(name)
        return [self.norm(sum(M[k][j] * v[j] for j in range(self.n))) for k in range(self.n)]

    def mul(self, pname, u, v):
        c = self.products[pname] if isinstance(pname, str) else pname
        out = [0] * self.n
        for i in range(self.n):
            if u[i] == 0:
                continue
            for j in range(self.n):
                if v[j] == 0:
                    continue
                s = u[i] * v[j]
                for k in range(self.n):
                    out[k] += s * c[i][j][k]
        return [self.norm(x) for x in out]

    def comul(self, dname, u):
        d = self.comuls[dname] if isinstance(dname, str) else dname
        n = self.n
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            if u[i] == 0:
                continue
            for j in range(n):
                for k in range(n):
                    out[j][k] += u[i] * d[i][j][k]
        return [[self.norm(x) for x in row] for row in out]

    # -- tensors as sums of pure tensors ------------------------------------

    def pure2(self, t):
        """Decompose sum t[j][k] e_j (x) e_k as [(e_j, row_j)]."""
        return [(self.e(j), list(t[j])) for j in range(self.n)]

    def outer2(self, u, v):
        return [[self.norm(u[j] * v[k]) for k in range(self.n)] for j in range(self.n)]

    def outer3(self, u, v, w):
        n = self.n
        return [[[self.norm(u[i] * v[j] * w[k]) for k in range(n)] for j in range(n)] for i in range(n)]

    def tadd(self, *ts):
        if isinstance(ts[0][0], list):
            return [self.tadd(*rows) for rows in zip(*ts)]
        return self.add(*ts)

    def tneg(self, t):
        if isinstance(t[0], list):
            return [self.tneg(r) for r in t]
        return self.neg(t)

    def tzero2(self):
        return [self.zero() for _ in range(self.n)]

    def tzero3(self):
        return [[self.zero() for _ in range(self.n)] for _ in range(self.n)]

    def t2_map(self, t, f):
        """Linear extension of (u, v) -> f(u, v) over the pure-tensor decomposition of t."""
        parts = [f(u, v) for u, v in self.pure2(t)]
        return self.tadd(*parts)

    def t2_ap(self, f, g, t):
        return self.t2_map(t, lambda u, v: self.outer2(self.ap(f, u), self.ap(g, v)))

    def t3_pure(self, T):
        n = self.n
        for i in range(n):
            for j in range(n):
                yield self.e(i), self.e(j), list(T[i][j])


def _struct(o, maps, prods):
    """Pairwise commutation of the (non-identity) maps and multiplicativity for each product."""
    out = []
    named = [m for m in maps if m is not None]
    for a, b in itertools.combinations(named, 2):
        out.append((f"commute:{a},{b}", "a", lambda x, a=a, b=b: (o.ap(a, o.ap(b, x)), o.ap(b, o.ap(a, x)))))
    for P in prods:
        for m in named:
            out.append((f"mult:{m}:{P}", "aa",
                        lambda x, y, m=m, P=P: (o.ap(m, o.mul(P, x, y)), o.mul(P, o.ap(m, x), o.ap(m, y)))))
    return out


def catalog(o: Oracle, kind: str, **kw):
    """List of (identity id, argument kinds, function) for one axiom system.

    Argument kinds: ``a`` is a vector of A, ``t`` an element of A (x) A.
    """
    a, b = kw.get("alpha", "alpha"), kw.get("beta", "beta")
    P = kw.get("product", "mul")
    m = lambda x, y: o.mul(P, x, y)  # noqa: E731
    ab = (a, b)

    if kind == "assoc":
        return _struct(o, [a, b], [P]) + [
            ("BHassoc", "aaa", lambda x, y, z: (m(o.ap(a, x), m(y, z)), m(m(x, y), o.ap(b, z)))),
        ]
    if kind == "commutative":
        return catalog(o, "assoc", **kw) + [
            ("commnovi", "aa", lambda x, y: (m(o.ap(b, x), o.ap(a, y)), m(o.ap(b, y), o.ap(a, x)))),
        ]
    if kind in ("prelie", "novikov"):
        def side(x, y, z):
            return o.sub(m(o.ap(ab, x), m(o.ap(a, y), z)), m(m(o.ap(b, x), o.ap(a, y)), o.ap(b, z)))

        ids = _struct(o, [a, b], [P]) + [
            ("lBHpL" if kind == "prelie" else "BiNoviko", "aaa", lambda x, y, z: (side(x, y, z), side(y, x, z))),
        ]
        if kind == "novikov":
            ids.append(("Binovikov", "aaa", lambda x, y, z: (
                m(m(x, o.ap(b, y)), o.ap(ab, z)), m(m(x, o.ap(b, z)), o.ap(ab, y)))))
        return ids
    if kind in ("leibniz-left", "leibniz-right", "lie-left", "lie-right"):
        B = kw.get("product", "bracket")
        br = lambda x, y: o.mul(B, x, y)  # noqa: E731
        ids = _struct(o, [a, b], [B])
        if kind.endswith("left"):
            ids.append(("leftBHleibniz", "aaa", lambda x, y, z: (
                br(o.ap(ab, x), br(y, z)),
                o.add(br(br(o.ap(b, x), y), o.ap(b, z)), br(o.ap(b, y), br(o.ap(a, x), z))))))
        else:
            ids.append(("rightBHleibniz", "aaa", lambda x, y, z: (
                br(br(x, y), o.ap(ab, z)),
                o.add(br(br(x, o.ap(b, z)), o.ap(a, y)), br(o.ap(a, x), br(y, o.ap(a, z)))))))
        if kind.startswith("lie"):
            ids.append(("BHskewsym", "aa", lambda x, y: (br(o.ap(b, x), o.ap(a, y)),
                                                         o.neg(br(o.ap(b, y), o.ap(a, x))))))
        return ids
    if kind == "dendriform":
        pl = lambda x, y: o.mul("prec", x, y)  # noqa: E731
        sc = lambda x, y: o.mul("succ", x, y)  # noqa: E731
        return [
            ("dend1", "a", lambda x: (o.ap(a, o.ap(b, x)), o.ap(b, o.ap(a, x)))),
            ("dend3:prec", "aa", lambda x, y: (o.ap(a, pl(x, y)), pl(o.ap(a, x), o.ap(a, y)))),
            ("dend3:succ", "aa", lambda x, y: (o.ap(a, sc(x, y)), sc(o.ap(a, x), o.ap(a, y)))),
            ("dend5:prec", "aa", lambda x, y: (o.ap(b, pl(x, y)), pl(o.ap(b, x), o.ap(b, y)))),
            ("dend5:succ", "aa", lambda x, y: (o.ap(b, sc(x, y)), sc(o.ap(b, x), o.ap(b, y)))),
            ("dend6", "aaa", lambda x, y, z: (pl(pl(x, y), o.ap(b, z)), pl(o.ap(a, x), o.add(pl(y, z), sc(y, z))))),
            ("dend7", "aaa", lambda x, y, z: (pl(sc(x, y), o.ap(b, z)), sc(o.ap(a, x), pl(y, z)))),
            ("dend8", "aaa", lambda x, y, z: (sc(o.ap(a, x), sc(y, z)), sc(o.add(pl(x, y), sc(x, y)), o.ap(b, z)))),
        ]
    if kind == "novikov-poisson":
        dot = lambda x, y: o.mul("mul", x, y)  # noqa: E731
        st = lambda x, y: o.mul("star", x, y)  # noqa: E731
        pref = lambda pre, ids: [(f"{pre}/{i}", k, f) for i, k, f in ids]  # noqa: E731

        def s41(x, y, z):
            return o.sub(dot(st(o.ap(b, x), o.ap(a, y)), o.ap(b, z)), st(o.ap(ab, x), dot(o.ap(a, y), z)))

        return (
            pref("mul", catalog(o, "commutative", alpha=a, beta=b, product="mul"))
            + pref("star", catalog(o, "novikov", alpha=a, beta=b, product="star"))
            + [
                ("NP-4.1", "aaa", lambda x, y, z: (s41(x, y, z), s41(y, x, z))),
                ("NP-4.2", "aaa", lambda x, y, z: (st(dot(x, o.ap(b, y)), o.ap(ab, z)),
                                                   dot(st(x, o.ap(b, z)), o.ap(ab, y)))),
                ("NP-new", "aaa", lambda x, y, z: (dot(o.ap(a, x), st(y, z)), st(dot(x, y), o.ap(b, z)))),
            ]
        )
    if kind == "derivation":
        D, tau, sigma = kw.get("D", "D"), kw.get("tau"), kw.get("sigma")
        ids = []
        for nm in dict.fromkeys(x for x in (tau, sigma) if x is not None):
            ids += _struct(o, [nm], [P])
        ids.append(("derivation", "aa", lambda x, y: (
            o.ap(D, m(x, y)), o.add(m(o.ap(D, x), o.ap(tau, y)), m(o.ap(sigma, x), o.ap(D, y))))))
        return ids
    if kind == "rota-baxter":
        R = kw.get("R", "R")
        return [
            (f"commute:{R},{a}", "a", lambda x: (o.ap(R, o.ap(a, x)), o.ap(a, o.ap(R, x)))),
            (f"commute:{R},{b}", "a", lambda x: (o.ap(R, o.ap(b, x)), o.ap(b, o.ap(R, x)))),
            ("generRB", "aa", lambda x, y: (
                m(o.ap((R, a, b), x), o.ap((R, a, b), y)),
                o.ap(R, o.add(m(o.ap(ab, x), o.ap(R, y)), m(o.ap(R, x), o.ap(ab, y)))))),
        ]
    if kind == "coassoc":
        p, w = kw.get("psi", "psi"), kw.get("omega", "omega")
        d = kw.get("comul", "Delta")
        return [
            (f"commute:{p},{w}", "a", lambda x: (o.ap(p, o.ap(w, x)), o.ap(w, o.ap(p, x)))),
            (f"comult:{p}:{d}", "a", lambda x: (o.t2_ap(p, p, o.comul(d, x)), o.comul(d, o.ap(p, x)))),
            (f"comult:{w}:{d}", "a", lambda x: (o.t2_ap(w, w, o.comul(d, x)), o.comul(d, o.ap(w, x)))),
            ("BHcoassoc", "a", lambda x: (
                o.t2_map(o.comul(d, x), lambda u, v: _t3_left(o, o.comul(d, u), o.ap(p, v))),
                o.t2_map(o.comul(d, x), lambda u, v: _t3_right(o, o.ap(w, u), o.comul(d, v))),
            )),
        ]
    if kind == "inf-bialgebra":
        p, w = "psi", "omega"
        return (
            catalog(o, "assoc")
            + catalog(o, "coassoc")
            + [(f"commute:{x},{y}", "a", lambda v, x=x, y=y: (o.ap(x, o.ap(y, v)), o.ap(y, o.ap(x, v))))
               for x in ("alpha", "beta") for y in (p, w)]
            + [(f"comult:{x}:Delta", "a", lambda v, x=x: (o.t2_ap(x, x, o.comul("Delta", v)),
                                                         o.comul("Delta", o.ap(x, v)))) for x in ("alpha", "beta")]
            + [(f"mult:{x}:mul", "aa", lambda u, v, x=x: (o.ap(x, m(u, v)), m(o.ap(x, u), o.ap(x, v))))
               for x in (p, w)]
            + [("infin", "aa", lambda x, y: (o.comul("Delta", m(x, y)), o.tadd(
                o.t2_map(o.comul("Delta", y), lambda u, v: o.outer2(m(o.ap(w, x), u), o.ap(b, v))),
                o.t2_map(o.comul("Delta", x), lambda u, v: o.outer2(o.ap(a, u), m(v, o.ap(p, y)))),
            )))]
        )
    if kind == "coproduct-bimodule":
        return _coproduct_bimodule(o)
    if kind == "regular-bimodule":
        return _regular_bimodule(o)
    if kind == "centrality":
        T = kw["A_r"]
        return [("centrality", "a", lambda x: (_act3_left(o, x, T), _act3_right(o, T, x)))]
    raise KeyError(kind)


def _t3_left(o, t2, w):
    """t2 (x) w as an element of A^{(x)3}."""
    return [[[o.norm(t2[i][j] * w[k]) for k in range(o.n)] for j in range(o.n)] for i in range(o.n)]


def _t3_right(o, u, t2):
    return [[[o.norm(u[i] * t2[j][k]) for k in range(o.n)] for j in range(o.n)] for i in range(o.n)]


def _act3_left(o, a, T):
    """a . (x (x) y (x) z) = alpha(a) x (x) beta(y) (x) beta(z)."""
    parts = [o.outer3(o.mul("mul", o.ap("alpha", a), x), o.ap("beta", y), o.ap("beta", z))
             for x, y, z in o.t3_pure(T)]
    return o.tadd(*parts)


def _act3_right(o, T, a):
    """(x (x) y (x) z) . a = alpha(x) (x) alpha(y) (x) z beta(a)."""
    parts = [o.outer3(o.ap("alpha", x), o.ap("alpha", y), o.mul("mul", z, o.ap("beta", a)))
             for x, y, z in o.t3_pure(T)]
    return o.tadd(*parts)


def _coproduct_bimodule(o):
    """A (x) A with a.(b (x) c) = omega(a)b (x) beta(c), (b (x) c).a = alpha(b) (x) c psi(a)."""
    m = lambda x, y: o.mul("mul", x, y)  # noqa: E731
    left = lambda a, t: o.t2_map(t, lambda u, v: o.outer2(m(o.ap("omega", a), u), o.ap("beta", v)))  # noqa: E731
    right = lambda t, a: o.t2_map(t, lambda u, v: o.outer2(o.ap("alpha", u), m(v, o.ap("psi", a))))  # noqa: E731
    return _bimodule_ids(o, left, right, lambda t: o.t2_ap("alpha", "alpha", t),
                         lambda t: o.t2_ap("beta", "beta", t), "t")


def _regular_bimodule(o):
    m = lambda x, y: o.mul("mul", x, y)  # noqa: E731
    return _bimodule_ids(o, m, m, lambda v: o.ap("alpha", v), lambda v: o.ap("beta", v), "a")


def _bimodule_ids(o, left, right, aM, bM, mk):
    m = lambda x, y: o.mul("mul", x, y)  # noqa: E731
    A, B = (lambda v: o.ap("alpha", v)), (lambda v: o.ap("beta", v))
    return [
        ("commute:alpha_M,beta_M", mk, lambda t: (aM(bM(t)), bM(aM(t)))),
        ("lmod-alpha", "a" + mk, lambda x, t: (aM(left(x, t)), left(A(x), aM(t)))),
        ("lmod-beta", "a" + mk, lambda x, t: (bM(left(x, t)), left(B(x), bM(t)))),
        ("lmod4", "aa" + mk, lambda x, y, t: (left(A(x), left(y, t)), left(m(x, y), bM(t)))),
        ("rmod-alpha", mk + "a", lambda t, x: (aM(right(t, x)), right(aM(t), A(x)))),
        ("rmod-beta", mk + "a", lambda t, x: (bM(right(t, x)), right(bM(t), B(x)))),
        ("rmod4", mk + "aa", lambda t, x, y: (right(aM(t), m(x, y)), right(right(t, x), B(y)))),
        ("BHbim", "a" + mk + "a", lambda x, t, y: (left(A(x), right(t, y)), right(left(x, t), B(y)))),
    ]


def _basis_of(o, kind):
    if kind == "a":
        return [o.e(i) for i in range(o.n)]
    out = []
    for i in range(o.n):
        for j in range(o.n):
            t = o.tzero2()
            t[i] = list(t[i])
            t[i][j] = o.norm(1)
            out.append(t)
    return out


def basis_failures(o: Oracle, ids) -> list[tuple[str, tuple[int, ...]]]:
    """All (id, witness) failures over basis tuples, ids in catalog order, witnesses lexicographic."""
    out = []
    for ident, kinds, fn in ids:
        bases = [_basis_of(o, k) for k in kinds]
        for idx in itertools.product(*(range(len(bs)) for bs in bases)):
            lhs, rhs = fn(*(bs[i] for bs, i in zip(bases, idx)))
            if lhs != rhs:
                out.append((ident, idx))
    return out


def random_failures(o: Oracle, ids, rng: random.Random, tuples: int = 100) -> set[str]:
    """Ids violated on at least one of ``tuples`` random full-space argument tuples."""
    failed = set()
    gen = {"a": o.rand_vec, "t": o.rand_t2}
    for _ in range(tuples):
        for ident, kinds, fn in ids:
            if ident in failed:
                continue
            lhs, rhs = fn(*(gen[k](rng) for k in kinds))
            if lhs != rhs:
                failed.add(ident)
    return failed


# -- constructions written out termwise ---------------------------------------


def product_table(o: Oracle, f) -> list:
    """c[i][j][k] of the bilinear map f evaluated on basis pairs."""
    return [[f(o.e(i), o.e(j)) for j in range(o.n)] for i in range(o.n)]


def delta_r(o: Oracle, r, a):
    """sum alpha(x_i) (x) y_i a - sum a x_i (x) beta(y_i) with r = sum_i e_i (x) r[i]."""
    parts = []
    for x, y in o.pure2(r):
        parts.append(o.outer2(o.ap("alpha", x), o.mul("mul", y, a)))
        parts.append(o.tneg(o.outer2(o.mul("mul", a, x), o.ap("beta", y))))
    return o.tadd(*parts)


def aybe_terms(o: Oracle, r):
    """(r13r12, r12r23, r23r13) from their termwise definitions."""
    m = lambda x, y: o.mul("mul", x, y)  # noqa: E731
    A, B = (lambda v: o.ap("alpha", v)), (lambda v: o.ap("beta", v))
    pr = o.pure2(r)
    t1, t2, t3 = [], [], []
    for xi, yi in pr:
        for xj, yj in pr:
            t1.append(o.outer3(m(xi, xj), B(yj), B(yi)))
            t2.append(o.outer3(A(xi), m(yi, xj), B(yj)))
            t3.append(o.outer3(A(xi), A(xj), m(yj, yi)))
    return o.tadd(*t1), o.tadd(*t2), o.tadd(*t3)


def A_r(o: Oracle, r):
    r13r12, r12r23, r23r13 = aybe_terms(o, r)
    return o.tadd(r13r12, o.tneg(r12r23), r23r13)


def inf_prelie_product(o: Oracle, a, b):
    """alpha beta^2 psi(b_1) . [alpha(a) . alpha^2 omega(b_2)]."""
    X = ("alpha", "beta", "beta", "psi")
    Y = ("alpha", "alpha", "omega")
    return o.t2_map(o.comul("Delta", b), lambda u, v: o.mul(
        "mul", o.ap(X, u), o.mul("mul", o.ap("alpha", a), o.ap(Y, v))))


def rb_from_r(o: Oracle, r, a):
    """sum alpha beta^3(x_i) . (a . alpha^3(y_i))."""
    parts = [o.mul("mul", o.ap(("alpha", "beta", "beta", "beta"), x), o.mul("mul", a, o.ap(("alpha",) * 3, y)))
             for x, y in o.pure2(r)]
    return o.add(*parts)
