"""Dense exact multilinear algebra: operators, products, comultiplications, tensors.

Index conventions (fixed everywhere in the package):

* ``LinearOperator.m[k, j]``  = coefficient of e_k in M(e_j)   (column j = image of e_j)
* ``BilinearProduct.c[i, j, k]`` = coefficient of e_k in e_i . e_j
* ``Comultiplication.d[i, j, k]`` = coefficient of e_j (x) e_k in Delta(e_i)
* ``Tensor2.coeffs[i, j]`` = coefficient of e_i (x) e_j

Vectors and tensors passed to the kernel functions may carry arbitrary leading
batch axes (``(..., n)``, ``(..., n, n)``, ...); broadcasting over those axes is
how the axiom checkers evaluate an identity on every basis tuple at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as _fold

import numpy as np

from .errors import DimMismatch, Singular
from .field import FieldDescriptor

__all__ = [
    "LinearOperator",
    "BilinearProduct",
    "Comultiplication",
    "Tensor2",
    "Tensor3",
    "Kernel",
    "op_apply",
    "op_compose",
    "op_invert",
    "op_power",
    "bil_eval",
    "comul_eval",
    "twist_product",
    "twist_comul",
    "tensor_action_left",
    "tensor_action_right",
    "kron_power",
]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


class _Dense:
    """Shared behaviour: an immutable raw array tagged with its field."""

    field: FieldDescriptor
    _ndim: int = 0

    def _validate(self, arr):
        arr = np.asarray(arr)
        if arr.ndim != self._ndim:
            raise DimMismatch(f"{type(self).__name__} needs a {self._ndim}-d array, got shape {arr.shape}")
        return _frozen(arr)

    @property
    def raw(self) -> np.ndarray:
        raise NotImplementedError

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        a, b = self.raw, other.raw
        return self.field == other.field and a.shape == b.shape and bool(np.all(self.field.equal(a, b)))

    def __hash__(self):
        return hash((type(self).__name__, self.field, self.raw.shape, self.field.to_python(self.raw)))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.raw)


@dataclass(frozen=True, eq=False)
class LinearOperator(_Dense):
    field: FieldDescriptor
    m: np.ndarray
    _ndim = 2

    def __post_init__(self):
        object.__setattr__(self, "m", self._validate(self.m))

    @property
    def raw(self):
        return self.m

    @property
    def dim_in(self) -> int:
        return self.m.shape[1]

    @property
    def dim_out(self) -> int:
        return self.m.shape[0]

    @classmethod
    def identity(cls, field: FieldDescriptor, n: int) -> LinearOperator:
        return cls(field, field.eye(n))

    @classmethod
    def zero(cls, field: FieldDescriptor, n: int, n_in: int | None = None) -> LinearOperator:
        return cls(field, field.zeros((n, n if n_in is None else n_in)))

    @classmethod
    def from_rows(cls, field: FieldDescriptor, rows) -> LinearOperator:
        """Build from a matrix given row by row (entry [k][j] = coeff of e_k in M(e_j))."""
        return cls(field, field.array(rows))

    @classmethod
    def from_images(cls, field: FieldDescriptor, images) -> LinearOperator:
        """Build from the list of images M(e_0), M(e_1), ... as coordinate vectors."""
        return cls(field, field.array(images).T.copy())

    def __matmul__(self, other: LinearOperator) -> LinearOperator:
        return op_compose(self, other)

    def is_identity(self) -> bool:
        return self.dim_in == self.dim_out and bool(np.all(self.field.equal(self.m, self.field.eye(self.dim_in))))


@dataclass(frozen=True, eq=False)
class BilinearProduct(_Dense):
    field: FieldDescriptor
    c: np.ndarray
    _ndim = 3

    def __post_init__(self):
        c = self._validate(self.c)
        if len(set(c.shape)) != 1:
            raise DimMismatch(f"product array must be cubic, got {c.shape}")
        object.__setattr__(self, "c", c)

    @property
    def raw(self):
        return self.c

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @classmethod
    def zero(cls, field: FieldDescriptor, n: int) -> BilinearProduct:
        return cls(field, field.zeros((n, n, n)))

    @classmethod
    def from_triples(cls, field: FieldDescriptor, n: int, entries) -> BilinearProduct:
        """``entries`` yields (i, j, k, value): e_i . e_j gets value * e_k added."""
        c = field.zeros((n, n, n))
        for i, j, k, v in entries:
            c[i, j, k] = field.reduce(c[i, j, k] + field.coerce(v))
        return cls(field, c)


@dataclass(frozen=True, eq=False)
class Comultiplication(_Dense):
    field: FieldDescriptor
    d: np.ndarray
    _ndim = 3

    def __post_init__(self):
        d = self._validate(self.d)
        if len(set(d.shape)) != 1:
            raise DimMismatch(f"comultiplication array must be cubic, got {d.shape}")
        object.__setattr__(self, "d", d)

    @property
    def raw(self):
        return self.d

    @property
    def dim(self) -> int:
        return self.d.shape[0]

    @classmethod
    def zero(cls, field: FieldDescriptor, n: int) -> Comultiplication:
        return cls(field, field.zeros((n, n, n)))

    @classmethod
    def from_triples(cls, field: FieldDescriptor, n: int, entries) -> Comultiplication:
        d = field.zeros((n, n, n))
        for i, j, k, v in entries:
            d[i, j, k] = field.reduce(d[i, j, k] + field.coerce(v))
        return cls(field, d)


@dataclass(frozen=True, eq=False)
class Tensor2(_Dense):
    field: FieldDescriptor
    coeffs: np.ndarray
    _ndim = 2

    def __post_init__(self):
        t = self._validate(self.coeffs)
        if t.shape[0] != t.shape[1]:
            raise DimMismatch(f"Tensor2 must be square, got {t.shape}")
        object.__setattr__(self, "coeffs", t)

    @property
    def raw(self):
        return self.coeffs

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def from_pairs(cls, field: FieldDescriptor, n: int, entries) -> Tensor2:
        t = field.zeros((n, n))
        for i, j, v in entries:
            t[i, j] = field.reduce(t[i, j] + field.coerce(v))
        return cls(field, t)


@dataclass(frozen=True, eq=False)
class Tensor3(_Dense):
    field: FieldDescriptor
    coeffs: np.ndarray
    _ndim = 3

    def __post_init__(self):
        t = self._validate(self.coeffs)
        if len(set(t.shape)) != 1:
            raise DimMismatch(f"Tensor3 must be cubic, got {t.shape}")
        object.__setattr__(self, "coeffs", t)

    @property
    def raw(self):
        return self.coeffs

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]


_numerator = np.frompyfunc(lambda v: v.numerator, 1, 1)
_denominator = np.frompyfunc(lambda v: v.denominator, 1, 1)
_to_fraction = np.frompyfunc(Fraction, 1, 1)


def _integer_form(arr) -> tuple[np.ndarray, int]:
    """(N, L) with arr == N / L, N an object array of Python ints."""
    arr = np.asarray(arr, dtype=object)
    if arr.size == 0:
        return arr, 1
    L = _fold(math.lcm, set(_denominator(arr).flat), 1)
    if L == 1:
        return _numerator(arr), 1
    return np.frompyfunc(lambda v: v.numerator * (L // v.denominator), 1, 1)(arr), L


def _rational_einsum(spec: str, ops) -> np.ndarray:
    """einsum over Q on integer numerators; one Fraction per output entry instead of per term."""
    nums, den = [], 1
    for op in ops:
        N, L = _integer_form(op)
        nums.append(N)
        den *= L
    out = np.asarray(np.einsum(spec, *nums, optimize=len(nums) > 2), dtype=object)
    if den == 1:
        return _to_fraction(out).astype(object) if out.ndim else np.asarray(Fraction(out.item()), dtype=object)
    conv = np.frompyfunc(lambda v: Fraction(v, den), 1, 1)
    return conv(out).astype(object) if out.ndim else np.asarray(Fraction(out.item(), den), dtype=object)


class Kernel:
    """Batched exact contractions over one field.

    Every method reduces its result to canonical form, so callers can chain them
    freely without worrying about int64 growth over GF(p).
    """

    def __init__(self, field: FieldDescriptor):
        self.F = field

    def ein(self, spec: str, *ops):
        if self.F.is_rational:
            return _rational_einsum(spec, ops)
        return self.F.reduce(np.einsum(spec, *ops))

    # vectors (..., n)
    def ap(self, m, x):
        """M(x)."""
        return self.ein("kj,...j->...k", m, x)

    def mul(self, c, x, y):
        """x . y"""
        return self.ein("...i,...j,ijk->...k", x, y, c)

    def add(self, *xs):
        return self.F.reduce(_fold(lambda a, b: a + b, xs))

    def sub(self, a, b):
        return self.F.reduce(a - b)

    def neg(self, a):
        return self.F.reduce(-a)

    def scale(self, s, a):
        return self.F.reduce(a * s)

    # A (x) A as (..., n, n)
    def outer(self, x, y):
        return self.ein("...i,...j->...ij", x, y)

    def comul(self, d, x):
        """Delta(x)."""
        return self.ein("...i,ijk->...jk", x, d)

    def ap2(self, m1, m2, t):
        """(M1 (x) M2)(t)."""
        if m1 is None and m2 is None:
            return t
        if m2 is None:
            return self.ein("ka,...al->...kl", m1, t)
        if m1 is None:
            return self.ein("lb,...kb->...kl", m2, t)
        return self.ein("ka,lb,...ab->...kl", m1, m2, t)

    def lmul1(self, c, x, t):
        """x . t_1 (x) t_2."""
        return self.ein("...i,...jl,ijk->...kl", x, t, c)

    def rmul2(self, c, t, x):
        """t_1 (x) t_2 . x."""
        return self.ein("...ij,...l,jlk->...ik", t, x, c)

    def mul_legs(self, c, t):
        """t_1 . t_2 (the multiplication applied to a tensor)."""
        return self.ein("...ij,ijk->...k", t, c)

    # A (x) A (x) A as (..., n, n, n)
    def ap3(self, m1, m2, m3, t):
        out = t
        if m1 is not None:
            out = self.ein("ka,...abc->...kbc", m1, out)
        if m2 is not None:
            out = self.ein("kb,...abc->...akc", m2, out)
        if m3 is not None:
            out = self.ein("kc,...abc->...abk", m3, out)
        return out

    def comul_leg(self, d, t, leg):
        """Apply Delta to one leg of a (..., n, n) tensor, giving (..., n, n, n)."""
        if leg == 0:
            return self.ein("...ab,ajk->...jkb", t, d)
        return self.ein("...ab,bjk->...ajk", t, d)


def _check_square(M: LinearOperator, n: int, what: str = "operator"):
    if M.dim_in != n or M.dim_out != n:
        raise DimMismatch(f"{what} is {M.dim_out}x{M.dim_in}, expected {n}x{n}")


def op_apply(M: LinearOperator, v) -> np.ndarray:
    v = np.asarray(v)
    if v.shape[-1] != M.dim_in:
        raise DimMismatch(f"vector of length {v.shape[-1]} for operator with dim_in {M.dim_in}")
    return Kernel(M.field).ap(M.m, M.field.array(v) if v.dtype != M.m.dtype else v)


def op_compose(M: LinearOperator, N: LinearOperator) -> LinearOperator:
    """M o N (apply N first)."""
    if M.dim_in != N.dim_out:
        raise DimMismatch(f"cannot compose {M.dim_out}x{M.dim_in} after {N.dim_out}x{N.dim_in}")
    return LinearOperator(M.field, Kernel(M.field).ein("ij,jk->ik", M.m, N.m))


def op_invert(M: LinearOperator, name: str = "matrix") -> LinearOperator:
    if M.dim_in != M.dim_out:
        raise DimMismatch("only square operators can be inverted")
    inv = M.field.inverse(M.m)
    if inv is None:
        raise Singular(name)
    return LinearOperator(M.field, inv)


def op_power(M: LinearOperator, k: int) -> LinearOperator:
    out = LinearOperator.identity(M.field, M.dim_in)
    for _ in range(k):
        out = op_compose(M, out)
    return out


def bil_eval(P: BilinearProduct, u, v) -> np.ndarray:
    F = P.field
    u, v = F.array(u), F.array(v)
    if u.shape[-1] != P.dim or v.shape[-1] != P.dim:
        raise DimMismatch("vector length does not match the product dimension")
    return Kernel(F).mul(P.c, u, v)


def comul_eval(C: Comultiplication, v) -> Tensor2:
    F = C.field
    v = F.array(v)
    if v.shape != (C.dim,):
        raise DimMismatch("vector length does not match the comultiplication dimension")
    return Tensor2(F, Kernel(F).comul(C.d, v))


def twist_product(P: BilinearProduct, A: LinearOperator, B: LinearOperator) -> BilinearProduct:
    """mu o (A (x) B): e_i * e_j = A(e_i) . B(e_j)."""
    _check_square(A, P.dim)
    _check_square(B, P.dim)
    return BilinearProduct(P.field, Kernel(P.field).ein("ai,bj,abk->ijk", A.m, B.m, P.c))


def twist_comul(C: Comultiplication, A: LinearOperator, B: LinearOperator) -> Comultiplication:
    """(A (x) B) o Delta."""
    _check_square(A, C.dim)
    _check_square(B, C.dim)
    return Comultiplication(C.field, Kernel(C.field).ein("iab,ja,kb->ijk", C.d, A.m, B.m))


def kron_power(m: np.ndarray, k: int, field: FieldDescriptor) -> np.ndarray:
    """Matrix of M^{(x)k} on the flattened (row-major) tensor power."""
    out = field.eye(1)
    for _ in range(k):
        out = field.reduce(np.kron(out, m))
    return out


def tensor_action_left(P: BilinearProduct, alpha: LinearOperator, beta: LinearOperator, a, t) -> np.ndarray:
    """a . (b1 (x) b2 (x) ... (x) bn) = alpha(a) b1 (x) beta(b2) (x) ... (x) beta(bn)."""
    F, K = P.field, Kernel(P.field)
    t = F.array(t)
    n_legs = t.ndim
    if n_legs < 2 or any(s != P.dim for s in t.shape):
        raise DimMismatch("tensor must have at least two legs of the algebra's dimension")
    out = K.ein("i,j...,ijk->k...", K.ap(alpha.m, F.array(a)), t, P.c)
    for leg in range(1, n_legs):
        out = np.moveaxis(K.ein("kj,...j->...k", beta.m, np.moveaxis(out, leg, -1)), -1, leg)
    return out


def tensor_action_right(P: BilinearProduct, alpha: LinearOperator, beta: LinearOperator, t, a) -> np.ndarray:
    """(b1 (x) ... (x) bn) . a = alpha(b1) (x) ... (x) alpha(b_{n-1}) (x) bn beta(a)."""
    F, K = P.field, Kernel(P.field)
    t = F.array(t)
    n_legs = t.ndim
    if n_legs < 2 or any(s != P.dim for s in t.shape):
        raise DimMismatch("tensor must have at least two legs of the algebra's dimension")
    out = K.ein("...i,j,ijk->...k", t, K.ap(beta.m, F.array(a)), P.c)
    for leg in range(n_legs - 1):
        out = np.moveaxis(K.ein("kj,...j->...k", alpha.m, np.moveaxis(out, leg, -1)), -1, leg)
    return out
