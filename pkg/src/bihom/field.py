"""Exact scalars over the rationals and prime fields GF(p).

Two layers live here. :class:`Scalar` is the user-facing immutable field element.
Internally, arrays of structure constants are numpy arrays holding *raw* values:
``fractions.Fraction`` objects over Q, canonical residues over GF(p) (int64 when
``p`` is small enough that contractions cannot overflow, Python ints otherwise).
:class:`FieldDescriptor` knows how to build, reduce and compare such arrays, and
hosts the exact Gaussian elimination used by the linear solvers.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import DivisionByZero, FieldMismatch, ParseError

__all__ = [
    "FieldKind",
    "FieldDescriptor",
    "Q",
    "GF",
    "Scalar",
    "scalar_arith",
    "scalar_parse",
    "parse_field",
]

_SCALAR_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")
# Largest p for which einsum over three operands of residues stays inside int64
# at dimension 64: 64**2 * p**3 < 2**63.
_INT64_PRIME_LIMIT = 1 << 17


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class FieldKind(enum.Enum):
    RATIONALS = "Q"
    PRIME = "GF"


@dataclass(frozen=True)
class FieldDescriptor:
    kind: FieldKind
    characteristic: int

    def __post_init__(self):
        if self.kind is FieldKind.RATIONALS:
            if self.characteristic != 0:
                raise ValueError("the rationals have characteristic 0")
        elif not (_is_prime(self.characteristic) and self.characteristic <= 2**31):
            raise ValueError(f"GF(p) needs a prime p <= 2^31, got {self.characteristic}")

    # -- naming -------------------------------------------------------------
    @property
    def name(self) -> str:
        return "Q" if self.is_rational else f"GF({self.characteristic})"

    def __str__(self) -> str:
        return self.name

    @property
    def is_rational(self) -> bool:
        return self.kind is FieldKind.RATIONALS

    @property
    def is_finite(self) -> bool:
        return not self.is_rational

    @property
    def order(self) -> int:
        if self.is_rational:
            raise ValueError("Q is infinite")
        return self.characteristic

    @cached_property
    def dtype(self):
        if self.is_finite and self.characteristic < _INT64_PRIME_LIMIT:
            return np.int64
        return object

    # -- raw scalars ----------------------------------------------------------
    def coerce(self, value) -> Fraction | int:
        """Convert int / Fraction / Scalar / scalar text into a raw canonical value."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value.field} scalar used in {self}")
            return value.value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (np.integer,)):
            value = int(value)
        if self.is_rational:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise TypeError(f"cannot coerce {value!r} into Q exactly")
        p = self.characteristic
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise DivisionByZero(f"denominator {value.denominator} vanishes in {self}")
            return value.numerator * pow(value.denominator, -1, p) % p
        if isinstance(value, int):
            return value % p
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def parse(self, text: str) -> Fraction | int:
        m = _SCALAR_RE.match(text.strip())
        if not m:
            raise ParseError(f"bad scalar {text!r}; expected -?digits(/digits)?")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise DivisionByZero(f"zero denominator in {text!r}")
        return self.coerce(Fraction(num, den))

    def format(self, value) -> str:
        if self.is_rational:
            v = Fraction(value)
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return str(int(value))

    def zero(self):
        return Fraction(0) if self.is_rational else 0

    def one(self):
        return Fraction(1) if self.is_rational else 1

    def inv(self, value):
        if value == 0:
            raise DivisionByZero("division by zero")
        if self.is_rational:
            return 1 / Fraction(value)
        return pow(int(value), -1, self.characteristic)

    # -- arrays ---------------------------------------------------------------
    def array(self, values) -> np.ndarray:
        """Canonical raw array from nested sequences (or an existing array)."""
        arr = np.asarray(values, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = self.coerce(v)
        return out.astype(self.dtype) if self.dtype is not object else out

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(self.zero())
            return out
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out

    def reduce(self, arr):
        """Bring the result of ring operations back to canonical form."""
        if self.is_rational:
            return arr
        return arr % self.characteristic

    def is_zero(self, arr) -> bool:
        return not np.any(np.asarray(arr != 0, dtype=bool))

    def equal(self, a, b) -> np.ndarray:
        return np.asarray(a == b, dtype=bool)

    def random(self, rng: np.random.Generator, shape, *, spread: int = 3) -> np.ndarray:
        """Random raw array; over Q small fractions with denominators up to ``spread``."""
        if self.is_finite:
            p = self.characteristic
            if p < 2**62:
                vals = rng.integers(0, p, size=shape)
            else:  # pragma: no cover - p is at most 2^31
                vals = np.vectorize(lambda _: int(rng.integers(0, p)))(np.empty(shape))
            return vals.astype(self.dtype) if self.dtype is not object else vals.astype(object)
        nums = rng.integers(-spread, spread + 1, size=shape)
        dens = rng.integers(1, spread + 1, size=shape)
        out = np.empty(shape, dtype=object)
        for idx in np.ndindex(*np.shape(nums)):
            out[idx] = Fraction(int(nums[idx]), int(dens[idx]))
        return out

    def to_python(self, arr):
        """Nested tuples of raw values, for hashing and stable comparison."""
        arr = np.asarray(arr)
        if arr.ndim == 0:
            v = arr.item()
            return Fraction(v) if self.is_rational else int(v)
        return tuple(self.to_python(a) for a in arr)

    # -- exact linear algebra -----------------------------------------------
    def _rows(self, mat) -> list[list]:
        mat = np.asarray(mat)
        if self.is_rational:
            return [[Fraction(v) for v in row] for row in mat]
        return [[int(v) for v in row] for row in mat]

    def rref(self, mat) -> tuple[list[list], list[int]]:
        """Reduced row echelon form over this field; returns (rows, pivot columns)."""
        rows = self._rows(mat)
        if not rows:
            return rows, []
        ncols = len(rows[0])
        p = None if self.is_rational else self.characteristic
        pivots: list[int] = []
        r = 0
        for col in range(ncols):
            piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = self.inv(rows[r][col])
            rows[r] = [(v * inv) % p if p else v * inv for v in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][col] != 0:
                    f = rows[i][col]
                    if p:
                        rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
                    else:
                        rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(col)
            r += 1
            if r == len(rows):
                break
        return rows[:r], pivots

    def rank(self, mat) -> int:
        mat = np.asarray(mat)
        if mat.size == 0:
            return 0
        return len(self.rref(mat)[1])

    def nullspace(self, mat, ncols: int | None = None) -> list[np.ndarray]:
        """Basis of {v : mat @ v = 0}, one raw vector per free column."""
        mat = np.asarray(mat)
        if ncols is None:
            ncols = mat.shape[1]
        if mat.size == 0:
            return [row for row in self.eye(ncols)]
        rows, pivots = self.rref(mat)
        free = [c for c in range(ncols) if c not in pivots]
        basis = []
        for fc in free:
            v = self.zeros(ncols)
            v[fc] = self.one()
            for row, pc in zip(rows, pivots):
                v[pc] = self.reduce(-row[fc]) if self.is_finite else -row[fc]
            basis.append(v)
        return basis

    def inverse(self, mat) -> np.ndarray | None:
        """Exact inverse, or None when singular."""
        mat = np.asarray(mat)
        n = mat.shape[0]
        if mat.shape != (n, n):
            return None
        aug = np.concatenate([mat, self.eye(n)], axis=1)
        rows, pivots = self.rref(aug)
        if pivots[:n] != list(range(n)) or len(rows) < n:
            return None
        return self.array([row[n:] for row in rows[:n]])


Q = FieldDescriptor(FieldKind.RATIONALS, 0)


def GF(p: int) -> FieldDescriptor:
    return FieldDescriptor(FieldKind.PRIME, p)


def parse_field(text: str) -> FieldDescriptor:
    """Accepts ``Q``, ``QQ``, ``GF(p)``, ``gfp`` (case-insensitive)."""
    t = text.strip().lower().replace(" ", "")
    if t in ("q", "qq", "rationals"):
        return Q
    m = re.fullmatch(r"gf\(?(\d+)\)?", t)
    if m:
        try:
            return GF(int(m.group(1)))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    raise ParseError(f"unknown field {text!r}")


@dataclass(frozen=True)
class Scalar:
    """Immutable exact field element; arithmetic across different fields is rejected."""

    value: Fraction | int
    field: FieldDescriptor

    @classmethod
    def of(cls, value, field: FieldDescriptor) -> Scalar:
        return cls(field.coerce(value), field)

    def _other(self, other) -> Fraction | int:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        return self.field.coerce(other)

    def _wrap(self, raw) -> Scalar:
        return Scalar(self.field.reduce(raw) if self.field.is_finite else raw, self.field)

    def __add__(self, other):
        return self._wrap(self.value + self._other(other))

    def __sub__(self, other):
        return self._wrap(self.value - self._other(other))

    def __mul__(self, other):
        return self._wrap(self.value * self._other(other))

    def __truediv__(self, other):
        return self._wrap(self.value * self.field.inv(self._other(other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._wrap(self._other(other) - self.value)

    def __neg__(self):
        return self._wrap(-self.value)

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.format(self.value)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def scalar_parse(text: str, field: FieldDescriptor) -> Scalar:
    return Scalar(field.parse(text), field)
