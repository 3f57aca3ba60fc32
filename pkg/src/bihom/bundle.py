"""StructureBundle: a finite-dimensional space with named products, coproducts, maps, tensors."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping

from .errors import DimMismatch, FieldMismatch, MissingComponent
from .field import FieldDescriptor
from .multilinear import BilinearProduct, Comultiplication, LinearOperator, Tensor2

__all__ = ["StructureBundle", "KIND_REQUIREMENTS"]

# kind-tag -> (products, comuls, maps, tensors) that must be present
KIND_REQUIREMENTS: dict[str, tuple[tuple[str, ...], ...]] = {
    "algebra": (("mul",), (), (), ()),
    "assoc": (("mul",), (), ("alpha", "beta"), ()),
    "coassoc": ((), ("Delta",), ("psi", "omega"), ()),
    "commutative": (("mul",), (), ("alpha", "beta"), ()),
    "prelie": (("mul",), (), ("alpha", "beta"), ()),
    "novikov": (("mul",), (), ("alpha", "beta"), ()),
    "leibniz": (("bracket",), (), ("alpha", "beta"), ()),
    "lie": (("bracket",), (), ("alpha", "beta"), ()),
    "dendriform": (("prec", "succ"), (), ("alpha", "beta"), ()),
    "novikov-poisson": (("mul", "star"), (), ("alpha", "beta"), ()),
    "module": (("mul",), (), ("alpha", "beta"), ()),
    "derivation": (("mul",), (), ("D",), ()),
    "inf-bialgebra": (("mul",), ("Delta",), ("alpha", "beta", "psi", "omega"), ()),
    "rota-baxter": (("mul",), (), ("alpha", "beta", "R"), ()),
    "r-matrix": (("mul",), (), ("alpha", "beta"), ("r",)),
}


def _freeze(d: Mapping | None) -> Mapping:
    return MappingProxyType(dict(sorted((d or {}).items())))


@dataclass(frozen=True, eq=False)
class StructureBundle:
    """All members share ``field`` and ``dim``.

    Provenance lines are carried along (and written by the file format) but do
    not take part in equality.
    """

    field: FieldDescriptor
    dim: int
    products: Mapping[str, BilinearProduct] = field(default_factory=dict)
    comuls: Mapping[str, Comultiplication] = field(default_factory=dict)
    maps: Mapping[str, LinearOperator] = field(default_factory=dict)
    tensors: Mapping[str, Tensor2] = field(default_factory=dict)
    kind: str = "algebra"
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise DimMismatch("dimension must be positive")
        for table in ("products", "comuls", "maps", "tensors"):
            items = _freeze(getattr(self, table))
            for name, obj in items.items():
                if obj.field != self.field:
                    raise FieldMismatch(f"{table[:-1]} {name!r} lives over {obj.field}, bundle over {self.field}")
                shape = obj.raw.shape
                if any(s != self.dim for s in shape):
                    raise DimMismatch(f"{table[:-1]} {name!r} has shape {shape}, bundle dim is {self.dim}")
            object.__setattr__(self, table, items)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    def __eq__(self, other):
        if not isinstance(other, StructureBundle):
            return NotImplemented
        return (
            self.field == other.field
            and self.dim == other.dim
            and self.kind == other.kind
            and dict(self.products) == dict(other.products)
            and dict(self.comuls) == dict(other.comuls)
            and dict(self.maps) == dict(other.maps)
            and dict(self.tensors) == dict(other.tensors)
        )

    __hash__ = None

    # -- accessors ------------------------------------------------------------
    def product(self, name: str) -> BilinearProduct:
        try:
            return self.products[name]
        except KeyError:
            raise MissingComponent(f"product {name!r} missing") from None

    def comul(self, name: str) -> Comultiplication:
        try:
            return self.comuls[name]
        except KeyError:
            raise MissingComponent(f"comultiplication {name!r} missing") from None

    def map(self, name: str | None) -> LinearOperator:
        """Named map; ``None`` means the identity."""
        if name is None:
            return LinearOperator.identity(self.field, self.dim)
        try:
            return self.maps[name]
        except KeyError:
            raise MissingComponent(f"map {name!r} missing") from None

    def map_or_identity(self, name: str) -> LinearOperator:
        return self.maps.get(name) or LinearOperator.identity(self.field, self.dim)

    def tensor(self, name: str) -> Tensor2:
        try:
            return self.tensors[name]
        except KeyError:
            raise MissingComponent(f"tensor {name!r} missing") from None

    def require(self, kind: str | None = None):
        kind = kind or self.kind
        if kind not in KIND_REQUIREMENTS:
            return
        prods, comuls, maps, tensors = KIND_REQUIREMENTS[kind]
        for n in prods:
            self.product(n)
        for n in comuls:
            self.comul(n)
        for n in maps:
            self.map(n)
        for n in tensors:
            self.tensor(n)

    # -- functional updates ---------------------------------------------------
    def with_(self, *, products=None, comuls=None, maps=None, tensors=None, kind=None,
              provenance=None, drop=()) -> StructureBundle:
        """Copy with tables merged (not replaced); names in ``drop`` are removed."""

        def merged(old, new):
            out = {k: v for k, v in old.items() if k not in drop}
            out.update(new or {})
            return out

        return replace(
            self,
            products=merged(self.products, products),
            comuls=merged(self.comuls, comuls),
            maps=merged(self.maps, maps),
            tensors=merged(self.tensors, tensors),
            kind=self.kind if kind is None else kind,
            provenance=self.provenance if provenance is None else tuple(provenance),
        )

    def identity(self) -> LinearOperator:
        return LinearOperator.identity(self.field, self.dim)
