"""Exact computations with BiHom-type algebraic structures over Q and GF(p).

Checkers with witnesses for BiHom-associative, -coassociative, -commutative,
left pre-Lie, Novikov, Leibniz/Lie, dendriform and Novikov-Poisson structures;
the constructions relating them (Yau twists, Gel'fand-Dorfman products,
infinitesimal BiHom-bialgebras, r-matrices and Rota-Baxter operators); and small
exhaustive searches for their ingredients.
"""

from .bundle import StructureBundle
from .checkers import CheckReport, Violation
from .errors import BihomError
from .field import GF, Q, FieldDescriptor, Scalar, parse_field
from .fileformat import dumps_bundle, load_bundle, loads_bundle, save_bundle
from .multilinear import BilinearProduct, Comultiplication, LinearOperator, Tensor2, Tensor3

__version__ = "0.1.0"

__all__ = [
    "StructureBundle",
    "CheckReport",
    "Violation",
    "BihomError",
    "GF",
    "Q",
    "FieldDescriptor",
    "Scalar",
    "parse_field",
    "load_bundle",
    "loads_bundle",
    "save_bundle",
    "dumps_bundle",
    "BilinearProduct",
    "Comultiplication",
    "LinearOperator",
    "Tensor2",
    "Tensor3",
]
