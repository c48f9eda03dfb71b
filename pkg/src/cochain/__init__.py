"""Hochschild, Shukla and bicomplex cohomology of finite algebras.

Modules: exactmod (exact linear algebra), algebra (structure constants),
hochschild (bar complex), extensions (cocycle dictionaries), chainalg
(chain algebras and resolutions), shukla, bicomplex, qconstruction, cli.
"""

from .algebra import Bimodule, StructureAlgebra, parse_algebra, parse_bimodule
from .exactmod import IntegersMod, PrimeField, Z
from .hochschild import hochschild_cohomology
from .shukla import ShuklaQuery, shukla_cohomology

__version__ = "0.1.0"

__all__ = [
    "Bimodule",
    "StructureAlgebra",
    "parse_algebra",
    "parse_bimodule",
    "IntegersMod",
    "PrimeField",
    "Z",
    "hochschild_cohomology",
    "ShuklaQuery",
    "shukla_cohomology",
]
