"""Shukla cohomology of F_p over Z/p^2 with coefficients in F_p.

The ranks agree with the Poincare series of an exterior algebra on the
odd generators times a polynomial algebra on the even ones.
"""

from cochain.algebra import StructureAlgebra
from cochain.exactmod import IntegersMod
from cochain.shukla import ShuklaQuery, shukla_cohomology

N = 6

for p in (2, 3):
    R = StructureAlgebra(IntegersMod(p * p), ["1"], [[[1]]], [1], [p])
    res = shukla_cohomology(ShuklaQuery(R, R.regular_bimodule(), N))
    print(f"p = {p}: dim_F{p} Shukla^i for i = 0..{N}: {res.dims()}  ({res.strategy})")
