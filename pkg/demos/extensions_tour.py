"""Extensions and low-degree Hochschild classes over the dual numbers.

A 2-cocycle gives a square-zero extension and back; a 3-cocycle gives a
crossed extension and back; and a crossed extension has a boundary
extension exactly when its class vanishes.
"""

import random

from cochain.algebra import dual_numbers, trivial_bimodule
from cochain.errors import NoSolution
from cochain.exactmod import PrimeField
from cochain.extensions import (
    crossed_from_3cocycle,
    crossed_to_3cocycle,
    delta_extension,
    extension_to_2cocycle,
    semidirect_from_2cocycle,
)
from cochain.hochschild import HochschildComplex, hochschild_cohomology

F2 = PrimeField(2)
D = dual_numbers(F2)
M = trivial_bimodule(D, [1, 0])
res = hochschild_cohomology(D, M, 3)
print("HH^*(F2[x]/x^2, F2), degrees 0..3:", res.dims())

f = res.representatives[2][0]
E = semidirect_from_2cocycle(D, M, f)
g = extension_to_2cocycle(E)
HC = HochschildComplex(D, M, 2, normalized=False)
same = HC.complex.group(2).is_coboundary(HC.to_vector(f - g))
print(f"2-cocycle -> extension of dim {E.E.dim} -> 2-cocycle, same class: {same}")

c = res.representatives[3][0]
Y = crossed_from_3cocycle(D, M, c)
c2 = crossed_to_3cocycle(Y, rng=random.Random(1))
HC3 = HochschildComplex(D, M, 3, normalized=False)
same = HC3.complex.group(3).is_coboundary(HC3.to_vector(c - c2))
print(f"3-cocycle -> crossed extension (C1 dim {Y.C1.dim}, C0 dim {Y.C0.dim}) -> 3-cocycle, same class: {same}")

try:
    delta_extension(Y)
    print("boundary extension found (unexpected)")
except NoSolution:
    print("nonzero class: no boundary extension exists")

Y0 = crossed_from_3cocycle(D, M, c - c)
B = delta_extension(Y0)
print(f"zero class: boundary extension S of dim {B.S.dim}")
