"""The bicomplex over the ground algebra K = F2[eps]/eps^2 with R = M = F2.

Its total cohomology agrees with the Der complex of a killing-cycles
resolution over K, and the map alpha from relative Hochschild cohomology
is an isomorphism in degrees 0 and 1 but not in degree 2.
"""

from cochain.algebra import dual_numbers, ground_algebra
from cochain.bicomplex import BicomplexSpec, alpha_map, total_cohomology
from cochain.chainalg import der_cohomology, killing_cycles_resolution
from cochain.exactmod import PrimeField

F2 = PrimeField(2)
K = dual_numbers(F2)
R = ground_algebra(F2)
M = R.regular_bimodule()
spec = BicomplexSpec(K, R, M, [[1, 0]], 4)

print("bicomplex total cohomology:", total_cohomology(spec).dims())
Q, _ = killing_cycles_resolution(R, 4, ground=(K, [[1, 0]]))
print("Der of killing cycles:     ", der_cohomology(Q, M, 4).dims())
for n, rep in enumerate(alpha_map(BicomplexSpec(K, R, M, [[1, 0]], 3))):
    print(f"alpha in degree {n}: rank {rep.rank}, {rep.source_dim} -> {rep.target_dim}")
