"""Hochschild and Shukla cohomology of Z/n over Z side by side.

Z/n is not projective over Z, so the two theories differ: Hochschild
cohomology sees only Z/n in degree 0, while Shukla cohomology is periodic.
The comparison map is an isomorphism in degrees 0 and 1 and injective in 2.
"""

from cochain.algebra import cyclic_ring
from cochain.hochschild import hochschild_cohomology
from cochain.shukla import ShuklaQuery, comparison_map, shukla_cohomology


def show(divs):
    return " ".join("0" if not d else "+".join(f"Z/{o}" if o else "Z" for o in d) for d in divs)


for n in (2, 3, 4):
    R = cyclic_ring(n)
    M = R.regular_bimodule()
    h = hochschild_cohomology(R, M, 6, representatives=False).divisors()
    s = shukla_cohomology(ShuklaQuery(R, M, 6)).divisors()
    print(f"R = M = Z/{n}")
    print(f"  Hochschild  {show(h)}")
    print(f"  Shukla      {show(s)}")
    for rep in comparison_map(R, M, 2):
        kind = "iso" if rep.isomorphism else ("injective" if rep.injective else "not injective")
        print(f"  degree {rep.degree}: {show([rep.source])} -> {show([rep.target])}  {kind}")
