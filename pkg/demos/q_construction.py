"""The Q-construction of a finite abelian group through degree 2."""

from cochain.algebra import cyclic_ring
from cochain.qconstruction import build_q, gamma, q_low_homology, v_complex_compare

for n in (2, 3, 4):
    Q = build_q(n)
    h0, h1 = q_low_homology(n)
    g = gamma(Q, 1)
    cycle = not any(sum(a * b for a, b in zip(row, g)) for row in Q.d2)
    print(f"Z/{n}: ranks {Q.ranks}, H_0 = {h0.divisors}, H_1 = {h1.divisors}, "
          f"gamma(1) has {sum(1 for x in g if x)} nonzero coordinates, cycle: {cycle}")

for n in (2, 4):
    R = cyclic_ring(n)
    rep = v_complex_compare(R, R.regular_bimodule(), 2)
    print(f"V_*(Z/{n}) vs Shukla in degrees <= 2: {'equal' if rep.all_equal else 'different'}")
