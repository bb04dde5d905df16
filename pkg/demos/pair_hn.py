"""tau-HN filtrations of holomorphic pairs (E, phi) as tau varies.

E = A + B with A of rank 3 and degree 0, B of rank 2 and degree -2, and
phi landing in B.  For positive tau the optimal filtration is B c E, whose
quotient slopes increase: the phi-bar piece sits below its successor.
Run:  python3 demos/pair_hn.py
"""
from fractions import Fraction

from destab.gauge import (
    Node,
    SubobjectLattice,
    global_optimal_over_lattice,
    limit_object,
    pair_hn,
    pair_optimal,
    pair_semistable,
    phi_multiplier,
)

lat = SubobjectLattice(
    [Node("0", 0, 0), Node("A", 3, 0), Node("B", 2, -2, True), Node("E", 5, -2, True)],
    [],
)

for tau in (Fraction(-2, 5), Fraction(0), Fraction(1, 2), Fraction(7)):
    print(f"\ntau = {tau}")
    if pair_semistable(lat, tau):
        print("  tau-semistable")
        continue
    f = pair_hn(lat, tau)
    opt = pair_optimal(f.type, f.phi_step, f.m, tau)
    print(f"  filtration {' c '.join(f.chain)}, m = {f.m}, case ({f.case}), steps {f.type.steps}")
    print(f"  eigenvalues {[str(x) for x in opt.ray]}, lambda_inf = {float(opt.lambda_inf):.6f}")
    if opt.case == 2:
        print(f"  phi constraint multiplier r(tau - mu) = {phi_multiplier(opt, f.type, f.phi_step)}")
    print("  limit:", [(q.rank, q.degree, "phi-bar" if q.phi_bar else "") for q in limit_object(f.type, f.phi_step, f.m)])
    print("  exhaustive search over all chains agrees:", global_optimal_over_lattice(lat, tau).agrees)
