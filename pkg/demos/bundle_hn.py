"""Harder-Narasimhan filtration of a toy bundle and its optimal destabilizer.

E = A + B + C is modelled by the lattice of sums of its line summands.
Run:  python3 demos/bundle_hn.py
"""
import itertools

from destab.gauge import (
    Node,
    SubobjectLattice,
    bundle_optimal,
    chain_minimum,
    global_optimal_over_lattice,
    hn_filtration,
    limit_object,
)

summands = {"A": (1, 2), "B": (1, 0), "C": (1, -1)}
nodes, order = [Node("0", 0, 0)], []
for k in range(1, 4):
    for combo in itertools.combinations("ABC", k):
        label = "".join(combo) if k < 3 else "E"
        nodes.append(Node(label, k, sum(summands[x][1] for x in combo)))
        for x in combo:
            if k > 1:
                sub = "".join(y for y in combo if y != x)
                order.append((sub, label))
lat = SubobjectLattice(nodes, order)

f = hn_filtration(lat)
print("HN filtration:", " c ".join(f.chain), " type:", f.type.steps)

opt = bundle_optimal(f.type)
print("eigenvalues mu(E) - mu_i:", [str(x) for x in opt.ray])
print(f"lambda_inf = -sqrt({opt.lambda_inf.square}) = {float(opt.lambda_inf):.6f}; cone solver agrees: {opt.agrees}")

print("\nevery maximal chain, minimized over its eigenvalue cone:")
for chain in sorted(lat.chains(maximal=True)):
    res = chain_minimum(lat, chain)
    print(f"  {' c '.join(chain):12s} {float(res.value):+.6f}")
g = global_optimal_over_lattice(lat)
print("global minimum sits on the HN chain:", g.agrees)

print("\nlimit: the graded object", [(q.rank, q.degree) for q in limit_object(f.type)])
