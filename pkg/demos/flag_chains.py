"""Chains V1 -> V2 -> V: strata are rank tuples, limits are injective.

Run:  python3 demos/flag_chains.py
"""
from destab.gl import ChainProblem, chain_invariants, chain_limit, chain_semistable

f1 = ((1, 0), (0, 0), (1, 0))  # V1 = Q^2 -> V2 = Q^3, kills e2
f2 = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0))  # V2 -> V = Q^4, injective
p = ChainProblem((f1, f2), (1, 2))

inv = chain_invariants(p)
print("dims (d1, d2, d):", p.dims, " monotone:", p.monotone)
print("ranks of the suffix compositions rho:", inv.rho)
print("kernel dims of the compositions:", [len(k) for k in inv.kernels])
print("semistable (every map injective):", chain_semistable(p))

lim = chain_limit(p)
print("\nlimit on the quotients V_i / E_i, dims", lim.quotient_dims)
for i, m in enumerate(lim.maps, start=1):
    print(f"  induced f{i}:", [[str(x) for x in row] for row in m])
print("every induced map injective:", lim.stable)
print("flag W_1 c W_2 in V:", [[[str(x) for x in b] for b in w] for w in lim.flag])
