"""A torus action from instability to the semistable limit, in exact arithmetic.

Run:  python3 demos/torus_walkthrough.py
"""
from destab.cone import InnerProduct
from destab.torus import (
    SupportVector,
    WeightSystem,
    enumerate_strata,
    initial_pairing_bound,
    optimal_destabilizing,
    verify_limit_semistable,
)


def show(title):
    print(f"\n== {title}")


ws = WeightSystem(3, (("a", (1, 0, -1)), ("b", (0, 1, -1)), ("c", (-1, -1, 2))))
tau = ("1/2", -1, 1)
q = InnerProduct(((2, 1, 0), (1, 2, 0), (0, 0, 1)))
v = SupportVector({"a": 1, "b": "3/2"})

show("the point")
print("weights:", {label: [str(x) for x in chi] for label, chi in ws.weights})
print("support:", sorted(v.support), " tau:", tau)

show("optimal destabilizing direction")
opt = optimal_destabilizing(ws, tau, q, v)
print("primitive ray:", opt.ray.primitive)
print(f"lambda_inf = {float(opt.lambda_inf):.6f}  (exactly -sqrt({opt.lambda_inf.square}))")
print("KKT multipliers on the tight weights:", [str(m) for m in opt.certificate.multipliers])
print(f"lower bound from the t = 0 pairing: {float(initial_pairing_bound(ws, tau, q, v)):.6f}")

show("flowing to the limit")
rep = verify_limit_semistable(ws, tau, q, v)
print("surviving components:", sorted(rep.limit.support))
print("induced weights:", rep.induced.weights.labels)
print("shifted parameter tau':", [str(x) for x in rep.induced.tau_prime])
print("<tau', xi> =", rep.orthogonality, " limit semistable:", rep.semistable)

show("the stratification of all 8 supports")
for st in enumerate_strata(ws, tau, q):
    label = "semistable" if st.ray is None else f"ray {st.ray.primitive}, lambda^2 = {st.lambda_inf.square}"
    print(f"{label:40s}", sorted(sorted(s) for s in st.supports))
