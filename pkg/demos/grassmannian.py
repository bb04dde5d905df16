"""Maps V -> V0: the kernel decides everything.

Run:  python3 demos/grassmannian.py
"""
from destab.gl import HomProblem, hom_cross_check, hom_optimal, hom_strata_by_class

f = ((1, 2, 3, 0), (2, 4, 6, 0), (0, 0, 0, 1))
p = HomProblem(f, "3/2")
opt = hom_optimal(p)

print("f =")
for row in f:
    print("   ", row)
print(f"\ndim ker f = {opt.kernel_dim}, so lambda_inf = -t*sqrt(k) = {float(opt.lambda_inf):.6f}")
print("optimal direction -P (P the orthogonal projector onto ker f):")
for row in opt.ray:
    print("   ", [str(x) for x in row])

print("\nthe same answer from the diagonal torus in a kernel-adapted basis:", hom_cross_check(p))

print("\nstrata of a 4-dimensional source, merged by eigenvalue pattern:")
for k, lam in sorted(hom_strata_by_class(4, p.t).items()):
    print(f"  kernel dim {k}:", "semistable" if lam is None else f"lambda^2 = {lam.square}")
