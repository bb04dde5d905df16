"""Hom(V, V0) under GL(V) and chains of maps under products of GL(V_i).

Both problems are solved in closed form: a morphism is unstable exactly when
it has a kernel, its optimal destabilizer is minus the projector onto the
kernel, and chains are stratified by the ranks of their suffix compositions.
The Grassmannian answer is cross-checked against the torus solver in a basis
adapted to the kernel.
"""
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .cone import InnerProduct, SignedSquare
from .errors import DimensionMismatch, InputError, NotDestabilizable
from .torus import OptimalClass, SupportVector, WeightSystem, enumerate_strata, hermitian_class, optimal_destabilizing


def _matrix(rows, cols, entries):
    m = la.mat(entries)
    if len(m) != rows or any(len(r) != cols for r in m):
        raise DimensionMismatch(f"expected a {rows}x{cols} matrix")
    return m


@dataclass(frozen=True)
class HomProblem:
    """f : V -> V0 as an r0 x r matrix, stability parameter t > 0."""

    f: tuple
    t: Fraction

    def __post_init__(self):
        f = la.mat(self.f)
        if not f or not f[0] or any(len(r) != len(f[0]) for r in f):
            raise DimensionMismatch("f must be a nonempty rectangular matrix")
        t = la.frac(self.t)
        if t <= 0:
            raise InputError("t must be positive")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "t", t)

    @property
    def r(self):
        return len(self.f[0])

    @property
    def r0(self):
        return len(self.f)


@dataclass(frozen=True)
class HomOptimal:
    kernel_basis: tuple
    ray: tuple  # -P as a matrix, P the orthogonal projector onto ker f
    lambda_inf: SignedSquare

    @property
    def kernel_dim(self):
        return len(self.kernel_basis)


def kernel_projector(basis, n):
    """Orthogonal projector K (K^T K)^{-1} K^T onto span(basis); rational."""
    if not basis:
        return tuple(la.zeros(n) for _ in range(n))
    k = la.transpose(basis)  # n x dim
    gram_inv = la.inverse(la.matmul(basis, k))
    return la.matmul(la.matmul(k, gram_inv), basis)


def hom_optimal(p):
    """Optimal destabilizer of f: -pr_ker f, with lambda_inf = -t sqrt(dim ker f).

    Returns None when ker f = 0 (f is semistable, in fact stable).
    """
    kernel = la.nullspace(p.f, p.r)
    if not kernel:
        return None
    proj = kernel_projector(kernel, p.r)
    ray = tuple(tuple(-x for x in row) for row in proj)
    return HomOptimal(kernel, ray, SignedSquare(-1, p.t * p.t * len(kernel)))


def adapted_basis(p):
    """Columns: a basis of the row space (ker f)^perp followed by a kernel basis."""
    kernel = la.nullspace(p.f, p.r)
    comp = la.row_space(p.f)
    return comp, kernel


def hom_torus_instance(p):
    """The diagonal torus of GL(V) in the adapted basis.

    Column j of f scales by exp(-t s_j), so it carries weight -e_j; the
    columns outside the kernel block are the support.
    """
    comp, kernel = adapted_basis(p)
    r = p.r
    weights = tuple((f"c{j}", tuple(-Fraction(int(i == j)) for i in range(r))) for j in range(r))
    ws = WeightSystem(r, weights)
    support = SupportVector.on([f"c{j}" for j in range(len(comp))])
    return ws, (p.t,) * r, InnerProduct.identity(r), support, comp + kernel


def hom_cross_check(p):
    """Solve the adapted torus problem and compare with the closed form exactly."""
    opt = hom_optimal(p)
    if opt is None:
        raise NotDestabilizable("ker f = 0")
    ws, tau, q, v, basis = hom_torus_instance(p)
    res = optimal_destabilizing(ws, tau, q, v)
    if not isinstance(res, OptimalClass):
        return False
    k, r = opt.kernel_dim, p.r
    expected = (0,) * (r - k) + (-1,) * k
    if res.ray.primitive != expected or res.lambda_inf != opt.lambda_inf:
        return False
    # Transport diag(ray) back to the original basis: B diag(z) B^{-1}.
    b = la.transpose(basis)
    z = res.ray.direction
    scale = Fraction(1) / -z[-1]  # normalise the kernel eigenvalue to -1
    diag = tuple(tuple(z[i] * scale if i == j else Fraction(0) for j in range(r)) for i in range(r))
    back = la.matmul(la.matmul(b, diag), la.inverse(b))
    return back == opt.ray


def hom_stratum(p):
    """Rank of f and a canonical label of its kernel; the Shatz stratum datum."""
    kernel = la.nullspace(p.f, p.r)
    return p.r - len(kernel), la.canonical_subspace(kernel, p.r)


def hom_strata_by_class(r, t=1):
    """Torus strata of the adapted weight system, merged by Hermitian class.

    Returns {kernel_dim: lambda_inf or None} - one entry per k in 0..r.
    """
    weights = tuple((f"c{j}", tuple(-Fraction(int(i == j)) for i in range(r))) for j in range(r))
    ws = WeightSystem(r, weights)
    merged = {}
    for st in enumerate_strata(ws, (la.frac(t),) * r):
        if st.ray is None:
            merged.setdefault(0, None)
            continue
        vals, dims = hermitian_class(st.ray.primitive)
        k = dims[0] if vals[0] < 0 else 0
        merged.setdefault(k, st.lambda_inf)
        if merged[k] != st.lambda_inf:
            raise AssertionError("conjugate strata must share lambda_inf")
    return merged


@dataclass(frozen=True)
class ChainProblem:
    """f_i : V_i -> V_{i+1}, i = 1..m, with V_{m+1} = V; parameters t_i > 0."""

    maps: tuple
    t: tuple

    def __post_init__(self):
        maps = tuple(la.mat(f) for f in self.maps)
        if not maps:
            raise InputError("a chain needs at least one map")
        t = la.vec(self.t)
        if len(t) != len(maps):
            raise DimensionMismatch("one parameter per map")
        if any(x <= 0 for x in t):
            raise InputError("all t_i must be positive")
        for i, f in enumerate(maps):
            if not f or not f[0] or any(len(r) != len(f[0]) for r in f):
                raise DimensionMismatch(f"map {i + 1} is not a rectangular matrix")
            if i + 1 < len(maps) and len(maps[i + 1][0]) != len(f):
                raise DimensionMismatch(f"maps {i + 1} and {i + 2} are not composable")
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "t", t)

    @property
    def dims(self):
        """(d_1, ..., d_m, d)."""
        return tuple(len(f[0]) for f in self.maps) + (len(self.maps[-1]),)

    @property
    def monotone(self):
        """d_1 <= ... <= d_m <= d, so that the flag variety is nonempty."""
        d = self.dims
        return all(a <= b for a, b in zip(d, d[1:]))


def suffix_compositions(p):
    """f_m o ... o f_i for i = 1..m, as matrices V_i -> V."""
    out = [None] * len(p.maps)
    acc = None
    for i in range(len(p.maps) - 1, -1, -1):
        acc = p.maps[i] if acc is None else la.matmul(acc, p.maps[i])
        out[i] = acc
    return out


@dataclass(frozen=True)
class ChainInvariants:
    images: tuple  # canonical bases of W_i in V
    rho: tuple
    kernels: tuple  # bases of E_i in V_i


def chain_invariants(p):
    comps = suffix_compositions(p)
    images, rho, kernels = [], [], []
    d = p.dims[-1]
    for c in comps:
        col = la.column_space(c)
        images.append(la.canonical_subspace(col, d))
        rho.append(len(col))
        kernels.append(la.nullspace(c, len(c[0])))
    return ChainInvariants(tuple(images), tuple(rho), tuple(kernels))


def chain_semistable(p):
    """Semistable (equivalently stable) iff every f_i is injective."""
    return all(not la.nullspace(f, len(f[0])) for f in p.maps)


@dataclass(frozen=True)
class ChainLimit:
    maps: tuple  # induced f̄_i : V_i/E_i -> V_{i+1}/E_{i+1}, in complement bases
    quotient_dims: tuple
    stable: bool
    flag: tuple  # canonical bases of W_i(f)
    rho: tuple


def _quotient_coords(complement, kernel, v):
    """Coordinates of v mod span(kernel) in the basis ``complement``."""
    basis = tuple(complement) + tuple(kernel)
    x = la.solve_consistent(la.transpose(basis), v)
    return x[: len(complement)]


def chain_limit(p):
    """The limit point f_0 = (f̄_1, ..., f̄_m) on the quotients V_i/E_i."""
    if chain_semistable(p):
        raise NotDestabilizable("all maps are injective")
    inv = chain_invariants(p)
    comps = suffix_compositions(p)
    complements = [la.row_space(c) for c in comps]
    d = p.dims[-1]
    complements.append(la.identity(d))
    kernels = list(inv.kernels) + [()]
    induced = []
    for i, f in enumerate(p.maps):
        cols = [_quotient_coords(complements[i + 1], kernels[i + 1], la.matvec(f, b)) for b in complements[i]]
        induced.append(la.transpose(cols) if cols else ())
    stable = all(
        la.rank(m) == len(complements[i]) if complements[i] else True for i, m in enumerate(induced)
    )
    return ChainLimit(
        tuple(induced), tuple(len(c) for c in complements[:-1]), stable, inv.images, inv.rho
    )
