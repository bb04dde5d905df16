"""Linear torus actions: maximal weights, optimal destabilizers and limits.

A point v = sum_chi v_chi of a torus representation is described only by the
squared amplitudes |v_chi|^2; the maximal weight depends on nothing but the
support, and the t = 0 pairing on nothing but the amplitudes.  The optimal
destabilizing direction is the minimizer of <tau, z> over unit z in the cone
{z : <chi, z> <= 0 for chi in supp v}.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import math

from . import linalg as la
from .cone import (
    InnerProduct,
    KKTCertificate,
    PolyhedralCone,
    Ray,
    SignedSquare,
    min_linear_on_sphere_cone,
)
from .errors import (
    CapacityExceeded,
    DimensionMismatch,
    DivergentFlow,
    InputError,
    NotDestabilizable,
    ZeroRay,
)

MAX_WEIGHTS = 16


@dataclass(frozen=True)
class WeightSystem:
    """Labelled, pairwise distinct weight covectors of a torus of rank ``dim``."""

    dim: int
    weights: tuple  # ((label, chi), ...)

    def __post_init__(self):
        ws = tuple((str(label), la.vec(chi)) for label, chi in self.weights)
        labels = [label for label, _ in ws]
        if len(set(labels)) != len(labels):
            raise InputError("weight labels must be unique")
        chis = [chi for _, chi in ws]
        if len(set(chis)) != len(chis):
            raise InputError("weights must be pairwise distinct")
        for label, chi in ws:
            if len(chi) != self.dim:
                raise DimensionMismatch(f"weight {label} has length {len(chi)}, torus rank {self.dim}")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def from_vectors(cls, chis, prefix="w"):
        chis = [la.vec(c) for c in chis]
        return cls(len(chis[0]), tuple((f"{prefix}{i}", c) for i, c in enumerate(chis)))

    @property
    def labels(self):
        return tuple(label for label, _ in self.weights)

    def __getitem__(self, label):
        for lab, chi in self.weights:
            if lab == label:
                return chi
        raise KeyError(label)


@dataclass(frozen=True)
class SupportVector:
    """Map label -> |v_chi|^2.  Zero amplitudes are dropped."""

    components: dict = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for label, amp in dict(self.components).items():
            amp = la.frac(amp)
            if amp < 0:
                raise InputError(f"negative amplitude for {label}")
            if amp:
                comps[str(label)] = amp
        object.__setattr__(self, "components", comps)

    @classmethod
    def on(cls, labels, amp=1):
        return cls({label: amp for label in labels})

    @property
    def support(self):
        return frozenset(self.components)

    def __hash__(self):
        return hash(tuple(sorted(self.components.items())))


@dataclass(frozen=True)
class OptimalClass:
    ray: Ray
    lambda_inf: SignedSquare
    certificate: KKTCertificate


@dataclass(frozen=True)
class Semistable:
    """Verdict for a point with lambda >= 0 in every direction.

    ``value`` is the minimum over the unit sphere (a SignedSquare >= 0) or
    ``math.inf`` when no direction has finite weight.
    """

    value: object


@dataclass(frozen=True)
class InducedProblem:
    weights: WeightSystem
    tau_prime: tuple
    fixed_ray: Ray


@dataclass(frozen=True)
class LimitReport:
    optimal: OptimalClass
    limit: SupportVector
    induced: InducedProblem
    reduced: object  # Semistable or OptimalClass for the induced problem
    orthogonality: Fraction  # <tau', xi>, zero exactly

    @property
    def semistable(self):
        return isinstance(self.reduced, Semistable) and self.orthogonality == 0


@dataclass(frozen=True)
class Stratum:
    ray: Ray | None  # None marks the semistable stratum
    lambda_inf: object  # SignedSquare, or None for the semistable stratum
    supports: tuple


def _metric(q, n):
    if q is None:
        return InnerProduct.identity(n)
    if not isinstance(q, InnerProduct):
        q = InnerProduct(q)
    if q.dim != n:
        raise DimensionMismatch(f"metric of dimension {q.dim} for torus of rank {n}")
    return q


def _tau(ws, tau):
    tau = la.vec(tau)
    if len(tau) != ws.dim:
        raise DimensionMismatch(f"tau has length {len(tau)}, torus rank {ws.dim}")
    return tau


def _supported(ws, v):
    unknown = v.support - set(ws.labels)
    if unknown:
        raise InputError(f"unknown weight labels {sorted(unknown)}")
    return [(label, chi) for label, chi in ws.weights if label in v.support]


def destabilizing_cone(ws, v):
    return PolyhedralCone(ws.dim, tuple(chi for _, chi in _supported(ws, v)))


def maximal_weight(ws, tau, q, v, s):
    """lim_{t->oo} of the moment pairing along exp(ts)v: +inf or <tau, s>."""
    tau = _tau(ws, tau)
    s = la.vec(s)
    if len(s) != ws.dim:
        raise DimensionMismatch("direction has the wrong length")
    if any(la.dot(chi, s) > 0 for _, chi in _supported(ws, v)):
        return math.inf
    return la.dot(tau, s)


def moment_covector(ws, tau, v):
    """(1/2) sum |v_chi|^2 chi + tau, so that the t = 0 pairing is <., s>."""
    tau = _tau(ws, tau)
    m = tau
    for label, chi in _supported(ws, v):
        m = la.add(m, la.scale(v.components[label] / 2, chi))
    return m


def initial_pairing(ws, tau, q, v, s):
    """The weight at t = 0, a lower bound for maximal_weight."""
    s = la.vec(s)
    if len(s) != ws.dim:
        raise DimensionMismatch("direction has the wrong length")
    return la.dot(moment_covector(ws, tau, v), s)


def initial_pairing_bound(ws, tau, q, v):
    """Exact min over unit s of the t = 0 pairing: -|Q^{-1} m|_Q."""
    q = _metric(q, ws.dim)
    m = moment_covector(ws, tau, v)
    return SignedSquare.negative_root(q.norm_sq(q.raise_(m)))


def optimal_destabilizing(ws, tau, q, v):
    q = _metric(q, ws.dim)
    tau = _tau(ws, tau)
    res = min_linear_on_sphere_cone(q, destabilizing_cone(ws, v), tau)
    if not res.negative:
        return Semistable(res.value)
    return OptimalClass(res.ray, res.value, res.certificate)


def is_semistable(ws, tau, q, v):
    return isinstance(optimal_destabilizing(ws, tau, q, v), Semistable)


def limit_point(ws, v, ray):
    """Limit of exp(t xi) v: keep the components fixed by xi, drop the decaying ones."""
    p = ray.direction if isinstance(ray, Ray) else la.vec(ray)
    kept = {}
    for label, chi in _supported(ws, v):
        w = la.dot(chi, p)
        if w > 0:
            raise DivergentFlow(f"component {label} grows along the ray")
        if w == 0:
            kept[label] = v.components[label]
    return SupportVector(kept)


def induced_problem(ws, tau, q, optimal):
    """Weights fixed by xi and the shifted parameter tau' = tau - (<tau,p>/|p|^2) Q p.

    The irrational normalisation of xi cancels, so tau' is rational.
    """
    q = _metric(q, ws.dim)
    tau = _tau(ws, tau)
    ray = optimal.ray if isinstance(optimal, OptimalClass) else optimal
    p = ray.direction
    if ray.is_zero:
        raise ZeroRay("induced problem needs a nonzero ray")
    kept = tuple((label, chi) for label, chi in ws.weights if la.dot(chi, p) == 0)
    tau_prime = la.sub(tau, la.scale(la.dot(tau, p) / q.norm_sq(p), q.lower(p)))
    return InducedProblem(WeightSystem(ws.dim, kept), tau_prime, ray)


def verify_limit_semistable(ws, tau, q, v):
    """Run the optimal flow to its limit and test the limit for the induced problem."""
    q = _metric(q, ws.dim)
    opt = optimal_destabilizing(ws, tau, q, v)
    if isinstance(opt, Semistable):
        raise NotDestabilizable("point is semistable")
    v0 = limit_point(ws, v, opt.ray)
    ind = induced_problem(ws, tau, q, opt)
    reduced = optimal_destabilizing(ind.weights, ind.tau_prime, q, v0)
    return LimitReport(opt, v0, ind, reduced, la.dot(ind.tau_prime, opt.ray.direction))


def enumerate_strata(ws, tau, q=None):
    """Group all 2^|R| supports by their optimal class.

    Sorted with the semistable stratum first, then by lambda_inf descending
    and primitive ray.
    """
    if len(ws.weights) > MAX_WEIGHTS:
        raise CapacityExceeded(f"{len(ws.weights)} weights exceed the cap of {MAX_WEIGHTS}")
    q = _metric(q, ws.dim)
    tau = _tau(ws, tau)
    groups = {}
    values = {}
    labels = ws.labels
    for size in range(len(labels) + 1):
        for supp in combinations(labels, size):
            opt = optimal_destabilizing(ws, tau, q, SupportVector.on(supp))
            key = None if isinstance(opt, Semistable) else opt.ray
            groups.setdefault(key, []).append(frozenset(supp))
            if key is not None:
                values[key] = opt.lambda_inf
    strata = [Stratum(key, values.get(key), tuple(sups)) for key, sups in groups.items()]

    # two stable passes: primitive ray, then exact lambda_inf descending
    strata.sort(key=lambda st: () if st.ray is None else st.ray.primitive)
    strata.sort(key=lambda st: (st.ray is not None, _Desc(st.lambda_inf) if st.ray else 0))
    return strata


class _Desc:
    """Sort key reversing the exact SignedSquare order."""

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return other.v < self.v

    def __eq__(self, other):
        return self.v == other.v


def hermitian_class(s, q=None):
    """Distinct eigenvalues in increasing order with cumulative flag dimensions.

    For a torus element the coordinates are the eigenvalues; the flag is
    V_1 c V_2 c ... with V_i the sum of the first i eigenspaces.
    """
    s = la.vec(s)
    vals = sorted(set(s))
    dims = []
    total = 0
    for lam in vals:
        total += sum(1 for x in s if x == lam)
        dims.append(total)
    return tuple(vals), tuple(dims)
