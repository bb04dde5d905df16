"""Harder-Narasimhan combinatorics for bundles and holomorphic pairs.

A sheaf is modelled by a finite lattice of declared subobjects, each carrying
its rank, degree and whether it contains the image of the pair's morphism
phi.  Optimal destabilizers live in the space of eigenvalue vectors
lambda_1 <= ... <= lambda_k attached to a filtration, with the norm
|lambda|^2 = sum r_i lambda_i^2.
"""
from dataclasses import dataclass
from fractions import Fraction
import math

from . import linalg as la
from .cone import InnerProduct, PolyhedralCone, SignedSquare, min_linear_on_sphere_cone
from .errors import (
    AlreadySemistable,
    AmbiguousLattice,
    CapacityExceeded,
    InputError,
    InvalidBreakpoint,
    LengthMismatch,
    MultipleFiltrationsFound,
    NoFiltrationFound,
    NotALattice,
    SemistableType,
    TopologicalConditionViolated,
)

MAX_NODES = 12


@dataclass(frozen=True)
class Node:
    label: str
    rank: int
    degree: int
    contains_phi: bool = False

    @property
    def slope(self):
        return Fraction(self.degree, self.rank)


class SubobjectLattice:
    """Declared subobjects of E with the containment order.

    ``order`` lists generating pairs (A, B) meaning A c B; the reflexive
    transitive closure is taken, and the unique rank-zero node (bottom) and
    the unique node of largest rank (top, i.e. E) are related to everything.
    """

    def __init__(self, nodes, order=()):
        self.nodes = {}
        for n in nodes:
            if not isinstance(n, Node):
                n = Node(str(n["label"]), int(n["rank"]), int(n["degree"]), bool(n.get("contains_phi", False)))
            if n.label in self.nodes:
                raise NotALattice(f"duplicate node {n.label}")
            if n.rank < 0:
                raise NotALattice(f"negative rank at {n.label}")
            self.nodes[n.label] = n
        zero = [n for n in self.nodes.values() if n.rank == 0]
        if len(zero) != 1 or zero[0].degree != 0:
            raise NotALattice("need exactly one rank-zero node, of degree zero")
        self.bottom = zero[0].label
        top_rank = max(n.rank for n in self.nodes.values())
        tops = [n for n in self.nodes.values() if n.rank == top_rank]
        if len(tops) != 1 or top_rank == 0:
            raise NotALattice("need a unique node of maximal positive rank")
        self.top = tops[0].label

        up = {label: {label, self.top} for label in self.nodes}
        up[self.bottom] = set(self.nodes)
        for a, b in order:
            if a not in self.nodes or b not in self.nodes:
                raise NotALattice(f"order mentions unknown node {a if a not in self.nodes else b}")
            up[a].add(b)
        changed = True
        while changed:
            changed = False
            for a in up:
                new = set().union(*(up[b] for b in up[a]))
                if new != up[a]:
                    up[a] = new
                    changed = True
        self._up = {a: frozenset(s) for a, s in up.items()}
        for a in self.nodes:
            for b in self._up[a]:
                if a != b and a in self._up[b]:
                    raise NotALattice(f"{a} and {b} contain each other")
                if a != b and self.nodes[a].rank >= self.nodes[b].rank:
                    raise NotALattice(f"rank does not increase from {a} to {b}")
                if self.nodes[a].contains_phi and not self.nodes[b].contains_phi:
                    raise NotALattice(f"phi-containment is not upward closed at {a} c {b}")

    def __len__(self):
        return len(self.nodes)

    def leq(self, a, b):
        return b in self._up[a]

    def lt(self, a, b):
        return a != b and b in self._up[a]

    def above(self, a):
        """Nodes strictly containing a, in label order."""
        return sorted(b for b in self._up[a] if b != a)

    def between(self, lo, hi):
        return sorted(x for x in self._up[lo] if x not in (lo, hi) and self.lt(x, hi))

    @property
    def rank(self):
        return self.nodes[self.top].rank

    @property
    def degree(self):
        return self.nodes[self.top].degree

    @property
    def slope(self):
        return Fraction(self.degree, self.rank)

    @property
    def phi_zero(self):
        return self.nodes[self.bottom].contains_phi

    def quotient_slope(self, lo, hi):
        a, b = self.nodes[lo], self.nodes[hi]
        return Fraction(b.degree - a.degree, b.rank - a.rank)

    def chain_type(self, chain):
        """(r_i, d_i) of the successive quotients of bottom c chain[0] c ..."""
        prev = self.nodes[self.bottom]
        steps = []
        for label in chain:
            n = self.nodes[label]
            steps.append((n.rank - prev.rank, n.degree - prev.degree))
            prev = n
        return tuple(steps)

    def phi_step(self, chain):
        """1-based index of the first chain member containing phi; 0 when phi = 0."""
        if self.phi_zero:
            return 0
        for i, label in enumerate(chain, start=1):
            if self.nodes[label].contains_phi:
                return i
        return None

    def chains(self, maximal=False):
        """All strict chains bottom c x_1 c ... c top, listed without the bottom."""
        out = []

        def walk(cur, acc):
            if cur == self.top:
                out.append(tuple(acc))
                return
            nxt = self.above(cur)
            if maximal:
                nxt = [y for y in nxt if not any(self.lt(z, y) for z in nxt)]
            for y in nxt:
                walk(y, acc + [y])

        walk(self.bottom, [])
        return out

    def scaled(self, factor):
        """Multiply every degree by a positive integer."""
        nodes = [Node(n.label, n.rank, n.degree * factor, n.contains_phi) for n in self.nodes.values()]
        order = [(a, b) for a in self._up for b in self._up[a] if a != b]
        return SubobjectLattice(nodes, order)


@dataclass(frozen=True)
class HNType:
    """Successive quotient (rank, degree) pairs with strictly decreasing slopes.

    ``exempt`` (0-based) removes one step from the ordering.  Pair types use it
    for the piece carrying phi-bar, whose slope only has to stay at or below tau.
    """

    steps: tuple
    exempt: int | None = None

    def __post_init__(self):
        steps = tuple((int(r), int(d)) for r, d in self.steps)
        if not steps or any(r <= 0 for r, _ in steps):
            raise InputError("steps need positive ranks")
        if self.exempt is not None and not 0 <= self.exempt < len(steps):
            raise InputError(f"exempt step {self.exempt} out of range")
        sl = [Fraction(d, r) for i, (r, d) in enumerate(steps) if i != self.exempt]
        if any(a <= b for a, b in zip(sl, sl[1:])):
            raise InputError("slopes must be strictly decreasing")
        object.__setattr__(self, "steps", steps)

    @property
    def k(self):
        return len(self.steps)

    @property
    def ranks(self):
        return tuple(r for r, _ in self.steps)

    @property
    def degrees(self):
        return tuple(d for _, d in self.steps)

    @property
    def slopes(self):
        return tuple(Fraction(d, r) for r, d in self.steps)

    @property
    def rank(self):
        return sum(self.ranks)

    @property
    def degree(self):
        return sum(self.degrees)

    @property
    def slope(self):
        return Fraction(self.degree, self.rank)


def _steps(t):
    return t.steps if isinstance(t, HNType) else tuple((int(r), int(d)) for r, d in t)


# -- bundles -----------------------------------------------------------------


def quotient_semistable(lat, lo, hi):
    """No declared intermediate subobject beats the slope of hi/lo."""
    mu = lat.quotient_slope(lo, hi)
    return all(lat.quotient_slope(lo, x) <= mu for x in lat.between(lo, hi))


def satisfies_hn(lat, chain):
    """Semistable quotients with strictly decreasing slopes, within the lattice."""
    prev = lat.bottom
    last = None
    for label in chain:
        if not lat.lt(prev, label) or not quotient_semistable(lat, prev, label):
            return False
        mu = lat.quotient_slope(prev, label)
        if last is not None and mu >= last:
            return False
        last, prev = mu, label
    return prev == lat.top


@dataclass(frozen=True)
class Filtration:
    chain: tuple
    type: HNType


def hn_filtration(lat):
    """Greedy HN filtration: maximal quotient slope, ties to maximal rank."""
    cur = lat.bottom
    chain = []
    while cur != lat.top:
        cands = lat.above(cur)
        best = max(lat.quotient_slope(cur, x) for x in cands)
        top = [x for x in cands if lat.quotient_slope(cur, x) == best]
        rmax = max(lat.nodes[x].rank for x in top)
        top = [x for x in top if lat.nodes[x].rank == rmax]
        if len(top) != 1:
            raise AmbiguousLattice(f"several maximal destabilizing subobjects above {cur}: {top}")
        cur = top[0]
        chain.append(cur)
    chain = tuple(chain)
    if not satisfies_hn(lat, chain):
        raise AmbiguousLattice("greedy chain fails the HN conditions; lattice is not faithful")
    return Filtration(chain, HNType(lat.chain_type(chain)))


def hn_chains_brute_force(lat):
    """Every chain satisfying both HN conditions (exhaustive)."""
    if len(lat) > MAX_NODES:
        raise CapacityExceeded(f"{len(lat)} nodes exceed the cap of {MAX_NODES}")
    return [c for c in lat.chains() if satisfies_hn(lat, c)]


def bundle_max_weight(t, lam):
    """sum_i (d_i - mu(E) r_i) lambda_i, for eigenvalues attached to the steps."""
    steps = _steps(t)
    lam = la.vec(lam)
    if len(lam) != len(steps):
        raise LengthMismatch(f"{len(lam)} eigenvalues for {len(steps)} steps")
    rk = sum(r for r, _ in steps)
    mu = Fraction(sum(d for _, d in steps), rk)
    return sum(((d - mu * r) * x for (r, d), x in zip(steps, lam)), Fraction(0))


def telescoped_weight(t, lam, center):
    """lambda_k deg E + sum_{i<k} (lambda_i - lambda_{i+1}) deg E_i - center * Tr(s)."""
    steps = _steps(t)
    lam = la.vec(lam)
    cum, total = [], 0
    for _, d in steps:
        total += d
        cum.append(total)
    k = len(steps)
    trace = sum((r * x for (r, _), x in zip(steps, lam)), Fraction(0))
    val = lam[-1] * cum[-1] + sum(((lam[i] - lam[i + 1]) * cum[i] for i in range(k - 1)), Fraction(0))
    return val - la.frac(center) * trace


def eigen_cone(k, phi_step=None):
    """lambda_1 <= ... <= lambda_k, plus lambda_l <= 0 when phi sits at step l."""
    rows = []
    for i in range(k - 1):
        row = [0] * k
        row[i], row[i + 1] = 1, -1
        rows.append(row)
    if phi_step:
        row = [0] * k
        row[phi_step - 1] = 1
        rows.append(row)
    return PolyhedralCone(k, tuple(rows))


@dataclass(frozen=True)
class GaugeOptimal:
    ray: tuple  # eigenvalue vector, unnormalized
    lambda_inf: SignedSquare
    case: int | None = None
    solver_ray: tuple | None = None
    certificate: object = None

    @property
    def agrees(self):
        return self.solver_ray is not None and la.primitive(self.solver_ray) == la.primitive(self.ray)


def _solve(steps, center, phi_step):
    k = len(steps)
    q = InnerProduct.diagonal([r for r, _ in steps])
    c = tuple(d - center * r for r, d in steps)
    return min_linear_on_sphere_cone(q, eigen_cone(k, phi_step), c)


def bundle_optimal(t):
    """Closed-form optimal eigenvalues mu(E) - mu_i, checked against the cone solver."""
    t = t if isinstance(t, HNType) else HNType(t)
    if t.k < 2:
        raise SemistableType("a one-step type is semistable")
    mu = t.slope
    ray = tuple(mu - s for s in t.slopes)
    sq = sum((r * (s - mu) ** 2 for r, s in zip(t.ranks, t.slopes)), Fraction(0))
    res = _solve(t.steps, mu, None)
    lam = SignedSquare(-1, sq)
    solver = res.ray.direction if res.negative and res.value == lam else None
    return GaugeOptimal(ray, lam, None, solver, res.certificate)


# -- pairs -------------------------------------------------------------------


def pair_semistable(lat, tau):
    """tau-semistability of the pair through its slope conditions.

    For phi = 0 the maximal weight of the central direction is
    deg E - tau rk E, so the pair is semistable only when mu(E) = tau and E
    is semistable.
    """
    tau = la.frac(tau)
    if lat.slope > tau:
        raise TopologicalConditionViolated(f"mu(E) = {lat.slope} exceeds tau = {tau}")
    proper = [n for n in lat.nodes.values() if 0 < n.rank < lat.rank]
    if lat.phi_zero:
        return lat.slope == tau and all(n.slope <= tau for n in proper)
    for n in proper:
        if n.slope > tau:
            return False
        if n.contains_phi and lat.quotient_slope(n.label, lat.top) < tau:
            return False
    return True


@dataclass(frozen=True)
class PairFiltration:
    chain: tuple
    m: int
    case: str  # "a", "b" or "c"
    type: HNType
    phi_step: int


def _interval_pair_semistable(lat, lo, hi, tau):
    for x in lat.between(lo, hi):
        if lat.quotient_slope(lo, x) > tau:
            return False
        if lat.nodes[x].contains_phi and lat.quotient_slope(x, hi) < tau:
            return False
    return True


def pair_candidate(lat, chain, tau):
    """The (m, case) for which ``chain`` is the tau-HN filtration, or None."""
    tau = la.frac(tau)
    full = (lat.bottom,) + tuple(chain)
    if full[-1] != lat.top:
        return None
    slopes = [lat.quotient_slope(a, b) for a, b in zip(full, full[1:])]
    m = sum(1 for s in slopes if s > tau)
    if m == len(slopes) or any(s > tau for s in slopes[m:]):
        return None
    # The phi-carrying piece m+1 is exempt from the ordering against its
    # successor: the optimal eigenvalues only need mu_(m+1) <= tau there.
    outer = slopes[:m] + slopes[m + 1:]
    if any(a <= b for a, b in zip(outer, outer[1:])):
        return None
    strict = not any(a <= b for a, b in zip(slopes, slopes[1:]))
    if m + 1 < len(slopes) and slopes[m + 1] == tau:
        return None
    for i in range(len(slopes)):
        if i != m and not quotient_semistable(lat, full[i], full[i + 1]):
            return None
    lo, hi = full[m], full[m + 1]
    phi_in_lo = lat.nodes[lo].contains_phi
    if phi_in_lo:
        return (m, "c") if strict and quotient_semistable(lat, lo, hi) else None
    if not lat.nodes[hi].contains_phi:
        return None
    mu_next = slopes[m]
    if tau > mu_next and _interval_pair_semistable(lat, lo, hi, tau):
        return (m, "a")
    if tau == mu_next and quotient_semistable(lat, lo, hi):
        return (m, "b")
    return None


def pair_hn(lat, tau):
    """The unique tau-HN filtration of a non-semistable pair, found exhaustively."""
    tau = la.frac(tau)
    if len(lat) > MAX_NODES:
        raise CapacityExceeded(f"{len(lat)} nodes exceed the cap of {MAX_NODES}")
    if pair_semistable(lat, tau):
        raise AlreadySemistable("the pair is tau-semistable")
    found = []
    for chain in lat.chains():
        res = pair_candidate(lat, chain, tau)
        if res is not None:
            found.append((chain, res))
    if not found:
        raise NoFiltrationFound("no chain satisfies the tau-HN conditions")
    if len(found) > 1:
        raise MultipleFiltrationsFound(f"{len(found)} chains satisfy the tau-HN conditions")
    chain, (m, case) = found[0]
    t = HNType(lat.chain_type(chain), m if case == "a" else None)
    return PairFiltration(chain, m, case, t, lat.phi_step(chain))


def pair_max_weight(t, phi_step, tau, lam):
    """+inf if phi does not survive the limit (lambda_l > 0), else sum (d_i - tau r_i) lambda_i."""
    steps = _steps(t)
    lam = la.vec(lam)
    if len(lam) != len(steps):
        raise LengthMismatch(f"{len(lam)} eigenvalues for {len(steps)} steps")
    if phi_step and lam[phi_step - 1] > 0:
        return math.inf
    tau = la.frac(tau)
    return sum(((d - tau * r) * x for (r, d), x in zip(steps, lam)), Fraction(0))


def _check_breakpoint(t, phi_step, m, tau):
    if not 0 <= m < t.k:
        raise InvalidBreakpoint(f"m = {m} outside 0..{t.k - 1}")
    sl = t.slopes
    if any(s <= tau for s in sl[:m]) or any(s > tau for s in sl[m:]):
        raise InvalidBreakpoint(f"slopes {sl} do not cross tau = {tau} at m = {m}")
    if phi_step is not None and not 0 <= phi_step <= m + 1:
        raise InvalidBreakpoint(f"phi at step {phi_step} lies beyond E_(m+1)")
    if t.exempt is not None:
        if t.exempt != m or phi_step != m + 1:
            raise InvalidBreakpoint("only the phi-bar step m+1 may break the slope order")
        if any(s >= tau for s in sl[m + 1:]):
            raise InvalidBreakpoint("steps after the phi-bar step need slope below tau")


def pair_optimal(t, phi_step, m, tau):
    """Closed-form optimal eigenvalues tau - mu_i, with the (m+1)-th clipped to 0
    when phi is not contained in E_m.  Checked against the cone solver."""
    t = t if isinstance(t, HNType) else HNType(t, m if phi_step == m + 1 else None)
    tau = la.frac(tau)
    _check_breakpoint(t, phi_step, m, tau)
    case = 2 if phi_step == m + 1 else 1
    ray = [tau - s for s in t.slopes]
    if case == 2:
        ray[m] = Fraction(0)
    sq = sum((r * (s - tau) ** 2 for i, (r, s) in enumerate(zip(t.ranks, t.slopes)) if case == 1 or i != m), Fraction(0))
    if sq == 0:
        raise AlreadySemistable("every relevant slope equals tau")
    lam = SignedSquare(-1, sq)
    res = _solve(t.steps, tau, phi_step)
    solver = res.ray.direction if res.negative and res.value == lam else None
    return GaugeOptimal(tuple(ray), lam, case, solver, res.certificate)


def phi_multiplier(opt, t, phi_step):
    """KKT multiplier of the lambda_l <= 0 constraint in the solver certificate."""
    row = eigen_cone(len(_steps(t)), phi_step).rows.index(
        tuple(Fraction(int(i == phi_step - 1)) for i in range(len(_steps(t))))
    )
    cert = opt.certificate
    if row not in cert.active_set:
        return None
    return cert.multipliers[cert.active_set.index(row)]


@dataclass(frozen=True)
class Quotient:
    rank: int
    degree: int
    phi_bar: bool = False


def limit_object(t, phi_step=None, m=None):
    """Graded pieces of the limit; phi-bar sits on step m+1 iff phi is not in E_m."""
    steps = _steps(t)
    if phi_step is None or m is None:
        return [Quotient(r, d) for r, d in steps]
    if not 0 <= m < len(steps) or not 0 <= phi_step <= m + 1:
        raise InvalidBreakpoint(f"phi at step {phi_step} with breakpoint {m}")
    return [Quotient(r, d, phi_step == m + 1 and i == m) for i, (r, d) in enumerate(steps)]


# -- global optimum over all filtrations ---------------------------------------


@dataclass(frozen=True)
class GlobalOptimum:
    chain: tuple | None  # coarsened chain read off the optimal eigenvalues
    ray: tuple | None  # eigenvalues on the coarse chain
    lambda_inf: object
    maximal_chain: tuple | None
    agrees: bool  # attained on the (tau-)HN chain with the closed-form value


def _coarsen(chain, ray):
    coarse_chain, coarse_ray = [], []
    for i, (label, x) in enumerate(zip(chain, ray)):
        if i + 1 < len(ray) and ray[i + 1] == x:
            continue
        coarse_chain.append(label)
        coarse_ray.append(x)
    return tuple(coarse_chain), tuple(coarse_ray)


def chain_minimum(lat, chain, tau=None):
    """Minimum of the bundle (tau=None) or pair weight over one chain's eigenvalue cone."""
    steps = lat.chain_type(chain)
    if tau is None:
        return _solve(steps, lat.slope, None)
    return _solve(steps, la.frac(tau), lat.phi_step(chain))


def global_optimal_over_lattice(lat, tau=None):
    """Minimize the maximal weight over every maximal chain's eigenvalue cone.

    ``tau=None`` means the bundle problem.  Ties are broken by chain labels.
    """
    if len(lat) > MAX_NODES:
        raise CapacityExceeded(f"{len(lat)} nodes exceed the cap of {MAX_NODES}")
    pair = tau is not None
    best = None
    for chain in sorted(lat.chains(maximal=True)):
        res = chain_minimum(lat, chain, tau)
        key = res.value
        if best is None or key < best[0]:
            best = (key, chain, res)
    value, chain, res = best
    if not res.negative:
        if pair:
            agrees = pair_semistable(lat, tau)
        else:
            agrees = hn_filtration(lat).chain == (lat.top,)
        return GlobalOptimum(None, None, value, None, agrees)
    coarse_chain, coarse_ray = _coarsen(chain, res.ray.direction)
    if pair:
        f = pair_hn(lat, tau)
        closed = pair_optimal(f.type, f.phi_step, f.m, tau)
    else:
        f = hn_filtration(lat)
        closed = bundle_optimal(f.type)
    agrees = (
        coarse_chain == f.chain
        and value == closed.lambda_inf
        and la.primitive(coarse_ray) == la.primitive(closed.ray)
    )
    return GlobalOptimum(coarse_chain, coarse_ray, value, chain, agrees)
