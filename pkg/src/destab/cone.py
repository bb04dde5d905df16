"""Exact projection onto polyhedral cones and linear minimization on cone∩sphere.

A cone is given in facet form ``{z : <a_j, z> <= 0}``; the metric is an
arbitrary positive definite Gram matrix ``Q``.  The minimum of a linear form
``<c, z>`` over unit vectors of the cone is obtained from the Moreau identity

    min_{z in C, |z|_Q = 1} <c, z>  =  -|proj_C(-Q^{-1} c)|_Q

whenever the projection is nonzero.  Projections are found by exhaustive
active-set enumeration with exact rational solves, so every answer comes with
a checkable KKT certificate and nothing is ever rounded.  Square roots are
never taken: optimal values are returned as :class:`SignedSquare`.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from itertools import combinations
import math

from . import linalg as la
from .errors import CapacityExceeded, DimensionMismatch, NotPositiveDefinite, ZeroRay

MAX_DIM = 16
MAX_CONSTRAINTS = 24


@dataclass(frozen=True)
class InnerProduct:
    gram: tuple

    def __post_init__(self):
        g = la.mat(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise DimensionMismatch("Gram matrix must be square and nonempty")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise NotPositiveDefinite("Gram matrix is not symmetric")
        if not la.leading_minors_positive(g):
            raise NotPositiveDefinite("Gram matrix is not positive definite (a leading minor is <= 0)")
        object.__setattr__(self, "_inverse", la.inverse(g))

    @classmethod
    def identity(cls, n):
        return cls(la.identity(n))

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def dim(self):
        return len(self.gram)

    def lower(self, v):
        """Q v: the covector dual to v."""
        return la.matvec(self.gram, v)

    def raise_(self, c):
        """Q^{-1} c: the vector dual to the covector c."""
        return la.matvec(self._inverse, c)

    def inner(self, u, v):
        return la.dot(u, self.lower(v))

    def norm_sq(self, v):
        return self.inner(v, v)


@dataclass(frozen=True)
class PolyhedralCone:
    """{z : <a_j, z> <= 0 for all j}.  Rows are made primitive and deduplicated."""

    dim: int
    constraints: tuple = ()

    def __post_init__(self):
        rows = []
        for a in self.constraints:
            if len(a) != self.dim:
                raise DimensionMismatch(f"constraint of length {len(a)} in dimension {self.dim}")
            p = la.primitive(a)
            if any(p) and p not in rows:
                rows.append(p)
        object.__setattr__(self, "constraints", tuple(tuple(Fraction(x) for x in r) for r in rows))

    @property
    def rows(self):
        return self.constraints

    def contains(self, z):
        return all(la.dot(a, z) <= 0 for a in self.constraints)

    def tight(self, z):
        return tuple(j for j, a in enumerate(self.constraints) if la.dot(a, z) == 0)


@dataclass(frozen=True, eq=False)
class Ray:
    """A direction up to positive scale, with its exact squared Q-norm."""

    direction: tuple
    norm_sq: Fraction

    @classmethod
    def of(cls, v, q):
        v = la.vec(v)
        return cls(v, q.norm_sq(v))

    @property
    def primitive(self):
        return la.primitive(self.direction)

    @property
    def is_zero(self):
        return all(x == 0 for x in self.direction)

    def __eq__(self, other):
        if not isinstance(other, Ray):
            return NotImplemented
        return self.primitive == other.primitive

    def __hash__(self):
        return hash(self.primitive)

    def normalized_float(self):
        n = math.sqrt(self.norm_sq)
        return tuple(float(x) / n for x in self.direction)


@total_ordering
@dataclass(frozen=True)
class SignedSquare:
    """The real number sign * sqrt(square), kept exact."""

    sign: int
    square: Fraction

    def __post_init__(self):
        sq = Fraction(self.square)
        object.__setattr__(self, "square", sq)
        if self.sign not in (-1, 0, 1) or sq < 0:
            raise ValueError("bad signed square")
        if (self.sign == 0) != (sq == 0):
            raise ValueError("sign is zero exactly when the square is zero")

    @classmethod
    def of_rational(cls, x):
        x = Fraction(x)
        return cls((x > 0) - (x < 0), x * x)

    @classmethod
    def negative_root(cls, square):
        square = Fraction(square)
        return cls(-1 if square else 0, square)

    def _key(self):
        return (self.sign, self.sign * self.square)

    def __lt__(self, other):
        if isinstance(other, (int, float, Fraction)):
            if other == math.inf:
                return True
            if other == -math.inf:
                return False
            return self < SignedSquare.of_rational(other)
        return self._key() < other._key()

    def __float__(self):
        return self.sign * math.sqrt(self.square)

    def __neg__(self):
        return SignedSquare(-self.sign, self.square)

    def scaled(self, t):
        """The value t * sign * sqrt(square) for rational t."""
        t = Fraction(t)
        s = self.sign * ((t > 0) - (t < 0))
        return SignedSquare(s, self.square * t * t)


@dataclass(frozen=True)
class KKTCertificate:
    """Stationarity witness  c + theta Q z + sum_j nu_j a_j = 0.

    ``active_set`` lists every constraint tight at z, ``multipliers`` is
    aligned with it, and ``residual`` is the (zero) left-hand side.
    """

    active_set: tuple
    multipliers: tuple
    theta: Fraction
    residual: tuple

    def verify(self):
        return all(m >= 0 for m in self.multipliers) and all(r == 0 for r in self.residual) and self.theta > 0


@dataclass(frozen=True)
class SphereMinimum:
    """Result of minimizing <c, z> over unit vectors of a cone.

    ``value`` is a SignedSquare, or ``math.inf`` when the cone is {0}.
    ``ray`` is set only when the minimum is negative (the unique minimizer).
    """

    ray: Ray | None
    value: object
    certificate: KKTCertificate | None = None

    @property
    def negative(self):
        return self.ray is not None


def _check(q, cone, v):
    if q.dim != cone.dim or len(v) != cone.dim:
        raise DimensionMismatch(f"dimensions {q.dim}, {cone.dim}, {len(v)} disagree")
    if cone.dim > MAX_DIM or len(cone.rows) > MAX_CONSTRAINTS:
        raise CapacityExceeded(
            f"cone of dimension {cone.dim} with {len(cone.rows)} constraints exceeds "
            f"{MAX_DIM}/{MAX_CONSTRAINTS}"
        )


def _equality_projection(q, rows, u):
    """Project u onto {z : a z = 0, a in rows} in the Q metric.

    Solves the KKT block system [[Q, A^T], [A, 0]] [z; nu] = [Q u; 0].
    Returns (z, nu) or None when the rows are dependent.
    """
    n, k = q.dim, len(rows)
    top = tuple(q.gram[i] + tuple(rows[j][i] for j in range(k)) for i in range(n))
    bottom = tuple(tuple(rows[j]) + la.zeros(k) for j in range(k))
    sol = la.solve(top + bottom, q.lower(u) + la.zeros(k))
    if sol is None:
        return None
    return sol[:n], sol[n:]


def _candidates(q, cone, u):
    """Yield every (z, support, nu) passing feasibility and multiplier signs."""
    rows = cone.rows
    for size in range(min(q.dim, len(rows)) + 1):
        for support in combinations(range(len(rows)), size):
            res = _equality_projection(q, [rows[j] for j in support], u)
            if res is None:
                continue
            z, nu = res
            if all(m >= 0 for m in nu) and cone.contains(z):
                yield z, support, nu


def _certificate(q, cone, c, z, support, nu, theta):
    mult = dict(zip(support, nu))
    active = cone.tight(z)
    multipliers = tuple(mult.get(j, Fraction(0)) for j in active)
    resid = la.add(c, la.scale(theta, q.lower(z)))
    for j, m in zip(active, multipliers):
        resid = la.add(resid, la.scale(m, cone.rows[j]))
    return KKTCertificate(active, multipliers, Fraction(theta), resid)


def project_cone(q, cone, u):
    """Q-nearest point of the cone to u, with a verified KKT certificate.

    The certificate is written for the objective c = -Q u with theta = 1,
    i.e. it witnesses  Q(z - u) + sum nu_j a_j = 0.
    """
    u = la.vec(u)
    _check(q, cone, u)
    for z, support, nu in _candidates(q, cone, u):
        cert = _certificate(q, cone, la.scale(-1, q.lower(u)), z, support, nu, 1)
        assert cert.verify()
        return Ray.of(z, q), cert
    raise AssertionError("strictly convex projection always has a KKT point")


def kkt_candidates(q, cone, u):
    """All distinct projection candidates certified by some active set.

    Exhaustive over every independent active set; the projection being unique,
    this always has length one.  Used as a uniqueness witness.
    """
    u = la.vec(u)
    _check(q, cone, u)
    found = []
    for z, _, _ in _candidates(q, cone, u):
        if z not in found:
            found.append(z)
    return found


def lineality(cone):
    return la.nullspace(cone.rows, cone.dim)


def extreme_rays(cone):
    """Extreme rays of a pointed cone, as primitive integer vectors."""
    n = cone.dim
    rays = []
    for support in combinations(range(len(cone.rows)), n - 1):
        sub = tuple(cone.rows[j] for j in support)
        if sub and la.rank(sub) != n - 1:
            continue
        (d,) = la.nullspace(sub, n) if sub else la.identity(n)
        for cand in (d, la.scale(-1, d)):
            if cone.contains(cand):
                p = la.primitive(cand)
                if p not in rays:
                    rays.append(p)
    return rays


def min_linear_on_sphere_cone(q, cone, c):
    """Minimize <c, z> over z in the cone with |z|_Q = 1."""
    c = la.vec(c)
    _check(q, cone, c)
    g = q.raise_(c)
    z, cert = project_cone(q, cone, la.scale(-1, g))
    if not z.is_zero:
        return SphereMinimum(z, SignedSquare.negative_root(z.norm_sq), cert)
    # c >= 0 on the cone; decide the nonnegative minimum from the faces.
    if lineality(cone):
        return SphereMinimum(None, SignedSquare(0, 0))
    rays = extreme_rays(cone)
    if not rays:
        return SphereMinimum(None, math.inf)
    best = None
    for r in rays:
        r = la.vec(r)
        val = la.dot(c, r)
        cand = SignedSquare(1 if val else 0, val * val / q.norm_sq(r))
        if best is None or cand < best:
            best = cand
    return SphereMinimum(None, best)


def kkt_certificate(q, cone, c, ray):
    """Certificate that ``ray`` minimizes <c, .> on the cone's unit sphere, or None.

    Pairing stationarity with the ray pins theta = -<c, z>/|z|^2, so only the
    multipliers on tight constraints remain; those are searched over
    independent supports (Caratheodory).
    """
    c = la.vec(c)
    z = ray.direction if isinstance(ray, Ray) else la.vec(ray)
    _check(q, cone, z)
    if all(x == 0 for x in z):
        raise ZeroRay("KKT check needs a nonzero ray")
    if not cone.contains(z):
        return None
    theta = -la.dot(c, z) / q.norm_sq(z)
    if theta <= 0:
        return None
    target = la.scale(-1, la.add(c, la.scale(theta, q.lower(z))))
    active = cone.tight(z)
    for size in range(len(active) + 1):
        for support in combinations(active, size):
            if not support:
                if all(x == 0 for x in target):
                    return _certificate(q, cone, c, z, (), (), theta)
                continue
            cols = tuple(cone.rows[j] for j in support)
            if la.rank(cols) != size:
                continue
            nu = la.solve_consistent(la.transpose(cols), target)
            if nu is not None and all(m >= 0 for m in nu):
                cert = _certificate(q, cone, c, z, support, nu, theta)
                if cert.verify():
                    return cert
    return None


def check_kkt(q, cone, c, ray):
    return kkt_certificate(q, cone, c, ray) is not None
