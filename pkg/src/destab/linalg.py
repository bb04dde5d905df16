"""Exact rational linear algebra on tuples of Fractions.

Vectors are tuples, matrices are tuples of row tuples.  Everything here is
elimination based and never touches floating point.
"""
from fractions import Fraction
from math import gcd, lcm

Vector = tuple
Matrix = tuple


def frac(x):
    """Coerce ints, Fractions, "p/q" strings and floats to a Fraction.

    Floats go through their shortest repr, so 0.1 becomes 1/10.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def vec(xs):
    return tuple(frac(x) for x in xs)


def mat(rows):
    return tuple(vec(r) for r in rows)


def zeros(n):
    return (Fraction(0),) * n


def identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(t, v):
    return tuple(t * a for a in v)


def transpose(m):
    return tuple(zip(*m)) if m else ()


def matvec(m, v):
    return tuple(dot(row, v) for row in m)


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def rref(m):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    rows = [list(r) for r in m]
    if not rows:
        return (), ()
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows), tuple(pivots)


def rank(m):
    return len(rref(m)[1])


def nullspace(m, ncols=None):
    """Basis of {x : m x = 0} as a tuple of vectors (one per free column)."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return identity(ncols)
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -red[i][fc]
        basis.append(tuple(x))
    return tuple(basis)


def column_space(m):
    """Basis of the column span, read off as the pivot columns of m."""
    if not m:
        return ()
    _, pivots = rref(m)
    cols = transpose(m)
    return tuple(cols[c] for c in pivots)


def row_space(m):
    red, pivots = rref(m)
    return red[: len(pivots)]


def canonical_subspace(vectors, n):
    """Reduced echelon basis of span(vectors): a basis-independent label."""
    if not vectors:
        return ()
    red, pivots = rref(tuple(vectors))
    return red[: len(pivots)]


def solve(a, b):
    """Solve a square system a x = b.  Returns None when a is singular."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        for i in range(c + 1, n):
            if aug[i][c] != 0:
                f = aug[i][c] / p
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = aug[i][n] - sum((aug[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = s / aug[i][i]
    return tuple(x)


def solve_consistent(a, b):
    """Some solution of a possibly rectangular system, or None if inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = tuple(tuple(row) + (bi,) for row, bi in zip(a, b))
    if not aug:
        return zeros(ncols)
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return tuple(x)


def inverse(a):
    n = len(a)
    cols = [solve(a, tuple(Fraction(int(i == j)) for i in range(n))) for j in range(n)]
    if any(c is None for c in cols):
        return None
    return transpose(cols)


def det(a):
    n = len(a)
    rows = [list(r) for r in a]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        p = rows[c][c]
        d *= p
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


def leading_minors_positive(a):
    return all(det(tuple(row[:k] for row in a[:k])) > 0 for k in range(1, len(a) + 1))


def primitive(v):
    """Scale a rational vector by a positive rational to coprime integers."""
    v = vec(v)
    if all(x == 0 for x in v):
        return tuple(0 for _ in v)
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)
