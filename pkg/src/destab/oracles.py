"""Independent floating-point oracles used by ``--verify`` and the tests."""
import numpy as np

from .cone import SignedSquare


def grid_sphere_minimum(q, cone, c, samples=100_000, seed=0):
    """Minimum of <c, z> over random unit vectors z of the cone.

    Directions are Gaussian samples rescaled to unit Q-norm; infeasible ones
    are discarded.  Returns (minimum or inf, number of feasible samples).
    """
    rng = np.random.default_rng(seed)
    n = q.dim
    gram = np.array([[float(x) for x in row] for row in q.gram])
    x = rng.standard_normal((samples, n))
    norms = np.sqrt(np.einsum("ij,jk,ik->i", x, gram, x))
    z = x / norms[:, None]
    if cone.rows:
        a = np.array([[float(v) for v in row] for row in cone.rows])
        feasible = np.all(z @ a.T <= 1e-12, axis=1)
        z = z[feasible]
    if len(z) == 0:
        return np.inf, 0
    vals = z @ np.array([float(v) for v in c])
    return float(vals.min()), len(z)


def never_beats(value, grid_min, tol=1e-9):
    """The sampled minimum may not undercut the exact one by more than tol."""
    if isinstance(value, SignedSquare):
        value = float(value)
    return grid_min >= value - tol
