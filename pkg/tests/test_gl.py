from fractions import Fraction
import random

import pytest

import gen
from destab import linalg as la
from destab.cone import SignedSquare
from destab.errors import DimensionMismatch, InputError, NotDestabilizable
from destab.gl import (
    ChainProblem,
    HomProblem,
    chain_invariants,
    chain_limit,
    chain_semistable,
    hom_cross_check,
    hom_optimal,
    hom_strata_by_class,
    hom_stratum,
    kernel_projector,
)


def invertible(rng, n):
    while True:
        g = tuple(tuple(Fraction(rng.randint(-3, 3)) for _ in range(n)) for _ in range(n))
        if la.det(g) != 0:
            return g


def test_identity_is_semistable():
    assert hom_optimal(HomProblem(la.identity(3), 2)) is None


def test_zero_map_uses_the_whole_space():
    opt = hom_optimal(HomProblem(((0, 0, 0), (0, 0, 0)), Fraction(3, 2)))
    assert opt.ray == tuple(tuple(-x for x in row) for row in la.identity(3))
    assert opt.lambda_inf == SignedSquare(-1, Fraction(9, 4) * 3)


def test_kernel_of_dimension_two():
    f = ((1, 2, 0, 1, 1), (0, 1, 1, 0, 2), (1, 3, 1, 1, 3))  # rank 2, so dim ker = 3
    p = HomProblem(f, 2)
    opt = hom_optimal(p)
    assert opt.kernel_dim == 3 and opt.lambda_inf == SignedSquare(-1, 12)
    proj = tuple(tuple(-x for x in row) for row in opt.ray)
    assert la.matmul(proj, proj) == proj
    assert la.transpose(proj) == proj
    assert all(x == 0 for row in la.matmul(f, proj) for x in row)
    assert hom_cross_check(p)


def test_cross_check_small_examples():
    p = HomProblem(((1, 0, 0),), 1)  # k = 2, r = 3
    assert hom_cross_check(p)
    assert hom_optimal(p).lambda_inf == SignedSquare(-1, 2)
    assert hom_cross_check(HomProblem(((0, 0, 0, 0),), 5))
    with pytest.raises(NotDestabilizable):
        hom_cross_check(HomProblem(la.identity(2), 1))


def test_strata_by_class_are_kernel_dimensions():
    assert hom_strata_by_class(3) == {
        0: None,
        1: SignedSquare(-1, 1),
        2: SignedSquare(-1, 2),
        3: SignedSquare(-1, 3),
    }
    assert hom_strata_by_class(2, Fraction(1, 2))[2] == SignedSquare(-1, Fraction(1, 2))


def test_hom_random_closed_form_and_gauge_invariance():
    rng = random.Random(21)
    for _ in range(60):
        p, k = gen.hom(rng)
        opt = hom_optimal(p)
        assert opt.kernel_dim == k
        assert opt.lambda_inf == SignedSquare(-1, p.t * p.t * k)
        assert hom_cross_check(p)
        g = invertible(rng, p.r)
        moved = HomProblem(la.matmul(p.f, la.inverse(g)), p.t)
        assert hom_optimal(moved).lambda_inf == opt.lambda_inf
        assert hom_stratum(moved)[0] == hom_stratum(p)[0]


def test_kernel_projector_of_empty_basis():
    assert kernel_projector((), 2) == ((0, 0), (0, 0))


def test_hom_validation():
    with pytest.raises(InputError):
        HomProblem(((1,),), 0)
    with pytest.raises(DimensionMismatch):
        HomProblem(((1, 2), (3,)), 1)


# -- chains ------------------------------------------------------------------------


def test_identity_chain():
    p = ChainProblem((la.identity(2), la.identity(2)), (1, 1))
    inv = chain_invariants(p)
    assert inv.rho == (2, 2) and all(not k for k in inv.kernels)
    assert chain_semistable(p)


def test_last_map_zero():
    zero = ((0, 0), (0, 0))
    p = ChainProblem((la.identity(2), zero), (1, 1))
    inv = chain_invariants(p)
    assert inv.rho == (0, 0)
    assert [len(k) for k in inv.kernels] == [2, 2]
    lim = chain_limit(p)
    assert lim.quotient_dims == (0, 0) and lim.stable


def test_flag_from_full_rank_maps():
    f1 = ((1,), (2,))
    f2 = ((1, 0), (0, 1), (1, 1))
    p = ChainProblem((f1, f2), (1, 2))
    inv = chain_invariants(p)
    assert inv.rho == (1, 2)
    w1, w2 = inv.images
    assert la.rank(w1 + w2) == len(w2)  # W_1 inside W_2
    assert p.monotone and chain_semistable(p)


def test_decreasing_dims_force_instability():
    p = ChainProblem((((1, 0, 0), (0, 1, 0)),), (1,))
    assert not p.monotone and not chain_semistable(p)
    with pytest.raises(NotDestabilizable):
        chain_limit(ChainProblem((la.identity(2),), (1,)))


def test_single_map_chain_matches_hom():
    f = ((1, 1, 0), (2, 2, 0))
    lim = chain_limit(ChainProblem((f,), (1,)))
    assert lim.quotient_dims == (3 - hom_optimal(HomProblem(f, 1)).kernel_dim,)
    assert lim.stable


def random_chain(rng):
    m = rng.randint(1, 3)
    dims = [rng.randint(1, 4) for _ in range(m + 1)]
    maps = []
    for i in range(m):
        rank = rng.randint(0, min(dims[i], dims[i + 1]))
        a = [[rng.randint(-2, 2) for _ in range(rank)] for _ in range(dims[i + 1])]
        b = [[rng.randint(-2, 2) for _ in range(dims[i])] for _ in range(rank)]
        maps.append(la.matmul(a, b) if rank else tuple(la.zeros(dims[i]) for _ in range(dims[i + 1])))
    t = tuple(Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(m))
    return ChainProblem(tuple(maps), t)


def test_chain_properties_random():
    rng = random.Random(22)
    for _ in range(150):
        p = random_chain(rng)
        inv = chain_invariants(p)
        d = p.dims
        for i, rho in enumerate(inv.rho):
            assert rho <= d[i]
            assert len(inv.kernels[i]) == d[i] - rho
            if i + 1 < len(inv.rho):
                w, w_next = inv.images[i], inv.images[i + 1]
                assert la.rank(w + w_next) == len(w_next) if w_next else not w
        assert chain_semistable(p) == (inv.rho == tuple(d[:-1]))
        if not chain_semistable(p):
            lim = chain_limit(p)
            assert lim.stable
            assert lim.quotient_dims == inv.rho


def test_chain_gauge_invariance():
    rng = random.Random(23)
    for _ in range(60):
        p = random_chain(rng)
        d = p.dims
        gs = [invertible(rng, n) for n in d[:-1]] + [la.identity(d[-1])]
        moved = ChainProblem(
            tuple(la.matmul(la.matmul(gs[i + 1], f), la.inverse(gs[i])) for i, f in enumerate(p.maps)), p.t
        )
        assert chain_invariants(moved).rho == chain_invariants(p).rho
        assert chain_invariants(moved).images == chain_invariants(p).images
        assert chain_semistable(moved) == chain_semistable(p)


def test_chain_validation():
    with pytest.raises(DimensionMismatch):
        ChainProblem((((1, 0),), ((1, 0),)), (1, 1))
    with pytest.raises(InputError):
        ChainProblem((((1,),),), (0,))
    with pytest.raises(DimensionMismatch):
        ChainProblem((((1,),),), (1, 2))
