from fractions import Fraction
import itertools
import math
import random

import pytest

import gen
from destab import linalg as la
from destab.cone import InnerProduct, SignedSquare, check_kkt
from destab.errors import DimensionMismatch, DivergentFlow, InputError, NotDestabilizable
from destab.torus import (
    OptimalClass,
    Semistable,
    SupportVector,
    WeightSystem,
    destabilizing_cone,
    enumerate_strata,
    hermitian_class,
    induced_problem,
    initial_pairing,
    initial_pairing_bound,
    limit_point,
    maximal_weight,
    optimal_destabilizing,
    verify_limit_semistable,
)

PM = WeightSystem(1, (("plus", (1,)), ("minus", (-1,))))
ADAPTED = WeightSystem(3, (("c0", (-1, 0, 0)), ("c1", (0, -1, 0)), ("c2", (0, 0, -1))))
I1 = InnerProduct.identity(1)


def test_maximal_weight_examples():
    plus = WeightSystem(1, (("x", (1,)),))
    v = SupportVector.on(["x"])
    assert maximal_weight(plus, (2,), I1, v, (1,)) == math.inf
    assert maximal_weight(plus, (2,), I1, v, (-1,)) == -2
    two = WeightSystem(2, (("x", (1, 0)),))
    assert maximal_weight(two, (1, 1), None, SupportVector({}), (3, -5)) == -2


def test_initial_pairing_examples():
    plus = WeightSystem(1, (("x", (1,)),))
    assert initial_pairing(plus, (0,), I1, SupportVector({"x": 2}), (-1,)) == -1
    assert initial_pairing(plus, (4,), I1, SupportVector({}), (-1,)) == -4
    # stationary flow: the pairing equals the maximal weight
    ws = WeightSystem(2, (("x", (1, 0)),))
    v = SupportVector({"x": 3})
    assert initial_pairing(ws, (2, 5), None, v, (0, 1)) == maximal_weight(ws, (2, 5), None, v, (0, 1)) == 5


def test_optimal_destabilizing_examples():
    res = optimal_destabilizing(ADAPTED, (1, 1, 1), None, SupportVector.on(["c0"]))
    assert res.ray.primitive == (0, -1, -1)
    assert res.lambda_inf == SignedSquare(-1, 2)
    assert isinstance(optimal_destabilizing(PM, (1,), I1, SupportVector.on(["plus", "minus"])), Semistable)
    free = WeightSystem(2, (("x", (1, 0)),))
    res = optimal_destabilizing(free, (3, 4), None, SupportVector({}))
    assert res.ray.primitive == (-3, -4) and res.lambda_inf == SignedSquare(-1, 25)


def test_limit_point_examples():
    ws = WeightSystem(2, (("a", (1, 0)), ("b", (0, -1))))
    v = SupportVector.on(["a", "b"])
    assert limit_point(ws, v, (-1, 0)).support == {"b"}
    assert limit_point(ws, SupportVector.on(["b"]), (1, 0)) == SupportVector.on(["b"])
    with pytest.raises(DivergentFlow):
        limit_point(ws, SupportVector.on(["a"]), (1, 0))


def test_induced_problem_examples():
    ws = WeightSystem(2, (("a", (1, 0)), ("b", (0, -1))))
    v = SupportVector.on(["a", "b"])
    opt = optimal_destabilizing(ws, (1, 0), None, v)
    assert opt.ray.primitive == (-1, 0)
    ind = induced_problem(ws, (1, 0), None, opt)
    assert ind.tau_prime == (0, 0)
    assert ind.weights.labels == ("b",)
    assert verify_limit_semistable(ws, (1, 0), None, v).semistable
    # unconstrained optimum: the shift cancels tau
    free = WeightSystem(2, (("x", (1, 1)),))
    q = InnerProduct(((2, 1), (1, 3)))
    opt = optimal_destabilizing(free, (1, 2), q, SupportVector({}))
    assert induced_problem(free, (1, 2), q, opt).tau_prime == (0, 0)


def test_adapted_grassmannian_limit():
    v = SupportVector.on(["c0"])
    rep = verify_limit_semistable(ADAPTED, (1, 1, 1), None, v)
    assert rep.limit == v
    assert rep.induced.tau_prime == (1, 0, 0)
    assert rep.semistable and rep.orthogonality == 0


def test_semistable_points_have_no_limit():
    with pytest.raises(NotDestabilizable):
        verify_limit_semistable(PM, (1,), I1, SupportVector.on(["minus"]))


def test_strata_of_plus_minus():
    strata = enumerate_strata(PM, (1,))
    assert strata[0].ray is None
    assert set(strata[0].supports) == {frozenset({"minus"}), frozenset({"plus", "minus"})}
    assert strata[1].ray.primitive == (-1,) and strata[1].lambda_inf == SignedSquare(-1, 1)
    assert set(strata[1].supports) == {frozenset(), frozenset({"plus"})}
    assert len(strata) == 2


def test_zero_tau_gives_one_stratum():
    (only,) = enumerate_strata(PM, (0,))
    assert only.ray is None and len(only.supports) == 4


def test_strata_partition_random_systems():
    rng = random.Random(11)
    for _ in range(20):
        ws, tau, q, _ = gen.torus(rng, max_dim=3, max_weights=5)
        strata = enumerate_strata(ws, tau, q)
        seen = [s for st in strata for s in st.supports]
        assert len(seen) == len(set(seen)) == 2 ** len(ws.weights)
        rays = [st.ray for st in strata if st.ray is not None]
        assert len(rays) == len(set(rays))


def test_hermitian_class_examples():
    assert hermitian_class((1, 1, 2)) == ((1, 2), (2, 3))
    assert hermitian_class((Fraction(5, 2),) * 3) == ((Fraction(5, 2),), (3,))
    assert hermitian_class((3, -1, 3, 0)) == ((-1, 0, 3), (1, 2, 4))


def test_validation_errors():
    with pytest.raises(InputError):
        WeightSystem(1, (("x", (1,)), ("x", (2,))))
    with pytest.raises(InputError):
        WeightSystem(1, (("x", (1,)), ("y", (1,))))
    with pytest.raises(DimensionMismatch):
        maximal_weight(PM, (1, 2), I1, SupportVector({}), (1,))
    with pytest.raises(InputError):
        optimal_destabilizing(PM, (1,), I1, SupportVector.on(["nope"]))


# -- properties ----------------------------------------------------------------------


def test_homogeneity_of_maximal_weight():
    rng = random.Random(12)
    for _ in range(200):
        ws, tau, q, v = gen.torus(rng)
        s = gen.rvec(rng, ws.dim)
        t = Fraction(rng.randint(1, 9), rng.randint(1, 4))
        lam = maximal_weight(ws, tau, q, v, s)
        scaled = maximal_weight(ws, tau, q, v, la.scale(t, s))
        assert scaled == (math.inf if lam == math.inf else t * lam)


def test_initial_pairing_bounds_lambda_inf():
    rng = random.Random(13)
    for _ in range(150):
        ws, tau, q, v = gen.torus(rng)
        res = optimal_destabilizing(ws, tau, q, v)
        if isinstance(res, OptimalClass):
            assert res.lambda_inf >= initial_pairing_bound(ws, tau, q, v)
            # along the optimal ray the t = 0 weight never exceeds the limit
            z = res.ray.direction
            assert initial_pairing(ws, tau, q, v, z) <= maximal_weight(ws, tau, q, v, z)


def test_permutation_equivariance():
    rng = random.Random(14)
    for _ in range(100):
        ws, tau, q, v = gen.unstable_torus(rng)
        n = ws.dim
        perm = list(range(n))
        rng.shuffle(perm)

        def p(x):
            return tuple(x[perm[i]] for i in range(n))

        order = list(ws.weights)
        rng.shuffle(order)
        ws2 = WeightSystem(n, tuple((f"r{label}", p(chi)) for label, chi in order))
        v2 = SupportVector({f"r{label}": a for label, a in v.components.items()})
        q2 = InnerProduct(tuple(tuple(q.gram[perm[i]][perm[j]] for j in range(n)) for i in range(n)))
        a = optimal_destabilizing(ws, tau, q, v)
        b = optimal_destabilizing(ws2, p(tau), q2, v2)
        assert b.ray.primitive == p(a.ray.primitive)
        assert b.lambda_inf == a.lambda_inf


def test_cone_containment_orders_values():
    rng = random.Random(15)
    for _ in range(150):
        ws, tau, q, w = gen.torus(rng)
        sub = [lab for lab in w.support if rng.random() < 0.5]
        v = SupportVector({lab: w.components[lab] for lab in sub})
        a = optimal_destabilizing(ws, tau, q, v)
        b = optimal_destabilizing(ws, tau, q, w)
        va = a.lambda_inf if isinstance(a, OptimalClass) else a.value
        vb = b.lambda_inf if isinstance(b, OptimalClass) else b.value
        assert va <= vb


def test_limit_semistability_and_orthogonality():
    rng = random.Random(16)
    for _ in range(100):
        ws, tau, q, v = gen.unstable_torus(rng)
        rep = verify_limit_semistable(ws, tau, q, v)
        assert rep.semistable
        assert la.dot(rep.induced.tau_prime, rep.optimal.ray.direction) == 0
        assert check_kkt(q, destabilizing_cone(ws, v), tau, rep.optimal.ray)
        for _, chi in rep.induced.weights.weights:
            assert la.dot(chi, rep.optimal.ray.direction) == 0


def test_support_vector_drops_zero_amplitudes():
    v = SupportVector({"a": 0, "b": Fraction(1, 2)})
    assert v.support == {"b"}
    with pytest.raises(InputError):
        SupportVector({"a": -1})


def test_all_subsets_small_weight_system_match_brute_force():
    # n = 1: decide semistability directly from the signs of the supported weights
    ws = WeightSystem(1, (("a", (2,)), ("b", (Fraction(-1, 3),)), ("c", (0,))))
    for size in range(4):
        for supp in itertools.combinations(ws.labels, size):
            for tau in (-1, 0, 1):
                signs = {ws[lab][0] > 0 for lab in supp if ws[lab][0] != 0}
                # unit directions are +-1; +1 is allowed iff no positive weight, -1 iff no negative
                vals = []
                if True not in signs:
                    vals.append(tau)
                if False not in signs:
                    vals.append(-tau)
                expect_unstable = bool(vals) and min(vals) < 0
                res = optimal_destabilizing(ws, (tau,), None, SupportVector.on(supp))
                assert isinstance(res, OptimalClass) == expect_unstable
