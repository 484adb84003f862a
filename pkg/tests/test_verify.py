import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from critblaschke import instances, poly
from critblaschke.blaschke import BlaschkeProduct
from critblaschke.solver import PRODUCT, SolveOptions, solve
from critblaschke.verify import (
    ACCURACY,
    bottleneck_assign,
    computed_critical_points,
    max_bipartite_matching,
    report,
)
from oracles import brute_force_bottleneck, match_sets, random_disk


def test_critical_points_n1():
    zc = computed_critical_points(BlaschkeProduct([-0.8]))
    np.testing.assert_allclose(zc, [0.5], atol=1e-14)


def test_critical_points_reflection_pairs(rng):
    z = random_disk(rng, 5)
    B = solve(z).product
    zc = computed_critical_points(B)
    assert zc.size == 5
    allr = poly.roots(B.wronskian())
    assert match_sets(allr, np.concatenate([zc, 1 / np.conj(zc)])) < 1e-8


def test_critical_points_degenerate():
    with pytest.raises(ValueError):
        computed_critical_points(BlaschkeProduct(np.zeros(3)))


def test_assignment_examples():
    D = np.ones((4, 4)) - np.eye(4)
    res = bottleneck_assign(D)
    np.testing.assert_array_equal(res.pairing, np.arange(4))
    assert res.max_distance == 0
    res = bottleneck_assign([[1, 2], [2, 1]])
    np.testing.assert_array_equal(res.pairing, [0, 1])
    assert res.max_distance == 1


def test_assignment_trivial_sizes():
    assert bottleneck_assign(np.zeros((0, 0))).max_distance == 0
    assert bottleneck_assign([[3.0]]).pairing.tolist() == [0]


def test_assignment_rejects_bad_input():
    with pytest.raises(ValueError):
        bottleneck_assign(np.ones((2, 3)))
    with pytest.raises(ValueError):
        bottleneck_assign([[np.inf, 1], [1, 1]])


def test_assignment_brute_force_7x7():
    rng = np.random.default_rng(7)
    for _ in range(100):
        D = rng.uniform(size=(7, 7))
        res = bottleneck_assign(D)
        assert sorted(res.pairing) == list(range(7))
        assert res.max_distance == D[np.arange(7), res.pairing].max()
        assert res.max_distance == brute_force_bottleneck(D)


@given(arrays(np.float64, (5, 5), elements=st.floats(0, 10)), st.permutations(range(5)),
       st.permutations(range(5)))
def test_assignment_permutation_invariance(D, rp, cp):
    base = bottleneck_assign(D)
    assert base.max_distance == brute_force_bottleneck(D)
    Dp = D[np.ix_(rp, cp)]
    assert bottleneck_assign(Dp).max_distance == base.max_distance


def test_assignment_beats_random_bijections(rng):
    D = rng.uniform(size=(9, 9))
    best = bottleneck_assign(D).max_distance
    for _ in range(50):
        s = rng.permutation(9)
        assert best <= D[np.arange(9), s].max()


def test_matching_maximum():
    adj = [[0, 1], [0], [2]]
    mc = max_bipartite_matching(adj, 3, 3)
    assert sorted(mc.tolist()) == [0, 1, 2]


def test_report_n1():
    res = solve([0.5])
    rep = report([0.5], res)
    assert rep.max_error <= 1e-10 and rep.accurately_solved
    d = rep.as_dict()
    assert d["accurately_solved"] is True and d["pairing"] == [0]


def test_report_max_iterations_not_solved():
    z = instances.gen_disk(10, 0.999, seed=1)
    res = solve(z, SolveOptions(max_iterations=1))
    rep = report(z, res)
    assert res.status == "max_iterations" and not rep.accurately_solved


def test_report_flat_instance():
    z = instances.gen_disk(30, 0.1, seed=0)
    rep = report(z, solve(z, SolveOptions(max_iterations=300)))
    assert rep.max_abs_derivative < 1e-6


def test_products_have_inner_zeros_and_n_critical_points(rng):
    for n in (2, 5, 8):
        z = random_disk(rng, n)
        res = solve(z)
        assert res.classification == PRODUCT
        assert np.all(np.abs(res.product.zeros()) < 1)
        assert computed_critical_points(res.product).size == n


def test_accuracy_threshold_value():
    assert ACCURACY == 0.5e-4
