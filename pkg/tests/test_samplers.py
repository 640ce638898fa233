from collections import Counter

import numpy as np
import pytest
from scipy import stats

from nclam.errors import DegenerateTree, Infeasible, Timeout
from nclam.laws import finite_law
from nclam.noncrossing import plane_trees
from nclam.offspring import WeightSeq, critical_pair, stable_offspring
from nclam.samplers import (
    forest_feasible,
    hitting_time_pmf,
    progeny_pmf,
    largest_subtree_limit,
    root_degree_law,
    root_stats,
    root_stats_slow,
    sample_bgw_conditioned,
    sample_forest,
    sample_modified_bgw,
    tree_size_pmf,
    walk_pmf,
)
from nclam.seeding import derive_rng
from nclam.trees import PlaneTree
from nclam.verify import _first_passage_enum

PAIR = critical_pair(WeightSeq("uniform"))
COIN = finite_law([0.5, 0.0, 0.5])


def _bgw_weights(law, n):
    shapes = list(plane_trees(n))
    pm = np.asarray(law.pmf(np.arange(n + 1)), dtype=float)
    w = np.array([np.prod(pm[list(s)]) for s in shapes])
    return shapes, w / w.sum()


def test_walk_examples():
    assert walk_pmf(COIN, 2, 0) == pytest.approx(0.5)
    assert walk_pmf(COIN, 0, 0) == 1.0
    assert walk_pmf(COIN, 3, 0) == 0.0
    assert hitting_time_pmf(COIN, 1, 3) == pytest.approx(1 / 8)
    assert hitting_time_pmf(COIN, 1, 2) == 0.0
    assert hitting_time_pmf(COIN, 1, 1) == pytest.approx(0.5)


@pytest.mark.parametrize("law", [finite_law([0.3, 0.4, 0.1, 0.2]), PAIR.mu])
def test_kemperman_against_enumeration(law):
    probs = {k: float(law.pmf(k)) for k in range(16) if law.pmf(k) > 0}
    for k in range(1, 4):
        for n in range(k, 13):
            assert abs(hitting_time_pmf(law, k, n) - _first_passage_enum(probs, k, n)) < 1e-12


def test_tree_size_pmf():
    assert tree_size_pmf(PAIR, 2) == pytest.approx(8 / 27)
    assert tree_size_pmf(PAIR, 1) == 0.0
    partial = np.cumsum([tree_size_pmf(PAIR, n) for n in range(2, 200)])
    assert np.all(np.diff(partial) > 0) and partial[-1] < 1.0


def test_bgw_small_cases():
    rng = derive_rng(0, "bgw")
    assert sample_bgw_conditioned(PAIR.mu, 1, rng).kids.tolist() == [0]
    with pytest.raises(Infeasible):
        sample_bgw_conditioned(COIN, 2, rng)


def test_bgw_chi_square():
    shapes, w = _bgw_weights(PAIR.mu, 5)
    rng = derive_rng(1, "bgw5")
    c = Counter(tuple(sample_bgw_conditioned(PAIR.mu, 5, rng).kids.tolist()) for _ in range(100_000))
    obs = [c[s] for s in shapes]
    assert sum(obs) == 100_000
    assert stats.chisquare(obs, w * 100_000).pvalue > 1e-3


@pytest.mark.parametrize("n", [3, 5, 7])
def test_bgw_tv_bound(n):
    shapes, w = _bgw_weights(PAIR.mu, n)
    N = 100_000
    rng = derive_rng(2, "tv", n)
    c = Counter(tuple(sample_bgw_conditioned(PAIR.mu, n, rng).kids.tolist()) for _ in range(N))
    emp = np.array([c[s] for s in shapes]) / N
    tv = 0.5 * np.abs(emp - w).sum()
    bound = 4 * 0.5 * np.sqrt(w * (1 - w) / N).sum()
    assert tv < bound


def test_heavy_tail_conditioning_is_exact():
    law = stable_offspring(1.3).law
    shapes, w = _bgw_weights(law, 6)
    rng = derive_rng(3, "stable")
    c = Counter(tuple(sample_bgw_conditioned(law, 6, rng).kids.tolist()) for _ in range(30_000))
    assert stats.chisquare([c[s] for s in shapes], w * 30_000).pvalue > 1e-3


def test_forest_examples():
    rng = derive_rng(4, "forest")
    assert [t.n for t in sample_forest(PAIR.mu, 5, 5, rng)] == [1] * 5
    with pytest.raises(Infeasible):
        sample_forest(PAIR.mu, 3, 2, rng)
    c = Counter(tuple(t.n for t in sample_forest(PAIR.mu, 2, 3, rng)) for _ in range(20_000))
    assert set(c) == {(1, 2), (2, 1)}
    assert abs(c[(1, 2)] / 20_000 - 0.5) < 0.02


def test_feasibility():
    assert forest_feasible(WeightSeq.indicator([1, 3]) and critical_pair(WeightSeq.indicator([1, 3])).mu, 1, 5)
    assert not forest_feasible(critical_pair(WeightSeq.indicator([1, 3])).mu, 1, 4)
    assert not forest_feasible(COIN, 1, 2)


def test_modified_bgw_small():
    rng = derive_rng(5, "mod")
    assert sample_modified_bgw(PAIR, 2, rng).kids.tolist() == [1, 0]
    c = Counter(tuple(sample_modified_bgw(PAIR, 3, rng).kids.tolist()) for _ in range(30_000))
    assert abs(c[(1, 1, 0)] / 30_000 - 2 / 3) < 0.015
    assert abs(c[(2, 0, 0)] / 30_000 - 1 / 3) < 0.015


def test_root_degree_law_limit():
    law = root_degree_law(PAIR, 200)
    k = np.arange(1, 8)
    limit = k * PAIR.mu_root.pmf(k) / PAIR.mu_root.mean
    np.testing.assert_allclose(law[:7], limit, atol=0.01)
    rng = derive_rng(6, "root")
    N = 20_000
    degs = Counter(sample_modified_bgw(PAIR, 200, rng).kids[0] for _ in range(N))
    emp = np.array([degs[j] for j in k]) / N
    np.testing.assert_allclose(emp, limit, atol=0.015)


def test_budget_timeout():
    with pytest.raises(Timeout):
        sample_bgw_conditioned(PAIR.mu, 5000, derive_rng(7), budget=10)


def test_root_stats():
    assert root_stats(PlaneTree([1, 1, 1, 0])) == root_stats_slow(PlaneTree([1, 1, 1, 0]))
    rs = root_stats(PlaneTree([1, 1, 1, 0]))
    assert (rs.M, rs.N0) == (3, 1)
    rs = root_stats(PlaneTree([2, 0, 0]))
    assert (rs.M, rs.N0) == (1, 2)
    rs = root_stats(PlaneTree([3, 1, 0, 0, 0]))
    assert (rs.M, rs.N0) == (2, 3)
    with pytest.raises(DegenerateTree):
        root_stats(PlaneTree([0]))
    rng = derive_rng(8)
    for _ in range(50):
        t = sample_modified_bgw(PAIR, 40, rng)
        assert root_stats(t) == root_stats_slow(t)


def test_largest_subtree_limit_marginals():
    # summing over k recovers P(N = L); the k tail is heavy so compare truncated
    # sums with the exact progeny cdf instead of with 1
    pN = [L * float(PAIR.mu_root.pmf(L)) / PAIR.mu_root.mean for L in range(1, 6)]
    assert sum(L * PAIR.mu_root.pmf(L) / PAIR.mu_root.mean for L in range(1, 200)) == pytest.approx(1.0, abs=1e-10)
    assert largest_subtree_limit(PAIR, 0, 1) == pytest.approx(pN[0])
    assert largest_subtree_limit(PAIR, 3, 1) == 0.0
    y = progeny_pmf(PAIR.mu, 40)
    got = sum(largest_subtree_limit(PAIR, k, 2) for k in range(41))
    assert got == pytest.approx(pN[1] * y[:41].sum(), rel=1e-12)
    assert largest_subtree_limit(PAIR, 0, 3) == pytest.approx(pN[2] * y[0] ** 2, rel=1e-12)
