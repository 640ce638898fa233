import math

import numpy as np
import pytest
from scipy import integrate, stats as sps

from nclam.errors import EmptyBatch, EmptySet, NoCriticalPoint, ResolutionTooFine
from nclam.lamination import Lamination
from nclam.noncrossing import NoncrossingTree
from nclam.seeding import derive_rng
from nclam.stats import (
    box_counts,
    box_dimension,
    brownian_longest_chord_cdf,
    chord_length_law,
    count_nc,
    count_nc_dp,
    count_table,
    degree_histogram,
    largest_feasible,
    longest_chord,
    longest_chord_density,
    ks_distance,
    nc_closed_form,
    theorem5_constants,
    theorem5_ratio,
    total_variation,
)
from nclam.trees import PlaneTree

# regression constant, frozen from the quadrature
CDF_AT_04 = 0.0782114910267806


def test_longest_chord_examples():
    m = 20
    assert longest_chord([(0, m // 2)], m) == 0.5
    assert longest_chord([(0, m // 4)], m) == 0.25
    assert longest_chord([(0, 2 * m // 5), (m // 10, 9 * m // 10)], m) == pytest.approx(0.4)
    assert longest_chord(NoncrossingTree(3, [(0, 1), (0, 2)])) == pytest.approx(1 / 3)
    with pytest.raises(EmptySet):
        longest_chord(Lamination(5, []))


def test_cdf_examples():
    assert brownian_longest_chord_cdf(1 / 3) == 0.0
    assert brownian_longest_chord_cdf(0.2) == 0.0
    assert brownian_longest_chord_cdf(0.5) == pytest.approx(1.0, abs=1e-8)
    assert brownian_longest_chord_cdf(0.7) == pytest.approx(1.0, abs=1e-8)
    assert brownian_longest_chord_cdf(0.4) == pytest.approx(CDF_AT_04, abs=1e-10)


def test_cdf_against_direct_quadrature():
    for x in [0.35, 0.4, 0.45, 0.49]:
        direct, _ = integrate.quad(longest_chord_density, 1 / 3, x, limit=200)
        assert brownian_longest_chord_cdf(x) == pytest.approx(direct, abs=1e-8)


def test_cdf_table_monotone_and_accurate():
    law = chord_length_law()
    assert np.all(np.diff(law.values) >= 0)
    assert law.values[-1] == pytest.approx(1.0, abs=1e-8)
    grid = np.linspace(1 / 3, 0.5, 10_000)
    vals = law.cdf(grid)
    assert np.all(np.diff(vals) >= 0)
    for x in [0.34, 0.4, 0.47, 0.499]:
        assert law.cdf(x) == pytest.approx(brownian_longest_chord_cdf(x), abs=1e-6)
    assert np.all(longest_chord_density(grid) >= 0)


def test_ks_examples():
    assert ks_distance([0.5, 0.5], lambda x: 1.0) == 1.0
    with pytest.raises(EmptySet):
        ks_distance([], lambda x: x)
    rng = derive_rng(0, "ks")
    u = rng.random(10_000)
    d = ks_distance(u, lambda x: min(max(x, 0.0), 1.0))
    assert d < 1.63 / 100
    assert d == pytest.approx(sps.kstest(u, "uniform").statistic, abs=1e-12)


def test_count_examples():
    assert count_nc(3) == 3
    assert count_nc(5) == 55
    assert count_nc(1, [1, 3]) == 1
    assert [count_nc(n) for n in range(1, 15)] == [nc_closed_form(n) for n in range(1, 15)]


@pytest.mark.parametrize("A", [None, [1, 3], [1, 2, 5], [1, 4], [2, 3]])
def test_count_matches_dp(A):
    for n in range(1, 25):
        assert count_nc(n, A) == count_nc_dp(n, A)


def test_count_table():
    tab = count_table(12, [1, 3])
    assert tab.counts[1] == 1
    assert all(v >= 0 for v in tab.counts.values())
    assert all((v == 0) == (n > 1 and n % 2 == 1) for n, v in tab.counts.items())


def test_growth_constants():
    K, rho, period = theorem5_constants()
    assert rho == pytest.approx(27 / 4)
    # the asymptotic form uses rho^(n-1), so K absorbs one factor of rho
    assert K == pytest.approx(27 / 4 / (9 * math.sqrt(3 * math.pi)), rel=1e-12)
    assert period == 1
    K3, rho3, p3 = theorem5_constants([1, 3])
    assert p3 == 2 and K3 > 0 and rho3 == pytest.approx(2 * math.sqrt(3), rel=1e-12)
    with pytest.raises(NoCriticalPoint):
        theorem5_constants([1, 2])


def test_count_asymptotics():
    assert 0.98 <= theorem5_ratio(2000) <= 1.02
    n = largest_feasible(400, [1, 3])
    assert n in (399, 400)
    assert 0.9 <= theorem5_ratio(n, [1, 3]) <= 1.1


def test_degree_histogram_examples():
    assert degree_histogram([PlaneTree([2, 0, 0])] * 3) == {0: 1.0}
    assert degree_histogram([PlaneTree([1, 1, 0])] * 2) == {0: 0.5, 1: 0.5}
    with pytest.raises(EmptyBatch):
        degree_histogram([])
    h = degree_histogram([NoncrossingTree(3, [(0, 1), (0, 2)])])
    assert h == {0: 1.0}
    assert total_variation({0: 0.5, 1: 0.5}, {0: 1.0}, range(3)) == 0.5


def test_box_dimension_segment():
    lam = Lamination(1 << 12, [(0, 1 << 11)])
    slope, counts = box_dimension(lam, range(4, 11))
    assert 0.95 <= slope <= 1.05
    # a horizontal diameter runs along one row of 2^(j+1) cells
    assert counts[4] == 32


def test_box_dimension_area_filling():
    m = 256
    chords = [(i, m - i) for i in range(1, m // 2)] + [(m // 4 - i, m // 4 + i) for i in range(1, m // 4)]
    lam = Lamination(m, [c for c in chords if c[0] != c[1]])
    slope, _ = box_dimension(lam, range(2, 6))
    assert slope > 1.8


def test_box_counts_guard():
    with pytest.raises(ResolutionTooFine):
        box_counts(Lamination(16, [(0, 8)]), range(2, 8))


def test_box_counts_brute():
    rng = derive_rng(1, "box")
    m = 64
    pairs = rng.integers(0, m, size=(10, 2))
    lam = Lamination(m, [p for p in pairs.tolist() if p[0] != p[1]])
    counts = box_counts(lam, range(1, 6))
    ang = -2 * np.pi * lam.chords / m
    for j, c in counts.items():
        side = 2 << j
        h = 2.0 / side
        cells = set()
        t = np.linspace(0, 1, 20_001)
        for (a0, a1) in ang:
            x = np.cos(a0) + t * (np.cos(a1) - np.cos(a0))
            y = np.sin(a0) + t * (np.sin(a1) - np.sin(a0))
            ix = np.clip(np.floor((x + 1) / h), 0, side - 1).astype(int)
            iy = np.clip(np.floor((y + 1) / h), 0, side - 1).astype(int)
            cells.update(zip(ix.tolist(), iy.tolist()))
        # dense sampling can only miss corner clips, never add cells
        assert len(cells) <= c <= len(cells) + 2 * len(lam)
