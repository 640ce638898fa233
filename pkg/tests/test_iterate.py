import numpy as np
import pytest

from nclam.errors import DomainError, ResolutionMismatch
from nclam.iterate import (
    AlphaVector,
    DecoratedLamination,
    compose,
    conditioned_tree,
    dim_formula,
    face_boundaries,
    sample_iterated,
    sample_iterated_decorated,
)
from nclam.lamination import Lamination, lamination_from_tree
from nclam.noncrossing import is_noncrossing
from nclam.seeding import derive_rng
from nclam.trees import PlaneTree


def _brute_boundaries(lam):
    """Face of each point by scanning every chord for the innermost one strictly around it."""
    out = {(0, lam.m): []}
    for a, b in lam.chords.tolist():
        out[(a, b)] = [a, b]
    for p in range(lam.m):
        around = [(a, b) for a, b in lam.chords.tolist() if a < p < b]
        key = min(around, key=lambda c: c[1] - c[0]) if around else (0, lam.m)
        out[key].append(p)
    return {k: tuple(sorted(set(v))) for k, v in out.items() if len(set(v)) >= 3}


def test_face_boundaries_against_brute():
    rng = derive_rng(0, "faces")
    for _ in range(200):
        n = int(rng.integers(3, 40))
        lam = lamination_from_tree(conditioned_tree(1.5, n, rng))
        assert face_boundaries(lam) == _brute_boundaries(lam)


def test_compose_identity():
    rng = derive_rng(1, "id")
    for _ in range(30):
        lam = lamination_from_tree(conditioned_tree(1.3, 50, rng))
        base = DecoratedLamination.from_lamination(lam)
        empty = {k: Lamination(len(v)) for k, v in base.face_decorations.items()}
        out = compose(base, empty)
        assert out.lam == lam
        assert out == base


def test_compose_duplicate_chord():
    m = 8
    base = DecoratedLamination.from_lamination(Lamination(m, [(0, 4)]))
    key = (0, 4)
    dec = base.face_decorations[key]
    assert dec == (0, 1, 2, 3, 4)
    out = compose(base, {key: Lamination(len(dec), [(0, len(dec) - 1)])})
    assert len(out.lam) == len(base.lam)


def test_compose_triangle_insert():
    base = DecoratedLamination.from_lamination(Lamination(4, [(0, 2)]))
    key = (0, 2)
    assert base.face_decorations[key] == (0, 1, 2)
    out = compose(base, {key: Lamination(3, [(0, 1), (1, 2), (0, 2)])})
    assert out.lam.chord_set() == {(0, 1), (1, 2), (0, 2)}


def test_compose_resolution_mismatch():
    base = DecoratedLamination.from_lamination(Lamination(8, [(0, 4)]))
    with pytest.raises(ResolutionMismatch):
        compose(base, {(0, 4): Lamination(4, [(0, 2)])})
    with pytest.raises(ResolutionMismatch):
        compose(base, {(1, 3): Lamination(3)})


def test_decorations_cover_new_faces():
    rng = derive_rng(2, "cover")
    for _ in range(50):
        dl = sample_iterated_decorated((1.3, 1.6), int(rng.integers(10, 200)), int(rng.integers(1 << 30)))
        assert is_noncrossing(dl.lam.chords)
        # inherited decorations are exactly the faces of the composed lamination
        assert dl.face_decorations == face_boundaries(dl.lam)


def test_alpha_vector():
    assert AlphaVector.parse("1.1,1.4").alphas == (1.1, 1.4)
    assert AlphaVector((1.5, 2)).alphas == (1.5, 2.0)
    for bad in ["", "2,1.5", "1.0", "0.5,2", "x"]:
        with pytest.raises(DomainError):
            AlphaVector.parse(bad)


def test_single_level_is_plain_lamination():
    lam = sample_iterated((1.4,), 300, 5)
    tree = conditioned_tree(1.4, 300, derive_rng(5, "level", 1))
    assert lam == lamination_from_tree(tree)


def test_levels_add_chords():
    for seed in range(10):
        one = sample_iterated((1.3,), 500, seed)
        two = sample_iterated((1.3, 1.5), 500, seed)
        three = sample_iterated((1.3, 1.5, 2), 500, seed)
        assert one.chord_set() <= two.chord_set() <= three.chord_set()
        if any(len(v) >= 4 for v in face_boundaries(one).values()):
            assert len(two) > len(one)
        assert is_noncrossing(three.chords)


def test_sample_iterated_deterministic():
    a = sample_iterated((1.1, 1.4), 2000, 7)
    b = sample_iterated((1.1, 1.4), 2000, 7)
    assert a == b


def test_small_tree_table_is_conditioned_law():
    rng = derive_rng(3, "small")
    counts = {}
    for _ in range(20_000):
        t = conditioned_tree(2.0, 3, rng)
        counts[tuple(t.kids.tolist())] = counts.get(tuple(t.kids.tolist()), 0) + 1
    # under a geometric law both shapes on 3 vertices are equally likely
    assert set(counts) == {(2, 0, 0), (1, 1, 0)}
    assert abs(counts[(2, 0, 0)] / 20_000 - 0.5) < 0.02
    assert isinstance(conditioned_tree(1.5, 1, rng), PlaneTree)


def test_dim_formula():
    assert dim_formula((1.5,)) == pytest.approx(2 - 1 / 1.5)
    assert dim_formula((1.2, 2)) == pytest.approx(1 + 5 / 12)
    assert dim_formula((1.1, 1.2, 2)) == pytest.approx(dim_formula((1.2, 1.1, 2)))
    with pytest.raises(DomainError):
        dim_formula((2.5,))


def test_large_compositions_noncrossing():
    rng = derive_rng(4, "large")
    for _ in range(10):
        lam = sample_iterated((1.2, 1.5, 1.8), int(rng.integers(1000, 20_000)), int(rng.integers(1 << 30)))
        assert is_noncrossing(lam.chords)
        assert np.all(lam.chords[:, 0] < lam.chords[:, 1])
