import numpy as np
import pytest
from hypothesis import given, settings

from nclam.errors import IndexOutOfRange, InvalidPath, InvalidTree
from nclam.noncrossing import plane_trees
from nclam.seeding import derive_rng
from nclam.trees import (
    LukasiewiczPath,
    PlaneTree,
    children,
    decode,
    depths,
    encode,
    height,
    is_ancestor,
    parents,
    subtree_sizes,
    sweep_subtree_sizes,
)

from strategies import trees


def _recursive_sizes(kids):
    out = [0] * len(kids)

    def walk(i):
        j = i + 1
        for _ in range(kids[i]):
            j = walk(j)
        out[i] = j - i - 1
        return j

    walk(0)
    return out


def _parents_oracle(kids):
    par = [-1] * len(kids)
    stack = []
    for i, k in enumerate(kids):
        if stack:
            p = stack[-1]
            par[i] = p[0]
            p[1] -= 1
            if p[1] == 0:
                stack.pop()
        if k:
            stack.append([i, k])
    return par


@pytest.mark.parametrize(
    "kids,path",
    [([0], [0, -1]), ([2, 0, 0], [0, 1, 0, -1]), ([1, 1, 0], [0, 0, 0, -1])],
)
def test_encode_decode_examples(kids, path):
    assert encode(PlaneTree(kids)).w.tolist() == path
    assert decode(LukasiewiczPath(path)).kids.tolist() == kids


@pytest.mark.parametrize("bad", [[0, 1, -1], [0, 0], [0, -1, -1], [1, -1]])
def test_decode_rejects_bad_paths(bad):
    with pytest.raises(InvalidPath):
        LukasiewiczPath(bad)


@pytest.mark.parametrize("bad", [[1], [0, 0], [2, 0], [-1, 0]])
def test_bad_trees(bad):
    with pytest.raises(InvalidTree):
        PlaneTree(bad)


def test_height_examples():
    assert [height(PlaneTree(k)) for k in ([0], [2, 0, 0], [1, 1, 0])] == [0, 1, 2]


@pytest.mark.parametrize(
    "path,sizes", [([0, 1, 0, -1], [2, 0, 0]), ([0, 0, 0, -1], [2, 1, 0]), ([0, -1], [0])]
)
def test_subtree_size_examples(path, sizes):
    assert subtree_sizes(LukasiewiczPath(path)).tolist() == sizes


def test_is_ancestor_examples():
    p = LukasiewiczPath([0, 1, 0, -1])
    assert is_ancestor(p, 0, 2)
    assert not is_ancestor(p, 1, 2)
    assert all(is_ancestor(p, i, i) for i in range(3))
    with pytest.raises(IndexOutOfRange):
        is_ancestor(p, 0, 3)


@pytest.mark.parametrize("n", range(1, 11))
def test_exhaustive_against_oracles(n):
    for kids in plane_trees(n):
        t = PlaneTree(kids)
        assert decode(encode(t)) == t
        sizes = subtree_sizes(t)
        assert sizes.tolist() == _recursive_sizes(kids)
        assert sweep_subtree_sizes(t).tolist() == sizes.tolist()
        par = _parents_oracle(kids)
        assert parents(t).tolist() == par
        for i in range(n):
            for j in range(n):
                v, chain = j, set()
                while v != -1:
                    chain.add(v)
                    v = par[v]
                assert is_ancestor(t, i, j) == (i in chain)


@given(trees())
@settings(max_examples=200, deadline=None)
def test_random_trees_roundtrip(t):
    assert decode(encode(t)) == t
    sizes = subtree_sizes(t)
    assert sizes[0] == t.n - 1
    assert np.array_equal(sizes, sweep_subtree_sizes(t))
    d = depths(t)
    par = parents(t)
    assert np.all(d[1:] == d[par[1:]] + 1)
    kids0 = children(t, 0)
    assert len(kids0) == t.kids[0]
    assert sum(1 + sizes[c] for c in kids0) == t.n - 1


def test_large_random_path_roundtrip():
    rng = derive_rng(1, "trees")
    n = 10**6
    # a random bridge rotated by the cycle lemma gives a valid path
    x = rng.poisson(1.0, size=n)
    x[-1] += n - 1 - x.sum() if x.sum() < n - 1 else 0
    while x.sum() > n - 1:
        i = int(np.argmax(x))
        x[i] -= min(x[i], x.sum() - (n - 1))
    s = np.cumsum(x - 1)
    j = int(np.argmin(s)) + 1
    kids = np.concatenate((x[j:], x[:j]))
    t = PlaneTree(kids)
    assert decode(encode(t)) == t
    assert np.array_equal(subtree_sizes(t), sweep_subtree_sizes(t))


def test_json_roundtrip():
    t = PlaneTree([2, 1, 0, 0])
    assert PlaneTree.from_json(t.to_json()) == t
    p = encode(t)
    assert LukasiewiczPath.from_json(p.to_json()) == p
