"""Noncrossing trees on the ``n``-th roots of unity and their shape/decoration coding.

Vertex ``p`` sits at ``exp(-2 i pi p / n)``: vertex 0 is the complex number 1
and labels increase clockwise.  A noncrossing tree is read as a plane tree
rooted at vertex 0 (its *shape*) together with, for every non-root vertex,
the number of its children lying to the left of the line from vertex 0
(its *decoration*).  :func:`embed` and :func:`extract` are mutually inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CrossingEdges, IncompatibleDecoration, NotATree, TooLarge
from .offspring import WeightSeq, critical_pair
from .samplers import DEFAULT_BUDGET, sample_modified_bgw
from .trees import PlaneTree, parents, subtree_sizes


def normalize_chords(pairs, m: int | None = None) -> np.ndarray:
    """Sorted unique ``(E, 2)`` array with ``p < q``; degenerate pairs dropped."""
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if m is not None:
        arr = arr % m
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    keep = lo != hi
    lo, hi = lo[keep], hi[keep]
    if lo.shape[0]:
        base = int(hi.max()) + 1
        key = np.unique(lo * base + hi)
        lo, hi = key // base, key % base
    out = np.stack((lo, hi), axis=1)
    out.setflags(write=False)
    return out


def is_noncrossing(chords) -> bool:
    """Exact test that no two chords ``{a,b}, {c,d}`` satisfy ``a < c < b < d``.

    Chords are swept by left end (longer first among equal left ends) while a
    stack holds the chords still open; a new chord must nest in the top one.
    """
    arr = np.asarray(chords, dtype=np.int64).reshape(-1, 2)
    if arr.shape[0] < 2:
        return True
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    order = np.lexsort((-hi, lo))
    stack: list[int] = []
    for l, r in zip(lo[order].tolist(), hi[order].tolist()):
        while stack and stack[-1] <= l:
            stack.pop()
        if stack and stack[-1] < r:
            return False
        stack.append(r)
    return True


def crossing_pairs_brute(chords) -> list[tuple[int, int]]:
    """All crossing index pairs by the quadratic circular-order test."""
    arr = [tuple(sorted(map(int, c))) for c in np.asarray(chords).reshape(-1, 2)]
    out = []
    for i, (a, b) in enumerate(arr):
        for j in range(i + 1, len(arr)):
            c, d = arr[j]
            if a < c < b < d or c < a < d < b:
                out.append((i, j))
    return out


@dataclass(frozen=True, eq=False)
class Decoration:
    """Left-children counts ``l_1, ..., l_{n-1}`` of the non-root vertices."""

    l: np.ndarray

    def __init__(self, l):
        arr = np.array(l, dtype=np.int64).reshape(-1)
        arr.setflags(write=False)
        object.__setattr__(self, "l", arr)

    def __eq__(self, other):
        if not isinstance(other, Decoration):
            return NotImplemented
        return np.array_equal(self.l, other.l)

    def __hash__(self):
        return hash(self.l.tobytes())

    def __repr__(self):
        return f"Decoration({self.l.tolist()})"

    def to_json(self) -> dict:
        return {"l": self.l.tolist()}


@dataclass(frozen=True, eq=False)
class NoncrossingTree:
    """Tree on ``n`` points of the circle; ``edges`` is a sorted ``(n-1, 2)`` array."""

    n: int
    edges: np.ndarray

    def __init__(self, n: int, edges):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", normalize_chords(edges))

    def __eq__(self, other):
        if not isinstance(other, NoncrossingTree):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self):
        if self.n <= 12:
            return f"NoncrossingTree({self.n}, {self.edges.tolist()})"
        return f"NoncrossingTree(n={self.n})"

    def edge_set(self) -> frozenset:
        return frozenset(map(tuple, self.edges.tolist()))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": self.edges.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "NoncrossingTree":
        return cls(obj["n"], obj["edges"])


def _child_order(kids: np.ndarray, par: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Children grouped by parent (in order), group starts, and sibling ranks."""
    n = kids.shape[0]
    order = np.argsort(par[1:], kind="stable") + 1
    start = np.cumsum(kids) - kids
    rank = np.zeros(n, dtype=np.int64)
    rank[order] = np.arange(n - 1) - start[par[order]]
    return order, start, rank


def positions(
    tree: PlaneTree, dec: Decoration | np.ndarray, sizes: np.ndarray | None = None, par: np.ndarray | None = None
) -> np.ndarray:
    """Circle position of every vertex under the decorated embedding.

    Vertex ``u`` with label ``l`` owns a contiguous clockwise arc of
    ``1 + S_u`` slots: the blocks of its first ``l`` children, then ``u``,
    then the blocks of the remaining children.  The root uses ``l = 0``.
    """
    kids = tree.kids
    n = tree.n
    l = np.asarray(dec.l if isinstance(dec, Decoration) else dec, dtype=np.int64)
    if l.shape[0] != n - 1:
        raise IncompatibleDecoration(f"decoration has {l.shape[0]} entries, tree needs {n - 1}")
    if np.any(l < 0) or np.any(l > kids[1:]):
        raise IncompatibleDecoration("decoration entry outside [0, k_u]")
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    if sizes is None:
        sizes = subtree_sizes(tree)
    if par is None:
        par = parents(tree, sizes)
    order, start, rank = _child_order(kids, par)
    lab = np.concatenate(([0], l))
    idx = np.arange(n)
    # children placed before their parent shift the parent's whole subtree arc
    left = np.flatnonzero((idx > 0) & (rank < lab[np.maximum(par, 0)]))
    diff = np.bincount(left, minlength=n + 1) - np.bincount(left + sizes[left] + 1, minlength=n + 2)[: n + 1]
    g = -np.cumsum(diff[:n])
    before = sizes.copy()
    partial = lab < kids
    ps = idx[partial]
    before[ps] = order[start[ps] + lab[ps]] - ps - 1
    return idx + g + before


def embed(tree: PlaneTree, dec: Decoration) -> NoncrossingTree:
    """The noncrossing tree with shape ``tree`` and decoration ``dec``."""
    if tree.n == 1:
        positions(tree, dec)
        return NoncrossingTree(1, np.zeros((0, 2), dtype=np.int64))
    sizes = subtree_sizes(tree)
    par = parents(tree, sizes)
    pos = positions(tree, dec, sizes, par)
    c = np.arange(1, tree.n)
    return NoncrossingTree(tree.n, np.stack((pos[par[c]], pos[c]), axis=1))


def _check_tree(nc: NoncrossingTree) -> list[list[int]]:
    n = nc.n
    if nc.edges.shape[0] != n - 1:
        raise NotATree(f"{nc.edges.shape[0]} edges on {n} vertices")
    if nc.edges.size and (nc.edges.min() < 0 or nc.edges.max() >= n):
        raise NotATree("edge endpoint outside [0, n)")
    adj: list[list[int]] = [[] for _ in range(n)]
    for p, q in nc.edges.tolist():
        adj[p].append(q)
        adj[q].append(p)
    seen = [False] * n
    seen[0] = True
    todo = [0]
    while todo:
        v = todo.pop()
        for u in adj[v]:
            if not seen[u]:
                seen[u] = True
                todo.append(u)
    if not all(seen):
        raise NotATree("edges do not span the vertex set")
    if not is_noncrossing(nc.edges):
        raise CrossingEdges("two edges cross")
    return adj


def extract(nc: NoncrossingTree) -> tuple[PlaneTree, Decoration]:
    """Shape rooted at vertex 0 (children clockwise) and left-children counts."""
    adj = _check_tree(nc)
    n = nc.n
    kids = [0] * n
    labels = [0] * n
    k = 0
    stack = [(0, -1)]
    while stack:
        v, p = stack.pop()
        ch = sorted(u for u in adj[v] if u != p)
        kids[k] = len(ch)
        labels[k] = sum(1 for u in ch if u < v)
        k += 1
        stack.extend((u, v) for u in reversed(ch))
    return PlaneTree(kids, check=False), Decoration(labels[1:])


def left_children_geometric(nc: NoncrossingTree, v: int, children_of_v) -> int:
    """Children of ``v`` strictly left of the oriented line from vertex 0 to ``v``."""
    n = nc.n
    z = lambda p: np.exp(-2j * np.pi * p / n)  # noqa: E731
    d = z(v) - z(0)
    cnt = 0
    for c in children_of_v:
        e = z(c) - z(0)
        if d.real * e.imag - d.imag * e.real > 0:
            cnt += 1
    return cnt


def decoration_count(tree: PlaneTree) -> int:
    """``#C(tau)``: product of ``k_u + 1`` over non-root vertices."""
    out = 1
    for k in tree.kids[1:].tolist():
        out *= k + 1
    return out


def uniform_decoration(tree: PlaneTree, rng) -> Decoration:
    return Decoration(rng.integers(0, tree.kids[1:] + 1))


def theta_uniform(tree: PlaneTree, rng) -> NoncrossingTree:
    return embed(tree, uniform_decoration(tree, rng))


@lru_cache(maxsize=32)
def _pair_for(w: WeightSeq):
    return critical_pair(w)


def sample_simply_generated(w: WeightSeq, n: int, rng, budget: int = DEFAULT_BUDGET) -> NoncrossingTree:
    """Random element of ``NC_n`` with probability proportional to ``prod_u w(deg u)``."""
    pair = _pair_for(w)
    if n == 1:
        return NoncrossingTree(1, np.zeros((0, 2), dtype=np.int64))
    tree = sample_modified_bgw(pair, n, rng, budget)
    return theta_uniform(tree, rng)


def sample_simply_generated_decorated(w: WeightSeq, n: int, rng, budget: int = DEFAULT_BUDGET):
    """Like :func:`sample_simply_generated` but also returns shape and decoration."""
    pair = _pair_for(w)
    tree = sample_modified_bgw(pair, n, rng, budget)
    dec = uniform_decoration(tree, rng)
    return tree, dec, embed(tree, dec)


def plane_trees(n: int):
    """All plane trees with ``n`` vertices, as children-count tuples."""
    if n < 1:
        return
    seq = [0] * n

    def rec(i: int, open_slots: int):
        # open_slots = pending children not yet visited, counting the current vertex
        if i == n:
            if open_slots == 0:
                yield tuple(seq)
            return
        remaining = n - i
        for k in range(0, remaining):
            slots = open_slots - 1 + k
            if slots < 0 or slots > remaining - 1:
                continue
            if slots == 0 and i + 1 < n:
                continue
            seq[i] = k
            yield from rec(i + 1, slots)

    yield from rec(0, 1)


def _degrees_ok(kids: tuple, A) -> bool:
    if A is None:
        return True
    if len(kids) == 1:
        return True
    if kids[0] not in A:
        return False
    return all((k + 1) in A for k in kids[1:])


def decorated_trees(n: int, A=None):
    """All ``(tree, decoration)`` pairs of size ``n`` with graph degrees in ``A``."""
    for kids in plane_trees(n):
        if not _degrees_ok(kids, A):
            continue
        tree = PlaneTree(kids, check=False)
        for l in itertools.product(*(range(k + 1) for k in kids[1:])):
            yield tree, Decoration(l)


def enumerate_all(n: int, A=None) -> list[NoncrossingTree]:
    """Every element of ``NC_n`` (or ``NC_n^A``), sorted by edge list."""
    if n > 12:
        raise TooLarge("enumeration is limited to n <= 12")
    if n < 1:
        return []
    A = None if A is None else frozenset(int(a) for a in A)
    seen = {embed(t, d) for t, d in decorated_trees(n, A)}
    return sorted(seen, key=lambda t: t.edges.tolist())


def validate(nc) -> bool:
    """Spanning tree on ``n`` points with no two crossing edges."""
    try:
        _check_tree(nc)
    except (NotATree, CrossingEdges):
        return False
    return True
