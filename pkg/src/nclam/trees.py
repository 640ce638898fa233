"""Plane trees stored as preorder children counts, and their Lukasiewicz codec.

A plane tree with ``n`` vertices is the sequence ``kids[0..n-1]`` of children
counts read in lexicographical (preorder) order.  Its Lukasiewicz path is
``W_0 = 0``, ``W_{j+1} = W_j + kids[j] - 1``; it stays nonnegative until it
first hits ``-1`` at time ``n``.  Every query here works on these two arrays,
so nothing is ever materialised as a pointer structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, InvalidPath, InvalidTree

__all__ = [
    "PlaneTree",
    "LukasiewiczPath",
    "InvalidTree",
    "InvalidPath",
    "IndexOutOfRange",
    "encode",
    "decode",
    "subtree_sizes",
    "sweep_subtree_sizes",
    "depths",
    "height",
    "parents",
    "is_ancestor",
    "children",
]


def _frozen_int_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.int64).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PlaneTree:
    """Rooted ordered tree as its preorder children-count sequence."""

    kids: np.ndarray

    def __init__(self, kids, check: bool = True):
        arr = _frozen_int_array(kids)
        object.__setattr__(self, "kids", arr)
        if check:
            _check_kids(arr)

    @property
    def n(self) -> int:
        return int(self.kids.shape[0])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, PlaneTree):
            return NotImplemented
        return np.array_equal(self.kids, other.kids)

    def __hash__(self) -> int:
        return hash(self.kids.tobytes())

    def __repr__(self) -> str:
        if self.n <= 20:
            return f"PlaneTree({self.kids.tolist()})"
        return f"PlaneTree(n={self.n})"

    def to_json(self) -> dict:
        return {"kids": self.kids.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "PlaneTree":
        return cls(obj["kids"])


@dataclass(frozen=True, eq=False)
class LukasiewiczPath:
    """Integer excursion ``W_0, ..., W_n`` coding a plane tree."""

    w: np.ndarray

    def __init__(self, w, check: bool = True):
        arr = _frozen_int_array(w)
        object.__setattr__(self, "w", arr)
        if check:
            _check_path(arr)

    @property
    def n(self) -> int:
        return int(self.w.shape[0]) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, LukasiewiczPath):
            return NotImplemented
        return np.array_equal(self.w, other.w)

    def __hash__(self) -> int:
        return hash(self.w.tobytes())

    def __repr__(self) -> str:
        if self.n <= 20:
            return f"LukasiewiczPath({self.w.tolist()})"
        return f"LukasiewiczPath(n={self.n})"

    def to_json(self) -> dict:
        return {"w": self.w.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "LukasiewiczPath":
        return cls(obj["w"])


def _check_path(w: np.ndarray) -> None:
    if w.shape[0] < 2:
        raise InvalidPath("a path codes at least one vertex")
    if w[0] != 0:
        raise InvalidPath("W_0 must be 0")
    if w[-1] != -1:
        raise InvalidPath("W_n must be -1")
    steps = np.diff(w)
    if np.any(steps < -1):
        j = int(np.argmax(steps < -1))
        raise InvalidPath(f"increment {int(steps[j])} < -1 at step {j}")
    if np.any(w[:-1] < 0):
        j = int(np.argmax(w[:-1] < 0))
        raise InvalidPath(f"W_{j} = {int(w[j])} < 0 before the end")


def _check_kids(kids: np.ndarray) -> None:
    if kids.shape[0] == 0:
        raise InvalidTree("a tree has at least one vertex")
    if np.any(kids < 0):
        raise InvalidTree("negative children count")
    try:
        _check_path(np.concatenate(([0], np.cumsum(kids - 1))))
    except InvalidPath as exc:
        raise InvalidTree(f"not a preorder children sequence: {exc}") from None


def encode(tree: PlaneTree) -> LukasiewiczPath:
    w = np.empty(tree.n + 1, dtype=np.int64)
    w[0] = 0
    np.cumsum(tree.kids - 1, out=w[1:])
    return LukasiewiczPath(w, check=False)


def decode(path) -> PlaneTree:
    """Inverse of :func:`encode`; raises :class:`InvalidPath` on bad input."""
    if not isinstance(path, LukasiewiczPath):
        path = LukasiewiczPath(path)
    return PlaneTree(np.diff(path.w) + 1, check=False)


def _as_path(obj) -> LukasiewiczPath:
    if isinstance(obj, LukasiewiczPath):
        return obj
    if isinstance(obj, PlaneTree):
        return encode(obj)
    return LukasiewiczPath(obj)


def _as_kids(obj) -> np.ndarray:
    if isinstance(obj, PlaneTree):
        return obj.kids
    return decode(_as_path(obj)).kids


def subtree_sizes(path) -> np.ndarray:
    """Number of strict descendants ``S_k`` of every vertex.

    ``S_k = min{j >= k : W_j < W_k} - k - 1``.  Steps down are exactly -1, so
    the minimum is the first visit of level ``W_k - 1`` after ``k``; all these
    first visits are found with one sort and one ``searchsorted``.
    """
    w = _as_path(path).w
    n = w.shape[0] - 1
    span = n + 2
    keys = w * span + np.arange(n + 1)
    order = np.sort(keys)
    query = (w[:n] - 1) * span + np.arange(n)
    nxt = order[np.searchsorted(order, query, side="right")] - (w[:n] - 1) * span
    return nxt - np.arange(n) - 1


def sweep_subtree_sizes(path) -> np.ndarray:
    """Right-to-left stack sweep computing the same sizes as :func:`subtree_sizes`."""
    kids = _as_kids(path).tolist()
    n = len(kids)
    sizes = [0] * n
    stack: list[int] = []
    for i in range(n - 1, -1, -1):
        total = 1
        for _ in range(kids[i]):
            total += stack.pop()
        sizes[i] = total
        stack.append(total)
    return np.array(sizes, dtype=np.int64) - 1


def depths(path, sizes: np.ndarray | None = None) -> np.ndarray:
    """Generation ``|u(k)|`` of every vertex in preorder.

    Vertex ``v`` contributes one to the depth of every vertex in
    ``(v, v + S_v]``; the contributions are accumulated by a difference array.
    """
    if sizes is None:
        sizes = subtree_sizes(path)
    n = sizes.shape[0]
    ends = np.bincount(np.arange(n) + sizes + 1, minlength=n + 1)[:n]
    return np.arange(n) - np.cumsum(ends)


def height(tree) -> int:
    return int(depths(tree).max())


def parents(path, sizes: np.ndarray | None = None) -> np.ndarray:
    """Preorder index of the parent of every vertex (``-1`` for the root).

    The parent of ``u`` is the last vertex before ``u`` one generation up.
    """
    if sizes is None:
        sizes = subtree_sizes(path)
    d = depths(path, sizes)
    n = d.shape[0]
    span = n + 1
    keys = np.sort(d * span + np.arange(n))
    query = (d - 1) * span + np.arange(n)
    pos = np.searchsorted(keys, query, side="left") - 1
    out = keys[np.maximum(pos, 0)] - (d - 1) * span
    out[0] = -1
    return out


def is_ancestor(path, i: int, j: int) -> bool:
    """Whether ``u(i)`` is a (non-strict) ancestor of ``u(j)``."""
    p = _as_path(path)
    n = p.n
    for idx in (i, j):
        if not 0 <= idx <= n - 1:
            raise IndexOutOfRange(f"vertex index {idx} outside [0, {n - 1}]")
    if i > j:
        return False
    return bool(p.w[i] == p.w[i : j + 1].min())


def children(tree, i: int, sizes: np.ndarray | None = None) -> list[int]:
    """Preorder indices of the children of ``u(i)``."""
    kids = _as_kids(tree)
    if sizes is None:
        sizes = subtree_sizes(tree)
    out = []
    c = i + 1
    for _ in range(int(kids[i])):
        out.append(c)
        c += int(sizes[c]) + 1
    return out
