"""Discrete laminations coded by Lukasiewicz paths, and their triangulations.

A :class:`Lamination` at resolution ``m`` is a finite set of noncrossing
chords between the points ``exp(-2 i pi p / m)``.  For a tree with ``n``
vertices, vertex ``i >= 1`` closes its subtree with the chord
``{i, i + S_i + 1}``; the faces of the resulting lamination are indexed by
the vertices with at least one child.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import IncompatibleLabelling, NclamError
from .noncrossing import Decoration, NoncrossingTree, _child_order, is_noncrossing, normalize_chords
from .seeding import derive_rng
from .trees import PlaneTree, _as_path, decode, parents, subtree_sizes


@dataclass(frozen=True, eq=False)
class Lamination:
    """Noncrossing chords at resolution ``m``, stored as a sorted ``(E, 2)`` array."""

    m: int
    chords: np.ndarray

    def __init__(self, m: int, chords=(), check: bool = False):
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "chords", normalize_chords(np.asarray(chords, dtype=np.int64).reshape(-1, 2), self.m))
        if check and not is_noncrossing(self.chords):
            raise NclamError("chords cross")

    def __len__(self) -> int:
        return int(self.chords.shape[0])

    def __eq__(self, other):
        if not isinstance(other, Lamination):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.chords, other.chords)

    def __hash__(self):
        return hash((self.m, self.chords.tobytes()))

    def __repr__(self):
        if len(self) <= 12:
            return f"Lamination({self.m}, {self.chords.tolist()})"
        return f"Lamination(m={self.m}, chords={len(self)})"

    def chord_set(self) -> frozenset:
        return frozenset(map(tuple, self.chords.tolist()))

    def endpoints(self) -> np.ndarray:
        return np.unique(self.chords)

    def is_noncrossing(self) -> bool:
        return is_noncrossing(self.chords)

    def union(self, other: "Lamination") -> "Lamination":
        if other.m != self.m:
            raise NclamError("resolution mismatch")
        return Lamination(self.m, np.concatenate((self.chords, other.chords)))

    def to_json(self) -> dict:
        return {"m": self.m, "chords": self.chords.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Lamination":
        return cls(obj["m"], obj["chords"])


@dataclass(frozen=True)
class Face:
    """Face indexed by the jump vertex ``u``; ``boundary`` is ``B_u`` before reduction mod ``n``."""

    jump_index: int
    boundary: tuple[int, ...]
    special: int | None = None


@dataclass(frozen=True)
class JumpsLabelling:
    """Labels in ``[0, 1]`` attached to the jump vertices.

    ``rule`` is ``"uniform"`` (i.i.d. uniform from ``seed``), ``"zero"``
    (always the leftmost boundary point) or ``"explicit"`` (``values``).
    """

    rule: str = "uniform"
    seed: int = 0
    values: tuple[tuple[int, float], ...] = field(default=())

    @classmethod
    def uniform(cls, seed: int) -> "JumpsLabelling":
        return cls("uniform", seed=int(seed))

    @classmethod
    def zero(cls) -> "JumpsLabelling":
        return cls("zero")

    @classmethod
    def explicit(cls, values: dict) -> "JumpsLabelling":
        return cls("explicit", values=tuple(sorted((int(k), float(v)) for k, v in values.items())))

    def labels(self, n: int) -> np.ndarray:
        if self.rule == "zero":
            return np.zeros(n)
        if self.rule == "uniform":
            return derive_rng(self.seed, "jumps-labelling", n).random(n)
        if self.rule == "explicit":
            out = np.full(n, np.nan)
            for k, v in self.values:
                if not 0 <= k < n:
                    raise IncompatibleLabelling(f"label for vertex {k} outside [0, {n})")
                if not 0.0 <= v <= 1.0:
                    raise IncompatibleLabelling(f"label {v} outside [0, 1]")
                out[k] = v
            return out
        raise IncompatibleLabelling(f"unknown labelling rule {self.rule!r}")


def _structure(path):
    p = _as_path(path)
    tree = decode(p)
    sizes = subtree_sizes(p)
    return p, tree, sizes


def lamination_from_tree(path) -> Lamination:
    """Subtree-closing chords ``{i, i + S_i + 1}`` for ``i >= 1``, at resolution ``n``."""
    p = _as_path(path)
    n = p.n
    sizes = subtree_sizes(p)
    i = np.arange(1, n)
    return Lamination(n, np.stack((i, i + sizes[1:] + 1), axis=1))


def faces(path) -> list[Face]:
    """One face per vertex with ``k_i >= 1``: ``B_i = (i, j_1, ..., j_k, i + S_i + 1)``."""
    _, tree, sizes = _structure(path)
    kids = tree.kids
    par = parents(tree, sizes)
    order, start, _ = _child_order(kids, par)
    out = []
    for i in np.flatnonzero(kids > 0).tolist():
        ch = order[start[i] : start[i] + kids[i]].tolist()
        out.append(Face(i, tuple([i] + ch + [i + int(sizes[i]) + 1])))
    return out


def left_counts(tree: PlaneTree, labelling) -> np.ndarray:
    """Per-vertex ``L_i`` in ``{0..k_i}`` from a decoration, a labelling, or an explicit array.

    A :class:`Decoration` has no root entry; the root takes ``L_0 = k_0`` so
    that its special point is position 0, where a noncrossing tree has its root.
    A label ``x`` maps to ``min(k, floor(x (k + 1)))``.
    """
    kids = tree.kids
    n = tree.n
    if isinstance(labelling, Decoration):
        if labelling.l.shape[0] != n - 1:
            raise IncompatibleLabelling("decoration length does not match the tree")
        L = np.concatenate(([kids[0]], labelling.l))
    elif isinstance(labelling, JumpsLabelling):
        x = labelling.labels(n)
        jump = kids > 0
        if np.any(np.isnan(x[jump])):
            raise IncompatibleLabelling("missing label for a jump vertex")
        x = np.nan_to_num(x)
        L = np.minimum(kids, np.floor(x * (kids + 1)).astype(np.int64))
    else:
        L = np.asarray(labelling, dtype=np.int64)
        if L.shape[0] != n:
            raise IncompatibleLabelling("explicit left counts need one entry per vertex")
    if np.any(L < 0) or np.any(L > kids):
        raise IncompatibleLabelling("left count outside [0, k_i]")
    return L


def special_points(tree: PlaneTree, L: np.ndarray, sizes: np.ndarray | None = None) -> np.ndarray:
    """``p_i = j_{L_i + 1}`` if ``L_i < k_i`` else ``i + S_i + 1`` (``-1`` for leaves)."""
    kids = tree.kids
    if sizes is None:
        sizes = subtree_sizes(tree)
    par = parents(tree, sizes)
    order, start, _ = _child_order(kids, par)
    idx = np.arange(tree.n)
    sp = np.full(tree.n, -1, dtype=np.int64)
    jump = kids > 0
    inner = jump & (L < kids)
    sp[inner] = order[start[inner] + L[inner]]
    outer = jump & (L >= kids)
    sp[outer] = idx[outer] + sizes[outer] + 1
    return sp


def triangulate(path, labelling) -> Lamination:
    """Lamination of the tree with every face fanned out from its special point.

    The result also contains the side ``{i, i+1}`` of every face, so that at
    resolution ``n`` it is a triangulation of the ``n``-gon.
    """
    p = _as_path(path)
    tree = decode(p)
    n = tree.n
    sizes = subtree_sizes(p)
    L = left_counts(tree, labelling)
    if n == 1:
        return Lamination(1)
    par = parents(tree, sizes)
    sp = special_points(tree, L, sizes)
    idx = np.arange(n)
    jump = np.flatnonzero(tree.kids > 0)
    c = idx[1:]
    parts = [
        np.stack((c, c + sizes[1:] + 1), axis=1),
        np.stack((sp[par[c]], c), axis=1),
        np.stack((sp[jump], jump), axis=1),
        np.stack((sp[jump], jump + sizes[jump] + 1), axis=1),
        np.stack((jump, jump + 1), axis=1),
    ]
    return Lamination(n, np.concatenate(parts))


def triangulated_faces(path, labelling) -> list[Face]:
    p = _as_path(path)
    tree = decode(p)
    L = left_counts(tree, labelling)
    sp = special_points(tree, L)
    return [Face(f.jump_index, f.boundary, int(sp[f.jump_index])) for f in faces(p)]


def is_maximal(lam: Lamination, points=None) -> bool:
    """Whether no chord between two marked points can be added.

    A noncrossing chord set on ``P`` points in convex position has at most
    ``2P - 3`` chords (sides included), with equality exactly for triangulations.
    """
    pts = lam.endpoints() if points is None else np.unique(np.asarray(points, dtype=np.int64) % lam.m)
    if not is_noncrossing(lam.chords):
        return False
    if len(lam) and not np.all(np.isin(lam.chords, pts)):
        raise NclamError("chord endpoint outside the marked set")
    P = pts.shape[0]
    if P <= 1:
        return True
    return len(lam) == 2 * P - 3


def is_maximal_brute(lam: Lamination, points=None) -> bool:
    pts = lam.endpoints() if points is None else np.unique(np.asarray(points) % lam.m)
    have = lam.chord_set()
    chords = lam.chords.tolist()
    for a_i, a in enumerate(pts.tolist()):
        for b in pts.tolist()[a_i + 1 :]:
            if (a, b) in have:
                continue
            if all(not (a < c < b < d or c < a < d < b) for c, d in chords):
                return False
    return is_noncrossing(lam.chords)


def nc_to_lamination(nc: NoncrossingTree) -> Lamination:
    return Lamination(nc.n, nc.edges)


def _as_lam(obj) -> Lamination:
    if isinstance(obj, NoncrossingTree):
        return nc_to_lamination(obj)
    return obj


def chord_points(lam: Lamination, delta: float) -> np.ndarray:
    """Points on the chord union with spacing at most ``delta`` along every chord."""
    if len(lam) == 0:
        return np.zeros((0, 2))
    ang = -2.0 * np.pi * lam.chords / lam.m
    x, y = np.cos(ang), np.sin(ang)
    length = np.hypot(x[:, 1] - x[:, 0], y[:, 1] - y[:, 0])
    steps = np.maximum(np.ceil(length / delta).astype(np.int64), 1)
    owner = np.repeat(np.arange(len(lam)), steps + 1)
    offs = np.arange(owner.shape[0]) - np.repeat(np.cumsum(steps + 1) - (steps + 1), steps + 1)
    t = offs / steps[owner]
    px = x[owner, 0] + t * (x[owner, 1] - x[owner, 0])
    py = y[owner, 0] + t * (y[owner, 1] - y[owner, 0])
    return np.stack((px, py), axis=1)


def default_delta(m: int) -> float:
    return 2.0 * math.pi / (64.0 * m)


def hausdorff_distance(a, b, delta: float | None = None) -> float:
    """Hausdorff distance between two chord unions, within additive ``delta``."""
    a, b = _as_lam(a), _as_lam(b)
    if delta is None:
        delta = default_delta(max(a.m, b.m))
    if delta <= 0:
        raise ValueError("delta must be positive")
    pa, pb = chord_points(a, delta), chord_points(b, delta)
    if pa.shape[0] == 0 and pb.shape[0] == 0:
        return 0.0
    if pa.shape[0] == 0 or pb.shape[0] == 0:
        return math.inf
    ta, tb = cKDTree(pa), cKDTree(pb)
    d1 = tb.query(pa, k=1)[0].max()
    d2 = ta.query(pb, k=1)[0].max()
    return float(max(d1, d2))

