"""Decorated laminations, their composition, and iterated stable laminations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CrossingAfterMap, DomainError, ResolutionMismatch
from .lamination import Lamination, lamination_from_tree
from .noncrossing import is_noncrossing, plane_trees
from .offspring import geometric_critical, stable_offspring
from .samplers import DEFAULT_BUDGET, sample_bgw_conditioned
from .seeding import derive_rng
from .trees import PlaneTree

# faces are keyed by the chord (a, b), a < b, directly above them; the face
# touching every point not strictly inside a chord is keyed (0, m)
FaceKey = tuple[int, int]

# conditioned trees up to this size are drawn from a cached enumeration
SMALL_TREE = 9


def face_boundaries(lam: Lamination, min_size: int = 3) -> dict[FaceKey, tuple[int, ...]]:
    """Marked points on the closure of each face, in increasing order.

    Point ``p`` lies on the face of the innermost chord ``(a, b)`` with
    ``a < p < b``; both endpoints of a chord lie on the face below it.
    """
    m = lam.m
    ch = lam.chords
    out: dict[FaceKey, list[int]] = {(0, m): []}
    if len(ch):
        order = np.lexsort((-ch[:, 1], ch[:, 0]))
        ch = ch[order]
    starts = ch[:, 0].tolist() if len(ch) else []
    ends = ch[:, 1].tolist() if len(ch) else []
    for a, b in zip(starts, ends):
        out[(a, b)] = [a]
    stack: list[FaceKey] = [(0, m)]
    ci = 0
    nchords = len(starts)
    for p in range(m):
        while stack[-1][1] == p:
            out[stack.pop()].append(p)
        out[stack[-1]].append(p)
        while ci < nchords and starts[ci] == p:
            stack.append((p, ends[ci]))
            ci += 1
    return {k: tuple(v) for k, v in out.items() if len(v) >= min_size}


@dataclass(frozen=True, eq=False)
class DecoratedLamination:
    """A lamination with, for each face, the ordered boundary points ``phi_V``."""

    lam: Lamination
    face_decorations: dict = field(default_factory=dict)

    @classmethod
    def from_lamination(cls, lam: Lamination) -> "DecoratedLamination":
        return cls(lam, face_boundaries(lam))

    def sizes(self) -> dict[FaceKey, int]:
        return {k: len(v) for k, v in self.face_decorations.items()}

    def __eq__(self, other):
        if not isinstance(other, DecoratedLamination):
            return NotImplemented
        return self.lam == other.lam and self.face_decorations == other.face_decorations


def _map_chords(dec: tuple[int, ...], chords: np.ndarray) -> np.ndarray:
    return np.asarray(dec, dtype=np.int64)[chords]


def compose(base: DecoratedLamination, inserts: dict) -> DecoratedLamination:
    """Insert ``inserts[face]`` (at resolution equal to the face size) into each face.

    Faces of an insert inherit ``phi_V o phi_F`` as their decoration.
    """
    m = base.lam.m
    parts = [base.lam.chords]
    decs = dict(base.face_decorations)
    for key, sub in inserts.items():
        if key not in base.face_decorations:
            raise ResolutionMismatch(f"no face {key}")
        dec = base.face_decorations[key]
        if sub.m != len(dec):
            raise ResolutionMismatch(f"face {key} has {len(dec)} points, insert has resolution {sub.m}")
        if len(sub) == 0:
            continue
        parts.append(_map_chords(dec, sub.chords))
        del decs[key]
        arr = np.asarray(dec, dtype=np.int64)
        for (s, t), sub_dec in face_boundaries(sub).items():
            new_key = key if t == sub.m else (int(arr[s]), int(arr[t]))
            decs[new_key] = tuple(arr[list(sub_dec)].tolist())
    lam = Lamination(m, np.concatenate(parts))
    if not is_noncrossing(lam.chords):
        raise CrossingAfterMap("composition produced crossing chords")
    return DecoratedLamination(lam, decs)


@dataclass(frozen=True)
class AlphaVector:
    """Stability indices of the successive levels; only the last one may equal 2."""

    alphas: tuple[float, ...]

    def __post_init__(self):
        a = tuple(float(x) for x in self.alphas)
        object.__setattr__(self, "alphas", a)
        if not a:
            raise DomainError("need at least one index")
        if any(not 1 < x < 2 for x in a[:-1]) or not 1 < a[-1] <= 2:
            raise DomainError("indices must lie in (1, 2), the last one in (1, 2]")

    @classmethod
    def parse(cls, text: str) -> "AlphaVector":
        try:
            return cls(tuple(float(x) for x in str(text).split(",") if x.strip()))
        except ValueError as exc:
            raise DomainError(f"bad index list {text!r}") from exc

    def __len__(self) -> int:
        return len(self.alphas)


@lru_cache(maxsize=16)
def _offspring_law(alpha: float):
    if alpha == 2.0:
        return geometric_critical()
    return stable_offspring(alpha).law


@lru_cache(maxsize=64)
def _small_tree_table(alpha: float, n: int):
    law = _offspring_law(alpha)
    shapes = list(plane_trees(n))
    pm = np.asarray([law.pmf(np.arange(n))], dtype=float)[0]
    w = np.asarray([np.prod(pm[list(s)]) for s in shapes])
    return shapes, np.cumsum(w / w.sum())


def conditioned_tree(alpha: float, n: int, rng, budget: int = DEFAULT_BUDGET) -> PlaneTree:
    """Offspring-law tree conditioned to have ``n`` vertices (geometric law when ``alpha = 2``)."""
    if n <= SMALL_TREE:
        shapes, cdf = _small_tree_table(float(alpha), int(n))
        i = min(int(np.searchsorted(cdf, rng.random(), side="right")), len(shapes) - 1)
        return PlaneTree(shapes[i], check=False)
    return sample_bgw_conditioned(_offspring_law(float(alpha)), n, rng, budget)


def sample_iterated(alphas, n: int, seed: int, budget: int = DEFAULT_BUDGET) -> Lamination:
    """Discrete iterated stable lamination with ``n`` points.

    Level 1 is the lamination of a conditioned ``alpha_1`` tree; at level
    ``q`` every face with ``beta >= 4`` boundary points receives the
    lamination of an independent conditioned ``alpha_q`` tree of size ``beta``.
    """
    return sample_iterated_decorated(alphas, n, seed, budget).lam


def sample_iterated_decorated(alphas, n: int, seed: int, budget: int = DEFAULT_BUDGET) -> DecoratedLamination:
    av = alphas if isinstance(alphas, AlphaVector) else AlphaVector(tuple(alphas))
    if n < 3:
        raise DomainError("n must be >= 3")
    tree = conditioned_tree(av.alphas[0], n, derive_rng(seed, "level", 1), budget)
    cur = DecoratedLamination.from_lamination(lamination_from_tree(tree))
    for q, alpha in enumerate(av.alphas[1:], start=2):
        inserts = {}
        for key in sorted(cur.face_decorations):
            beta = len(cur.face_decorations[key])
            if beta < 4:
                continue
            rng = derive_rng(seed, "face", key, "level", q)
            inserts[key] = lamination_from_tree(conditioned_tree(alpha, beta, rng, budget))
        cur = compose(cur, inserts)
    return cur


def dim_formula(alphas) -> float:
    """Conjectured Hausdorff dimension of the iterated lamination.

    ``max(2 - 1/a_1, 1 + (1 - 1/a_2)/a_1, ..., 1 + (1 - 1/a_q)/(a_1...a_{q-1}))``;
    it is a reference value only and is labelled as conjectured in reports.
    """
    av = alphas if isinstance(alphas, AlphaVector) else AlphaVector(tuple(alphas))
    a = av.alphas
    terms = [2.0 - 1.0 / a[0]]
    prod = 1.0
    for i in range(1, len(a)):
        prod *= a[i - 1]
        terms.append(1.0 + (1.0 - 1.0 / a[i]) / prod)
    return max(terms)
