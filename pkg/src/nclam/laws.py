"""Discrete probability laws on the nonnegative integers.

A :class:`DiscreteLaw` is an explicit head ``p[0..D]`` plus an optional
analytic tail on ``{D+1, D+2, ...}``.  Light-tailed laws are cut where the
neglected mass is below ``1e-16`` and carry no tail; the power-law laws used
for the stable regime keep an exact tail which can be sampled without bias.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special


def hurwitz_zeta(s: float, q: float = 1.0) -> float:
    """``sum_{k>=0} (k+q)^(-s)`` for ``s > 1``, ``q > 0``."""
    if s <= 1:
        raise ValueError("zeta needs s > 1")
    return float(special.zeta(s, q))


def zeta(s: float) -> float:
    return hurwitz_zeta(s, 1.0)


@dataclass(frozen=True)
class PowerTail:
    """Tail ``p(k) = scale * k^-(1+alpha)`` for ``k > start - 1``."""

    start: int
    scale: float
    alpha: float

    def pmf(self, k):
        k = np.asarray(k, dtype=float)
        return self.scale * k ** (-(1.0 + self.alpha))

    @property
    def mass(self) -> float:
        return self.scale * hurwitz_zeta(1.0 + self.alpha, self.start)

    @property
    def first_moment(self) -> float:
        return self.scale * hurwitz_zeta(self.alpha, self.start)

    @property
    def second_moment(self) -> float:
        return math.inf

    def tail_mass_from(self, k: int) -> float:
        """Mass of ``{k, k+1, ...}`` for ``k >= start``."""
        return self.scale * hurwitz_zeta(1.0 + self.alpha, k)

    def sample(self, rng: np.random.Generator, size: int, cap: int) -> np.ndarray:
        """Exact draws from the tail; values above ``cap`` are clipped to ``cap``.

        Rejection from a discretised Pareto proposal.  Callers only use the
        draws to test a sum against a target below ``cap``, so clipping never
        changes an accepted outcome.
        """
        a = self.alpha
        D1 = float(self.start)
        bound = ((D1 + 1.0) / D1) ** (1.0 + a)
        out = np.empty(size, dtype=np.int64)
        filled = 0
        while filled < size:
            m = size - filled
            u = rng.random(m)
            y = D1 * (1.0 - u) ** (-1.0 / a)
            k = np.floor(np.minimum(y, 2.0**62))
            # ratio k^-(1+a) / int_k^{k+1} a x^-(1+a) dx, in [1, bound]
            with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                cell = -np.expm1(-a * np.log1p(1.0 / k))
                ratio = a / (k * cell)
            ratio = np.where(np.isfinite(ratio), ratio, 1.0)
            keep = rng.random(m) * bound <= ratio
            acc = k[keep]
            take = min(acc.shape[0], m)
            out[filled : filled + take] = np.minimum(acc[:take], cap).astype(np.int64)
            filled += take
        return out


@dataclass(frozen=True)
class NumericTail:
    """Tail given by a vectorised pmf with precomputed mass and moments."""

    start: int
    fn: Callable
    mass: float
    first_moment: float
    second_moment: float

    def pmf(self, k):
        return self.fn(np.asarray(k, dtype=float))


@dataclass(frozen=True, eq=False)
class DiscreteLaw:
    head: np.ndarray
    tail: PowerTail | NumericTail | None = None
    truncation_error: float = 0.0
    _key: bytes = field(default=b"", repr=False)

    def __post_init__(self):
        h = np.asarray(self.head, dtype=float).copy()
        h.setflags(write=False)
        object.__setattr__(self, "head", h)
        tail_key = repr(self.tail).encode() if self.tail is not None else b""
        object.__setattr__(self, "_key", h.tobytes() + b"|" + tail_key)

    def __eq__(self, other):
        if not isinstance(other, DiscreteLaw):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @property
    def key(self) -> bytes:
        return self._key

    @property
    def D(self) -> int:
        return int(self.head.shape[0]) - 1

    @property
    def bounded(self) -> bool:
        return self.tail is None

    def pmf(self, k):
        k = np.asarray(k)
        out = np.zeros(k.shape, dtype=float)
        inside = (k >= 0) & (k <= self.D)
        out[inside] = self.head[k[inside].astype(np.int64)]
        if self.tail is not None:
            over = k > self.D
            if np.any(over):
                out[over] = self.tail.pmf(k[over])
        return out if out.shape else float(out)

    def __call__(self, k):
        return self.pmf(k)

    @property
    def total_mass(self) -> float:
        return float(self.head.sum()) + (self.tail.mass if self.tail is not None else 0.0)

    @property
    def mean(self) -> float:
        k = np.arange(self.D + 1)
        m = float(np.dot(k, self.head))
        if self.tail is not None:
            m += self.tail.first_moment
        return m

    @property
    def variance(self) -> float:
        if self.tail is not None and not math.isfinite(self.tail.second_moment):
            return math.inf
        k = np.arange(self.D + 1, dtype=float)
        m2 = float(np.dot(k * k, self.head))
        if self.tail is not None:
            m2 += self.tail.second_moment
        return m2 - self.mean**2

    def support(self) -> np.ndarray:
        """Support points in the head (all tail points are charged too)."""
        return np.flatnonzero(self.head > 0)

    def tail_mass_from(self, k: int) -> float:
        """``P(X >= k)``."""
        if k <= self.D:
            head = float(self.head[max(k, 0) :].sum())
            return head + (self.tail.mass if self.tail is not None else 0.0)
        if self.tail is None:
            return 0.0
        if isinstance(self.tail, PowerTail):
            return self.tail.tail_mass_from(k)
        raise NotImplementedError("tail mass for numeric tails")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Plain i.i.d. draws (the tail is sampled exactly)."""
        probs = np.append(self.head, self.tail.mass if self.tail is not None else 0.0)
        probs = probs / probs.sum()
        idx = rng.choice(probs.shape[0], size=size, p=probs)
        if self.tail is not None:
            over = idx == probs.shape[0] - 1
            cnt = int(over.sum())
            if cnt:
                if not isinstance(self.tail, PowerTail):
                    raise NotImplementedError("sampling numeric tails")
                idx[over] = self.tail.sample(rng, cnt, cap=2**62)
        return idx.astype(np.int64)


def finite_law(probs, truncation_error: float = 0.0) -> DiscreteLaw:
    p = np.asarray(probs, dtype=float)
    if np.any(p < 0):
        raise ValueError("negative probability")
    nz = np.flatnonzero(p > 0)
    if nz.size == 0:
        raise ValueError("empty law")
    p = p[: nz[-1] + 1]
    return DiscreteLaw(p / p.sum(), None, truncation_error)
