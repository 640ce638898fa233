"""Exact samplers for size-conditioned BGW trees and forests, and walk oracles.

A forest of ``k`` BGW trees with ``m`` vertices in total is a uniform rotation
of an i.i.d. sequence ``xi_1, ..., xi_m`` conditioned on ``sum xi = m - k``
(cycle lemma).  The conditioning is done by rejection on the degree counts,
drawn in vectorised batches with ``Generator.multinomial``; heavy tails are
drawn exactly from their analytic form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import signal

from .errors import DegenerateTree, Infeasible, Timeout
from .laws import DiscreteLaw, finite_law
from .offspring import OffspringPair, StableOffspring
from .trees import PlaneTree, subtree_sizes

DEFAULT_BUDGET = 10**9
_MAX_BATCH = 4096


def as_law(mu) -> DiscreteLaw:
    """Coerce a law, a stable family, a pair (its ``mu``) or a pmf vector."""
    if isinstance(mu, DiscreteLaw):
        return mu
    if isinstance(mu, StableOffspring):
        return mu.law
    if isinstance(mu, OffspringPair):
        return mu.mu
    if isinstance(mu, WalkLaw):
        return mu.law
    return finite_law(mu)


# ---------------------------------------------------------------- walks


@dataclass(frozen=True)
class WalkLaw:
    """Random walk with steps ``xi - 1``, ``xi ~ law``; ``cap`` bounds the DP support."""

    law: DiscreteLaw
    cap: int | None = None

    @property
    def step_mean(self) -> float:
        return self.law.mean - 1.0


def _pmf_vector(law: DiscreteLaw, cap: int) -> np.ndarray:
    return np.asarray(law.pmf(np.arange(cap + 1)), dtype=float)


def _conv(a: np.ndarray, b: np.ndarray, cap: int) -> np.ndarray:
    if min(a.shape[0], b.shape[0]) < 256:
        out = np.convolve(a, b)
    else:
        out = signal.fftconvolve(a, b)
        np.maximum(out, 0.0, out=out)
    return out[: cap + 1]


@lru_cache(maxsize=64)
def _sum_distribution_cached(key: bytes, law: DiscreteLaw, n: int, cap: int) -> np.ndarray:
    base = _pmf_vector(law, cap)
    result = np.zeros(1)
    result[0] = 1.0
    power = base
    e = n
    while e:
        if e & 1:
            result = _conv(result, power, cap)
        e >>= 1
        if e:
            power = _conv(power, power, cap)
    out = np.zeros(cap + 1)
    out[: result.shape[0]] = result
    out.setflags(write=False)
    return out


def sum_distribution(law, n: int, cap: int) -> np.ndarray:
    """``P(xi_1 + ... + xi_n = j)`` for ``j = 0..cap``.

    Values ``xi > cap`` cannot contribute, so the result is exact up to
    floating point even for laws with unbounded support.
    """
    law = as_law(law)
    return _sum_distribution_cached(law.key, law, int(n), int(cap))


def walk_pmf(law, n: int, k: int) -> float:
    """``P(S_n = k)`` for the walk with steps ``xi - 1``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    target = n + k
    if target < 0:
        return 0.0
    if n == 0:
        return 1.0 if k == 0 else 0.0
    wl = law if isinstance(law, WalkLaw) else None
    base = as_law(law)
    cap = target if wl is None or wl.cap is None else min(target, wl.cap + n)
    if cap < target:
        return 0.0
    return float(sum_distribution(base, n, target)[target])


def walk_pmf_error(law, n: int) -> float:
    """Bound on the error of :func:`walk_pmf` due to the law's own truncation."""
    return n * as_law(law).truncation_error


def hitting_time_pmf(law, k: int, n: int) -> float:
    """``P(T_{-k} = n) = (k/n) P(S_n = -k)``."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be >= 1")
    return k / n * walk_pmf(law, n, -k)


def tree_size_pmf(pair: OffspringPair, n: int) -> float:
    """Probability that a modified BGW tree has exactly ``n`` vertices."""
    if n < 2:
        return 0.0
    m = n - 1
    dist = sum_distribution(pair.mu, m, m - 1)
    ks = np.arange(1, m + 1)
    roots = np.asarray(pair.mu_root.pmf(ks), dtype=float)
    hits = ks / m * dist[m - ks]
    return float(np.dot(roots, hits))


# ---------------------------------------------------------------- feasibility


def _positive_support(law: DiscreteLaw, limit: int) -> list[int]:
    pts = [int(v) for v in law.support() if 0 < v <= limit]
    if law.tail is not None:
        pts.extend(range(law.D + 1, limit + 1))
    return pts


def forest_feasible(mu, k: int, total: int) -> bool:
    """Whether a forest of ``k`` trees with ``total`` vertices has positive probability.

    Decided by an unbounded-knapsack reachability sweep on ``total - k``.
    """
    law = as_law(mu)
    if k < 1 or total < k:
        return False
    if law.head[0] <= 0:
        return False
    s = total - k
    if s == 0 or (law.D >= 1 and law.head[1] > 0):
        return True
    support = _positive_support(law, s)
    if 1 in support:
        return True
    if not support:
        return False
    mask = (1 << (s + 1)) - 1
    reach = 1
    for v in support:
        shift = v
        while shift <= s:
            reach |= (reach << shift) & mask
            shift <<= 1
        if (reach >> s) & 1:
            return True
    return bool((reach >> s) & 1)


# ---------------------------------------------------------------- conditioned sequences


@dataclass
class _Budget:
    limit: int
    used: int = 0

    def spend(self, amount: int, what: str) -> None:
        self.used += amount
        if self.used > self.limit:
            raise Timeout(f"rejection budget of {self.limit} draws exhausted while {what}")


@lru_cache(maxsize=64)
def _categories(law: DiscreteLaw, cap: int) -> tuple[np.ndarray, np.ndarray]:
    """Category probabilities (values ``0..cap`` then the rest) and the values."""
    probs = np.append(law.head, law.tail.mass if law.tail is not None else 0.0)
    probs = probs / probs.sum()
    if cap < law.D:
        # values above the target always reject: lump them into one category
        probs = np.append(probs[: cap + 1], max(0.0, 1.0 - probs[: cap + 1].sum()))
    vals = np.arange(cap + 1, dtype=np.int64)
    probs.setflags(write=False)
    vals.setflags(write=False)
    return probs, vals


def _conditioned_values(law: DiscreteLaw, m: int, target: int, rng, budget: _Budget) -> np.ndarray:
    """Multiset of ``m`` i.i.d. ``law`` values conditioned on summing to ``target``.

    Returned unordered (grouped by value); callers shuffle.
    """
    D = law.D
    probs, vals = _categories(law, min(target, D))
    if target < D:
        batch = 1
        while True:
            counts = rng.multinomial(m, probs, size=batch)
            budget.spend(batch * probs.shape[0], "conditioning degree counts")
            hit = np.flatnonzero((counts[:, -1] == 0) & (counts[:, :-1] @ vals == target))
            if hit.size:
                return np.repeat(vals, counts[hit[0], :-1])
            batch = min(2 * batch, _MAX_BATCH)
    has_tail = law.tail is not None and probs[-1] > 0
    batch = 1
    while True:
        counts = rng.multinomial(m, probs, size=batch)
        budget.spend(batch * probs.shape[0], "conditioning degree counts")
        head_sum = counts[:, :-1] @ vals
        if not has_tail:
            hit = np.flatnonzero(head_sum == target)
            if hit.size:
                row = counts[hit[0], :-1]
                return np.repeat(vals, row)
        else:
            ntail = counts[:, -1]
            room = target - head_sum
            ok = np.flatnonzero((room >= ntail * (D + 1)) & ((ntail > 0) | (room == 0)))
            if ok.size:
                r0 = ok[0]
                if ntail[r0] == 0:
                    return np.repeat(vals, counts[r0, :-1])
                # all candidate rows at once; the first row whose tail sum hits wins
                t = ntail[ok]
                tv = law.tail.sample(rng, int(t.sum()), cap=int(room[ok].max()) + 1)
                budget.spend(int(t.sum()), "drawing tail values")
                starts = np.concatenate(([0], np.cumsum(t)[:-1]))
                cs = np.concatenate(([0], np.cumsum(tv)))
                sums = cs[starts + t] - cs[starts]
                win = np.flatnonzero(sums == room[ok])
                if win.size:
                    w = int(win[0])
                    r = ok[w]
                    return np.concatenate((np.repeat(vals, counts[r, :-1]), tv[starts[w] : starts[w] + t[w]]))
        batch = min(2 * batch, _MAX_BATCH)


def _cycle_rotate(x: np.ndarray, k: int, rng) -> np.ndarray:
    """Uniform valid rotation of a bridge with steps ``x - 1`` summing to ``-k``."""
    s = np.cumsum(x - 1)
    runmin = np.minimum.accumulate(s)
    low = int(runmin[-1])
    level = low + int(rng.integers(k))
    # first time the walk reaches `level`; steps down are -1 so it is hit exactly
    j = int(np.argmax(runmin <= level)) + 1
    if j == x.shape[0]:
        return x
    return np.concatenate((x[j:], x[:j]))


def _forest_kids(law: DiscreteLaw, k: int, total: int, rng, budget: _Budget) -> np.ndarray:
    if not forest_feasible(law, k, total):
        raise Infeasible(f"no forest of {k} trees with {total} vertices under this law")
    if total == k:
        return np.zeros(total, dtype=np.int64)
    x = _conditioned_values(law, total, total - k, rng, budget)
    x = rng.permutation(x)
    return _cycle_rotate(x, k, rng)


def _split_forest(kids: np.ndarray, k: int) -> list[np.ndarray]:
    s = np.cumsum(kids - 1)
    runmin = np.minimum.accumulate(s)
    ends = np.searchsorted(-runmin, np.arange(1, k + 1)) + 1
    starts = np.concatenate(([0], ends[:-1]))
    return [kids[a:b] for a, b in zip(starts, ends)]


def sample_forest(mu, k: int, total: int, rng, budget: int = DEFAULT_BUDGET) -> list[PlaneTree]:
    """``k`` i.i.d. BGW trees conditioned to have ``total`` vertices altogether."""
    law = as_law(mu)
    kids = _forest_kids(law, k, total, rng, _Budget(budget))
    return [PlaneTree(t, check=False) for t in _split_forest(kids, k)]


def sample_bgw_conditioned(mu, n: int, rng, budget: int = DEFAULT_BUDGET) -> PlaneTree:
    """A BGW tree with offspring law ``mu`` conditioned to have ``n`` vertices."""
    law = as_law(mu)
    if n < 1:
        raise Infeasible("a tree has at least one vertex")
    return PlaneTree(_forest_kids(law, 1, n, rng, _Budget(budget)), check=False)


# ---------------------------------------------------------------- modified BGW


@lru_cache(maxsize=32)
def _root_weights(key: tuple, pair: OffspringPair, n: int) -> np.ndarray:
    m = n - 1
    dist = sum_distribution(pair.mu, m, m - 1)
    ks = np.arange(1, m + 1)
    w = np.asarray(pair.mu_root.pmf(ks), dtype=float) * ks / m * dist[m - ks]
    w.setflags(write=False)
    return w


def root_degree_law(pair: OffspringPair, n: int) -> np.ndarray:
    """Normalised law of the root degree ``L = 1..n-1`` of a size-``n`` modified BGW tree."""
    w = _root_weights((pair.mu.key, pair.mu_root.key), pair, int(n))
    tot = w.sum()
    if tot <= 0:
        raise Infeasible(f"no tree of size {n} under this pair")
    return w / tot


@lru_cache(maxsize=32)
def _root_cdf(key: tuple, pair: OffspringPair, n: int) -> np.ndarray:
    # same arithmetic as Generator.choice, so draws match rng.choice(p=...)
    cdf = root_degree_law(pair, n).cumsum()
    cdf /= cdf[-1]
    cdf.setflags(write=False)
    return cdf


def sample_modified_bgw(pair: OffspringPair, n: int, rng, budget: int = DEFAULT_BUDGET) -> PlaneTree:
    """Tree of size ``n``: root law ``mu_root``, every other vertex ``mu``."""
    if n < 2:
        raise Infeasible("the root has at least one child, so n >= 2")
    law = pair.mu
    bud = _Budget(budget)
    if pair.mu.bounded and pair.mu_root.bounded:
        cdf = _root_cdf((pair.mu.key, pair.mu_root.key), pair, int(n))
        L = int(cdf.searchsorted(rng.random(), side="right")) + 1
        forest = _forest_kids(law, L, n - 1, rng, bud)
    else:
        # L - 1 is distributed as mu under the size-biased root law; drawing
        # n values conditioned on summing to n - 2 realises the size condition
        if law.pmf(0) <= 0:
            raise Infeasible("mu(0) = 0: no finite trees")
        x = _conditioned_values(law, n, n - 2, rng, bud)
        x = rng.permutation(x)
        L = int(x[0]) + 1
        forest = _cycle_rotate(x[1:], L, rng)
    return PlaneTree(np.concatenate(([L], forest)), check=False)


# ---------------------------------------------------------------- root statistics


@dataclass(frozen=True)
class RootStats:
    M: int
    N0: int
    n: int


def root_stats(tree) -> RootStats:
    """Largest root-subtree size ``M`` and root degree ``N0``."""
    kids = tree.kids if isinstance(tree, PlaneTree) else np.asarray(tree)
    n = int(kids.shape[0])
    if n < 2:
        raise DegenerateTree("root statistics need n >= 2")
    forest = _split_forest(np.asarray(kids[1:], dtype=np.int64), int(kids[0]))
    M = max(f.shape[0] for f in forest)
    return RootStats(int(M), int(kids[0]), n)


def root_stats_slow(tree: PlaneTree) -> RootStats:
    sizes = subtree_sizes(tree)
    c, M = 1, 0
    for _ in range(int(tree.kids[0])):
        M = max(M, int(sizes[c]) + 1)
        c += int(sizes[c]) + 1
    return RootStats(M, int(tree.kids[0]), tree.n)


def progeny_pmf(law, cap: int) -> np.ndarray:
    """``P(Y = j)``, ``j = 0..cap``, for the total progeny ``Y = T_{-1}`` of one tree."""
    out = np.zeros(cap + 1)
    for j in range(1, cap + 1):
        out[j] = hitting_time_pmf(law, 1, j)
    return out


def largest_subtree_limit(pair: OffspringPair, k: int, L: int) -> float:
    """``P(Y_1 + ... + Y_{L-1} = k) P(N = L)`` for the largest-subtree limit.

    ``P(N = L) = L mu_root(L) / sum_j j mu_root(j)`` and the ``Y_i`` are
    i.i.d. total progenies; their sum is convolved from :func:`progeny_pmf`.
    """
    pN = L * float(pair.mu_root.pmf(L)) / pair.mu_root.mean
    y = progeny_pmf(pair.mu, k)
    dist = np.zeros(k + 1)
    dist[0] = 1.0
    for _ in range(L - 1):
        dist = np.convolve(dist, y)[: k + 1]
    return pN * float(dist[k])
