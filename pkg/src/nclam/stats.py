"""Longest chords, exact counts of noncrossing trees, goodness of fit and box counting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce

import numpy as np
from scipy import integrate

from .errors import EmptyBatch, EmptySet, ResolutionTooFine
from .lamination import Lamination
from .noncrossing import NoncrossingTree, extract
from .offspring import WeightSeq, solve_critical_b
from .trees import PlaneTree

# ---------------------------------------------------------------- longest chord


def chord_lengths(chords, m: int) -> np.ndarray:
    """Angular lengths ``min(d, m - d) / m`` of chords at resolution ``m``."""
    arr = np.asarray(chords, dtype=np.int64).reshape(-1, 2)
    d = np.abs(arr[:, 1] - arr[:, 0]) % m
    return np.minimum(d, m - d) / m


def longest_chord(chords, m: int | None = None) -> float:
    """Largest angular length among the chords (a lamination or tree is accepted)."""
    if isinstance(chords, (Lamination, NoncrossingTree)):
        m = chords.m if isinstance(chords, Lamination) else chords.n
        chords = chords.chords if isinstance(chords, Lamination) else chords.edges
    arr = np.asarray(chords).reshape(-1, 2)
    if arr.shape[0] == 0:
        raise EmptySet("no chords")
    return float(chord_lengths(arr, m).max())


def longest_chord_density(x):
    """Density of the longest chord of the Brownian triangulation on ``[1/3, 1/2]``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 1 / 3) & (x < 0.5)
    xi = x[inside]
    out[inside] = (3 * xi - 1) / (xi**2 * (1 - xi) ** 2 * np.sqrt(1 - 2 * xi)) / np.pi
    return out if out.shape else float(out)


def _integrand_u(u: float) -> float:
    # x = (1 - u^2) / 2 removes the inverse square root at x = 1/2
    x = (1.0 - u * u) / 2.0
    return (3 * x - 1) / (x * x * (1 - x) ** 2) / math.pi


_U_LOW = 1.0 / math.sqrt(3.0)


def brownian_longest_chord_cdf(x: float) -> float:
    """``P(longest chord <= x)`` for the Brownian triangulation."""
    x = min(max(float(x), 1 / 3), 0.5)
    if x <= 1 / 3:
        return 0.0
    u = math.sqrt(max(1.0 - 2.0 * x, 0.0))
    val, _ = integrate.quad(_integrand_u, u, _U_LOW, epsabs=1e-13, epsrel=1e-13, limit=200)
    return min(max(val, 0.0), 1.0)


@dataclass(frozen=True)
class ChordLengthLaw:
    """Longest-chord law with a tabulated cdf for fast vectorised evaluation."""

    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, points: int = 4001) -> "ChordLengthLaw":
        grid = np.linspace(1 / 3, 0.5, points)
        u = np.sqrt(np.maximum(1 - 2 * grid, 0.0))
        vals = np.empty(points)
        vals[0] = 0.0
        # integrate piecewise in u between consecutive grid points
        for i in range(1, points):
            piece, _ = integrate.quad(_integrand_u, u[i], u[i - 1], epsabs=1e-15, epsrel=1e-13)
            vals[i] = vals[i - 1] + piece
        return cls(grid, vals)

    def density(self, x):
        return longest_chord_density(x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.grid, self.values, left=0.0, right=1.0)
        return out if out.shape else float(out)


@lru_cache(maxsize=1)
def chord_length_law() -> ChordLengthLaw:
    return ChordLengthLaw.build()


def ks_distance(samples, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance between the sample and a continuous cdf."""
    x = np.sort(np.asarray(samples, dtype=float))
    N = x.shape[0]
    if N == 0:
        raise EmptySet("no samples")
    F = np.asarray([cdf(v) for v in x]) if not hasattr(cdf, "cdf") else np.asarray(cdf.cdf(x))
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - F), np.max(F - (i - 1) / N)))


# ---------------------------------------------------------------- enumeration


def _degree_set(A, n: int) -> list[int]:
    if A is None:
        return list(range(1, n + 1))
    return sorted(int(a) for a in A if 1 <= int(a) <= n)


def _poly_power(g: list[int], m: int, N: int) -> list[int]:
    """Coefficients ``0..N`` of ``g(y)^m`` for ``g(0) = 1`` (exact integers)."""
    q = [0] * (N + 1)
    q[0] = 1
    nz = [(i, gi) for i, gi in enumerate(g) if i >= 1 and gi]
    for j in range(1, N + 1):
        acc = 0
        for i, gi in nz:
            if i > j:
                break
            acc += ((m + 1) * i - j) * gi * q[j - i]
        q[j] = acc // j
    return q


def count_nc(n: int, A=None) -> int:
    """Exact ``#NC_n^A`` (all noncrossing trees when ``A`` is ``None``).

    With ``S = z G(S)``, ``G(y) = sum_{k+1 in A} (k+1) y^k`` the weighted
    subtree series and ``H(y) = sum_{k in A} y^k`` the root factor, the count
    is ``[z^{n-1}] H(S) = [y^{n-2}] H'(y) G(y)^{n-1} / (n-1)`` by Lagrange
    inversion; ``G^{n-1}`` is expanded by the integer power recurrence.
    """
    if n < 1:
        return 0
    if n == 1:
        return 1
    N = n - 1
    degs = _degree_set(A, N + 1)
    if 1 not in degs:
        return 0
    g = [0] * N
    for d in degs:
        if d - 1 < N:
            g[d - 1] = d
    q = _poly_power(g, N, N - 1)
    total = sum(k * q[N - k] for k in degs if k <= N)
    return total // N


def count_nc_dp(n: int, A=None) -> int:
    """The same count by direct convolution of weighted subtree counts."""
    if n == 1:
        return 1
    degs = _degree_set(A, n)
    A_set = set(degs)
    N = n - 1
    s = [0] * (N + 1)

    def powers(seq, kmax):
        out = [[1] + [0] * N]
        for _ in range(kmax):
            prev = out[-1]
            out.append([sum(prev[i] * seq[j - i] for i in range(j + 1)) for j in range(N + 1)])
        return out

    # s_q built incrementally: s_q only needs s_1..s_{q-1}
    for q in range(1, N + 1):
        tot = 0
        for k in range(0, q):
            if (k + 1) not in A_set:
                continue
            if k == 0:
                tot += 1 if q == 1 else 0
                continue
            pw = powers(s[:q] + [0] * (N + 1 - q), k)[k]
            tot += (k + 1) * pw[q - 1]
        s[q] = tot
    total = 0
    kmax = max(degs) if degs else 0
    pw = powers(s, min(kmax, N))
    for k in degs:
        if k <= N:
            total += pw[k][N]
    return total


@dataclass(frozen=True)
class CountTable:
    A: frozenset | None
    counts: dict


def count_table(N: int, A=None) -> CountTable:
    key = None if A is None else frozenset(int(a) for a in A)
    return CountTable(key, {n: count_nc(n, key) for n in range(1, N + 1)})


def nc_closed_form(n: int) -> int:
    return math.comb(3 * n - 3, n - 1) // (2 * n - 1)


def theorem5_constants(A=None) -> tuple[float, float, int]:
    """``(K_A, rho, period)`` with ``#NC_n^A ~ K_A rho^(n-1) n^(-3/2)`` along feasible ``n``."""
    if A is None:
        w = WeightSeq("uniform")
        degs = None
    else:
        degs = sorted(int(a) for a in A)
        w = WeightSeq.indicator(degs)
    b = solve_critical_b(w)
    if degs is None:
        K = int(math.ceil(60 / -math.log10(b)))
        ks = np.arange(K + 1, dtype=float)
        in_a = np.ones(K + 1, dtype=bool)
        in_a_shift = np.ones(K + 1, dtype=bool)
        period = 1
    else:
        top = max(degs)
        ks = np.arange(top + 1, dtype=float)
        in_a = np.isin(np.arange(top + 1), degs)
        in_a_shift = np.isin(np.arange(top + 1) + 1, degs)
        period = reduce(math.gcd, [d - 1 for d in degs])
    bk = b**ks
    s1 = np.sum(((ks + 1) * bk)[in_a_shift])
    s2 = np.sum(((ks + 1) * (ks**2 - 1) * bk)[in_a_shift])
    s3 = np.sum((ks * bk)[in_a])
    K_A = period * math.sqrt(s1 / (2 * math.pi * s2)) * s3
    rho = float(np.sum(((ks + 1) * bk / b)[in_a_shift]))
    return float(K_A), rho, int(period)


def theorem5_ratio(n: int, A=None) -> float:
    """``count_nc(n, A) / (K_A rho^(n-1) n^(-3/2))`` evaluated without overflow."""
    K, rho, _ = theorem5_constants(A)
    c = count_nc(n, A)
    if c == 0:
        return 0.0
    log_c = math.log(c)
    return math.exp(log_c - math.log(K) - (n - 1) * math.log(rho) + 1.5 * math.log(n))


def largest_feasible(nmax: int, A) -> int:
    for n in range(nmax, 0, -1):
        if count_nc(n, A) > 0:
            return n
    return 0


# ---------------------------------------------------------------- degrees


def _shape_kids(obj) -> np.ndarray:
    if isinstance(obj, PlaneTree):
        return obj.kids
    if isinstance(obj, NoncrossingTree):
        return extract(obj)[0].kids
    return np.asarray(obj, dtype=np.int64)


def degree_histogram(batch) -> dict[int, float]:
    """Empirical children-count law of the non-root vertices of a batch of shapes."""
    batch = list(batch)
    if not batch:
        raise EmptyBatch("empty batch")
    counts: dict[int, int] = {}
    total = 0
    for obj in batch:
        kids = _shape_kids(obj)[1:]
        vals, cnt = np.unique(kids, return_counts=True)
        for v, c in zip(vals.tolist(), cnt.tolist()):
            counts[v] = counts.get(v, 0) + c
        total += kids.shape[0]
    if total == 0:
        raise EmptyBatch("no non-root vertices")
    return {k: counts[k] / total for k in sorted(counts)}


def total_variation(p: dict, q, support) -> float:
    """``(1/2) sum |p(k) - q(k)|`` over ``support``; ``q`` is a dict or callable."""
    qf = q if callable(q) else (lambda k: q.get(k, 0.0))
    return 0.5 * sum(abs(p.get(k, 0.0) - float(qf(k))) for k in support)


# ---------------------------------------------------------------- box counting


def _cells_of_segments(x0, y0, x1, y1, h: float, side: int) -> np.ndarray:
    """Linear indices of the grid cells (side ``h``, origin ``(-1, -1)``) met by segments."""
    gx0, gy0 = (x0 + 1) / h, (y0 + 1) / h
    gx1, gy1 = (x1 + 1) / h, (y1 + 1) / h
    ix0, ix1 = np.floor(gx0), np.floor(gx1)
    iy0, iy1 = np.floor(gy0), np.floor(gy1)
    nx = np.abs(ix1 - ix0).astype(np.int64)
    ny = np.abs(iy1 - iy0).astype(np.int64)
    seg = np.arange(x0.shape[0])
    # parameters where the segment crosses vertical and horizontal grid lines
    ts = [np.zeros(seg.shape[0]), np.ones(seg.shape[0])]
    owners = [seg, seg]
    for n_lines, g0, g1, i0, i1 in ((nx, gx0, gx1, ix0, ix1), (ny, gy0, gy1, iy0, iy1)):
        tot = int(n_lines.sum())
        if tot == 0:
            continue
        own = np.repeat(seg, n_lines)
        k = np.arange(tot) - np.repeat(np.cumsum(n_lines) - n_lines, n_lines)
        up = (i1 >= i0)[own]
        line = np.where(up, i0[own] + 1 + k, i0[own] - k)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (line - g0[own]) / (g1[own] - g0[own])
        ts.append(t)
        owners.append(own)
    t = np.concatenate(ts)
    own = np.concatenate(owners)
    order = np.lexsort((t, own))
    t, own = t[order], own[order]
    same = own[1:] == own[:-1]
    tm = 0.5 * (t[1:] + t[:-1])[same]
    o = own[1:][same]
    px = gx0[o] + tm * (gx1[o] - gx0[o])
    py = gy0[o] + tm * (gy1[o] - gy0[o])
    cx = np.clip(np.floor(px).astype(np.int64), 0, side - 1)
    cy = np.clip(np.floor(py).astype(np.int64), 0, side - 1)
    return cx * side + cy


def box_counts(lam: Lamination, levels, max_work: int = 2_000_000) -> dict[int, int]:
    """Number of grid squares of side ``2^-j`` meeting the chord union, per level ``j``.

    Chords are processed in chunks of at most ``max_work`` grid crossings and
    the met squares are marked in a bitmap (or a set of indices on fine grids).
    """
    levels = list(levels)
    if max(levels) > math.log2(4 * lam.m) + 1e-12:
        raise ResolutionTooFine(f"2^{max(levels)} exceeds 4 m = {4 * lam.m}")
    ang = -2.0 * np.pi * lam.chords / lam.m
    xs, ys = np.cos(ang), np.sin(ang)
    out = {}
    for j in levels:
        h = 2.0**-j
        side = 2 ** (j + 1)
        if len(lam) == 0:
            out[j] = 0
            continue
        cx = np.clip(np.floor((xs + 1) / h).astype(np.int64), 0, side - 1)
        cy = np.clip(np.floor((ys + 1) / h).astype(np.int64), 0, side - 1)
        # chords inside a single cell need no traversal
        single = (cx[:, 0] == cx[:, 1]) & (cy[:, 0] == cy[:, 1])
        long_ = np.flatnonzero(~single)
        lx, ly = xs[long_], ys[long_]
        work = np.abs(cx[long_, 1] - cx[long_, 0]) + np.abs(cy[long_, 1] - cy[long_, 0]) + 2
        bounds = np.searchsorted(np.cumsum(work), np.arange(max_work, work.sum() + max_work, max_work))
        bounds = np.unique(np.concatenate(([0], np.minimum(bounds + 1, len(long_)), [len(long_)])))
        dense = side * side <= 1 << 28
        grid = np.zeros(side * side, dtype=bool) if dense else None
        first = cx[single, 0] * side + cy[single, 0]
        cells = [] if dense else [np.unique(first)]
        if dense:
            grid[first] = True
        for a, b in zip(bounds[:-1], bounds[1:]):
            if a == b:
                continue
            c = _cells_of_segments(lx[a:b, 0], ly[a:b, 0], lx[a:b, 1], ly[a:b, 1], h, side)
            if dense:
                grid[c] = True
            else:
                cells.append(np.unique(c))
        out[j] = int(grid.sum()) if dense else int(np.unique(np.concatenate(cells)).shape[0])
    return out


def box_dimension(lam: Lamination, levels) -> tuple[float, dict[int, int]]:
    """Least-squares slope of ``log2 N_j`` against ``j`` and the per-level counts."""
    counts = box_counts(lam, levels)
    js = np.array(sorted(counts), dtype=float)
    ns = np.array([counts[int(j)] for j in js], dtype=float)
    if np.any(ns <= 0):
        raise EmptySet("empty lamination has no box dimension")
    slope = float(np.polyfit(js, np.log2(ns), 1)[0])
    return slope, counts
