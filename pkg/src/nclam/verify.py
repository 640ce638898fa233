"""Numerical verification suites with pass/fail reports.

Each suite takes a config dataclass (defaults are the full-size runs) and an
optional worker count, and returns a :class:`Report`.  Monte Carlo replicas
draw from ``derive_rng(seed, "replica", i)`` so results do not depend on the
worker count.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import special, stats as sstats

from .laws import finite_law
from .iterate import DecoratedLamination, compose, conditioned_tree, face_boundaries
from .lamination import Lamination, hausdorff_distance, is_maximal, lamination_from_tree, triangulate
from .noncrossing import (
    decorated_trees,
    embed,
    enumerate_all,
    plane_trees,
    extract,
    sample_simply_generated,
    uniform_decoration,
    validate,
)
from .offspring import WeightSeq, critical_pair, scaling_constant_B, stable_offspring
from .samplers import hitting_time_pmf, largest_subtree_limit, root_stats, sample_bgw_conditioned, sample_modified_bgw, tree_size_pmf
from .seeding import derive_rng
from .stats import (
    box_dimension,
    brownian_longest_chord_cdf,
    chord_length_law,
    count_nc,
    degree_histogram,
    ks_distance,
    longest_chord,
    nc_closed_form,
    theorem5_constants,
    theorem5_ratio,
    total_variation,
)
from .trees import PlaneTree
from .workers import pmap


@dataclass
class Report:
    suite: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        shown = ", ".join(f"{k}={_fmt(v)}" for k, v in self.metrics.items() if not isinstance(v, (list, dict)))
        return f"{'PASS' if self.passed else 'FAIL'} {self.suite}: {shown}"

    def to_json(self) -> dict:
        return _jsonable(asdict(self))


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _timed(fn):
    def run(cfg=None, workers: int = 1) -> Report:
        cfg = cfg if cfg is not None else globals()[fn.__annotations__["cfg"]]()
        t0 = time.perf_counter()
        rep = fn(cfg, workers)
        rep.config = asdict(cfg)
        rep.seconds = time.perf_counter() - t0
        return rep

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


UNIFORM = WeightSeq("uniform")


def mu_uniform(k) -> np.ndarray:
    """Shape offspring law of uniform noncrossing trees, ``4 (k+1) 3^-(k+2)``."""
    k = np.asarray(k, dtype=float)
    return 4.0 * (k + 1.0) * 3.0 ** (-(k + 2.0))


# ---------------------------------------------------------------- exact suites


@dataclass
class EnumerationConfig:
    n_max: int = 14


@_timed
def enumeration(cfg: EnumerationConfig, workers: int = 1) -> Report:
    """Exact counts against the closed form ``C(3n-3, n-1) / (2n-1)``."""
    got = {n: count_nc(n) for n in range(1, cfg.n_max + 1)}
    bad = [n for n, v in got.items() if v != nc_closed_form(n)]
    return Report("enumeration", not bad, {"checked": len(got), "mismatches": bad, "count_at_max": str(got[cfg.n_max])})


@dataclass
class BijectionConfig:
    n_max: int = 8


@_timed
def bijection(cfg: BijectionConfig, workers: int = 1) -> Report:
    """``embed`` is injective onto valid noncrossing trees and ``extract`` inverts it."""
    ok = True
    per_n = {}
    for n in range(1, cfg.n_max + 1):
        seen = set()
        roundtrip = True
        valid = True
        for tree, dec in decorated_trees(n):
            nc = embed(tree, dec)
            seen.add(nc)
            if n > 1 and not validate(nc):
                valid = False
            t2, d2 = extract(nc)
            if t2 != tree or d2 != dec:
                roundtrip = False
        per_n[n] = len(seen)
        ok &= len(seen) == count_nc(n) and roundtrip and valid
    return Report("bijection", bool(ok), {"distinct": per_n})


@dataclass
class Thm5Config:
    n_all: int = 2000
    lo_all: float = 0.98
    hi_all: float = 1.02
    degrees: tuple = (1, 3)
    n_max_set: int = 400
    lo_set: float = 0.90
    hi_set: float = 1.10


@_timed
def thm5(cfg: Thm5Config, workers: int = 1) -> Report:
    """Exact counts against ``K_A rho^(n-1) n^(-3/2)``."""
    K, rho, _ = theorem5_constants(None)
    r_all = theorem5_ratio(cfg.n_all)
    n_set = next(n for n in range(cfg.n_max_set, 0, -1) if count_nc(n, cfg.degrees) > 0)
    K2, rho2, period = theorem5_constants(cfg.degrees)
    r_set = theorem5_ratio(n_set, cfg.degrees)
    ok = cfg.lo_all <= r_all <= cfg.hi_all and cfg.lo_set <= r_set <= cfg.hi_set
    return Report(
        "thm5",
        ok,
        {"K": K, "rho": rho, "ratio_all": r_all, "n_set": n_set, "K_set": K2, "rho_set": rho2, "period_set": period, "ratio_set": r_set},
    )


def _first_passage_enum(probs: dict, k: int, n: int) -> float:
    """``P(T_{-k} = n)`` by summing over every step sequence (pruned when unreachable)."""
    items = sorted(probs.items())
    total = 0.0

    def rec(level: int, t: int, p: float):
        nonlocal total
        if t == n:
            if level == -k:
                total += p
            return
        rem = n - t
        for v, q in items:
            new = level + v - 1
            if new <= -k and t + 1 < n:
                continue
            if new - (rem - 1) > -k:
                break
            rec(new, t + 1, p * q)

    rec(0, 0, 1.0)
    return total


@dataclass
class KempermanConfig:
    k_max: int = 3
    n_max: int = 12
    tol: float = 1e-12


@_timed
def kemperman(cfg: KempermanConfig, workers: int = 1) -> Report:
    """Hitting-time pmf from the walk law against exhaustive path sums."""
    laws = {
        "finite": {0: 0.3, 1: 0.4, 2: 0.1, 3: 0.2},
        "uniform-nc": {int(j): float(mu_uniform(j)) for j in range(cfg.n_max + cfg.k_max + 1)},
    }
    pair_mu = critical_pair(UNIFORM).mu
    law_objs = {"finite": finite_law([0.3, 0.4, 0.1, 0.2]), "uniform-nc": pair_mu}
    err = 0.0
    for name, probs in laws.items():
        for k in range(1, cfg.k_max + 1):
            for n in range(k, cfg.n_max + 1):
                exact = _first_passage_enum(probs, k, n)
                err = max(err, abs(hitting_time_pmf(law_objs[name], k, n) - exact))
    return Report("kemperman", err < cfg.tol, {"max_abs_error": err})


@dataclass
class SizeTailConfig:
    n: int = 2000
    rel_tol: float = 0.05


@_timed
def size_tail(cfg: SizeTailConfig, workers: int = 1) -> Report:
    """``n B_n P(size = n)`` against ``|Gamma(-1/2)|^-1 sum_k k mu_root(k)``."""
    pair = critical_pair(UNIFORM)
    lhs = cfg.n * scaling_constant_B(pair, cfg.n) * tree_size_pmf(pair, cfg.n)
    rhs = pair.mu_root.mean / abs(special.gamma(-0.5))
    rel = abs(lhs / rhs - 1.0)
    return Report("size-tail", rel <= cfg.rel_tol, {"lhs": lhs, "rhs": rhs, "rel_error": rel, "sigma2": pair.var_mu})


# ---------------------------------------------------------------- Monte Carlo suites


@dataclass
class SamplerConfig:
    n: int = 6
    draws: int = 100_000
    seed: int = 4
    p_min: float = 1e-3


def _sampler_draw(args):
    seed, n, lo, hi = args
    out = []
    for i in range(lo, hi):
        nc = sample_simply_generated(UNIFORM, n, derive_rng(seed, "replica", i))
        out.append(tuple(map(tuple, nc.edges.tolist())))
    return out


def _blocks(total: int, size: int = 2000):
    return [(a, min(a + size, total)) for a in range(0, total, size)]


@_timed
def sampler(cfg: SamplerConfig, workers: int = 1) -> Report:
    """Chi-square test of ``sample_simply_generated`` against the uniform law on ``NC_n``."""
    universe = [tuple(map(tuple, t.edges.tolist())) for t in enumerate_all(cfg.n)]
    jobs = [(cfg.seed, cfg.n, a, b) for a, b in _blocks(cfg.draws)]
    counts = Counter(x for block in pmap(_sampler_draw, jobs, workers, chunksize=1) for x in block)
    outside = sum(v for k, v in counts.items() if k not in set(universe))
    obs = np.array([counts.get(u, 0) for u in universe], dtype=float)
    p = float(sstats.chisquare(obs).pvalue)
    return Report("sampler", p > cfg.p_min and outside == 0, {"classes": len(universe), "p_value": p, "outside": outside})


@dataclass
class Prop23Config:
    n: int = 200
    draws: int = 100_000
    seed: int = 23
    k_max: int = 3
    L_max: int = 3
    tol: float = 0.01


def _prop23_draw(args):
    seed, n, lo, hi = args
    pair = critical_pair(UNIFORM)
    out = []
    for i in range(lo, hi):
        rs = root_stats(sample_modified_bgw(pair, n, derive_rng(seed, "replica", i)))
        out.append((rs.n - 1 - rs.M, rs.N0))
    return out


@_timed
def prop23(cfg: Prop23Config, workers: int = 1) -> Report:
    """Joint law of ``(n - 1 - M, N_0)`` against its limit."""
    pair = critical_pair(UNIFORM)
    jobs = [(cfg.seed, cfg.n, a, b) for a, b in _blocks(cfg.draws, 5000)]
    counts = Counter(x for block in pmap(_prop23_draw, jobs, workers, chunksize=1) for x in block)
    err = 0.0
    table = {}
    for k in range(cfg.k_max + 1):
        for L in range(1, cfg.L_max + 1):
            emp = counts.get((k, L), 0) / cfg.draws
            lim = largest_subtree_limit(pair, k, L)
            table[f"{k},{L}"] = [emp, lim]
            err = max(err, abs(emp - lim))
    return Report("prop23", err <= cfg.tol, {"max_abs_error": err, "table": table})


@dataclass
class LongestChordConfig:
    n: int = 3000
    reps: int = 5000
    seed: int = 9
    tol: float = 0.03


def _longest_chord_draw(args):
    seed, n, lo, hi = args
    return [longest_chord(sample_simply_generated(UNIFORM, n, derive_rng(seed, "replica", i))) for i in range(lo, hi)]


def longest_chord_samples(n: int, reps: int, seed: int, workers: int = 1) -> np.ndarray:
    jobs = [(seed, n, a, b) for a, b in _blocks(reps, 250)]
    return np.asarray([x for block in pmap(_longest_chord_draw, jobs, workers, chunksize=1) for x in block])


@_timed
def longest_chord_suite(cfg: LongestChordConfig, workers: int = 1) -> Report:
    """KS distance between longest chords of uniform noncrossing trees and the limit law."""
    xs = longest_chord_samples(cfg.n, cfg.reps, cfg.seed, workers)
    d = ks_distance(xs, chord_length_law())
    floor = lattice_ks_floor(cfg.n)
    return Report("longest-chord", d <= cfg.tol, {"ks": d, "lattice_floor": floor, "mean": float(xs.mean()), "reps": len(xs)})


def lattice_ks_floor(n: int) -> float:
    """Smallest KS distance any law on ``{k/n}`` can have from the limit law.

    The empirical cdf is flat on ``(1/2 - 1/n, 1/2)`` while the limit cdf rises
    by the mass of that cell there, so the distance is at least half of it.
    """
    return 0.5 * (1.0 - brownian_longest_chord_cdf(0.5 - 1.0 / n))


@dataclass
class TriangulationConfig:
    n_exhaustive: int = 8
    random_trees: int = 100
    n_max: int = 10_000
    alpha: float = 1.3
    seed: int = 7


def _triangulation_ok(tree: PlaneTree, dec) -> bool:
    lam = triangulate(tree, dec)
    if tree.n == 1:
        return len(lam) == 0
    return lam.is_noncrossing() and is_maximal(lam)


def _triangulation_random(args):
    seed, alpha, n_max, i = args
    rng = derive_rng(seed, "replica", i)
    n = int(np.exp(rng.uniform(np.log(3), np.log(n_max))))
    tree = sample_bgw_conditioned(stable_offspring(alpha).law, n, rng)
    return _triangulation_ok(tree, uniform_decoration(tree, rng))


@_timed
def triangulation(cfg: TriangulationConfig, workers: int = 1) -> Report:
    """Triangulated laminations are noncrossing and maximal."""
    exhaustive = 0
    bad = 0
    for n in range(1, cfg.n_exhaustive + 1):
        for tree, dec in decorated_trees(n):
            exhaustive += 1
            bad += not _triangulation_ok(tree, dec)
    jobs = [(cfg.seed, cfg.alpha, cfg.n_max, i) for i in range(cfg.random_trees)]
    rnd = pmap(_triangulation_random, jobs, workers)
    bad_random = len(rnd) - sum(rnd)
    return Report(
        "triangulation",
        bad == 0 and bad_random == 0,
        {"exhaustive": exhaustive, "failures": bad, "random": len(rnd), "random_failures": bad_random},
    )


@dataclass
class ConvergenceConfig:
    sizes: tuple = (100, 10_000)
    bounds: tuple = (0.6, 0.25)
    reps: int = 50
    alpha: float = 1.3
    delta: float = 2e-3
    seed: int = 17


def _convergence_draw(args):
    seed, alpha, n, delta, i = args
    rng = derive_rng(seed, "replica", i, "n", n)
    tree = sample_bgw_conditioned(stable_offspring(alpha).law, n, rng)
    dec = uniform_decoration(tree, rng)
    return hausdorff_distance(embed(tree, dec), triangulate(tree, dec), delta)


@_timed
def convergence(cfg: ConvergenceConfig, workers: int = 1) -> Report:
    """Median Hausdorff distance between a noncrossing tree and its triangulated lamination."""
    med = []
    for n in cfg.sizes:
        jobs = [(cfg.seed, cfg.alpha, n, cfg.delta, i) for i in range(cfg.reps)]
        med.append(float(np.median(pmap(_convergence_draw, jobs, workers, chunksize=1))))
    ok = med[-1] < med[0] and all(m < b for m, b in zip(med, cfg.bounds))
    return Report("convergence", ok, {f"median_n{n}": m for n, m in zip(cfg.sizes, med)})


@dataclass
class DegreesConfig:
    n: int = 10_000
    reps: int = 20
    k_max: int = 10
    seed: int = 11
    tol: float = 0.02


def _degrees_draw(args):
    seed, n, i = args
    return extract(sample_simply_generated(UNIFORM, n, derive_rng(seed, "replica", i)))[0]


@_timed
def degrees(cfg: DegreesConfig, workers: int = 1) -> Report:
    """Children counts of uniform noncrossing trees against ``4 (k+1) 3^-(k+2)``."""
    shapes = pmap(_degrees_draw, [(cfg.seed, cfg.n, i) for i in range(cfg.reps)], workers, chunksize=1)
    hist = degree_histogram(shapes)
    tv = total_variation(hist, lambda k: float(mu_uniform(k)), range(cfg.k_max + 1))
    return Report("degrees", tv <= cfg.tol, {"tv": tv, "vertices": cfg.reps * (cfg.n - 1)})


@dataclass
class DimensionConfig:
    n: int = 200_000
    reps: int = 20
    alpha: float = 1.3
    levels: tuple = (4, 11)
    gap: float = 0.3
    window: float = 0.25
    seed: int = 12


def _dimension_draw(args):
    seed, alpha, n, levels, i = args
    rng = derive_rng(seed, "replica", i)
    tree = sample_bgw_conditioned(stable_offspring(alpha).law, n, rng)
    lv = range(levels[0], levels[1] + 1)
    plain = box_dimension(lamination_from_tree(tree), lv)[0]
    tri = box_dimension(triangulate(tree, uniform_decoration(tree, rng)), lv)[0]
    return plain, tri


@_timed
def dimension(cfg: DimensionConfig, workers: int = 1) -> Report:
    """Box-counting slopes of triangulated and plain stable laminations."""
    jobs = [(cfg.seed, cfg.alpha, cfg.n, cfg.levels, i) for i in range(cfg.reps)]
    res = np.asarray(pmap(_dimension_draw, jobs, workers, chunksize=1))
    plain, tri = float(res[:, 0].mean()), float(res[:, 1].mean())
    want_tri, want_plain = 1 + 1 / cfg.alpha, 2 - 1 / cfg.alpha
    ok = tri - plain >= cfg.gap and abs(tri - want_tri) <= cfg.window and abs(plain - want_plain) <= cfg.window
    return Report(
        "dimension",
        ok,
        {"mean_triangulated": tri, "mean_plain": plain, "target_triangulated": want_tri, "target_plain": want_plain},
    )


# ---------------------------------------------------------------- iteration


@dataclass
class IterationConfig:
    n_exhaustive: int = 8
    large_cases: int = 100
    n_large: int = 2000
    assoc_cases: int = 100
    seed: int = 13


def _random_insert(size: int, rng) -> Lamination:
    alpha = float(rng.choice([1.2, 1.5, 2.0]))
    return lamination_from_tree(conditioned_tree(alpha, size, rng))


def _random_inserts(base: DecoratedLamination, rng, p: float = 0.7) -> dict:
    return {
        key: _random_insert(len(dec), rng)
        for key, dec in sorted(base.face_decorations.items())
        if len(dec) >= 4 and rng.random() < p
    }


def _precompose(base: DecoratedLamination, ins2: dict, ins3: dict) -> dict:
    """For each base face, the local composition of its level-2 and level-3 inserts."""
    out = {}
    for key, sub in ins2.items():
        arr = np.asarray(base.face_decorations[key])
        local = DecoratedLamination.from_lamination(sub)
        local_ins = {}
        for (s, t) in local.face_decorations:
            glob = key if t == sub.m else (int(arr[s]), int(arr[t]))
            if glob in ins3:
                local_ins[(s, t)] = ins3[glob]
        out[key] = compose(local, local_ins).lam
    return out


@_timed
def iteration(cfg: IterationConfig, workers: int = 1) -> Report:
    """Identity, noncrossing and associativity checks for composition."""
    rng = derive_rng(cfg.seed, "iteration")
    identity_ok = True
    nc_ok = True
    faces_ok = True
    cases = 0
    for n in range(3, cfg.n_exhaustive + 1):
        for kids in plane_trees(n):
            base = DecoratedLamination.from_lamination(lamination_from_tree(PlaneTree(kids, check=False)))
            empty = {k: Lamination(len(v)) for k, v in base.face_decorations.items()}
            identity_ok &= compose(base, empty) == base
            res = compose(base, _random_inserts(base, rng))
            nc_ok &= res.lam.is_noncrossing()
            faces_ok &= res.face_decorations == face_boundaries(res.lam)
            cases += 1
    for i in range(cfg.large_cases):
        r = derive_rng(cfg.seed, "replica", i)
        base = DecoratedLamination.from_lamination(
            lamination_from_tree(conditioned_tree(1.3, int(r.integers(50, cfg.n_large)), r))
        )
        res = compose(base, _random_inserts(base, r))
        nc_ok &= res.lam.is_noncrossing()
        faces_ok &= res.face_decorations == face_boundaries(res.lam)
    assoc_ok = True
    for i in range(cfg.assoc_cases):
        r = derive_rng(cfg.seed, "assoc", i)
        base = DecoratedLamination.from_lamination(
            lamination_from_tree(conditioned_tree(1.4, int(r.integers(4, 60)), r))
        )
        ins2 = _random_inserts(base, r, 1.0)
        mid = compose(base, ins2)
        ins3 = _random_inserts(mid, r, 0.8)
        two_step = compose(mid, ins3)
        pre = compose(base, _precompose(base, ins2, ins3))
        assoc_ok &= two_step == pre
    ok = identity_ok and nc_ok and faces_ok and assoc_ok
    return Report(
        "iteration",
        bool(ok),
        {"identity": bool(identity_ok), "noncrossing": bool(nc_ok), "inherited_faces": bool(faces_ok), "associative": bool(assoc_ok), "small_cases": cases},
    )


SUITES = {
    "enumeration": enumeration,
    "bijection": bijection,
    "sampler": sampler,
    "kemperman": kemperman,
    "size-tail": size_tail,
    "prop23": prop23,
    "longest-chord": longest_chord_suite,
    "triangulation": triangulation,
    "convergence": convergence,
    "degrees": degrees,
    "thm5": thm5,
    "dimension": dimension,
    "iteration": iteration,
}


def run_suite(name: str, cfg=None, workers: int = 1) -> Report:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](cfg, workers)
