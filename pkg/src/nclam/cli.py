"""Command-line entry point: ``nclam <command> ...``.

Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 infeasible model, 4 rejection budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import ModelInfeasible, NclamError, Timeout
from .iterate import AlphaVector, dim_formula, sample_iterated
from .lamination import Lamination, lamination_from_tree, triangulate
from .noncrossing import NoncrossingTree, embed, extract, uniform_decoration
from .offspring import WeightSeq, critical_pair
from .render import RenderStyle, layered, render
from .samplers import DEFAULT_BUDGET, sample_bgw_conditioned, sample_modified_bgw
from .seeding import derive_rng, fresh_seed
from .stats import (
    box_dimension,
    chord_length_law,
    count_nc,
    degree_histogram,
    ks_distance,
    longest_chord,
    theorem5_constants,
    theorem5_ratio,
    total_variation,
)
from .trees import PlaneTree
from .verify import SUITES, mu_uniform, run_suite
from .workers import default_workers, pmap

log = logging.getLogger("nclam")

EXIT_FAILED, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_TIMEOUT = 1, 2, 3, 4

# commands that draw no random numbers need no seed
_DETERMINISTIC = ("stats count", "stats dimension")


@dataclass
class RunConfig:
    command: str
    weights: str | None = None
    law: str | None = None
    n: int | None = None
    reps: int = 1
    seed: int | None = None
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    out: str | None = None
    fmt: str = "json"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.reps < 1:
            raise NclamError("reps must be >= 1")
        if self.n is not None and self.n < 1:
            raise NclamError("n must be >= 1")
        if self.seed is None and self.command not in _DETERMINISTIC:
            self.seed = fresh_seed()
            log.warning("no seed given; using generated seed %d", self.seed)


def _config(args, command: str, **extra) -> RunConfig:
    return RunConfig(
        command=command,
        weights=getattr(args, "weights", None),
        law=getattr(args, "law", None),
        n=getattr(args, "n", None),
        reps=getattr(args, "reps", 1) or 1,
        seed=getattr(args, "seed", None),
        workers=getattr(args, "workers", None) or default_workers(),
        budget=getattr(args, "budget", DEFAULT_BUDGET),
        out=getattr(args, "out", None),
        fmt=getattr(args, "format", "json") or "json",
        extra=extra,
    )


def _header(cfg: RunConfig) -> dict:
    return {"config": asdict(cfg), "version": __version__}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


# ---------------------------------------------------------------- sampling


def _tree_law(spec: str):
    """``stable:alpha`` or a weight sequence (its shape law ``mu``)."""
    if spec.startswith("stable:"):
        from .offspring import stable_offspring

        return stable_offspring(float(spec.split(":", 1)[1])).law
    return critical_pair(WeightSeq.parse(spec)).mu


def _sample_record(job):
    kind, weights, law, n, seed, budget, i = job
    rng = derive_rng(seed, "replica", i)
    rec = {"replica": i, "seed": seed}
    if kind == "tree":
        tree = sample_bgw_conditioned(_tree_law(law), n, rng, budget)
        rec.update(tree.to_json())
        return rec
    pair = critical_pair(WeightSeq.parse(weights))
    tree = sample_modified_bgw(pair, n, rng, budget) if n > 1 else PlaneTree([0])
    dec = uniform_decoration(tree, rng)
    if kind == "nc":
        rec.update(embed(tree, dec).to_json())
    elif kind == "lamination":
        rec.update(lamination_from_tree(tree).to_json())
    elif kind == "triangulation":
        rec.update(triangulate(tree, dec).to_json())
    else:
        raise NclamError(f"unknown output kind {kind!r}")
    return rec


def cmd_sample(args, kind: str | None = None) -> int:
    kind = kind or args.kind
    cfg = _config(args, "sample", kind=kind)
    if kind == "tree":
        _tree_law(cfg.law)
    else:
        critical_pair(WeightSeq.parse(cfg.weights))
    log.info("%s", _dump(_header(cfg)))
    jobs = [(kind, cfg.weights, cfg.law, cfg.n, cfg.seed, cfg.budget, i) for i in range(cfg.reps)]
    recs = pmap(_sample_record, jobs, cfg.workers, chunksize=1)
    _write("".join(_dump(r) + "\n" for r in recs), cfg.out)
    return 0


# ---------------------------------------------------------------- statistics


def _lc_job(job):
    weights, n, seed, budget, i = job
    pair = critical_pair(WeightSeq.parse(weights))
    rng = derive_rng(seed, "replica", i)
    tree = sample_modified_bgw(pair, n, rng, budget)
    return longest_chord(embed(tree, uniform_decoration(tree, rng)))


def _deg_job(job):
    weights, n, seed, budget, i = job
    pair = critical_pair(WeightSeq.parse(weights))
    return sample_modified_bgw(pair, n, derive_rng(seed, "replica", i), budget)


def cmd_stats(args) -> int:
    what = args.what
    if what == "count":
        A = None if args.degrees is None else [int(x) for x in args.degrees.split(",")]
        cfg = _config(args, "stats count", degrees=args.degrees)
        rep = _header(cfg)
        rep["count"] = str(count_nc(args.n, A))
        try:
            K, rho, period = theorem5_constants(A)
            rep.update({"K": K, "rho": rho, "period": period, "ratio": theorem5_ratio(args.n, A)})
        except ModelInfeasible:
            pass
        _write(_dump(rep) + "\n", cfg.out)
        return 0
    if what == "dimension":
        cfg = _config(args, "stats dimension", input=args.input, levels=args.levels)
        lo, hi = (int(x) for x in args.levels.split(".."))
        lam = _load_lamination(_read(args.input))
        slope, counts = box_dimension(lam, range(lo, hi + 1))
        rep = _header(cfg)
        rep.update({"slope": slope, "counts": {str(k): v for k, v in counts.items()}})
        _write(_dump(rep) + "\n", cfg.out)
        return 0
    cfg = _config(args, f"stats {what}")
    critical_pair(WeightSeq.parse(cfg.weights))
    jobs = [(cfg.weights, cfg.n, cfg.seed, cfg.budget, i) for i in range(cfg.reps)]
    rep = _header(cfg)
    if what == "longest-chord":
        xs = pmap(_lc_job, jobs, cfg.workers, chunksize=8)
        rep.update({"reps": len(xs), "mean": float(np.mean(xs)), "ks_vs_limit": ks_distance(xs, chord_length_law())})
        if args.csv:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["replica", "longest_chord"])
            w.writerows((i, repr(float(x))) for i, x in enumerate(xs))
            _write(buf.getvalue(), args.csv)
    else:
        trees = pmap(_deg_job, jobs, cfg.workers, chunksize=1)
        hist = degree_histogram(trees)
        rep["histogram"] = {str(k): v for k, v in hist.items()}
        if cfg.weights == "uniform":
            rep["tv_vs_uniform_law"] = total_variation(hist, lambda k: float(mu_uniform(k)), range(11))
    _write(_dump(rep) + "\n", cfg.out)
    return 0


# ---------------------------------------------------------------- verify / iterate / render


def cmd_verify(args) -> int:
    rep = run_suite(args.suite, workers=args.workers or default_workers())
    out = rep.to_json()
    out["version"] = __version__
    _write(_dump(out) + "\n", args.out)
    print(rep.line(), file=sys.stderr)
    return 0 if rep.passed else EXIT_FAILED


def cmd_iterate(args) -> int:
    av = AlphaVector.parse(args.alphas)
    cfg = _config(args, "iterate", alphas=list(av.alphas))
    lam = sample_iterated(av, cfg.n, cfg.seed, cfg.budget)
    obj = lam.to_json()
    obj["meta"] = _header(cfg)
    obj["meta"]["dimension_conjectured"] = dim_formula(av)
    _write(_dump(obj) + "\n", cfg.out)
    return 0


def _load_lamination(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise NclamError("empty input")
    try:
        obj = json.loads(lines[0]) if len(lines) > 1 else json.loads(text)
    except json.JSONDecodeError as exc:
        raise NclamError(f"bad JSON input: {exc}") from None
    if "edges" in obj:
        return NoncrossingTree.from_json(obj)
    if "chords" in obj:
        return Lamination.from_json(obj)
    if "kids" in obj:
        return lamination_from_tree(PlaneTree.from_json(obj))
    raise NclamError("input is neither a lamination, a noncrossing tree nor a tree")


def cmd_render(args) -> int:
    obj = _load_lamination(_read(args.input))
    style = RenderStyle.load(args.style) if args.style else RenderStyle()
    layers = None
    if args.triangulate:
        if not isinstance(obj, NoncrossingTree):
            raise NclamError("--triangulate needs a noncrossing tree")
        tree, dec = extract(obj)
        obj, layers = layered(Lamination(obj.n, obj.edges), triangulate(tree, dec))
    _write(render(obj, style, layers), args.out)
    return 0


# ---------------------------------------------------------------- parser


def _common(p, sampling: bool = True):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None, help="worker processes (default from NCLAM_WORKERS)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    if sampling:
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--reps", type=int, default=1)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="rejection budget in draws")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nclam", description="Noncrossing trees and stable laminations.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample noncrossing trees, laminations or triangulations")
    p.add_argument("--weights", default="uniform")
    p.add_argument("--kind", choices=["nc", "lamination", "triangulation"], default="nc")
    _common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("sample-nc", help="sample noncrossing trees")
    p.add_argument("--weights", default="uniform")
    _common(p)
    p.set_defaults(func=lambda a: cmd_sample(a, "nc"))

    p = sub.add_parser("sample-tree", help="sample size-conditioned BGW trees")
    p.add_argument("--law", default="uniform", help="weights spec (its shape law) or stable:alpha")
    _common(p)
    p.set_defaults(func=lambda a: cmd_sample(a, "tree"))

    p = sub.add_parser("stats", help="statistics")
    ssub = p.add_subparsers(dest="what", required=True)
    q = ssub.add_parser("longest-chord")
    q.add_argument("--weights", default="uniform")
    q.add_argument("--csv", default=None, help="write per-replica values as CSV")
    _common(q)
    q = ssub.add_parser("degrees")
    q.add_argument("--weights", default="uniform")
    _common(q)
    q = ssub.add_parser("count")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--degrees", default=None, help="comma-separated degree set (default all)")
    q.add_argument("--out", default=None)
    q = ssub.add_parser("dimension")
    q.add_argument("--in", dest="input", default=None)
    q.add_argument("--levels", default="4..10")
    q.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("iterate", help="sample an iterated stable lamination")
    p.add_argument("--alphas", required=True)
    _common(p)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("render", help="render JSON input as SVG")
    p.add_argument("--in", dest="input", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--style", default=None)
    p.add_argument("--triangulate", action="store_true", help="overlay the triangulation of a noncrossing tree")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ModelInfeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except Timeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (NclamError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
