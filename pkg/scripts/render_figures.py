"""Draw the standard pictures as SVG files.

* ``nc_triangulated.svg``: a uniform noncrossing tree with the triangulation of
  its faces in dashed red.
* ``stable_<alpha>.svg``: a stable lamination and its uniform triangulation.
* ``iterated_<alphas>.svg``: an iterated lamination, one colour per level.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from nclam.iterate import AlphaVector, sample_iterated
from nclam.lamination import lamination_from_tree, nc_to_lamination, triangulate
from nclam.noncrossing import extract, sample_simply_generated, uniform_decoration
from nclam.offspring import WeightSeq, stable_offspring
from nclam.render import RenderStyle, layered, render
from nclam.samplers import sample_bgw_conditioned
from nclam.seeding import derive_rng


@dataclass
class FigureConfig:
    outdir: str = "figures"
    n_tree: int = 500
    n_stable: int = 5000
    alpha: float = 1.3
    iterated: str = "1.1,1.4"
    n_iterated: int = 100_000
    seed: int = 3
    size: int = 800


def run(cfg: FigureConfig) -> list[Path]:
    out = Path(cfg.outdir)
    out.mkdir(parents=True, exist_ok=True)
    style = RenderStyle(size=cfg.size)
    written = []

    nc = sample_simply_generated(WeightSeq("uniform"), cfg.n_tree, derive_rng(cfg.seed, "figure", "nc"))
    tree, dec = extract(nc)
    union, classes = layered(nc_to_lamination(nc), triangulate(tree, dec))
    written.append(out / "nc_triangulated.svg")
    written[-1].write_text(render(union, style, classes))

    rng = derive_rng(cfg.seed, "figure", "stable")
    tree = sample_bgw_conditioned(stable_offspring(cfg.alpha).law, cfg.n_stable, rng)
    union, classes = layered(lamination_from_tree(tree), triangulate(tree, uniform_decoration(tree, rng)))
    written.append(out / f"stable_{cfg.alpha}.svg")
    written[-1].write_text(render(union, style, classes))

    av = AlphaVector.parse(cfg.iterated)
    classes = {}
    prev = set()
    for q in range(1, len(av) + 1):
        lam = sample_iterated(av.alphas[:q], cfg.n_iterated, cfg.seed)
        name = "base" if q == 1 else f"level{q}"
        classes.update({ch: name for ch in lam.chord_set() - prev})
        prev = lam.chord_set()
    written.append(out / f"iterated_{cfg.iterated.replace(',', '_')}.svg")
    written[-1].write_text(render(lam, style, classes))
    return written


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=1.3)
    ap.add_argument("--iterated", default="1.1,1.4")
    ap.add_argument("--n-iterated", type=int, default=100_000)
    a = ap.parse_args(argv)
    for p in run(FigureConfig(a.outdir, seed=a.seed, alpha=a.alpha, iterated=a.iterated, n_iterated=a.n_iterated)):
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
