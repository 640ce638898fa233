"""Deterministic SVG drawings of laminations and noncrossing trees."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .lamination import Lamination
from .noncrossing import NoncrossingTree


@dataclass(frozen=True)
class LayerStyle:
    stroke: str = "#000000"
    width: float = 1.0
    dash: str | None = None


def _default_layers() -> dict:
    return {
        "base": LayerStyle("#000000", 1.0, None),
        "triangulation": LayerStyle("#d62728", 0.8, "4,3"),
        "level2": LayerStyle("#d62728", 0.8, "4,3"),
        "level3": LayerStyle("#1f77b4", 0.6, "2,2"),
    }


@dataclass(frozen=True)
class RenderStyle:
    """Canvas size in pixels, circle outline and per-class stroke styles."""

    size: int = 800
    margin: int = 10
    circle: bool = True
    circle_width: float = 1.0
    layers: dict = field(default_factory=_default_layers)

    def __post_init__(self):
        if self.size <= 2 * self.margin:
            raise ValueError("canvas too small")
        if self.circle_width <= 0 or any(s.width <= 0 for s in self.layers.values()):
            raise ValueError("stroke widths must be positive")

    @classmethod
    def from_json(cls, obj: dict) -> "RenderStyle":
        layers = _default_layers()
        for k, v in obj.get("layers", {}).items():
            layers[k] = LayerStyle(v.get("stroke", "#000000"), float(v.get("width", 1.0)), v.get("dash"))
        kw = {k: obj[k] for k in ("size", "margin", "circle", "circle_width") if k in obj}
        return cls(layers=layers, **kw)

    @classmethod
    def load(cls, path) -> "RenderStyle":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _as_chords(obj) -> tuple[int, np.ndarray]:
    if isinstance(obj, NoncrossingTree):
        return obj.n, obj.edges
    if isinstance(obj, Lamination):
        return obj.m, obj.chords
    raise TypeError(f"cannot render {type(obj).__name__}")


def render(obj, style: RenderStyle | None = None, layers: dict | None = None) -> str:
    """SVG text with one ``line`` per chord (plus the circle outline).

    ``layers`` maps a chord ``(a, b)`` to a class name of ``style.layers``;
    unlisted chords use ``"base"``.  Point ``p`` sits at angle ``-2 pi p / m``.
    """
    style = style or RenderStyle()
    m, chords = _as_chords(obj)
    r = (style.size - 2 * style.margin) / 2.0
    c = style.size / 2.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{style.size}" '
        f'height="{style.size}" viewBox="0 0 {style.size} {style.size}">',
    ]
    if style.circle:
        out.append(
            f'<circle cx="{c:.6f}" cy="{c:.6f}" r="{r:.6f}" fill="none" stroke="#000000" '
            f'stroke-width="{style.circle_width:.6f}"/>'
        )
    if len(chords):
        ang = -2.0 * np.pi * chords / m
        # screen y grows downwards
        x = c + r * np.cos(ang)
        y = c - r * np.sin(ang)
        for (a, b), x0, y0, x1, y1 in zip(chords.tolist(), x[:, 0], y[:, 0], x[:, 1], y[:, 1]):
            cls = (layers or {}).get((a, b), "base")
            ls = style.layers.get(cls, style.layers["base"])
            dash = f' stroke-dasharray="{ls.dash}"' if ls.dash else ""
            out.append(
                f'<line x1="{x0:.6f}" y1="{y0:.6f}" x2="{x1:.6f}" y2="{y1:.6f}" '
                f'stroke="{ls.stroke}" stroke-width="{ls.width:.6f}"{dash} class="{cls}"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def layered(base: Lamination, extra: Lamination, name: str = "triangulation") -> tuple[Lamination, dict]:
    """Union of two laminations with the chords only in ``extra`` tagged ``name``."""
    own = base.chord_set()
    union = base.union(extra)
    return union, {ch: name for ch in extra.chord_set() if ch not in own}
