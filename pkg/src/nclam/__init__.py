"""Noncrossing trees, stable laminations and their triangulations."""

__version__ = "0.1.0"

from .errors import ModelInfeasible, NclamError, Timeout
from .iterate import AlphaVector, DecoratedLamination, compose, dim_formula, sample_iterated
from .lamination import JumpsLabelling, Lamination, hausdorff_distance, is_maximal, lamination_from_tree, triangulate
from .noncrossing import Decoration, NoncrossingTree, embed, enumerate_all, extract, sample_simply_generated, theta_uniform
from .offspring import OffspringPair, WeightSeq, critical_pair, solve_critical_b, stable_offspring
from .render import RenderStyle, render
from .samplers import hitting_time_pmf, sample_bgw_conditioned, sample_forest, sample_modified_bgw, tree_size_pmf
from .seeding import derive_rng
from .stats import box_dimension, brownian_longest_chord_cdf, count_nc, ks_distance, longest_chord, theorem5_constants
from .trees import LukasiewiczPath, PlaneTree, decode, encode, subtree_sizes

__all__ = [
    "AlphaVector",
    "DecoratedLamination",
    "Decoration",
    "JumpsLabelling",
    "Lamination",
    "LukasiewiczPath",
    "ModelInfeasible",
    "NclamError",
    "NoncrossingTree",
    "OffspringPair",
    "PlaneTree",
    "RenderStyle",
    "Timeout",
    "WeightSeq",
    "box_dimension",
    "brownian_longest_chord_cdf",
    "compose",
    "count_nc",
    "critical_pair",
    "decode",
    "derive_rng",
    "dim_formula",
    "embed",
    "encode",
    "enumerate_all",
    "extract",
    "hausdorff_distance",
    "hitting_time_pmf",
    "is_maximal",
    "ks_distance",
    "lamination_from_tree",
    "longest_chord",
    "render",
    "sample_bgw_conditioned",
    "sample_forest",
    "sample_iterated",
    "sample_modified_bgw",
    "sample_simply_generated",
    "solve_critical_b",
    "stable_offspring",
    "subtree_sizes",
    "theorem5_constants",
    "theta_uniform",
    "tree_size_pmf",
    "triangulate",
]
