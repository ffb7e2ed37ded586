"""Additive approximation of log partition functions of dense Ising models
and k-uniform binary Markov random fields, via algorithmic weak regularity
and per-cell entropy maximization, together with brute-force oracles.
"""

from denselogz.errors import NumericalError, ParseError, ResourceError
from denselogz.model import (
    DensityReport,
    IsingInstance,
    MrfInstance,
    gen_curie_weiss,
    gen_random_dense,
    gen_random_mrf,
    gen_tightness_pair,
    is_delta_dense,
    norms,
)

__all__ = [
    "DensityReport",
    "IsingInstance",
    "MrfInstance",
    "NumericalError",
    "ParseError",
    "ResourceError",
    "gen_curie_weiss",
    "gen_random_dense",
    "gen_random_mrf",
    "gen_tightness_pair",
    "is_delta_dense",
    "norms",
]

__version__ = "0.1.0"
