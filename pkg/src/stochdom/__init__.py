"""Exact higher-order stochastic dominance for finitely supported distributions."""

from .constructions import (
    ConstructedPair,
    example_counter_pair,
    gamma_scaled_pair,
    interval_flip_pair,
    lemma_ratio,
    lemma_sequence_pair,
    rescale_pair,
)
from .dist import (
    DiscreteDistribution,
    affine_transform,
    lower_partial_moment,
    make_distribution,
    point_mass,
    raw_moment,
    shifted_moment,
)
from .dominance import (
    BoundaryViolation,
    MomentMismatch,
    PointwiseViolation,
    Verdict,
    check,
    check_nmsd_interval,
    check_nmsd_real,
    check_nsd_interval,
    check_nsd_real,
    difference_pp,
    iterated_cdf,
    iterated_cdf_at,
)
from .exactalg import Polynomial, RealInterval, count_real_roots, is_nonnegative_on

__version__ = "0.1.0"

__all__ = [
    "BoundaryViolation",
    "ConstructedPair",
    "DiscreteDistribution",
    "MomentMismatch",
    "PointwiseViolation",
    "Polynomial",
    "RealInterval",
    "Verdict",
    "affine_transform",
    "check",
    "check_nmsd_interval",
    "check_nmsd_real",
    "check_nsd_interval",
    "check_nsd_real",
    "count_real_roots",
    "difference_pp",
    "example_counter_pair",
    "gamma_scaled_pair",
    "interval_flip_pair",
    "is_nonnegative_on",
    "iterated_cdf",
    "iterated_cdf_at",
    "lemma_ratio",
    "lemma_sequence_pair",
    "lower_partial_moment",
    "make_distribution",
    "point_mass",
    "raw_moment",
    "rescale_pair",
    "shifted_moment",
]
