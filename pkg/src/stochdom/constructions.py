"""Exact generators for the counterexample families.

* :func:`example_counter_pair` - a pair on ``[0, 1]`` that is 4th-order
  ordered on the real line and on ``[0, 2]`` but not on ``[0, 1]``.
* :func:`lemma_sequence_pair` - a pair on ``[0, 9]`` whose second-to-first
  moment-difference ratio grows without bound as ``m -> 0``.
* :func:`rescale_pair` and :func:`gamma_scaled_pair` - the affine and pure
  scalings that move those pairs onto other reference intervals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .dist import DiscreteDistribution, affine_transform, make_distribution, raw_moment
from .dominance import check_nsd_real
from .errors import (
    BadInterval,
    EpsilonOutOfRange,
    MeansNotOrdered,
    MOutOfRange,
    RatioTooSmall,
    SupportOutsideInterval,
)
from .exactalg import RationalLike, as_rational, format_rational


@dataclass(frozen=True)
class ConstructedPair:
    X: DiscreteDistribution
    Y: DiscreteDistribution
    params: Mapping[str, Fraction] = field(default_factory=dict)
    provenance: str = ""

    def params_json(self) -> dict[str, str]:
        return {k: format_rational(v) for k, v in self.params.items()}


def example_counter_pair(eps: RationalLike = Fraction(1, 100)) -> ConstructedPair:
    eps = as_rational(eps)
    if not 0 < eps < Fraction(1, 9):
        raise EpsilonOutOfRange(f"need 0 < eps < 1/9, got {format_rational(eps)}")
    X = make_distribution([(Fraction(2, 9), Fraction(8, 9) + eps), (1, Fraction(1, 9) - eps)])
    Y = make_distribution([(0, Fraction(1, 3)), (Fraction(4, 9), Fraction(2, 3))])
    return ConstructedPair(X, Y, {"eps": eps}, "example")


def lemma_epsilon(m: RationalLike) -> Fraction:
    m = as_rational(m)
    return m / (54 * (1 + m))


def _check_m(m: Fraction) -> None:
    if not 0 < m < 1:
        raise MOutOfRange(f"need 0 < m < 1, got {format_rational(m)}")


def lemma_sequence_pair(m: RationalLike) -> ConstructedPair:
    """The pair indexed by ``m``; both laws live on ``[0, 9]``."""
    m = as_rational(m)
    _check_m(m)
    eps = lemma_epsilon(m)
    X = make_distribution([(2, Fraction(8, 9) + eps), (8 + m, Fraction(1, 9) - eps)])
    Y = make_distribution([(0, Fraction(1, 3)), (4, Fraction(2, 3))])
    return ConstructedPair(X, Y, {"m": m, "eps": eps}, "lemma")


def lemma_ratio(m: RationalLike) -> Fraction:
    """Closed form of ``(E[X^2]-E[Y^2]) / (E[X]-E[Y])`` for :func:`lemma_sequence_pair`."""
    m = as_rational(m)
    _check_m(m)
    eps = lemma_epsilon(m)
    return (16 * m / eps - 540 - 9 * m**2 + m**2 / eps - 144 * m) / (45 * m)


def moment_ratio(X: DiscreteDistribution, Y: DiscreteDistribution) -> Fraction:
    dmean = raw_moment(X, 1) - raw_moment(Y, 1)
    if dmean == 0:
        raise MeansNotOrdered("means are equal; the ratio is undefined")
    return (raw_moment(X, 2) - raw_moment(Y, 2)) / dmean


def rescale_pair(
    pair: ConstructedPair, a: RationalLike, b: RationalLike, c: RationalLike, d: RationalLike
) -> ConstructedPair:
    """Map both laws affinely from ``[a, b]`` onto ``[c, d]``."""
    a, b, c, d = (as_rational(v) for v in (a, b, c, d))
    if not (a < b and c < d):
        raise BadInterval(f"need a < b and c < d, got [{a}, {b}] -> [{c}, {d}]")
    for dist in (pair.X, pair.Y):
        if dist.support.min < a or dist.support.max > b:
            raise SupportOutsideInterval(f"pair is not supported in [{a}, {b}]")
    lam = (d - c) / (b - a)
    shift = (b * c - a * d) / (b - a)
    params = {**pair.params, "lambda": lam, "shift": shift}
    return ConstructedPair(
        affine_transform(pair.X, lam, shift),
        affine_transform(pair.Y, lam, shift),
        params,
        f"{pair.provenance}+rescale" if pair.provenance else "rescale",
    )


def gamma_scaled_pair(pair: ConstructedPair, c: RationalLike, d: RationalLike) -> ConstructedPair:
    """Scale both laws by ``gamma = 2d / ratio`` so the order-3 boundary flips between ``c`` and ``d``.

    Afterwards ``E[(c-X)^2] > E[(c-Y)^2]`` and ``E[(d-X)^2] == E[(d-Y)^2]``.
    """
    c, d = as_rational(c), as_rational(d)
    if not c < d:
        raise BadInterval(f"need c < d, got c={c}, d={d}")
    if pair.X.support.min < 0 or pair.Y.support.min < 0:
        raise SupportOutsideInterval("gamma scaling needs nonnegative supports")
    if raw_moment(pair.X, 1) <= raw_moment(pair.Y, 1):
        raise MeansNotOrdered("need E[X] > E[Y]")
    ratio = moment_ratio(pair.X, pair.Y)
    if ratio < 2 * d:
        raise RatioTooSmall(f"moment ratio {format_rational(ratio)} < 2d = {format_rational(2 * d)}")
    gamma = 2 * d / ratio
    params = {**pair.params, "ratio": ratio, "gamma": gamma, "c": c, "d": d}
    return ConstructedPair(
        affine_transform(pair.X, gamma, 0),
        affine_transform(pair.Y, gamma, 0),
        params,
        f"{pair.provenance}+gamma" if pair.provenance else "gamma",
    )


def lemma_threshold(start: RationalLike = Fraction(1, 2), max_halvings: int = 64) -> Fraction | None:
    """Largest ``m`` in ``start, start/2, start/4, ...`` whose pair is 4th-order ordered on the real line.

    The scan stops at the first hit; nothing is claimed about smaller ``m``
    or about tightness.
    """
    m = as_rational(start)
    for _ in range(max_halvings):
        pair = lemma_sequence_pair(m)
        if check_nsd_real(pair.X, pair.Y, 4):
            return m
        m /= 2
    return None


def interval_flip_pair(c: RationalLike, d: RationalLike, start: RationalLike = Fraction(1, 10)) -> ConstructedPair:
    """A pair on ``[0, c]`` that is 4th-order ordered on ``[0, d]`` but not on ``[0, c]``.

    Halves ``m`` from ``start`` until the lemma pair is 4th-order ordered on
    the real line with moment ratio at least ``2d``, then gamma-scales it.
    Requires ``9 <= c < d`` so the lemma pair's support fits under ``c``.
    """
    c, d = as_rational(c), as_rational(d)
    if not 9 <= c < d:
        raise BadInterval(f"need 9 <= c < d, got c={c}, d={d}")
    m = as_rational(start)
    for _ in range(64):
        pair = lemma_sequence_pair(m)
        if moment_ratio(pair.X, pair.Y) >= 2 * d and check_nsd_real(pair.X, pair.Y, 4):
            return gamma_scaled_pair(pair, c, d)
        m /= 2
    raise RatioTooSmall(f"no lemma pair reached ratio {2 * d} within 64 halvings")
