"""Iterated CDFs as piecewise polynomials and exact dominance decisions.

For ``n >= 2`` the n-times iterated CDF of a discrete law is

    F^[n](eta) = E[(eta - X)_+^(n-1)] / (n-1)!

which is a polynomial of degree ``n-1`` between consecutive atoms. Every
``for all eta`` quantifier is therefore decided segment by segment with
:func:`~stochdom.exactalg.is_nonnegative_on`, including the unbounded
right tail.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Iterator, Union

from .dist import (
    DiscreteDistribution,
    cdf,
    json_rational,
    lower_partial_moment,
    raw_moment,
    shifted_moment,
)
from .errors import BadDegrees, BadInterval, OrderTooSmall, StochdomError, SupportOutsideInterval
from .exactalg import (
    Polynomial,
    RationalLike,
    RealInterval,
    as_rational,
    format_rational,
    is_nonnegative_on,
)


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Zero left of ``breakpoints[0]``; ``pieces[i]`` holds on ``[t_i, t_{i+1})``.

    The last piece covers the unbounded tail ``[t_max, +inf)``.
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        if len(self.breakpoints) != len(self.pieces):
            raise ValueError("need exactly one piece per breakpoint")

    def piece_at(self, eta: Fraction) -> Polynomial | None:
        i = bisect_right(self.breakpoints, eta) - 1
        return None if i < 0 else self.pieces[i]

    def __call__(self, eta: RationalLike) -> Fraction:
        eta = as_rational(eta)
        piece = self.piece_at(eta)
        return Fraction(0) if piece is None else piece(eta)

    def segments(self) -> Iterator[tuple[Fraction, Fraction | None, Polynomial]]:
        """Yield ``(lo, hi, poly)``; ``hi is None`` for the tail."""
        ends = self.breakpoints[1:] + (None,)
        yield from zip(self.breakpoints, ends, self.pieces)

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.pieces)


@dataclass(frozen=True)
class IteratedCdf(PiecewisePolynomial):
    order: int = 2


def _atom_terms(d: DiscreteDistribution, n: int, sign: int = 1) -> list[tuple[Fraction, Polynomial]]:
    scale = Fraction(sign, factorial(n - 1))
    return [(x, Polynomial.linear_power(x, n - 1, scale * p)) for x, p in d.atoms]


def _cumulative(terms: list[tuple[Fraction, Polynomial]]) -> tuple[tuple[Fraction, ...], tuple[Polynomial, ...]]:
    terms.sort(key=lambda t: t[0])
    breaks: list[Fraction] = []
    pieces: list[Polynomial] = []
    acc = Polynomial()
    for x, term in terms:
        acc = acc + term
        if breaks and breaks[-1] == x:
            pieces[-1] = acc
        else:
            breaks.append(x)
            pieces.append(acc)
    return tuple(breaks), tuple(pieces)


def iterated_cdf(d: DiscreteDistribution, n: int) -> IteratedCdf:
    if n < 2:
        raise OrderTooSmall("piecewise-polynomial form needs n >= 2; use cdf() for n = 1")
    breaks, pieces = _cumulative(_atom_terms(d, n))
    return IteratedCdf(breaks, pieces, order=n)


def iterated_cdf_at(d: DiscreteDistribution, n: int, eta: RationalLike) -> Fraction:
    """Closed form: the CDF for ``n == 1``, else a scaled lower partial moment."""
    if n < 1:
        raise OrderTooSmall("order must be >= 1")
    if n == 1:
        return cdf(d, eta)
    return lower_partial_moment(d, eta, n - 1) / factorial(n - 1)


def difference_pp(X: DiscreteDistribution, Y: DiscreteDistribution, n: int) -> PiecewisePolynomial:
    """``D(eta) = F_Y^[n](eta) - F_X^[n](eta)`` over the merged breakpoints."""
    if n < 2:
        raise OrderTooSmall("difference_pp needs n >= 2")
    breaks, pieces = _cumulative(_atom_terms(Y, n, 1) + _atom_terms(X, n, -1))
    return PiecewisePolynomial(breaks, pieces)


# --- verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class PointwiseViolation:
    """``F_Y^[n](eta) - F_X^[n](eta) = gap < 0``."""

    eta: Fraction
    gap: Fraction
    kind = "pointwise"

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "eta": format_rational(self.eta), "gap": format_rational(self.gap)}


@dataclass(frozen=True)
class BoundaryViolation:
    """``lhs = E[(b-X)^(k-1)] > rhs = E[(b-Y)^(k-1)]`` for boundary order ``k``."""

    k: int
    lhs: Fraction
    rhs: Fraction
    kind = "boundary"

    @property
    def gap(self) -> Fraction:
        return self.lhs - self.rhs

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "k": self.k, "lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs)}


@dataclass(frozen=True)
class MomentMismatch:
    """Moment of order ``k`` differs: raw ``E[X^k]`` on the real line, ``E[(b-X)^k]`` on ``[a, b]``."""

    k: int
    lhs: Fraction
    rhs: Fraction
    kind = "moment"

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "k": self.k, "lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs)}


Witness = Union[PointwiseViolation, BoundaryViolation, MomentMismatch]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Witness | None = None

    def __post_init__(self) -> None:
        if self.holds != (self.witness is None):
            raise ValueError("a verdict carries a witness exactly when it fails")

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict[str, Any]:
        return {"holds": self.holds, "witness": None if self.witness is None else self.witness.to_json()}

    @classmethod
    def from_json(cls, obj: Any) -> Verdict:
        if not isinstance(obj, dict) or set(obj) != {"holds", "witness"} or not isinstance(obj["holds"], bool):
            raise StochdomError('verdict JSON must be {"holds": bool, "witness": ...}')
        w = obj["witness"]
        if w is None:
            return cls(obj["holds"])
        if not isinstance(w, dict):
            raise StochdomError("witness must be an object or null")
        kind = w.get("kind")
        if kind == "pointwise" and set(w) == {"kind", "eta", "gap"}:
            witness: Witness = PointwiseViolation(json_rational(w["eta"]), json_rational(w["gap"]))
        elif kind in ("boundary", "moment") and set(w) == {"kind", "k", "lhs", "rhs"}:
            if not isinstance(w["k"], int) or isinstance(w["k"], bool):
                raise StochdomError("witness k must be an integer")
            wcls = BoundaryViolation if kind == "boundary" else MomentMismatch
            witness = wcls(w["k"], json_rational(w["lhs"]), json_rational(w["rhs"]))
        else:
            raise StochdomError(f"malformed witness: {w!r}")
        return cls(obj["holds"], witness)


HOLDS = Verdict(True)


# --- decision procedures ----------------------------------------------------


def _pointwise(X: DiscreteDistribution, Y: DiscreteDistribution, n: int, lo: Fraction | None = None, hi: Fraction | None = None) -> Verdict:
    """Check ``D >= 0`` on ``[lo, hi]`` (whole line when both are ``None``)."""
    if n == 1:
        # both CDFs are constant between atoms, so atoms suffice
        for t in sorted(set(X.positions) | set(Y.positions)):
            gap = cdf(Y, t) - cdf(X, t)
            if gap < 0:
                return Verdict(False, PointwiseViolation(t, gap))
        return HOLDS
    diff = difference_pp(X, Y, n)
    for s_lo, s_hi, poly in diff.segments():
        if hi is not None:
            if s_lo >= hi:
                break
            s_hi = hi if s_hi is None else min(s_hi, hi)
        check = is_nonnegative_on(poly, RealInterval(s_lo, s_hi))
        if not check:
            eta = check.witness
            assert eta is not None
            return Verdict(False, PointwiseViolation(eta, diff(eta)))
    return HOLDS


def _check_support(iv: RealInterval, *dists: DiscreteDistribution) -> tuple[Fraction, Fraction]:
    if not iv.is_finite or not iv.lo < iv.hi:  # type: ignore[operator]
        raise BadInterval(f"reference interval must be finite with a < b, got {iv}")
    for d in dists:
        if d.support.min < iv.lo or d.support.max > iv.hi:  # type: ignore[operator]
            raise SupportOutsideInterval(f"support [{d.support.min}, {d.support.max}] not inside {iv}")
    return iv.lo, iv.hi  # type: ignore[return-value]


def check_nsd_real(X: DiscreteDistribution, Y: DiscreteDistribution, n: int) -> Verdict:
    """Does ``X`` dominate ``Y`` in n-th order stochastic dominance on the real line?"""
    if n < 1:
        raise OrderTooSmall("order must be >= 1")
    return _pointwise(X, Y, n)


@dataclass(frozen=True)
class BoundaryRow:
    k: int
    lhs: Fraction
    rhs: Fraction

    @property
    def gap(self) -> Fraction:
        return self.lhs - self.rhs


def boundary_table(X: DiscreteDistribution, Y: DiscreteDistribution, n: int, b: RationalLike) -> list[BoundaryRow]:
    """Rows ``k = 1..n`` of ``E[(b-X)^(k-1)]`` against ``E[(b-Y)^(k-1)]``."""
    b = as_rational(b)
    return [BoundaryRow(k, shifted_moment(X, b, k - 1), shifted_moment(Y, b, k - 1)) for k in range(1, n + 1)]


def check_nsd_interval(X: DiscreteDistribution, Y: DiscreteDistribution, n: int, iv: RealInterval) -> Verdict:
    """n-th order dominance on ``[a, b]``: pointwise on ``[a, b]`` plus every boundary order at ``b``."""
    if n < 1:
        raise OrderTooSmall("order must be >= 1")
    a, b = _check_support(iv, X, Y)
    verdict = _pointwise(X, Y, n, a, b)
    if not verdict:
        return verdict
    for row in boundary_table(X, Y, n, b):
        if row.lhs > row.rhs:
            return Verdict(False, BoundaryViolation(row.k, row.lhs, row.rhs))
    return HOLDS


def _check_degrees(n: int, m: int) -> None:
    if n < 1 or not 0 <= m <= n - 1:
        raise BadDegrees(f"need 0 <= m <= n-1, got n={n}, m={m}")


def check_nmsd_real(X: DiscreteDistribution, Y: DiscreteDistribution, n: int, m: int) -> Verdict:
    """n-th degree m-mean-preserving dominance on the real line."""
    _check_degrees(n, m)
    for k in range(1, m + 1):
        lhs, rhs = raw_moment(X, k), raw_moment(Y, k)
        if lhs != rhs:
            return Verdict(False, MomentMismatch(k, lhs, rhs))
    return check_nsd_real(X, Y, n)


def check_nmsd_interval(X: DiscreteDistribution, Y: DiscreteDistribution, n: int, m: int, iv: RealInterval) -> Verdict:
    """n-th degree m-mean-preserving dominance on ``[a, b]``.

    Equality ``F_X^[k](b) = F_Y^[k](b)`` for ``k <= m+1`` is checked as
    equality of ``E[(b-.)^j]`` for ``j = k-1 <= m``; a failure reports ``j``.
    """
    _check_degrees(n, m)
    _, b = _check_support(iv, X, Y)
    for j in range(1, m + 1):
        lhs, rhs = shifted_moment(X, b, j), shifted_moment(Y, b, j)
        if lhs != rhs:
            return Verdict(False, MomentMismatch(j, lhs, rhs))
    return check_nsd_interval(X, Y, n, iv)


def check(
    X: DiscreteDistribution,
    Y: DiscreteDistribution,
    n: int,
    m: int = 0,
    iv: RealInterval | None = None,
) -> Verdict:
    """Dispatch to the (n, m) check on ``iv``, or on the real line when ``iv`` is ``None``."""
    if iv is None:
        return check_nmsd_real(X, Y, n, m) if m else check_nsd_real(X, Y, n)
    return check_nmsd_interval(X, Y, n, m, iv) if m else check_nsd_interval(X, Y, n, iv)


def verify_verdict(
    verdict: Verdict,
    X: DiscreteDistribution,
    Y: DiscreteDistribution,
    n: int,
    m: int = 0,
    iv: RealInterval | None = None,
) -> bool:
    """Independently confirm a verdict against its pair.

    Witnesses are re-evaluated through the closed-form partial-moment path
    rather than the piecewise representation that produced them.
    """
    _check_degrees(n, m)
    if iv is not None:
        _check_support(iv, X, Y)
    w = verdict.witness
    if w is None:
        return check(X, Y, n, m, iv).holds
    if isinstance(w, PointwiseViolation):
        if iv is not None and w.eta not in iv:
            return False
        gap = iterated_cdf_at(Y, n, w.eta) - iterated_cdf_at(X, n, w.eta)
        return gap == w.gap and gap < 0
    if isinstance(w, BoundaryViolation):
        if iv is None or not 1 <= w.k <= n:
            return False
        lhs, rhs = shifted_moment(X, iv.hi, w.k - 1), shifted_moment(Y, iv.hi, w.k - 1)
        return (lhs, rhs) == (w.lhs, w.rhs) and lhs > rhs
    if not 1 <= w.k <= m:
        return False
    if iv is None:
        lhs, rhs = raw_moment(X, w.k), raw_moment(Y, w.k)
    else:
        lhs, rhs = shifted_moment(X, iv.hi, w.k), shifted_moment(Y, iv.hi, w.k)
    return (lhs, rhs) == (w.lhs, w.rhs) and lhs != rhs
