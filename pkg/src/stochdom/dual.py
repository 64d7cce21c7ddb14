"""Expected-utility side: exactly representable utilities and sampled duality checks.

Two families are supported because both evaluate exactly in rationals:
positive mixtures of singularity functions ``-(eta - x)_+^(n-1)`` (plus an
increasing affine part), and polynomials whose class membership is checked
through derivative signs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal, Union

from .dist import DiscreteDistribution, json_rational, lower_partial_moment, raw_moment
from .dominance import check_nsd_interval, check_nsd_real, _check_support
from .errors import OrderTooSmall, StochdomError
from .exactalg import (
    Polynomial,
    RationalLike,
    RealInterval,
    as_rational,
    format_rational,
    is_nonnegative_on,
)


class DualityViolation(AssertionError):
    """A dominance verdict and a sampled expected-utility comparison disagree."""


@dataclass(frozen=True)
class SingularityUtility:
    """``u(x) = -(threshold - x)_+^(order-1)``."""

    threshold: Fraction
    order: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "threshold", as_rational(self.threshold))
        if self.order < 2:
            raise OrderTooSmall("singularity utilities need order >= 2")

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        return -((self.threshold - x) ** (self.order - 1)) if x <= self.threshold else Fraction(0)


@dataclass(frozen=True)
class UtilityMixture:
    """``c0 + c1*x + sum w_i * u_i(x)`` with ``w_i > 0``, ``c1 >= 0`` and a common order."""

    terms: tuple[tuple[Fraction, SingularityUtility], ...] = ()
    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        terms = tuple((as_rational(w), u) for w, u in self.terms)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "c0", as_rational(self.c0))
        object.__setattr__(self, "c1", as_rational(self.c1))
        if any(w <= 0 for w, _ in terms):
            raise StochdomError("mixture weights must be positive")
        if len({u.order for _, u in terms}) > 1:
            raise StochdomError("all singularity terms must share one order")
        if self.c1 < 0:
            raise StochdomError("the linear coefficient must be >= 0")

    @property
    def order(self) -> int | None:
        return self.terms[0][1].order if self.terms else None

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        return self.c0 + self.c1 * x + sum((w * u(x) for w, u in self.terms), Fraction(0))

    def to_json(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "terms": [{"weight": format_rational(w), "eta": format_rational(u.threshold)} for w, u in self.terms],
            "affine": {"c0": format_rational(self.c0), "c1": format_rational(self.c1)},
        }

    @classmethod
    def from_json(cls, obj: Any) -> UtilityMixture:
        if not isinstance(obj, dict) or not {"terms"} <= set(obj) <= {"order", "terms", "affine"}:
            raise StochdomError('mixture JSON must be {"order": n, "terms": [...], "affine": {...}}')
        order = obj.get("order")
        terms = []
        for t in obj["terms"]:
            if not isinstance(t, dict) or set(t) != {"weight", "eta"}:
                raise StochdomError('each term must be {"weight": ..., "eta": ...}')
            if not isinstance(order, int):
                raise StochdomError("a mixture with terms needs an integer order")
            terms.append((json_rational(t["weight"]), SingularityUtility(json_rational(t["eta"]), order)))
        affine = obj.get("affine", {})
        if not isinstance(affine, dict) or not set(affine) <= {"c0", "c1"}:
            raise StochdomError('affine part must be {"c0": ..., "c1": ...}')
        return cls(
            tuple(terms),
            json_rational(affine.get("c0", "0")),
            json_rational(affine.get("c1", "0")),
        )


@dataclass(frozen=True)
class PolynomialUtility:
    p: Polynomial

    def __call__(self, x: RationalLike) -> Fraction:
        return self.p(x)


Utility = Union[UtilityMixture, PolynomialUtility]


def mixture_eu(d: DiscreteDistribution, u: UtilityMixture) -> Fraction:
    """Exact ``E[u(X)]`` through lower partial moments."""
    out = u.c0 + u.c1 * raw_moment(d, 1)
    for w, s in u.terms:
        out -= w * lower_partial_moment(d, s.threshold, s.order - 1)
    return out


def expected_utility(d: DiscreteDistribution, u: Utility) -> Fraction:
    """Exact ``E[u(X)]`` by summing over atoms."""
    return sum((p * u(x) for x, p in d.atoms), Fraction(0))


def is_utility_in_class(u: PolynomialUtility | Polynomial, n: int, iv: RealInterval) -> bool:
    """``(-1)^(k-1) u^(k) >= 0`` on ``iv`` for every ``k = 1..n``."""
    p = u.p if isinstance(u, PolynomialUtility) else u
    if not iv.is_finite:
        raise StochdomError("class membership is checked on finite intervals")
    for k in range(1, n + 1):
        if not is_nonnegative_on(p.derivative(k) * (-1) ** (k - 1), iv):
            return False
    return True


# --- seeded sampling --------------------------------------------------------


def rng_for(seed: int, stream: int | str) -> random.Random:
    """Independent deterministic generator for one (seed, stream) pair."""
    return random.Random(f"{seed}/{stream}")


def random_rational(rng: random.Random, lo: Fraction, hi: Fraction, max_den: int = 64) -> Fraction:
    den = rng.randint(1, max_den)
    return lo + (hi - lo) * Fraction(rng.randint(0, den), den)


def random_mixture(rng: random.Random, n: int, lo: Fraction, hi: Fraction, max_terms: int = 4) -> UtilityMixture:
    terms = tuple(
        (Fraction(rng.randint(1, 16), rng.randint(1, 16)), SingularityUtility(random_rational(rng, lo, hi), n))
        for _ in range(rng.randint(1, max_terms))
    )
    c1 = Fraction(rng.randint(0, 8), rng.randint(1, 8)) if rng.random() < 0.5 else Fraction(0)
    c0 = Fraction(rng.randint(-8, 8), rng.randint(1, 8))
    return UtilityMixture(terms, c0, c1)


def threshold_range(
    X: DiscreteDistribution, Y: DiscreteDistribution, scope: RealInterval | None
) -> tuple[Fraction, Fraction]:
    """Interval scope: the interval itself. Real scope: ``[min - w, max + 2w]`` for support width ``w``."""
    if scope is not None:
        return scope.lo, scope.hi  # type: ignore[return-value]
    lo = min(X.support.min, Y.support.min)
    hi = max(X.support.max, Y.support.max)
    width = (hi - lo) or Fraction(1)
    return lo - width, hi + 2 * width


@dataclass(frozen=True)
class DualResult:
    consistent: bool
    dominance_holds: bool
    trials: int
    utility: Utility | None = None
    eu_x: Fraction | None = None
    eu_y: Fraction | None = None


def dual_consistency_check(
    X: DiscreteDistribution,
    Y: DiscreteDistribution,
    n: int,
    scope: RealInterval | Literal["real"] | None = None,
    trials: int = 200,
    seed: int = 0,
) -> DualResult:
    """Sample singularity mixtures of order ``n`` and compare expected utilities.

    Returns the first mixture with ``E[u(X)] < E[u(Y)]``. Raises
    :class:`DualityViolation` if that happens while the primal dominance
    check holds, which would contradict the duality.
    """
    if n < 2:
        raise OrderTooSmall("the mixture sampler needs n >= 2")
    iv = None if scope in (None, "real") else scope
    if iv is not None:
        _check_support(iv, X, Y)  # type: ignore[arg-type]
        holds = check_nsd_interval(X, Y, n, iv).holds  # type: ignore[arg-type]
    else:
        holds = check_nsd_real(X, Y, n).holds
    lo, hi = threshold_range(X, Y, iv)  # type: ignore[arg-type]
    for t in range(trials):
        u = random_mixture(rng_for(seed, t), n, lo, hi)
        ex, ey = mixture_eu(X, u), mixture_eu(Y, u)
        if ex < ey:
            if holds:
                raise DualityViolation(f"dominance holds but E[u(X)]={ex} < E[u(Y)]={ey} for {u}")
            return DualResult(False, holds, t + 1, u, ex, ey)
    return DualResult(True, holds, trials)


def random_class_polynomial(rng: random.Random, n: int, iv: RealInterval, max_degree: int = 6) -> Polynomial:
    """Candidate member of the degree-``n`` utility class on ``iv``.

    Positive combinations of ``-(beta - x)^j`` with ``beta >= b`` are members;
    a small random perturbation is added so some candidates fall outside
    the class and must be filtered by :func:`is_utility_in_class`.
    """
    b = iv.hi
    p = Polynomial.constant(Fraction(rng.randint(-4, 4), rng.randint(1, 4)))
    for j in range(1, max_degree + 1):
        if rng.random() < 0.6:
            beta = b + Fraction(rng.randint(0, 8), rng.randint(1, 4))  # type: ignore[operator]
            w = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            p = p + Polynomial.linear_power(beta, j, -w * (-1) ** j)
    if rng.random() < 0.5:
        noise = Polynomial(tuple(Fraction(rng.randint(-3, 3), 64) for _ in range(rng.randint(1, max_degree + 1))))
        p = p + noise
    return p


def sample_class_utilities(
    n: int, iv: RealInterval, count: int = 50, seed: int = 0, max_degree: int = 6
) -> tuple[list[Polynomial], int]:
    """Draw ``count`` polynomials passing :func:`is_utility_in_class`; also return the rejection count."""
    accepted: list[Polynomial] = []
    rejected = 0
    stream = 0
    while len(accepted) < count:
        p = random_class_polynomial(rng_for(seed, f"poly{n}/{stream}"), n, iv, max_degree)
        stream += 1
        if is_utility_in_class(p, n, iv):
            accepted.append(p)
        else:
            rejected += 1
    return accepted, rejected


@dataclass(frozen=True)
class PolynomialDualResult:
    consistent: bool
    checked: int
    violation: Polynomial | None = None
    eu_x: Fraction | None = None
    eu_y: Fraction | None = None


def polynomial_dual_check(
    X: DiscreteDistribution,
    Y: DiscreteDistribution,
    utilities: list[Polynomial],
    iv: RealInterval,
) -> PolynomialDualResult:
    """First utility in ``utilities`` ranking ``Y`` strictly above ``X``, if any."""
    _check_support(iv, X, Y)
    for i, p in enumerate(utilities):
        u = PolynomialUtility(p)
        ex, ey = expected_utility(X, u), expected_utility(Y, u)
        if ex < ey:
            return PolynomialDualResult(False, i + 1, p, ex, ey)
    return PolynomialDualResult(True, len(utilities))
