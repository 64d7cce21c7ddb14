"""Exact rational polynomials and the real-algebraic sign kernel.

Everything here works over ``fractions.Fraction``. Root counting uses a
Sturm chain built on the square-free part, so counts are of *distinct*
roots in half-open intervals ``(lo, hi]``. The nonnegativity decision
isolates those roots by bisection and samples the sign between them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence, Union

from .errors import ZeroPolynomial

Rational = Fraction
RationalLike = Union[int, str, Fraction]

_RATIONAL_RE = re.compile(r"^[-−]?\d+(/\d+)?$")


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings; refuse floats."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num"``, ``"num/den"`` or their negatives (ASCII or U+2212 minus)."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    s = s.replace("−", "-")
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


@dataclass(frozen=True)
class RealInterval:
    """Interval with rational or infinite ends; ``None`` marks an infinite end."""

    lo: Fraction | None = None
    hi: Fraction | None = None

    def __post_init__(self) -> None:
        if self.lo is not None:
            object.__setattr__(self, "lo", as_rational(self.lo))
        if self.hi is not None:
            object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @classmethod
    def closed(cls, lo: RationalLike, hi: RationalLike) -> RealInterval:
        return cls(as_rational(lo), as_rational(hi))

    @classmethod
    def real_line(cls) -> RealInterval:
        return cls(None, None)

    @property
    def is_finite(self) -> bool:
        return self.lo is not None and self.hi is not None

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, (int, Fraction)):
            return False
        return (self.lo is None or self.lo <= x) and (self.hi is None or x <= self.hi)

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else format_rational(self.lo)
        hi = "+inf" if self.hi is None else format_rational(self.hi)
        return f"[{lo}, {hi}]"


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial, ``coeffs[i]`` multiplies ``x**i``.

    Trailing zeros are stripped on construction, so the zero polynomial
    has an empty coefficient tuple and ``degree == -1``.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        cs = [as_rational(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, c: RationalLike) -> Polynomial:
        return cls((as_rational(c),))

    @classmethod
    def x(cls) -> Polynomial:
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike], lead: RationalLike = 1) -> Polynomial:
        p = cls.constant(lead)
        for r in roots:
            p = p * cls((-as_rational(r), Fraction(1)))
        return p

    @classmethod
    def linear_power(cls, shift: RationalLike, k: int, scale: RationalLike = 1) -> Polynomial:
        """``scale * (x - shift)**k`` expanded by the binomial theorem."""
        s = as_rational(shift)
        w = as_rational(scale)
        return cls(tuple(w * comb(k, j) * (-s) ** (k - j) for j in range(k + 1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coeffs))

    def __add__(self, other: Polynomial | RationalLike) -> Polynomial:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(tuple(u + v for u, v in zip(a, b)))

    __radd__ = __add__

    def __sub__(self, other: Polynomial | RationalLike) -> Polynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other: RationalLike) -> Polynomial:
        return _as_poly(other) - self

    def __mul__(self, other: Polynomial | RationalLike) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = as_rational(other)
            return Polynomial(tuple(c * a for a in self.coeffs))
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        out = Polynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            if c:
                quot[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Polynomial(tuple(quot)), Polynomial(tuple(rem[:dq]))

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def derivative(self, k: int = 1) -> Polynomial:
        cs = self.coeffs
        for _ in range(k):
            cs = tuple(i * c for i, c in enumerate(cs))[1:]
        return Polynomial(cs)

    def monic(self) -> Polynomial:
        if self.is_zero:
            return self
        return self * (1 / self.leading)

    def compose_affine(self, shift: RationalLike, scale: RationalLike) -> Polynomial:
        """Return ``q(s) = p(shift + scale*s)``."""
        inner = Polynomial((as_rational(shift), as_rational(scale)))
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = format_rational(abs(c))
            if i == 0:
                body = mag
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if abs(c) == 1 else f"{mag}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for s, body in terms[1:]:
            out += f" {s} {body}"
        return out


def _as_poly(v: Polynomial | RationalLike) -> Polynomial:
    return v if isinstance(v, Polynomial) else Polynomial.constant(v)


def poly_eval(p: Polynomial, x: RationalLike) -> Fraction:
    return p(x)


def poly_derivative(p: Polynomial, k: int = 1) -> Polynomial:
    if k < 1:
        raise ValueError("derivative order must be >= 1")
    return p.derivative(k)


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd by Euclid's algorithm (zero if both are zero)."""
    a, b = p, q
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.is_zero:
        raise ZeroPolynomial("square-free part of the zero polynomial")
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def cauchy_bound(p: Polynomial) -> Fraction:
    """``1 + max |c_i / c_deg|``; every real root lies strictly inside ``(-B, B)``."""
    if p.is_zero:
        raise ZeroPolynomial("root bound of the zero polynomial")
    lead = p.leading
    return 1 + max((abs(c / lead) for c in p.coeffs[:-1]), default=Fraction(0))


def sturm_chain(p: Polynomial) -> list[Polynomial]:
    """Sturm chain of the square-free part of ``p``.

    Each remainder is rescaled by a positive constant, which keeps
    coefficients small without touching any sign.
    """
    q = squarefree_part(p)
    chain = [q]
    if q.degree > 0:
        chain.append(q.derivative())
    while chain[-1].degree > 0:
        r = -(chain[-2] % chain[-1])
        if r.is_zero:
            break
        chain.append(r * (1 / abs(r.leading)))
    return chain


def sign_variations(chain: Sequence[Polynomial], x: Fraction) -> int:
    signs = [s for s in (_sign(f(x)) for f in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _finite_ends(p: Polynomial, iv: RealInterval) -> tuple[Fraction, Fraction]:
    bound = cauchy_bound(p)
    lo = -bound if iv.lo is None else iv.lo
    hi = bound if iv.hi is None else iv.hi
    if iv.lo is None and iv.hi is not None:
        lo = min(lo, hi)
    if iv.hi is None and iv.lo is not None:
        hi = max(hi, lo)
    return lo, hi


def count_real_roots(p: Polynomial, iv: RealInterval | None = None) -> int:
    """Number of distinct real roots of ``p`` in ``(iv.lo, iv.hi]``."""
    if p.is_zero:
        raise ZeroPolynomial("the zero polynomial has infinitely many roots")
    iv = iv or RealInterval.real_line()
    if p.degree == 0:
        return 0
    lo, hi = _finite_ends(p, iv)
    if lo >= hi:
        return 0
    chain = sturm_chain(p)
    return sign_variations(chain, lo) - sign_variations(chain, hi)


@dataclass(frozen=True)
class SignCheck:
    """Outcome of :func:`is_nonnegative_on`; falsy when a negative point exists."""

    nonnegative: bool
    witness: Fraction | None = None

    def __bool__(self) -> bool:
        return self.nonnegative


def _descartes_nonneg(p: Polynomial, lo: Fraction, hi: Fraction) -> bool:
    """Sufficient test: all Bernstein-like coefficients on ``[lo, hi]`` are >= 0.

    Maps ``[lo, hi)`` onto ``[0, inf)`` by ``x = lo + (hi-lo) t/(1+t)`` and
    checks the numerator ``(1+t)^d p(x)`` for nonnegative coefficients.
    """
    r = p.compose_affine(lo, hi - lo).coeffs
    d = len(r) - 1
    for i in range(d + 1):
        if sum(r[j] * comb(d - j, i - j) for j in range(i + 1)) < 0:
            return False
    return p(hi) >= 0


def _scan_negative(
    p: Polynomial,
    chain: list[Polynomial],
    lo: Fraction,
    hi: Fraction,
    plo: Fraction,
    phi: Fraction,
) -> Fraction | None:
    """First point of ``(lo, hi)`` where ``p < 0``, given ``p(lo), p(hi) >= 0``."""
    stack = [(lo, hi, plo, phi)]
    while stack:
        a, b, pa, pb = stack.pop()
        inner = sign_variations(chain, a) - sign_variations(chain, b) - (pb == 0)
        if inner == 0 and (pa > 0 or pb > 0):
            continue
        if inner == 1 and pa > 0 and pb > 0:
            # one interior root with positive sign on both sides: a touching zero
            continue
        mid = (a + b) / 2
        pm = p(mid)
        if pm < 0:
            return mid
        if inner == 0:
            continue
        stack.append((mid, b, pm, pb))
        stack.append((a, mid, pa, pm))
    return None


def is_nonnegative_on(p: Polynomial, iv: RealInterval | None = None) -> SignCheck:
    """Decide ``p(x) >= 0`` for every ``x`` in the closed interval ``iv``.

    Infinite ends are handled by the leading-coefficient sign beyond the
    Cauchy bound. A negative verdict carries a rational witness inside
    ``iv`` with ``p(witness) < 0``.
    """
    iv = iv or RealInterval.real_line()
    if p.is_zero:
        return SignCheck(True)
    if p.degree == 0:
        if p.leading >= 0:
            return SignCheck(True)
        return SignCheck(False, next(x for x in (iv.lo, iv.hi, Fraction(0)) if x is not None))

    lo, hi = _finite_ends(p, iv)
    # beyond the Cauchy bound p has the sign of its leading term
    if iv.hi is None and p.leading < 0:
        return SignCheck(False, hi + 1)
    if iv.lo is None and _sign(p.leading) * (-1) ** p.degree < 0:
        return SignCheck(False, lo - 1)

    plo, phi = p(lo), p(hi)
    if plo < 0:
        return SignCheck(False, lo)
    if phi < 0:
        return SignCheck(False, hi)
    if lo == hi or p.degree == 1:
        return SignCheck(True)
    if _descartes_nonneg(p, lo, hi):
        return SignCheck(True)
    witness = _scan_negative(p, sturm_chain(p), lo, hi, plo, phi)
    return SignCheck(witness is None, witness)
