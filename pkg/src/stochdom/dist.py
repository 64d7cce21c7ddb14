"""Finitely supported distributions with exact atoms and probabilities."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from .errors import (
    DistributionError,
    EmptyDistribution,
    MassNotOne,
    NegativeProbability,
    ZeroScale,
)
from .exactalg import RationalLike, as_rational, format_rational, parse_rational


@dataclass(frozen=True)
class SupportBounds:
    min: Fraction
    max: Fraction


@dataclass(frozen=True)
class DiscreteDistribution:
    """Atoms ``(x, p)`` sorted by strictly increasing ``x`` with ``p > 0``, ``sum p == 1``.

    Build through :func:`make_distribution` unless the atoms are already
    canonical; the constructor only validates.
    """

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise EmptyDistribution("a distribution needs at least one atom")
        xs = [x for x, _ in self.atoms]
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise DistributionError("atom positions must be strictly increasing")
        if any(p <= 0 for _, p in self.atoms):
            raise NegativeProbability("atom probabilities must be positive")
        total = sum(p for _, p in self.atoms)
        if total != 1:
            raise MassNotOne(f"total mass is {format_rational(total)}, not 1")
        object.__setattr__(self, "_support", SupportBounds(xs[0], xs[-1]))

    @property
    def support(self) -> SupportBounds:
        return self._support  # type: ignore[attr-defined]

    @property
    def positions(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        body = ", ".join(f"{format_rational(x)}: {format_rational(p)}" for x, p in self.atoms)
        return "{" + body + "}"


def point_mass(x: RationalLike) -> DiscreteDistribution:
    return DiscreteDistribution(((as_rational(x), Fraction(1)),))


def make_distribution(pairs: Iterable[tuple[RationalLike, RationalLike]]) -> DiscreteDistribution:
    """Merge equal positions, drop zero-mass atoms, sort, and validate the total."""
    merged: dict[Fraction, Fraction] = {}
    seen = False
    for x, p in pairs:
        seen = True
        x, p = as_rational(x), as_rational(p)
        if p < 0:
            raise NegativeProbability(f"negative probability {format_rational(p)} at {format_rational(x)}")
        merged[x] = merged.get(x, Fraction(0)) + p
    if not seen:
        raise EmptyDistribution("no atoms given")
    total = sum(merged.values(), Fraction(0))
    if total != 1:
        raise MassNotOne(f"total mass is {format_rational(total)}, not 1")
    atoms = tuple(sorted((x, p) for x, p in merged.items() if p))
    if not atoms:
        raise EmptyDistribution("every atom has zero probability")
    return DiscreteDistribution(atoms)


def mixture(parts: Iterable[tuple[RationalLike, DiscreteDistribution]]) -> DiscreteDistribution:
    """Convex combination ``sum w_i D_i``; weights must sum to one."""
    return make_distribution(
        (x, as_rational(w) * p) for w, d in parts for x, p in d.atoms
    )


def raw_moment(d: DiscreteDistribution, k: int) -> Fraction:
    return sum((p * x**k for x, p in d.atoms), Fraction(0))


def shifted_moment(d: DiscreteDistribution, b: RationalLike, k: int) -> Fraction:
    """``E[(b - X)^k]`` with sign kept (no positive part)."""
    b = as_rational(b)
    return sum((p * (b - x) ** k for x, p in d.atoms), Fraction(0))


def lower_partial_moment(d: DiscreteDistribution, eta: RationalLike, k: int) -> Fraction:
    """``E[(eta - X)_+^k]``; with ``k == 0`` this is the right-continuous CDF at ``eta``."""
    eta = as_rational(eta)
    return sum((p * (eta - x) ** k for x, p in d.atoms if x <= eta), Fraction(0))


def cdf(d: DiscreteDistribution, eta: RationalLike) -> Fraction:
    return lower_partial_moment(d, eta, 0)


def affine_transform(d: DiscreteDistribution, scale: RationalLike, shift: RationalLike) -> DiscreteDistribution:
    """Law of ``scale * X + shift``."""
    lam, m = as_rational(scale), as_rational(shift)
    if lam == 0:
        raise ZeroScale("affine map with zero scale collapses the distribution")
    return DiscreteDistribution(tuple(sorted((lam * x + m, p) for x, p in d.atoms)))


# --- JSON interchange -------------------------------------------------------


def _reject_duplicate_keys(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in pairs:
        if key in out:
            raise DistributionError(f"duplicate key {key!r} in JSON object")
        out[key] = value
    return out


def loads_json(text: str) -> Any:
    """``json.loads`` that rejects duplicate keys and non-integer numbers."""

    def no_float(s: str) -> Any:
        raise DistributionError(f"floating-point literal {s} is not exact; use a string")

    return json.loads(text, object_pairs_hook=_reject_duplicate_keys, parse_float=no_float)


def json_rational(value: Any) -> Fraction:
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError as exc:
            raise DistributionError(str(exc)) from None
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise DistributionError(f"expected a rational string, got {value!r}")


def distribution_from_json(obj: Any) -> DiscreteDistribution:
    if not isinstance(obj, dict) or set(obj) != {"atoms"} or not isinstance(obj["atoms"], list):
        raise DistributionError('distribution JSON must be {"atoms": [...]}')
    pairs = []
    for atom in obj["atoms"]:
        if not isinstance(atom, dict) or set(atom) != {"x", "p"}:
            raise DistributionError('each atom must be {"x": ..., "p": ...}')
        pairs.append((json_rational(atom["x"]), json_rational(atom["p"])))
    return make_distribution(pairs)


def distribution_to_json(d: DiscreteDistribution) -> dict[str, Any]:
    return {"atoms": [{"x": format_rational(x), "p": format_rational(p)} for x, p in d.atoms]}


def dumps_distribution(d: DiscreteDistribution) -> str:
    return json.dumps(distribution_to_json(d), indent=2) + "\n"


def load_distribution(path: str | Path) -> DiscreteDistribution:
    return distribution_from_json(loads_json(Path(path).read_text(encoding="utf-8")))


def save_distribution(d: DiscreteDistribution, path: str | Path) -> None:
    Path(path).write_text(dumps_distribution(d), encoding="utf-8")
