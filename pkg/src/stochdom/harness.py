"""Seeded experiments comparing interval and real-line dominance verdicts.

Every trial draws its own generator from ``(seed, trial index)``, so a
report does not depend on how trials are scheduled. A small share of
trials is replaced by perturbed members of the counterexample families:
random pairs almost never exhibit an order-4 interval discrepancy on
their own.
"""

from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Literal

from .constructions import (
    ConstructedPair,
    example_counter_pair,
    interval_flip_pair,
    rescale_pair,
)
from .dist import (
    DiscreteDistribution,
    distribution_to_json,
    json_rational,
    make_distribution,
    mixture,
    point_mass,
    raw_moment,
)
from .dominance import check
from .dual import rng_for
from .errors import BadDegrees, BadInterval, StochdomError
from .exactalg import RealInterval, format_rational


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    trials: int = 100
    max_atoms: int = 4
    denominator_bound: int = 12
    interval: RealInterval = field(default_factory=lambda: RealInterval.closed(0, 1))
    orders: tuple[int, ...] = (1, 2, 3, 4)
    degrees: tuple[int, ...] | None = None
    wide_right: Fraction | None = None
    injection_rate: Fraction = Fraction(1, 100)

    def __post_init__(self) -> None:
        if self.trials < 1 or self.max_atoms < 1 or self.denominator_bound < 2:
            raise StochdomError("need trials >= 1, max_atoms >= 1, denominator_bound >= 2")
        if not self.interval.is_finite or not self.interval.lo < self.interval.hi:  # type: ignore[operator]
            raise BadInterval("experiment interval must be finite with a < b")
        if not self.orders or min(self.orders) < 1:
            raise StochdomError("orders must be a nonempty list of positive integers")
        if self.wide_right is not None and self.wide_right <= self.interval.hi:  # type: ignore[operator]
            raise BadInterval("wide_right must exceed the interval's right end")
        if not 0 <= self.injection_rate <= 1:
            raise StochdomError("injection_rate must lie in [0, 1]")

    @property
    def a(self) -> Fraction:
        return self.interval.lo  # type: ignore[return-value]

    @property
    def b(self) -> Fraction:
        return self.interval.hi  # type: ignore[return-value]

    @property
    def d(self) -> Fraction:
        return self.wide_right if self.wide_right is not None else 2 * self.b - self.a

    def order_degree_pairs(self) -> list[tuple[int, int]]:
        if self.degrees is None:
            return [(n, 0) for n in self.orders]
        return [(n, m) for n in self.orders for m in self.degrees if m <= n - 1]

    @property
    def rebalances_means(self) -> bool:
        return bool(self.degrees) and max(self.degrees) >= 1  # type: ignore[arg-type]

    def to_json(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "max_atoms": self.max_atoms,
            "denominator_bound": self.denominator_bound,
            "interval": [format_rational(self.a), format_rational(self.b)],
            "orders": list(self.orders),
            "degrees": None if self.degrees is None else list(self.degrees),
            "wide_right": format_rational(self.d),
            "injection_rate": format_rational(self.injection_rate),
        }

    @classmethod
    def from_json(cls, obj: Any) -> ExperimentConfig:
        if not isinstance(obj, dict):
            raise StochdomError("experiment config must be a JSON object")
        known = set(cls().to_json())
        unknown = set(obj) - known
        if unknown:
            raise StochdomError(f"unknown config keys: {sorted(unknown)}")
        kw: dict[str, Any] = {}
        for key in ("seed", "trials", "max_atoms", "denominator_bound"):
            if key in obj:
                if not isinstance(obj[key], int) or isinstance(obj[key], bool):
                    raise StochdomError(f"{key} must be an integer")
                kw[key] = obj[key]
        if "interval" in obj:
            lo, hi = obj["interval"]
            kw["interval"] = RealInterval(json_rational(lo), json_rational(hi))
        if "orders" in obj:
            kw["orders"] = tuple(int(n) for n in obj["orders"])
        if obj.get("degrees") is not None:
            kw["degrees"] = tuple(int(m) for m in obj["degrees"])
        if obj.get("wide_right") is not None:
            kw["wide_right"] = json_rational(obj["wide_right"])
        if "injection_rate" in obj:
            kw["injection_rate"] = json_rational(obj["injection_rate"])
        return cls(**kw)


# --- random pairs -----------------------------------------------------------


def _rational_in(rng: random.Random, lo: Fraction, hi: Fraction, bound: int) -> Fraction:
    den = rng.randint(1, bound)
    return lo + (hi - lo) * Fraction(rng.randint(0, den), den)


def _draw(rng: random.Random, cfg: ExperimentConfig, iv: RealInterval | None = None) -> DiscreteDistribution:
    lo, hi = (cfg.a, cfg.b) if iv is None else (iv.lo, iv.hi)
    k = rng.randint(1, cfg.max_atoms)
    total = rng.randint(max(k, 2), max(cfg.denominator_bound, k))
    cuts = sorted(rng.sample(range(1, total), k - 1)) if k > 1 else []
    parts = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    return make_distribution(
        (_rational_in(rng, lo, hi, cfg.denominator_bound), Fraction(c, total))  # type: ignore[arg-type]
        for c in parts
    )


def random_distribution(cfg: ExperimentConfig, stream: int) -> DiscreteDistribution:
    """Draw one distribution on the config interval, deterministic in ``(seed, stream)``."""
    return _draw(rng_for(cfg.seed, f"dist{stream}"), cfg)


def _spread(rng: random.Random, d: DiscreteDistribution, lo: Fraction, hi: Fraction, bound: int) -> DiscreteDistribution:
    """Mean-preserving spread of part of one atom's mass."""
    atoms = list(d.atoms)
    x, p = atoms.pop(rng.randrange(len(atoms)))
    room = min(x - lo, hi - x)
    if room == 0:
        return d
    delta = room * Fraction(rng.randint(1, bound), bound)
    share = p * Fraction(rng.randint(1, bound), bound)
    atoms += [(x, p - share), (x - delta, share / 2), (x + delta, share / 2)]
    return make_distribution(atoms)


def _shift_left(rng: random.Random, d: DiscreteDistribution, lo: Fraction, bound: int) -> DiscreteDistribution:
    """Move part of one atom's mass to the left (a first-order worsening)."""
    atoms = list(d.atoms)
    x, p = atoms.pop(rng.randrange(len(atoms)))
    if x == lo:
        return d
    delta = (x - lo) * Fraction(rng.randint(1, bound), bound)
    share = p * Fraction(rng.randint(1, bound), bound)
    atoms += [(x, p - share), (x - delta, share)]
    return make_distribution(atoms)


def rebalance_means(
    X: DiscreteDistribution, Y: DiscreteDistribution, iv: RealInterval
) -> tuple[DiscreteDistribution, DiscreteDistribution]:
    """Mix the lower-mean law with a point mass at ``iv.hi`` until the means agree."""
    mx, my = raw_moment(X, 1), raw_moment(Y, 1)
    if mx == my:
        return X, Y
    low, target = (X, my) if mx < my else (Y, mx)
    mu = raw_moment(low, 1)
    t = (target - mu) / (iv.hi - mu)  # type: ignore[operator]
    fixed = mixture([(1 - t, low), (t, point_mass(iv.hi))])  # type: ignore[arg-type]
    return (fixed, Y) if mx < my else (X, fixed)


def _family_pair(rng: random.Random, iv: RealInterval) -> ConstructedPair:
    """Perturbed member of the example or lemma family, moved onto ``iv``."""
    if rng.random() < 0.5:
        eps = Fraction(rng.randint(3, 12), 1000)
        pair = example_counter_pair(eps)
        return rescale_pair(pair, 0, 1, iv.lo, iv.hi)  # type: ignore[arg-type]
    m = Fraction(1, rng.randint(10, 40))
    pair = interval_flip_pair(9, 10, start=m)
    return rescale_pair(pair, 0, 9, iv.lo, iv.hi)  # type: ignore[arg-type]


PAIR_KINDS = ("independent", "spread", "shift", "spread_shift", "two_spreads")


def random_pair(cfg: ExperimentConfig, trial: int, iv: RealInterval | None = None) -> tuple[DiscreteDistribution, DiscreteDistribution, str]:
    """Draw the pair for one trial together with a tag naming how it was built."""
    iv = iv or cfg.interval
    lo, hi = iv.lo, iv.hi
    bound = cfg.denominator_bound
    rng = rng_for(cfg.seed, f"trial{trial}")
    rate = cfg.injection_rate
    if rate and rng.randrange(rate.denominator) < rate.numerator:
        pair = _family_pair(rng, iv)
        X, Y, kind = pair.X, pair.Y, f"family:{pair.provenance}"
    else:
        kind = rng.choice(PAIR_KINDS)
        X = _draw(rng, cfg, iv)
        if kind == "independent":
            Y = _draw(rng, cfg, iv)
        elif kind == "spread":
            Y = _spread(rng, X, lo, hi, bound)  # type: ignore[arg-type]
        elif kind == "shift":
            Y = _shift_left(rng, X, lo, bound)  # type: ignore[arg-type]
        elif kind == "spread_shift":
            Y = _shift_left(rng, _spread(rng, X, lo, hi, bound), lo, bound)  # type: ignore[arg-type]
        else:
            Y = _spread(rng, X, lo, hi, bound)  # type: ignore[arg-type]
            X = _spread(rng, X, lo, hi, bound)  # type: ignore[arg-type]
        if rng.random() < 0.25:
            X, Y = Y, X
    if cfg.rebalances_means:
        X, Y = rebalance_means(X, Y, iv)
    return X, Y, kind


# --- consistency experiment -------------------------------------------------


@dataclass
class ReportRow:
    order: int
    degree: int
    reference: str
    both_hold: int = 0
    both_fail: int = 0
    narrow_only: int = 0
    wide_only: int = 0

    def add(self, narrow: bool, wide: bool) -> None:
        if narrow and wide:
            self.both_hold += 1
        elif narrow:
            self.narrow_only += 1
        elif wide:
            self.wide_only += 1
        else:
            self.both_fail += 1

    @property
    def discrepancies(self) -> int:
        return self.narrow_only + self.wide_only


@dataclass(frozen=True)
class Discrepancy:
    trial: int
    order: int
    degree: int
    reference: str
    narrow_holds: bool
    wide_holds: bool
    kind: str
    X: DiscreteDistribution
    Y: DiscreteDistribution

    def to_json(self) -> dict[str, Any]:
        return {
            "trial": self.trial,
            "order": self.order,
            "degree": self.degree,
            "reference": self.reference,
            "narrow_holds": self.narrow_holds,
            "wide_holds": self.wide_holds,
            "kind": self.kind,
            "X": distribution_to_json(self.X),
            "Y": distribution_to_json(self.Y),
        }


@dataclass
class ConsistencyReport:
    """Agreement counts between ``[a, b]`` verdicts and a wider reference.

    ``narrow_only`` counts trials holding on ``[a, b]`` but failing on the
    wider reference; it is zero whenever the forward implication holds.
    """

    config: ExperimentConfig
    rows: list[ReportRow]
    discrepancies: list[Discrepancy]
    mean_corollary_violations: int = 0
    family_trials: int = 0

    def row(self, order: int, reference: str, degree: int = 0) -> ReportRow:
        for r in self.rows:
            if (r.order, r.degree, r.reference) == (order, degree, reference):
                return r
        raise KeyError((order, degree, reference))

    def to_json(self) -> dict[str, Any]:
        return {
            "config": self.config.to_json(),
            "rows": [
                {
                    "order": r.order,
                    "degree": r.degree,
                    "reference": r.reference,
                    "both_hold": r.both_hold,
                    "both_fail": r.both_fail,
                    "narrow_only": r.narrow_only,
                    "wide_only": r.wide_only,
                }
                for r in self.rows
            ],
            "mean_corollary_violations": self.mean_corollary_violations,
            "family_trials": self.family_trials,
            "discrepancies": [w.to_json() for w in self.discrepancies],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["order", "degree", "narrow", "reference", "both_hold", "both_fail", "narrow_only", "wide_only"])
        narrow = f"[{format_rational(self.config.a)},{format_rational(self.config.b)}]"
        for r in self.rows:
            writer.writerow([r.order, r.degree, narrow, r.reference, r.both_hold, r.both_fail, r.narrow_only, r.wide_only])
        return buf.getvalue()


def _references(cfg: ExperimentConfig) -> list[tuple[str, RealInterval | None]]:
    wide = RealInterval(cfg.a, cfg.d)
    return [("R", None), (f"[{format_rational(cfg.a)},{format_rational(cfg.d)}]", wide)]


TrialOutcome = tuple[str, DiscreteDistribution, DiscreteDistribution, list[tuple[int, int, bool, bool, bool]], int]


def run_trial(cfg: ExperimentConfig, trial: int) -> TrialOutcome:
    """Verdicts ``(n, m, narrow, real, wide)`` for one trial plus mean-corollary failures."""
    X, Y, kind = random_pair(cfg, trial)
    out = []
    mean_bad = 0
    mean_ok = raw_moment(X, 1) >= raw_moment(Y, 1)
    wide_iv = RealInterval(cfg.a, cfg.d)
    for n, m in cfg.order_degree_pairs():
        narrow = check(X, Y, n, m, cfg.interval).holds
        real = check(X, Y, n, m, None).holds
        wide = check(X, Y, n, m, wide_iv).holds
        out.append((n, m, narrow, real, wide))
        if real and not mean_ok:
            mean_bad += 1
    return kind, X, Y, out, mean_bad


def _run_chunk(args: tuple[ExperimentConfig, list[int]]) -> list[TrialOutcome]:
    cfg, trials = args
    return [run_trial(cfg, t) for t in trials]


def _outcomes(cfg: ExperimentConfig, workers: int) -> Iterable[TrialOutcome]:
    if workers <= 1:
        return (run_trial(cfg, t) for t in range(cfg.trials))
    chunks = [list(range(i, cfg.trials, workers)) for i in range(workers)]
    with ProcessPoolExecutor(workers) as pool:
        results = list(pool.map(_run_chunk, [(cfg, c) for c in chunks]))
    by_trial: dict[int, TrialOutcome] = {}
    for chunk, res in zip(chunks, results):
        by_trial.update(zip(chunk, res))
    return (by_trial[t] for t in range(cfg.trials))


def consistency_experiment(cfg: ExperimentConfig, workers: int = 1) -> ConsistencyReport:
    """Tabulate ``[a, b]`` verdicts against the real line and against ``[a, d]``."""
    refs = _references(cfg)
    rows = {(n, m, name): ReportRow(n, m, name) for n, m in cfg.order_degree_pairs() for name, _ in refs}
    discrepancies: list[Discrepancy] = []
    mean_bad = families = 0
    for trial, (kind, X, Y, verdicts, bad) in enumerate(_outcomes(cfg, workers)):
        mean_bad += bad
        families += kind.startswith("family")
        for n, m, narrow, real, wide in verdicts:
            for (name, _), other in zip(refs, (real, wide)):
                rows[n, m, name].add(narrow, other)
                if narrow != other:
                    discrepancies.append(Discrepancy(trial, n, m, name, narrow, other, kind, X, Y))
    return ConsistencyReport(cfg, list(rows.values()), discrepancies, mean_bad, families)


def recheck_discrepancy(cfg: ExperimentConfig, w: Discrepancy) -> bool:
    """Re-run both verdicts of a recorded discrepancy from scratch."""
    wide_iv = None if w.reference == "R" else RealInterval(cfg.a, cfg.d)
    narrow = check(w.X, w.Y, w.order, w.degree, cfg.interval).holds
    wide = check(w.X, w.Y, w.order, w.degree, wide_iv).holds
    return (narrow, wide) == (w.narrow_holds, w.wide_holds)


# --- inconsistency search ---------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    """``status`` is ``"found"`` or ``"inconclusive"``; the latter never means nonexistence."""

    status: Literal["found", "inconclusive"]
    tried: int
    pair: ConstructedPair | None = None


def _family_candidates(iv: RealInterval) -> Iterable[ConstructedPair]:
    yield rescale_pair(example_counter_pair(Fraction(1, 100)), 0, 1, iv.lo, iv.hi)  # type: ignore[arg-type]
    yield rescale_pair(interval_flip_pair(9, 10), 0, 9, iv.lo, iv.hi)  # type: ignore[arg-type]
    for k in range(3, 13):
        yield rescale_pair(example_counter_pair(Fraction(k, 1000)), 0, 1, iv.lo, iv.hi)  # type: ignore[arg-type]


def search_inconsistency(
    n: int,
    m: int,
    iv_small: RealInterval,
    iv_large: RealInterval,
    cfg: ExperimentConfig | None = None,
    budget: int = 1000,
    include_families: bool = True,
    against: Literal["large", "real"] = "large",
) -> SearchResult:
    """Look for a pair failing (n, m)-dominance on ``iv_small`` yet holding on the wider reference.

    The wider reference is ``iv_large`` by default, or the real line with
    ``against="real"``. Family pairs are tried first, then seeded random
    pairs supported in ``iv_small`` (mean-rebalanced when ``m >= 1``).
    """
    if n - m < 1 or m < 0:
        raise BadDegrees(f"need 0 <= m <= n-1, got n={n}, m={m}")
    if not (iv_small.is_finite and iv_large.is_finite):
        raise BadInterval("search intervals must be finite")
    if not (iv_small.hi < iv_large.hi and iv_large.lo <= iv_small.lo):  # type: ignore[operator]
        raise BadInterval(f"{iv_large} must extend {iv_small} to the right")
    cfg = cfg or ExperimentConfig(interval=iv_small)
    wide = iv_large if against == "large" else None

    def candidates() -> Iterable[tuple[DiscreteDistribution, DiscreteDistribution, dict[str, Fraction], str]]:
        if include_families:
            for pair in _family_candidates(iv_small):
                X, Y = (pair.X, pair.Y) if m == 0 else rebalance_means(pair.X, pair.Y, iv_small)
                yield X, Y, dict(pair.params), pair.provenance
        for t in range(budget):
            X, Y, kind = random_pair(cfg, t, iv_small)
            if m >= 1:
                X, Y = rebalance_means(X, Y, iv_small)
            yield X, Y, {"trial": Fraction(t)}, f"search:{kind}"

    tried = 0
    for X, Y, params, tag in candidates():
        if tried >= budget:
            break
        tried += 1
        if check(X, Y, n, m, iv_small).holds:
            continue
        if check(X, Y, n, m, wide).holds:
            return SearchResult("found", tried, ConstructedPair(X, Y, params, tag))
    return SearchResult("inconclusive", tried)
