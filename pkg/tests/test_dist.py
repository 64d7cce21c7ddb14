from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import distributions, rationals
from stochdom.dist import (
    DiscreteDistribution,
    affine_transform,
    cdf,
    distribution_from_json,
    dumps_distribution,
    load_distribution,
    loads_json,
    lower_partial_moment,
    make_distribution,
    mixture,
    point_mass,
    raw_moment,
    save_distribution,
    shifted_moment,
)
from stochdom.errors import (
    DistributionError,
    EmptyDistribution,
    MassNotOne,
    NegativeProbability,
    ZeroScale,
)

F = Fraction
FX = make_distribution([(F(2, 9), F(809, 900)), (1, F(91, 900))])
FY = make_distribution([(0, F(1, 3)), (F(4, 9), F(2, 3))])


class TestConstruction:
    def test_example_atoms(self, example):
        assert FX == example.X and FY == example.Y
        assert FX.atoms == ((F(2, 9), F(809, 900)), (F(1), F(91, 900)))

    def test_merge(self):
        assert make_distribution([(0, F(1, 2)), (0, F(1, 2))]) == point_mass(0)

    def test_mass_not_one(self):
        with pytest.raises(MassNotOne):
            make_distribution([(0, F(1, 3)), (1, F(1, 3))])

    def test_zero_mass_dropped_negative_rejected(self):
        d = make_distribution([(0, 1), (5, 0)])
        assert d.atoms == ((F(0), F(1)),)
        with pytest.raises(NegativeProbability):
            make_distribution([(0, F(3, 2)), (1, F(-1, 2))])

    def test_empty(self):
        with pytest.raises(EmptyDistribution):
            make_distribution([])
        with pytest.raises(EmptyDistribution):
            DiscreteDistribution(())

    def test_constructor_validates(self):
        with pytest.raises(DistributionError):
            DiscreteDistribution(((F(1), F(1, 2)), (F(0), F(1, 2))))

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            make_distribution([(0.5, 1)])

    def test_support_bounds(self):
        assert (FX.support.min, FX.support.max) == (F(2, 9), 1)
        assert point_mass(3).support.min == point_mass(3).support.max

    def test_mixture(self):
        d = mixture([(F(1, 2), point_mass(0)), (F(1, 2), point_mass(1))])
        assert d.atoms == ((0, F(1, 2)), (1, F(1, 2)))

    @given(distributions(max_atoms=6, max_den=30))
    def test_invariants(self, d):
        xs = d.positions
        assert all(a < b for a, b in zip(xs, xs[1:]))
        assert all(p > 0 for _, p in d.atoms)
        assert sum(p for _, p in d.atoms) == 1


class TestMoments:
    def test_examples(self):
        assert raw_moment(FY, 1) == F(8, 27)
        assert raw_moment(FX, 1) == F(2437, 8100)
        assert raw_moment(FX, 0) == 1
        assert shifted_moment(FX, 1, 2) == F(39641, 72900)
        assert shifted_moment(FY, 1, 2) == F(39300, 72900)
        assert shifted_moment(point_mass(F(3, 4)), F(3, 4), 3) == 0
        assert shifted_moment(FX, 2, 1) == F(13763, 8100)
        assert lower_partial_moment(FY, 1, 3) == F(979, 2187)
        assert lower_partial_moment(FX, F(1, 9), 5) == 0
        assert lower_partial_moment(point_mass(0), 1, 2) == 1

    def test_k1_boundary_term_is_one(self):
        assert shifted_moment(FX, 1, 0) == 1

    def test_cdf_is_right_continuous(self):
        assert cdf(FX, F(2, 9)) == F(809, 900)
        assert cdf(FX, F(2, 9) - F(1, 10**9)) == 0

    @given(distributions(lo=-3, hi=3), st.integers(0, 6))
    def test_raw_vs_shifted(self, d, k):
        assert raw_moment(d, k) == shifted_moment(d, 0, k) * (-1) ** k

    @given(distributions(lo=-3, hi=3), st.integers(0, 6), rationals(0, 4))
    def test_saturation(self, d, k, extra):
        eta = d.support.max + extra
        assert lower_partial_moment(d, eta, k) == shifted_moment(d, eta, k)

    @given(
        distributions(lo=-3, hi=3),
        rationals(-4, 4),
        rationals(0, 5).filter(bool),
        rationals(-3, 3),
        st.integers(0, 6),
    )
    def test_affine_equivariance(self, d, eta, lam, m, k):
        moved = affine_transform(d, lam, m)
        assert lower_partial_moment(moved, lam * eta + m, k) == lam**k * lower_partial_moment(d, eta, k)


class TestAffine:
    def test_examples(self):
        assert affine_transform(FY, 2, 0).atoms == ((0, F(1, 3)), (F(8, 9), F(2, 3)))
        assert affine_transform(FX, 1, 0) == FX

    def test_zero_scale(self):
        with pytest.raises(ZeroScale):
            affine_transform(FX, 0, 1)

    @given(distributions(), rationals(-3, 3).filter(bool), rationals())
    def test_mass_and_order_preserved(self, d, lam, m):
        moved = affine_transform(d, lam, m)
        assert sum(p for _, p in moved.atoms) == 1
        assert all(a < b for a, b in zip(moved.positions, moved.positions[1:]))
        assert raw_moment(moved, 1) == lam * raw_moment(d, 1) + m


class TestJson:
    def test_round_trip_file(self, tmp_path):
        path = tmp_path / "x.json"
        save_distribution(FX, path)
        assert load_distribution(path) == FX
        assert json.loads(path.read_text())["atoms"][0] == {"x": "2/9", "p": "809/900"}

    @given(distributions(max_den=40))
    def test_round_trip(self, d):
        assert distribution_from_json(loads_json(dumps_distribution(d))) == d

    def test_integers_accepted(self):
        assert distribution_from_json(loads_json('{"atoms": [{"x": 3, "p": 1}]}')) == point_mass(3)

    @pytest.mark.parametrize(
        "text",
        [
            '{"atoms": [{"x": "0", "p": "1", "p": "1"}]}',
            '{"atoms": [{"x": 0.5, "p": "1"}]}',
            '{"atoms": [{"x": "1/2", "p": "one"}]}',
            '{"atoms": [{"x": "1/2"}]}',
            '{"atoms": [{"x": "0", "p": "1"}], "extra": 1}',
            '{"atoms": {"x": "0", "p": "1"}}',
            '{"atoms": [{"x": true, "p": "1"}]}',
            '{"atoms": [{"x": "0", "p": "1/3"}]}',
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(DistributionError):
            distribution_from_json(loads_json(text))
