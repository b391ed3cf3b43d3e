"""Exact sum-capacity formulas and regime classification."""

from __future__ import annotations

from fractions import Fraction

import pytest

from ldic.capacity import (
    RegimeLabel,
    regime,
    saturating_beta,
    sum_capacity_infinite,
    sum_capacity_limited,
    sum_capacity_nofb,
)

F = Fraction

ALPHAS = [F(k, 24) for k in range(121)]
BETAS = [F(0), F(1, 8), F(1, 4), F(1, 2), F(1), F(2)]


@pytest.mark.parametrize("alpha,beta,expect", [
    (F(1, 2), F(1, 2), F(3, 2)),
    (F(1), F(0), F(1)),
    (F(1), F(5), F(1)),
    (F(3), F(1, 8), F(9, 4)),
    (F(0), F(0), F(2)),
    (F(1, 4), F(1, 8), F(7, 4)),
    (F(2, 3), F(1, 8), F(4, 3)),
    (F(9, 4), F(1, 8), F(9, 4)),
    (F(5, 2), F(1, 2), F(5, 2)),
    (F(4), F(1, 2), F(3)),
])
def test_limited_examples(alpha, beta, expect):
    assert sum_capacity_limited(alpha, beta) == expect


@pytest.mark.parametrize("alpha,expect", [
    (F(0), F(2)),
    (F(1, 2), F(1)),
    (F(2, 3), F(4, 3)),
    (F(1), F(1)),
    (F(3, 2), F(3, 2)),
    (F(2), F(2)),
    (F(5), F(2)),
])
def test_nofb_examples(alpha, expect):
    assert sum_capacity_nofb(alpha) == expect


@pytest.mark.parametrize("alpha,expect", [
    (F(0), F(2)),
    (F(1), F(1)),
    (F(3), F(3)),
    (F(1, 2), F(3, 2)),
])
def test_infinite_examples(alpha, expect):
    assert sum_capacity_infinite(alpha) == expect


@pytest.mark.parametrize("alpha,expect", [
    (F(1, 2), F(1, 4)),
    (F(1, 3), F(1, 6)),
    (F(7, 12), F(1, 8)),
    (F(1), F(0)),
    (F(3, 2), F(0)),
    (F(4), F(1)),
])
def test_saturating_beta_examples(alpha, expect):
    assert saturating_beta(alpha) == expect


def test_accepts_int_and_string():
    assert sum_capacity_limited(1, 0) == 1
    assert sum_capacity_limited("1/2", "1/2") == F(3, 2)
    assert sum_capacity_nofb("2/3") == F(4, 3)


def test_rejects_float():
    with pytest.raises(TypeError):
        sum_capacity_limited(0.5, 0)
    with pytest.raises(TypeError):
        sum_capacity_nofb(0.5)


def test_rejects_negative():
    with pytest.raises(ValueError):
        sum_capacity_limited(F(-1, 2), 0)
    with pytest.raises(ValueError):
        sum_capacity_limited(F(1, 2), F(-1))
    with pytest.raises(ValueError):
        saturating_beta(-1)


@pytest.mark.parametrize("alpha,beta,expect", [
    (F(1, 4), F(1, 2), RegimeLabel.CASE1_WEAK),
    (F(1, 2), F(1, 8), RegimeLabel.CASE1_WEAK),
    (F(2, 3), F(1, 8), RegimeLabel.CASE2_MODERATE),
    (F(1), F(1), RegimeLabel.CASE3_NOGAIN),
    (F(2), F(1, 8), RegimeLabel.CASE3_NOGAIN),
    (F(9, 4), F(1, 8), RegimeLabel.CASE4_STRONG),
    (F(9, 4), F(1), RegimeLabel.CASE3_NOGAIN),
])
def test_regime_examples(alpha, beta, expect):
    assert regime(alpha, beta) == expect


def test_regime_boundaries_are_tie_broken_low():
    # each shared endpoint belongs to the lower-alpha case
    b = F(1, 8)
    assert regime(F(1, 2), b) == RegimeLabel.CASE1_WEAK
    assert regime(F(2, 3), b) == RegimeLabel.CASE2_MODERATE
    assert regime(2 + 2 * b, b) == RegimeLabel.CASE4_STRONG


def test_alpha_intervals_tile_the_line():
    for beta in BETAS:
        lo, hi = RegimeLabel.CASE1_WEAK.alpha_interval(beta)
        assert lo == 0 and hi == F(1, 2)
        lo, hi = RegimeLabel.CASE2_MODERATE.alpha_interval(beta)
        assert lo == F(1, 2) and hi == F(2, 3)
        lo, hi = RegimeLabel.CASE3_NOGAIN.alpha_interval(beta)
        assert lo == F(2, 3) and hi == 2 + 2 * beta
        lo, hi = RegimeLabel.CASE4_STRONG.alpha_interval(beta)
        assert lo == 2 + 2 * beta and hi is None


def test_zero_budget_reduces_to_no_feedback():
    for a in ALPHAS:
        assert sum_capacity_limited(a, 0) == sum_capacity_nofb(a)


def test_saturation_at_and_above_threshold():
    for a in ALPHAS:
        sat = saturating_beta(a)
        for b in BETAS:
            if b >= sat:
                assert sum_capacity_limited(a, b) == sum_capacity_infinite(a)


def test_below_threshold_stays_strict():
    for a in ALPHAS:
        sat = saturating_beta(a)
        if sat == 0:
            continue
        for b in BETAS:
            if b < sat:
                assert sum_capacity_limited(a, b) < sum_capacity_infinite(a)


def test_limited_sandwiched_between_extremes():
    for a in ALPHAS:
        for b in BETAS:
            c = sum_capacity_limited(a, b)
            assert sum_capacity_nofb(a) <= c <= sum_capacity_infinite(a)


def test_gain_bounded_by_twice_budget():
    for a in ALPHAS:
        for b in BETAS:
            gain = sum_capacity_limited(a, b) - sum_capacity_nofb(a)
            assert 0 <= gain <= 2 * b


def test_monotone_in_budget():
    for a in ALPHAS:
        values = [sum_capacity_limited(a, b) for b in BETAS]
        assert values == sorted(values)


def test_lipschitz_near_regime_boundaries():
    # |C(a0 +/- d) - C(a0)| <= 2d, so every boundary is a continuity point
    d = F(1, 1000)
    for b in BETAS:
        for a0 in (F(1, 2), F(2, 3), F(1), F(2), 2 + 2 * b):
            c0 = sum_capacity_limited(a0, b)
            assert abs(sum_capacity_limited(a0 - d, b) - c0) <= 2 * d
            assert abs(sum_capacity_limited(a0 + d, b) - c0) <= 2 * d


def test_results_are_exact_fractions():
    c = sum_capacity_limited(F(7, 24), F(1, 8))
    assert isinstance(c, Fraction)
    assert c == F(2) - F(7, 12) + F(1, 4)
