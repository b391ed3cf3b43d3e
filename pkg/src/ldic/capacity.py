"""Closed-form sum-capacity formulas, evaluated exactly.

All functions take and return exact rationals. alpha = m/n is the interference
strength, beta = r_f/n the normalized feedback rate; results are normalized by
n (sum rate in bits per channel use per direct-link bit).

Floats are rejected on input: a float argument has already lost exactness, so
callers must pass Fraction, int, or a string Fraction understands ("2/3",
"0.125").
"""

from __future__ import annotations

import enum
from fractions import Fraction

Rational = Fraction | int | str

_HALF = Fraction(1, 2)
_TWO_THIRDS = Fraction(2, 3)


def _rat(value: Rational, name: str) -> Fraction:
    if isinstance(value, float):
        raise TypeError(f"{name} must be exact (Fraction, int, or string), not float")
    try:
        out = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {name}={value!r} as a rational") from exc
    if out < 0:
        raise ValueError(f"{name} must be nonnegative, got {out}")
    return out


class RegimeLabel(enum.Enum):
    """Operating regime of the limited-feedback sum capacity."""

    CASE1_WEAK = "Case1_Weak"
    CASE2_MODERATE = "Case2_Moderate"
    CASE3_NOGAIN = "Case3_NoGain"
    CASE4_STRONG = "Case4_Strong"

    def alpha_interval(self, beta: Rational = 0) -> tuple[Fraction, Fraction | None]:
        """Closed alpha interval where this regime's formula applies.

        Upper endpoint None means unbounded. Adjacent regimes share their
        boundary point; regime() breaks the tie.
        """
        b = _rat(beta, "beta")
        if self is RegimeLabel.CASE1_WEAK:
            return Fraction(0), _HALF
        if self is RegimeLabel.CASE2_MODERATE:
            return _HALF, _TWO_THIRDS
        if self is RegimeLabel.CASE3_NOGAIN:
            return _TWO_THIRDS, 2 + 2 * b
        return 2 + 2 * b, None


def regime(alpha: Rational, beta: Rational) -> RegimeLabel:
    """Classify (alpha, beta) into the four-regime partition.

    Interior boundaries 1/2 and 2/3 resolve to the lower-numbered case; the
    strong-interference threshold 2 + 2*beta belongs to Case 4.
    """
    a = _rat(alpha, "alpha")
    b = _rat(beta, "beta")
    if a <= _HALF:
        return RegimeLabel.CASE1_WEAK
    if a <= _TWO_THIRDS:
        return RegimeLabel.CASE2_MODERATE
    if a < 2 + 2 * b:
        return RegimeLabel.CASE3_NOGAIN
    return RegimeLabel.CASE4_STRONG


def sum_capacity_limited(alpha: Rational, beta: Rational) -> Fraction:
    """Sum capacity with per-receiver feedback rate beta."""
    a = _rat(alpha, "alpha")
    b = _rat(beta, "beta")
    if a <= _HALF:
        return min(2 - 2 * a + 2 * b, 2 - a)
    if a <= _TWO_THIRDS:
        return min(2 * a + 2 * b, 2 - a)
    if a <= 1:
        return 2 - a
    if a <= 2 + 2 * b:
        return a
    return 2 + 2 * b


def sum_capacity_nofb(alpha: Rational) -> Fraction:
    """Sum capacity without feedback."""
    a = _rat(alpha, "alpha")
    if a <= _HALF:
        return 2 - 2 * a
    if a <= _TWO_THIRDS:
        return 2 * a
    if a <= 1:
        return 2 - a
    if a <= 2:
        return a
    return Fraction(2)


def sum_capacity_infinite(alpha: Rational) -> Fraction:
    """Sum capacity with unbounded feedback links."""
    a = _rat(alpha, "alpha")
    return max(2 - a, a)


def saturating_beta(alpha: Rational) -> Fraction:
    """Smallest beta at which more feedback stops helping.

    At and above this value the limited-feedback capacity equals the
    infinite-feedback capacity.
    """
    a = _rat(alpha, "alpha")
    if a <= _HALF:
        return a / 2
    if a <= _TWO_THIRDS:
        return (2 - 3 * a) / 2
    if a <= 2:
        return Fraction(0)
    return (a - 2) / 2
