"""Iterated-log magnitudes: soundness against exact values and huge comparisons."""

from __future__ import annotations

import random

import pytest

from irrat.errors import LevelCapExceeded
from irrat.magnitude import (
    Certainty,
    LogSpace,
    Magnitude,
    compare,
    magnitude_of,
    ratio_below_half,
)
from irrat.seqexpr import Evaluator, parse_sequence_expr

TOWER = parse_sequence_expr("tower(2,2*n,2*n)")


def _log_only() -> LogSpace:
    return LogSpace(prefer_exact=False)


def _contains(space: LogSpace, m: Magnitude, value: int) -> bool:
    assert m.level == 0
    return bool(m.lo <= space.ctx.mpf(value) <= m.hi)


# --- soundness of the log-space path ---


def test_products_and_sums_contain_the_exact_value() -> None:
    space = _log_only()
    rng = random.Random(20240601)
    for _ in range(200):
        a, b = rng.randint(2, 2**40), rng.randint(2, 2**40)
        ma, mb = space.exact(a), space.exact(b)
        assert _contains(space, space.mul(ma, mb), a * b)
        assert _contains(space, space.add(ma, mb), a + b)


def test_powers_contain_the_exact_value() -> None:
    space = _log_only()
    rng = random.Random(7)
    for _ in range(100):
        base, exponent = rng.randint(2, 9), rng.randint(2, 30)
        m = space.power(space.exact(base), space.exact(exponent))
        assert _contains(space, m, base**exponent)


def test_comparisons_never_contradict_exact_order() -> None:
    space = _log_only()
    rng = random.Random(99)
    for _ in range(200):
        a, b = rng.randint(1, 2**30), rng.randint(1, 2**30)
        lhs = space.mul(space.exact(a), space.exact(3))
        rhs = space.mul(space.exact(b), space.exact(5))
        verdict = space.compare_at(lhs, rhs, 0)
        if verdict is Certainty.PROVEN_BELOW:
            assert 3 * a < 5 * b
        elif verdict is Certainty.PROVEN_AT_OR_ABOVE:
            assert 3 * a >= 5 * b


def _random_power_or_tower(rng: random.Random) -> str:
    if rng.random() < 0.5:
        return f"{rng.randint(2, 12)}^{rng.randint(1, 200)}"
    return f"tower({rng.randint(2, 3)},{rng.randint(1, 3)},{rng.randint(1, 5)})"


def test_random_tower_and_power_pairs_never_contradict_exact_order() -> None:
    space = _log_only()
    evaluator = Evaluator()
    rng = random.Random(31337)
    unknown = 0
    for _ in range(1000):
        left = parse_sequence_expr(_random_power_or_tower(rng))
        right = parse_sequence_expr(_random_power_or_tower(rng))
        x, y = evaluator(left, 1), evaluator(right, 1)
        verdict = compare(space.of(left, 1), space.of(right, 1), space)
        if verdict is Certainty.PROVEN_BELOW:
            assert x < y, (left, right)
        elif verdict is Certainty.PROVEN_AT_OR_ABOVE:
            assert x >= y, (left, right)
        else:
            unknown += 1
    assert unknown < 100


# --- exact shortcuts ---


def test_exact_comparison() -> None:
    space = LogSpace()
    assert space.compare(space.exact(3), space.exact(5)) is Certainty.PROVEN_BELOW
    assert space.compare(space.exact(5), space.exact(5)) is Certainty.PROVEN_AT_OR_ABOVE


def test_ratio_below_half_on_exact_values() -> None:
    assert ratio_below_half(magnitude_of(parse_sequence_expr("n"), 4),
                            magnitude_of(parse_sequence_expr("n"), 9)) is Certainty.PROVEN_BELOW
    assert ratio_below_half(magnitude_of(parse_sequence_expr("n"), 4),
                            magnitude_of(parse_sequence_expr("n"), 8)) is (
        Certainty.PROVEN_AT_OR_ABOVE
    )


# --- beyond the bit budget ---


def test_tower_terms_beyond_the_budget() -> None:
    b2 = magnitude_of(TOWER, 2)
    b3 = magnitude_of(TOWER, 3)
    b4 = magnitude_of(TOWER, 4)
    assert b2.exact == 2**65536
    assert b3.exact is None
    assert b3.level == 3
    assert "log2(" in str(b3)
    assert compare(b2, b3) is Certainty.PROVEN_BELOW
    assert compare(b3, b4) is Certainty.PROVEN_BELOW
    assert compare(b4, b3) is Certainty.PROVEN_AT_OR_ABOVE


def test_tower_magnitude_at_three() -> None:
    b3 = magnitude_of(TOWER, 3)
    lo, hi = LogSpace().lift(b3, 3)
    # b_3 = 2^(2^(2^(2^64))), three logs leave 2^64
    assert lo <= 2**64 <= hi
    assert magnitude_of(parse_sequence_expr("2^(2^n)"), 6).exact == 2**64
    assert magnitude_of(parse_sequence_expr("n!"), 5).exact == 120


def test_two_to_the_two_to_the_64_beats_ten_to_the_ten_to_the_18() -> None:
    lhs = magnitude_of(parse_sequence_expr("2^(2^64)"), 1)
    rhs = magnitude_of(parse_sequence_expr("10^(10^18)"), 1)
    assert lhs.exact is None and rhs.exact is None
    assert compare(lhs, rhs) is Certainty.PROVEN_AT_OR_ABOVE
    assert compare(rhs, lhs) is Certainty.PROVEN_BELOW


def test_first_cremer_comparison() -> None:
    space = LogSpace()
    lhs = space.mul(space.exact(4**15), space.exact(2))
    assert compare(lhs, magnitude_of(TOWER, 2)) is Certainty.PROVEN_BELOW


def test_level_cap() -> None:
    space = LogSpace(level_cap=2)
    with pytest.raises(LevelCapExceeded) as excinfo:
        space.of(TOWER, 3)
    assert excinfo.value.cap == 2


def test_exact_str_is_short_for_big_values() -> None:
    space = LogSpace()
    assert str(space.exact(12)) == "12"
    assert str(space.exact(2**100)) == "<101-bit integer>"
