"""Checkers: one certificate per criterion, plus the negative controls."""

from __future__ import annotations

from fractions import Fraction

import itertools

import pytest

from irrat.catalog import CatalogEntry, builtin, list_builtins
from irrat.criteria import (
    GrowthFn,
    HuaConstants,
    PolyExp,
    Theorem,
    Verdict,
    check_cremer_condition,
    check_divisibility_chain,
    check_growth_approx,
    check_lcm_criterion,
    check_roth_transcendence,
    check_sum_pair,
    check_tail_nonvanishing,
    check_weighted_ratio_limit,
    classify_geometric_poly,
    classify_irrational,
)
from irrat.errors import InvalidParam, InvalidPolynomial, UnsupportedSignMode
from irrat.oracle import brute_sum, verify_witness
from irrat.seqexpr import Evaluator
from irrat.series import (
    Enclosure,
    Envelope,
    SeriesSpec,
    Strength,
    certify_ratios,
    partial_sum,
    tail_bound,
    term,
)

E = SeriesSpec.from_text("1", "n!", start=0)
FACTORIAL_ENVELOPE = Envelope.parse("1/(n+1)")


# --- divisibility, weighted ratio, tails ---


def test_divisibility_chain() -> None:
    holds = check_divisibility_chain(E, 12)
    assert holds.holds
    assert holds.verified_range == (0, 12)
    broken = check_divisibility_chain(SeriesSpec.from_text("1", "n"), 5)
    assert not broken.holds
    assert broken.failed_at == 2


def test_weighted_ratio_values_for_e() -> None:
    condition = check_weighted_ratio_limit(E, 6)
    assert [v for _, v in condition.values] == [Fraction(1, n + 1) for n in range(7)]
    assert not condition.holds


def test_weighted_ratio_with_envelope() -> None:
    condition = check_weighted_ratio_limit(E, 12, FACTORIAL_ENVELOPE)
    assert condition.holds
    assert condition.strength is Strength.ENVELOPE_CERTIFIED


def test_envelope_below_the_values_is_rejected() -> None:
    condition = check_weighted_ratio_limit(E, 12, Envelope.parse("1/(n+2)"))
    assert not condition.holds
    assert any("below the value" in note for note in condition.notes)


def test_tail_nonvanishing() -> None:
    assert check_tail_nonvanishing(E, 10).holds
    alternating = SeriesSpec.from_text("1", "n!", sign="alternating")
    assert check_tail_nonvanishing(alternating, 10).holds
    wobbly = SeriesSpec.from_text("1", "n^2+5-4*n", sign="alternating")
    condition = check_tail_nonvanishing(wobbly, 6)
    assert not condition.holds
    assert condition.failed_at == 1
    with pytest.raises(UnsupportedSignMode):
        check_tail_nonvanishing(SeriesSpec.from_text("1", "n!", sign="general:++-"), 5)


# --- positive and alternating series ---


@pytest.mark.characterization
def test_e_is_irrational() -> None:
    cert = classify_irrational(E, 12, envelope=FACTORIAL_ENVELOPE)
    assert cert.theorem is Theorem.T2
    assert cert.verdict is Verdict.IRRATIONAL
    assert cert.strength is Strength.PROVEN_ON_PREFIX


def test_e_without_envelope_is_inconclusive() -> None:
    cert = classify_irrational(E, 12)
    assert cert.verdict is Verdict.INCONCLUSIVE
    assert cert.value is None


@pytest.mark.characterization
def test_sin_recip_is_irrational() -> None:
    entry = builtin("sin_recip", {"r": 2})
    cert = classify_irrational(entry.spec, 12, envelope=entry.envelope)
    assert cert.theorem is Theorem.T1
    assert cert.verdict is Verdict.IRRATIONAL


def test_two_e_control_fails_the_weighted_ratio() -> None:
    spec = builtin("remark_2e").spec
    condition = check_weighted_ratio_limit(spec, 8)
    assert [v for _, v in condition.values] == [Fraction(n + 2, n + 1) for n in range(9)]
    assert classify_irrational(spec, 8).verdict is Verdict.INCONCLUSIVE


def test_geometric_control_is_inconclusive() -> None:
    spec = SeriesSpec.from_text("1", "2^n")
    assert classify_irrational(spec, 12).verdict is Verdict.INCONCLUSIVE


def test_prefix_before_start() -> None:
    with pytest.raises(InvalidParam):
        classify_irrational(SeriesSpec.from_text("1", "n!", start=3), 2)


# --- pairs ---


def test_sum_pair_combined_spec() -> None:
    entry = builtin("sum_pair")
    assert entry.pair is not None
    cert, combined = check_sum_pair(entry.spec, entry.pair, entry.prefix)
    assert cert.theorem is Theorem.T3
    assert cert.verdict is Verdict.IRRATIONAL
    assert partial_sum(combined, 3) == partial_sum(entry.spec, 3) + partial_sum(entry.pair, 3)


@pytest.mark.characterization
def test_sum_pair_cross_ratio() -> None:
    entry = builtin("sum_pair")
    assert entry.pair is not None
    cert, _ = check_sum_pair(entry.spec, entry.pair, entry.prefix)
    cross = dict(cert.conditions[2].values)
    # 3^(n!)/2^(n*n!) at n = 3
    assert cross[3] == Fraction(729, 262144)
    assert cross[3] == Fraction(3**6, 2**18)


def test_sum_pair_requires_shared_start() -> None:
    with pytest.raises(InvalidParam):
        check_sum_pair(E, SeriesSpec.from_text("1", "n!", start=1), 5)


# --- a^(-P(n)) ---


@pytest.mark.characterization
@pytest.mark.parametrize(
    ("a", "b0", "b1", "value"),
    [(2, 1, 1, Fraction(1, 2)), (3, 2, 1, Fraction(1, 24)), (2, 1, 0, Fraction(1))],
)
def test_linear_exponent_is_rational(a: int, b0: int, b1: int, value: Fraction) -> None:
    poly = PolyExp((b0, b1), a)
    cert = classify_geometric_poly(poly)
    assert cert.verdict is Verdict.RATIONAL
    assert cert.value == value
    head = partial_sum(poly.to_spec(), 30)
    assert 0 < value - head < Fraction(1, 2**25)


@pytest.mark.parametrize(
    ("a", "b0", "b1"), list(itertools.product((2, 3, 5), repeat=3))
)
def test_linear_exponent_grid_matches_brute_force(a: int, b0: int, b1: int) -> None:
    poly = PolyExp((b0, b1), a)
    cert = classify_geometric_poly(poly)
    value = Fraction(1, a**b1 * (a**b0 - 1))
    assert cert.verdict is Verdict.RATIONAL
    assert cert.value == value
    spec = poly.to_spec()
    gap = value - brute_sum(spec, 60)
    assert 0 < gap <= 2 * term(spec, 61)


def test_quadratic_exponent_is_irrational() -> None:
    poly = PolyExp((1, 0, 0), 2)
    assert poly.difference() == (2, 1)
    cert = classify_geometric_poly(poly)
    assert cert.verdict is Verdict.IRRATIONAL
    assert cert.theorem is Theorem.T5


@pytest.mark.parametrize(
    ("coefficients", "base"), [((1,), 2), ((0, 1), 2), ((1, -1), 2), ((1, 1), 1)]
)
def test_invalid_polynomial(coefficients: tuple[int, ...], base: int) -> None:
    with pytest.raises(InvalidPolynomial):
        PolyExp(coefficients, base)


def test_hua_constants_must_be_ordered() -> None:
    with pytest.raises(InvalidParam):
        HuaConstants(Fraction(2), Fraction(1))


# --- approximations, transcendence, Cremer ---


def test_growth_witnesses_are_consistent() -> None:
    entry = builtin("liouville_witness")
    assert entry.growth is not None
    cert, witnesses = check_growth_approx(entry.spec, entry.growth, entry.prefix)
    assert cert.theorem is Theorem.T6
    assert cert.verdict is Verdict.IRRATIONAL
    approx = cert.conditions[2]
    # 2*f(b_n)*a_(n+1) < b_(n+1) fails at n = 1, 2 and holds from n = 3
    assert approx.failed_at == 2
    assert approx.verified_range is not None
    assert approx.verified_range[0] == 3
    assert dict(approx.values)[4] == Fraction(1, 10**48)
    assert witnesses
    assert witnesses[0].index == 3
    for w in witnesses:
        assert Fraction(w.p, w.q) == partial_sum(entry.spec, w.index)
        assert w.q == 10 ** _factorial(w.index)


def _tail_enclosure(spec: SeriesSpec, N: int) -> Enclosure:
    cert = certify_ratios(spec, N + 1, N + 1)
    lo, bound = partial_sum(spec, N), tail_bound(spec, N, cert)
    return Enclosure(lo, lo + bound, certified_from=N + 1, tail_bound=bound)


@pytest.mark.parametrize(
    "entry", [e for e in list_builtins() if e.growth is not None], ids=lambda e: e.name
)
def test_every_emitted_witness_verifies(entry: CatalogEntry) -> None:
    assert entry.growth is not None
    _, witnesses = check_growth_approx(entry.spec, entry.growth, entry.prefix)
    assert witnesses
    for w in witnesses:
        enc = _tail_enclosure(entry.spec, w.index + 1)
        assert verify_witness(enc, w.p, w.q, entry.growth), w.index


def test_no_witness_before_the_approximation_holds() -> None:
    spec = SeriesSpec.from_text("1", "10^(n!)")
    _, witnesses = check_growth_approx(spec, GrowthFn.parse("n^3"), 7)
    assert [w.index for w in witnesses] == [3, 4, 5, 6, 7]


def _factorial(n: int) -> int:
    result = 1
    for k in range(2, n + 1):
        result *= k
    return result


def test_growth_fn_binds_n_to_b() -> None:
    f = GrowthFn.parse("n^3")
    assert f(10, Evaluator()) == 1000


@pytest.mark.characterization
def test_liouville_is_transcendental() -> None:
    cert = check_roth_transcendence(SeriesSpec.from_text("1", "10^(n!)"), Fraction(1), 12)
    assert cert.theorem is Theorem.T7
    assert cert.verdict is Verdict.TRANSCENDENTAL
    assert dict(cert.conditions[1].values)[4] == Fraction(1, 10**48)


@pytest.mark.characterization
def test_three_power_values_are_exact() -> None:
    entry = builtin("three_power")
    assert entry.epsilon is not None
    cert = check_roth_transcendence(entry.spec, entry.epsilon, 6)
    values = dict(cert.conditions[1].values)
    for n in range(2, 7):
        assert values[n] == Fraction(9 * 3 ** (n - 1), 2 ** (3 ** (n - 1)))
    assert values[3] == Fraction(81, 512)


def test_roth_needs_positive_epsilon() -> None:
    with pytest.raises(InvalidParam):
        check_roth_transcendence(E, Fraction(0), 5)


def test_geometric_is_not_transcendental() -> None:
    cert = check_roth_transcendence(SeriesSpec.from_text("1", "2^n"), Fraction(1), 10)
    assert cert.verdict is Verdict.INCONCLUSIVE


@pytest.mark.characterization
def test_cremer_tower_condition_holds() -> None:
    entry = builtin("cremer_tower")
    cert = check_cremer_condition(entry.spec, 2, entry.prefix)
    assert cert.theorem is Theorem.T8
    assert cert.verdict is Verdict.CREMER_CONDITION_HOLDS
    assert cert.strength is Strength.PROVEN_ON_PREFIX
    condition = cert.conditions[2]
    # u_1 = 4^(2^4 - 1)/2^65536
    assert dict(condition.values)[1] == Fraction(2**30, 2**65536)
    assert condition.verified_range is not None
    assert condition.verified_range[0] == 1
    assert condition.verified_range[1] >= 3


def test_cremer_needs_degree_two() -> None:
    with pytest.raises(InvalidParam):
        check_cremer_condition(builtin("cremer_tower").spec, 1, 3)


# --- lcm ---


def test_lcm_criterion_exact() -> None:
    spec = SeriesSpec.from_text("1", "2^(n!)")
    cert = check_lcm_criterion(spec, 6)
    assert cert.theorem is Theorem.T4
    assert cert.verdict is Verdict.IRRATIONAL
    assert cert.strength is Strength.PROVEN_ON_PREFIX
    values = dict(cert.conditions[0].values)
    assert values[1] == Fraction(1, 2)
    assert values[2] == Fraction(1, 16)


def test_prime_tower_switches_to_prime_bounds() -> None:
    entry = builtin("prime_tower")
    cert = check_lcm_criterion(entry.spec, entry.prefix)
    assert cert.verdict is Verdict.IRRATIONAL
    assert cert.strength is Strength.EVIDENCE_ONLY
    condition = cert.conditions[0]
    # p_4 = 7 and p_16 = 53 are exact
    assert condition.values[0] == (1, Fraction(7, 53))
    assert any("prime bounds" in note for note in condition.notes)
