"""Exact terms, partial sums, ratio certificates and enclosures."""

from __future__ import annotations

from fractions import Fraction

import pytest

from irrat.catalog import CatalogEntry, builtin, list_builtins
from irrat.config import Config, Evaluation
from irrat.errors import CertificateGap, EvaluationLimit, InsufficientWidth, InvalidParam
from irrat.oracle import brute_sum
from irrat.series import (
    Enclosure,
    Envelope,
    SeriesSpec,
    SignMode,
    Strength,
    certified_decimal,
    certify_ratios,
    enclose,
    partial_sum,
    render_decimal,
    tail_bound,
    term,
)

E = SeriesSpec.from_text("1", "n!", start=0)
GEOMETRIC = SeriesSpec.from_text("1", "2^n")
E_DIGITS = Fraction("2.718281828459045235360287471352662497757")
# caps catalog terms at about 20000 digits
SMALL_BUDGET = Config(evaluation=Evaluation(bit_budget=2**16))


# --- terms and partial sums ---


def test_partial_sum_of_e() -> None:
    assert partial_sum(E, 5) == Fraction(163, 60)


def test_signs() -> None:
    alternating = SeriesSpec.from_text("1", "n", sign="alternating")
    assert term(alternating, 1) == 1
    assert term(alternating, 2) == Fraction(-1, 2)
    negative_first = SeriesSpec.from_text("1", "n", sign="alternating:-")
    assert term(negative_first, 1) == -1
    general = SeriesSpec.from_text("1", "n", sign="general:++-")
    assert general.sign_mode is SignMode.GENERAL
    assert [general.sign(n) for n in range(1, 6)] == [1, 1, -1, 1, 1]
    assert general.sign_text == "general:++-"


def test_unknown_sign_mode() -> None:
    with pytest.raises(InvalidParam):
        SeriesSpec.from_text("1", "n", sign="sometimes")


def test_partial_sum_before_start() -> None:
    with pytest.raises(ValueError):
        partial_sum(GEOMETRIC, 0)


def test_negative_start_is_rejected() -> None:
    with pytest.raises(InvalidParam) as excinfo:
        SeriesSpec.from_text("1", "n", start=-1)
    assert excinfo.value.name == "start"


@pytest.mark.parametrize("spec", [E, builtin("sin_recip", {"r": 1}).spec])
def test_partial_sums_telescope(spec: SeriesSpec) -> None:
    for N in range(spec.start_index + 1, 31):
        assert partial_sum(spec, N) - partial_sum(spec, N - 1) == term(spec, N)


def test_str() -> None:
    assert str(E) == "sum_{n>=0} positive (1)/(n!)"


# --- ratio certificates ---


def test_certify_ratios_and_tail_bound() -> None:
    cert = certify_ratios(GEOMETRIC, 1, 10)
    assert (cert.from_index, cert.checked_to) == (1, 10)
    assert cert.strength is Strength.PROVEN_ON_PREFIX
    assert tail_bound(GEOMETRIC, 3, cert) == Fraction(1, 8)


def test_certify_ratios_gap() -> None:
    harmonic = SeriesSpec.from_text("1", "n")
    assert certify_ratios(harmonic, 1, 5).checked_to == 1
    with pytest.raises(CertificateGap):
        certify_ratios(harmonic, 2, 5)


def test_tail_bound_outside_certificate() -> None:
    cert = certify_ratios(GEOMETRIC, 5, 10)
    with pytest.raises(CertificateGap):
        tail_bound(GEOMETRIC, 1, cert)


@pytest.mark.parametrize("entry", list_builtins(), ids=lambda e: e.name)
def test_tail_bound_contains_later_partial_sums(entry: CatalogEntry) -> None:
    spec = entry.spec
    sums: dict[int, Fraction] = {}
    total = Fraction(0)
    for n in range(spec.start_index, 41):
        try:
            total += term(spec, n, SMALL_BUDGET)
        except EvaluationLimit:
            break
        sums[n] = total
    last = max(sums)
    for N in range(2, min(20, last - 1) + 1):
        try:
            cert = certify_ratios(spec, N + 1, last - 1, SMALL_BUDGET)
        except CertificateGap:
            continue
        bound = tail_bound(spec, N, cert, SMALL_BUDGET)
        sign = 1 if sums[N + 1] > sums[N] else -1
        for M in range(N + 1, min(last, cert.checked_to + 1) + 1):
            assert 0 <= sign * (sums[M] - sums[N]) <= bound, (N, M)


# --- enclosures ---


def test_enclosure_of_e() -> None:
    enc = enclose(E, 10)
    assert enc.width < Fraction(1, 10**10)
    assert enc.contains(E_DIGITS)
    assert enc.tail_bound == 2 * term(E, enc.certified_from + 1)


def test_enclosure_with_envelope_is_graded() -> None:
    enc = enclose(E, 10, envelope=Envelope.parse("1/(n+1)"))
    assert enc.ratio is not None
    assert enc.ratio.strength is Strength.ENVELOPE_CERTIFIED
    assert enc.ratio.envelope == "1/(n+1)"


def test_enclosures_shrink_as_digits_grow() -> None:
    previous = enclose(E, 2)
    for digits in (5, 10, 20, 40):
        enc = enclose(E, digits)
        assert enc.width <= previous.width
        assert previous.lo <= enc.lo <= enc.hi <= previous.hi
        previous = enc


@pytest.mark.characterization
def test_certified_digits_of_e() -> None:
    text, enc = certified_decimal(E, 30)
    assert text == "2.718281828459045235360287471352…"
    assert enc.contains(E_DIGITS)


@pytest.mark.characterization
def test_fifty_digits_of_e_match_brute_force() -> None:
    text, _ = certified_decimal(E, 50)
    oracle = brute_sum(E, 60)
    scaled = oracle.numerator * 10**50 // oracle.denominator
    digits = str(scaled)
    assert text == f"{digits[0]}.{digits[1:]}…"


@pytest.mark.characterization
def test_certified_digits_of_sin_one() -> None:
    entry = builtin("sin_recip", {"r": 1})
    text, _ = certified_decimal(entry.spec, 20, envelope=entry.envelope)
    assert text == "0.84147098480789650665…"


def test_alternating_enclosure_brackets_between_partial_sums() -> None:
    spec = builtin("sin_recip", {"r": 1}).spec
    enc = enclose(spec, 8)
    N = enc.certified_from
    sums = {partial_sum(spec, N), partial_sum(spec, N + 1)}
    assert {enc.lo, enc.hi} == sums


def test_render_exact() -> None:
    assert render_decimal(Enclosure.exact(Fraction(1, 4)), 3) == "0.250"
    assert render_decimal(Enclosure.exact(Fraction(-1, 4)), 2) == "-0.25"


def test_render_too_wide() -> None:
    enc = Enclosure(Fraction(0), Fraction(1, 10), certified_from=1, tail_bound=Fraction(1, 10))
    with pytest.raises(InsufficientWidth):
        render_decimal(enc, 3)


def test_render_endpoints_that_disagree() -> None:
    enc = Enclosure(Fraction("0.1234"), Fraction("0.1236"), certified_from=1,
                    tail_bound=Fraction(1, 5000))
    with pytest.raises(InsufficientWidth):
        render_decimal(enc, 4)
    assert render_decimal(enc, 3) == "0.123…"


def test_empty_enclosure() -> None:
    with pytest.raises(ValueError):
        Enclosure(Fraction(1), Fraction(0), certified_from=1, tail_bound=Fraction(0))
