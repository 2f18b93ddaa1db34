"""Report serialization, text rendering and spec files."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from irrat.benchmark import Measurement
from irrat.criteria import (
    ApproximationWitness,
    Certificate,
    Condition,
    GrowthFn,
    Theorem,
    Verdict,
    check_growth_approx,
    classify_irrational,
)
from irrat.errors import SpecFileError
from irrat.report import (
    DECIMAL_BITS,
    Report,
    SeriesEcho,
    TermRow,
    describe_int,
    describe_rational,
    dumps,
    format_rational,
    loads,
    parse_rational,
    parse_spec_file,
    render_text,
    to_dict,
)
from irrat.series import Enclosure, Envelope, SeriesSpec, Strength, enclose

E = SeriesSpec.from_text("1", "n!", start=0)
FACTORIAL_ENVELOPE = Envelope.parse("1/(n+1)")


def _inconclusive() -> Certificate:
    return Certificate(
        theorem=Theorem.T2,
        verdict=Verdict.INCONCLUSIVE,
        strength=Strength.EVIDENCE_ONLY,
        conditions=(
            Condition("ratio q_n -> 0", holds=False, strength=Strength.EVIDENCE_ONLY,
                      verified_range=(1, 8), failed_at=1, notes=("q_n = 1/2",)),
        ),
    )


# --- value formats ---


def test_rationals_are_p_over_q() -> None:
    assert format_rational(Fraction(163, 60)) == "163/60"
    assert format_rational(Fraction(3)) == "3/1"
    assert parse_rational("163/60") == Fraction(163, 60)
    assert parse_rational("-7") == Fraction(-7)


def test_wide_integers_are_written_in_hex() -> None:
    huge = Fraction(1, 2**(DECIMAL_BITS + 7))
    text = format_rational(huge)
    assert text.startswith("1/0x")
    assert parse_rational(text) == huge


def test_describe_int() -> None:
    assert describe_int(120) == "120"
    assert describe_int(2**65536) == "2^65536 (65537 bits)"
    rough = describe_int(3**200)
    assert rough.startswith("~")
    assert rough.endswith("(317 bits)")
    assert describe_rational(Fraction(1, 6)) == "1/6"
    assert describe_rational(Fraction(4)) == "4"


# --- JSON ---


def test_classify_report_round_trip() -> None:
    cert = classify_irrational(E, 12, envelope=FACTORIAL_ENVELOPE)
    enc = enclose(E, 10)
    report = Report(
        command="classify",
        series=SeriesEcho.from_spec(E),
        name="e",
        certificate=cert,
        enclosure=enc,
        digits=10,
        decimal="2.7182818284",
        timing=(Measurement("classify", 1.5, 0.0),),
    )
    data = json.loads(dumps(report))
    assert data["schema"] == 1
    assert data["certificate"]["verdict"] == "Irrational"
    assert data["certificate"]["theorem"] == "T2"
    assert data["series"] == {"numer": "1", "denom": "n!", "sign": "positive", "start": 0}
    assert "/" in data["enclosure"]["lo"]

    restored = loads(dumps(report))
    assert restored == report
    assert restored.timing[0].phase == "classify"


def test_eval_report_round_trip_with_huge_values() -> None:
    q = 2**(DECIMAL_BITS + 1)
    report = Report(
        command="eval",
        series=SeriesEcho("1", "2^n"),
        terms=(
            TermRow(1, 1, 2, Fraction(1, 2)),
            TermRow(2, 1, q, Fraction(1, q), q=Fraction(2, q)),
            TermRow(3, None, None, None, magnitude="log2 b_3 ~ 1.2e4000"),
        ),
        partial_sum=Fraction(q // 2 + 1, q),
        witnesses=(ApproximationWitness(2, 1, q, Fraction(1, q)),),
        notes=("example",),
    )
    data = to_dict(report)
    assert data["terms"][1]["b"].startswith("0x")
    assert data["terms"][2]["a"] is None
    assert loads(dumps(report)) == report


def test_growth_report_round_trip_keeps_witnesses() -> None:
    spec = SeriesSpec.from_text("1", "10^(n!)")
    cert, witnesses = check_growth_approx(spec, GrowthFn.parse("n^3"), 7)
    assert cert.witnesses
    report = Report(
        command="classify",
        series=SeriesEcho.from_spec(spec),
        certificate=cert,
        witnesses=tuple(witnesses),
    )
    data = to_dict(report)
    assert [w["index"] for w in data["certificate"]["witnesses"]] == [3, 4, 5, 6, 7]
    restored = loads(dumps(report))
    assert restored.certificate is not None
    assert restored.certificate.witnesses == cert.witnesses
    assert restored.witnesses == report.witnesses
    assert restored == report


def test_exit_code_follows_verdict() -> None:
    echo = SeriesEcho("1", "2^n")
    assert Report("eval", echo).exit_code == 0
    assert Report("classify", echo, certificate=_inconclusive()).exit_code == 1
    proven = classify_irrational(E, 12, envelope=FACTORIAL_ENVELOPE)
    assert Report("classify", echo, certificate=proven).exit_code == 0


# --- text ---


def test_render_text_shows_strength_banner() -> None:
    report = Report("classify", SeriesEcho("1", "2^n"), name="geometric",
                    certificate=_inconclusive())
    text = render_text(report)
    assert "series:   sum_{n>=1} positive (1)/(2^n)  [geometric]" in text
    assert "verdict:  Inconclusive" in text
    assert "STRENGTH: Evidence-only" in text
    assert "[FAILS] ratio q_n -> 0  n=1..8" in text
    assert "q_n = 1/2" in text


def test_render_text_terms_table() -> None:
    report = Report(
        "eval",
        SeriesEcho.from_spec(E),
        terms=(TermRow(0, 1, 1, Fraction(1)), TermRow(5, 1, 120, Fraction(1, 120))),
        partial_sum=Fraction(163, 60),
    )
    text = render_text(report)
    assert "n | a_n | b_n | c_n | q_n" in text
    assert "  5 | 1 | 120 | 1/120 | -" in text
    assert "partial sum: 163/60" in text


def test_render_text_enclosure() -> None:
    report = Report("classify", SeriesEcho("1", "1"),
                    enclosure=Enclosure.exact(Fraction(1, 2)), digits=3, decimal="0.500")
    text = render_text(report)
    assert "enclosure: [1/2, 1/2] from N=0, tail bound 0" in text
    assert "decimal (3 digits): 0.500" in text


# --- spec files ---


def test_parse_spec_file() -> None:
    spec = parse_spec_file(
        """
        # exponential series
        numer = 1
        denom = n!   # factorial
        start = 0
        envelope = 1/(n+1)
        """
    )
    assert (spec.numer, spec.denom, spec.start) == ("1", "n!", 0)
    assert spec.envelope == "1/(n+1)"
    assert spec.sign == "positive"
    assert spec.params == ()


def test_spec_file_builtin_with_params() -> None:
    spec = parse_spec_file("builtin = sin_recip\nr = 3\n")
    assert spec.builtin == "sin_recip"
    assert spec.params == (("r", "3"),)


@pytest.mark.parametrize(
    ("text", "line", "fragment"),
    [
        ("numer = 1\ndenom\n", 2, "key=value"),
        ("numer = 1\ndenom =\n", 2, "empty value"),
        ("numer = 1\nnumer = 2\ndenom = n!\n", 2, "duplicate"),
        ("numer = 1\ndenom = n!\nstart = zero\n", 3, "integer"),
    ],
    ids=["missing-equals", "empty-value", "duplicate", "non-integer"],
)
def test_spec_file_errors_carry_line(text: str, line: int, fragment: str) -> None:
    with pytest.raises(SpecFileError) as excinfo:
        parse_spec_file(text)
    assert excinfo.value.line == line
    assert fragment in str(excinfo.value)


def test_spec_file_needs_a_series() -> None:
    with pytest.raises(SpecFileError, match="numer and denom"):
        parse_spec_file("numer = 1\n")
    with pytest.raises(SpecFileError, match="go together"):
        parse_spec_file("builtin = e\npair_numer = 1\n")
