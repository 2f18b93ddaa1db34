"""Reports: the JSON document, its text rendering, and flat spec files.

Rationals are written as ``"p/q"`` strings and integers as strings. Integers too wide
for decimal conversion (over ``DECIMAL_BITS`` bits) are written in hexadecimal with a
``0x`` prefix; both forms read back exactly. The field layout is documented in
docs/report-schema.md.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath

from irrat.benchmark import Measurement
from irrat.criteria import (
    ApproximationWitness,
    Certificate,
    Condition,
    Theorem,
    Verdict,
)
from irrat.errors import SpecFileError
from irrat.series import Enclosure, RatioCertificate, SeriesSpec, Strength
from irrat.seqexpr import format_expr

__all__ = [
    "Report",
    "SeriesEcho",
    "SpecFile",
    "TermRow",
    "describe_int",
    "describe_rational",
    "dumps",
    "from_dict",
    "loads",
    "parse_spec_file",
    "render_text",
    "to_dict",
]

SCHEMA_VERSION = 1
DECIMAL_BITS = 13_000
_SHOWN_BITS = 200


# --- value formats ---


def format_int(value: int) -> str:
    if abs(value).bit_length() <= DECIMAL_BITS:
        return str(value)
    return hex(value)


def parse_int(text: str) -> int:
    text = text.strip()
    return int(text, 16) if "0x" in text.lower() else int(text)


def format_rational(value: Fraction) -> str:
    return f"{format_int(value.numerator)}/{format_int(value.denominator)}"


def parse_rational(text: str) -> Fraction:
    numerator, _, denominator = text.partition("/")
    return Fraction(parse_int(numerator), parse_int(denominator or "1"))


def describe_int(value: int) -> str:
    """Short human form: digits when small, ``2^k (bits)`` or a float estimate when not."""
    bits = abs(value).bit_length()
    if bits <= _SHOWN_BITS:
        return str(value)
    if value > 0 and value & (value - 1) == 0:
        return f"2^{bits - 1} ({bits} bits)"
    return f"~{mpmath.nstr(mpmath.mpf(value), 12)} ({bits} bits)"


def describe_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return describe_int(value.numerator)
    return f"{describe_int(value.numerator)}/{describe_int(value.denominator)}"


def _opt(value: Fraction | None) -> str | None:
    return None if value is None else format_rational(value)


def _opt_parse(text: str | None) -> Fraction | None:
    return None if text is None else parse_rational(text)


# --- report ---


@dataclass(frozen=True)
class SeriesEcho:
    numer: str
    denom: str
    sign: str = "positive"
    start: int = 1

    @classmethod
    def from_spec(cls, spec: SeriesSpec) -> SeriesEcho:
        return cls(format_expr(spec.numer), format_expr(spec.denom), spec.sign_text,
                   spec.start_index)

    def to_spec(self) -> SeriesSpec:
        return SeriesSpec.from_text(self.numer, self.denom, sign=self.sign, start=self.start)


@dataclass(frozen=True)
class TermRow:
    """One line of the ``eval`` table; values past the bit budget are None."""

    n: int
    a: int | None
    b: int | None
    c: Fraction | None
    q: Fraction | None = None
    magnitude: str | None = None


@dataclass(frozen=True)
class Report:
    command: str
    series: SeriesEcho
    name: str | None = None
    pair: SeriesEcho | None = None
    certificate: Certificate | None = None
    enclosure: Enclosure | None = None
    digits: int | None = None
    decimal: str | None = None
    terms: tuple[TermRow, ...] = ()
    partial_sum: Fraction | None = None
    witnesses: tuple[ApproximationWitness, ...] = ()
    notes: tuple[str, ...] = ()
    timing: tuple[Measurement, ...] = field(default=(), compare=False)

    @property
    def strength(self) -> Strength | None:
        return None if self.certificate is None else self.certificate.strength

    @property
    def exit_code(self) -> int:
        """0 for a definite verdict (or a plain evaluation), 1 for Inconclusive."""
        if self.certificate is None or self.certificate.verdict.definite:
            return 0
        return 1


def _condition_to_dict(c: Condition) -> dict[str, Any]:
    return {
        "name": c.name,
        "holds": c.holds,
        "strength": c.strength.value,
        "verified_range": list(c.verified_range) if c.verified_range else None,
        "failed_at": c.failed_at,
        "values": [[n, format_rational(v)] for n, v in c.values],
        "notes": list(c.notes),
    }


def _condition_from_dict(data: dict[str, Any]) -> Condition:
    span = data.get("verified_range")
    return Condition(
        name=data["name"],
        holds=data["holds"],
        strength=Strength(data["strength"]),
        verified_range=(span[0], span[1]) if span else None,
        failed_at=data.get("failed_at"),
        values=tuple((n, parse_rational(v)) for n, v in data.get("values", [])),
        notes=tuple(data.get("notes", [])),
    )


def _witness_to_dict(w: ApproximationWitness) -> dict[str, Any]:
    return {"index": w.index, "p": format_int(w.p), "q": format_int(w.q),
            "bound": format_rational(w.bound)}


def _witness_from_dict(data: dict[str, Any]) -> ApproximationWitness:
    return ApproximationWitness(
        data["index"], parse_int(data["p"]), parse_int(data["q"]), parse_rational(data["bound"])
    )


def _certificate_to_dict(cert: Certificate) -> dict[str, Any]:
    return {
        "theorem": cert.theorem.value,
        "verdict": cert.verdict.value,
        "strength": cert.strength.value,
        "value": _opt(cert.value),
        "conditions": [_condition_to_dict(c) for c in cert.conditions],
        "notes": list(cert.notes),
        "witnesses": [_witness_to_dict(w) for w in cert.witnesses],
    }


def _certificate_from_dict(data: dict[str, Any]) -> Certificate:
    return Certificate(
        theorem=Theorem(data["theorem"]),
        verdict=Verdict(data["verdict"]),
        strength=Strength(data["strength"]),
        conditions=tuple(_condition_from_dict(c) for c in data["conditions"]),
        value=_opt_parse(data.get("value")),
        notes=tuple(data.get("notes", [])),
        witnesses=tuple(_witness_from_dict(w) for w in data.get("witnesses", [])),
    )


def _enclosure_to_dict(enc: Enclosure) -> dict[str, Any]:
    ratio = enc.ratio
    return {
        "lo": format_rational(enc.lo),
        "hi": format_rational(enc.hi),
        "certified_from": enc.certified_from,
        "tail_bound": format_rational(enc.tail_bound),
        "ratio": None if ratio is None else {
            "from_index": ratio.from_index,
            "checked_to": ratio.checked_to,
            "strength": ratio.strength.value,
            "envelope": ratio.envelope,
        },
    }


def _enclosure_from_dict(data: dict[str, Any]) -> Enclosure:
    ratio = data.get("ratio")
    return Enclosure(
        lo=parse_rational(data["lo"]),
        hi=parse_rational(data["hi"]),
        certified_from=data["certified_from"],
        tail_bound=parse_rational(data["tail_bound"]),
        ratio=None if ratio is None else RatioCertificate(
            ratio["from_index"],
            ratio["checked_to"],
            strength=Strength(ratio["strength"]),
            envelope=ratio.get("envelope"),
        ),
    )


def _term_to_dict(row: TermRow) -> dict[str, Any]:
    return {
        "n": row.n,
        "a": None if row.a is None else format_int(row.a),
        "b": None if row.b is None else format_int(row.b),
        "c": _opt(row.c),
        "q": _opt(row.q),
        "magnitude": row.magnitude,
    }


def _term_from_dict(data: dict[str, Any]) -> TermRow:
    return TermRow(
        n=data["n"],
        a=None if data.get("a") is None else parse_int(data["a"]),
        b=None if data.get("b") is None else parse_int(data["b"]),
        c=_opt_parse(data.get("c")),
        q=_opt_parse(data.get("q")),
        magnitude=data.get("magnitude"),
    )


def _echo_to_dict(echo: SeriesEcho | None) -> dict[str, Any] | None:
    if echo is None:
        return None
    return {"numer": echo.numer, "denom": echo.denom, "sign": echo.sign, "start": echo.start}


def _echo_from_dict(data: dict[str, Any] | None) -> SeriesEcho | None:
    if data is None:
        return None
    return SeriesEcho(data["numer"], data["denom"], data["sign"], data["start"])


def to_dict(report: Report) -> dict[str, Any]:
    cert = report.certificate
    return {
        "schema": SCHEMA_VERSION,
        "command": report.command,
        "name": report.name,
        "series": _echo_to_dict(report.series),
        "pair": _echo_to_dict(report.pair),
        "certificate": None if cert is None else _certificate_to_dict(cert),
        "enclosure": None if report.enclosure is None else _enclosure_to_dict(report.enclosure),
        "digits": report.digits,
        "decimal": report.decimal,
        "terms": [_term_to_dict(row) for row in report.terms],
        "partial_sum": _opt(report.partial_sum),
        "witnesses": [_witness_to_dict(w) for w in report.witnesses],
        "notes": list(report.notes),
        "timing": [
            {"phase": m.phase, "duration_ms": m.duration_ms, "timestamp_ms": m.timestamp_ms}
            for m in report.timing
        ],
    }


def from_dict(data: dict[str, Any]) -> Report:
    series = _echo_from_dict(data["series"])
    if series is None:
        raise ValueError("report has no series")
    cert, enc = data.get("certificate"), data.get("enclosure")
    return Report(
        command=data["command"],
        series=series,
        name=data.get("name"),
        pair=_echo_from_dict(data.get("pair")),
        certificate=None if cert is None else _certificate_from_dict(cert),
        enclosure=None if enc is None else _enclosure_from_dict(enc),
        digits=data.get("digits"),
        decimal=data.get("decimal"),
        terms=tuple(_term_from_dict(t) for t in data.get("terms", [])),
        partial_sum=_opt_parse(data.get("partial_sum")),
        witnesses=tuple(_witness_from_dict(w) for w in data.get("witnesses", [])),
        notes=tuple(data.get("notes", [])),
        timing=tuple(
            Measurement(m["phase"], m["duration_ms"], m["timestamp_ms"])
            for m in data.get("timing", [])
        ),
    )


def dumps(report: Report) -> str:
    return json.dumps(to_dict(report), indent=2, ensure_ascii=False)


def loads(text: str) -> Report:
    return from_dict(json.loads(text))


# --- text rendering ---


def _span(c: Condition) -> str:
    if c.verified_range is None:
        return "no range"
    lo, hi = c.verified_range
    return f"n={lo}..{hi}"


def _render_certificate(cert: Certificate) -> list[str]:
    lines = [
        f"theorem:  {cert.theorem.value}",
        f"verdict:  {cert.verdict.value}",
        f"STRENGTH: {cert.strength.value}",
    ]
    if cert.value is not None:
        lines.append(f"value:    {describe_rational(cert.value)}")
    lines.append("conditions:")
    for c in cert.conditions:
        mark = "holds" if c.holds else "FAILS"
        lines.append(f"  [{mark}] {c.name}  {_span(c)}  ({c.strength.value})")
        lines.extend(f"      {note}" for note in c.notes)
    lines.extend(f"note: {note}" for note in cert.notes)
    return lines


def _render_terms(rows: Sequence[TermRow]) -> list[str]:
    lines = ["terms:", "  n | a_n | b_n | c_n | q_n"]
    for row in rows:
        cells = [
            "-" if row.a is None else describe_int(row.a),
            "-" if row.b is None else describe_int(row.b),
            "-" if row.c is None else describe_rational(row.c),
            "-" if row.q is None else describe_rational(row.q),
        ]
        line = f"  {row.n} | " + " | ".join(cells)
        if row.magnitude:
            line += f"  [{row.magnitude}]"
        lines.append(line)
    return lines


def render_text(report: Report) -> str:
    echo = report.series
    title = f"sum_{{n>={echo.start}}} {echo.sign} ({echo.numer})/({echo.denom})"
    lines = [f"series:   {title}" + (f"  [{report.name}]" if report.name else "")]
    if report.pair is not None:
        lines.append(f"pair:     ({report.pair.numer})/({report.pair.denom})")
    if report.certificate is not None:
        lines.extend(_render_certificate(report.certificate))
    if report.terms:
        lines.extend(_render_terms(report.terms))
    if report.partial_sum is not None:
        lines.append(f"partial sum: {describe_rational(report.partial_sum)}")
    if report.enclosure is not None:
        enc = report.enclosure
        lines.append(
            f"enclosure: [{describe_rational(enc.lo)}, {describe_rational(enc.hi)}] "
            f"from N={enc.certified_from}, tail bound {describe_rational(enc.tail_bound)}"
        )
        if enc.ratio is not None:
            lines.append(
                f"  ratio <= 1/2 for n={enc.ratio.from_index}..{enc.ratio.checked_to} "
                f"({enc.ratio.strength.value})"
            )
    if report.decimal is not None:
        lines.append(f"decimal ({report.digits} digits): {report.decimal}")
    for w in report.witnesses:
        lines.append(
            f"witness n={w.index}: p/q = {describe_int(w.p)}/{describe_int(w.q)}, "
            f"|theta - p/q| < {describe_rational(w.bound)}"
        )
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines)


# --- spec files ---


@dataclass(frozen=True)
class SpecFile:
    """Flat ``key=value`` series description; unknown keys are catalog parameters."""

    numer: str | None = None
    denom: str | None = None
    sign: str = "positive"
    start: int = 1
    builtin: str | None = None
    pair_numer: str | None = None
    pair_denom: str | None = None
    epsilon: str | None = None
    growth: str | None = None
    degree: int | None = None
    envelope: str | None = None
    params: tuple[tuple[str, str], ...] = ()


_TEXT_KEYS = ("numer", "denom", "sign", "builtin", "pair_numer", "pair_denom", "epsilon",
              "growth", "envelope")
_INT_KEYS = ("start", "degree")


def parse_spec_file(text: str) -> SpecFile:
    values: dict[str, Any] = {}
    params: list[tuple[str, str]] = []
    seen: set[str] = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not key:
            raise SpecFileError(f"expected key=value, got {raw.strip()!r}", line=number)
        if not value:
            raise SpecFileError(f"empty value for {key!r}", line=number)
        if key in seen:
            raise SpecFileError(f"duplicate key {key!r}", line=number)
        seen.add(key)
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError as exc:
                raise SpecFileError(f"{key} must be an integer, got {value!r}",
                                    line=number) from exc
        elif key in _TEXT_KEYS:
            values[key] = value
        else:
            params.append((key, value))
    if values.get("builtin") is None and not ("numer" in values and "denom" in values):
        raise SpecFileError("a spec file needs numer and denom, or builtin")
    if ("pair_numer" in values) != ("pair_denom" in values):
        raise SpecFileError("pair_numer and pair_denom go together")
    return SpecFile(**values, params=tuple(params))
