"""Series Σ ±aₙ/bₙ: exact terms, partial sums, geometric tail bounds and enclosures.

The tail bound is the geometric majorization: once |c_{n+1}/cₙ| ≤ 1/2 from index
N+1 on, the remainder after N is at most 2|c_{N+1}|. Ratio checks are exact while the
terms fit the bit budget and fall back to :mod:`irrat.magnitude` beyond it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from irrat.config import Config
from irrat.errors import (
    BitBudgetExceeded,
    CertificateGap,
    EvaluationLimit,
    InsufficientWidth,
    InvalidParam,
    NoConvergenceEvidence,
)
from irrat.magnitude import Certainty, LogSpace, log_space_for
from irrat.seqexpr import Evaluator, SequenceExpr, format_expr, parse_sequence_expr

logger = logging.getLogger(__name__)

__all__ = [
    "Enclosure",
    "Envelope",
    "RatioCertificate",
    "SeriesSpec",
    "SignMode",
    "Strength",
    "TermCache",
    "certified_decimal",
    "certify_ratios",
    "enclose",
    "partial_sum",
    "render_decimal",
    "tail_bound",
    "term",
]


class SignMode(Enum):
    ALL_POSITIVE = "AllPositive"
    ALTERNATING = "Alternating"
    GENERAL = "General"


class Strength(Enum):
    """Evidence grade, weakest first."""

    EVIDENCE_ONLY = "Evidence-only"
    PROVEN_ON_PREFIX = "Proven-on-prefix"
    ENVELOPE_CERTIFIED = "Envelope-certified"

    @property
    def rank(self) -> int:
        return _RANK[self]

    @staticmethod
    def weakest(*strengths: Strength) -> Strength:
        return min(strengths, key=lambda s: s.rank)


_RANK = {
    Strength.EVIDENCE_ONLY: 0,
    Strength.PROVEN_ON_PREFIX: 1,
    Strength.ENVELOPE_CERTIFIED: 2,
}


@dataclass(frozen=True)
class SeriesSpec:
    """Σ_{n ≥ start_index} sign(n)·aₙ/bₙ.

    ``Alternating`` gives sign(n) = first_sign·(−1)^(n − start_index); ``General``
    cycles ``sign_pattern`` from the start index.
    """

    numer: SequenceExpr
    denom: SequenceExpr
    sign_mode: SignMode = SignMode.ALL_POSITIVE
    start_index: int = 1
    first_sign: int = 1
    sign_pattern: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.start_index < 0:
            raise InvalidParam(f"start index must be >= 0, got {self.start_index}", name="start")
        if self.first_sign not in (1, -1):
            raise InvalidParam(f"first sign must be +1 or -1, got {self.first_sign}", name="sign")
        if self.sign_mode is SignMode.GENERAL and (
            not self.sign_pattern or any(s not in (1, -1) for s in self.sign_pattern)
        ):
            raise InvalidParam("general sign mode needs a non-empty pattern of +1/-1", name="sign")

    @classmethod
    def from_text(
        cls, numer: str, denom: str, *, sign: str = "positive", start: int = 1
    ) -> SeriesSpec:
        mode, first, pattern = parse_sign_mode(sign)
        return cls(
            parse_sequence_expr(numer),
            parse_sequence_expr(denom),
            sign_mode=mode,
            start_index=start,
            first_sign=first,
            sign_pattern=pattern,
        )

    def sign(self, n: int) -> int:
        offset = n - self.start_index
        if self.sign_mode is SignMode.ALTERNATING:
            return self.first_sign if offset % 2 == 0 else -self.first_sign
        if self.sign_mode is SignMode.GENERAL:
            return self.sign_pattern[offset % len(self.sign_pattern)]
        return 1

    @property
    def sign_text(self) -> str:
        if self.sign_mode is SignMode.ALTERNATING:
            return "alternating" if self.first_sign == 1 else "alternating:-"
        if self.sign_mode is SignMode.GENERAL:
            return "general:" + "".join("+" if s > 0 else "-" for s in self.sign_pattern)
        return "positive"

    def __str__(self) -> str:
        return (
            f"sum_{{n>={self.start_index}}} {self.sign_text} "
            f"({format_expr(self.numer)})/({format_expr(self.denom)})"
        )


def parse_sign_mode(text: str) -> tuple[SignMode, int, tuple[int, ...]]:
    """Read ``positive``, ``alternating[:+|:-]`` or ``general:<pattern of + and ->``."""
    name, _, arg = text.strip().lower().partition(":")
    if name in ("positive", "allpositive", "+"):
        return SignMode.ALL_POSITIVE, 1, ()
    if name == "alternating":
        if arg in ("", "+", "+1"):
            return SignMode.ALTERNATING, 1, ()
        if arg in ("-", "-1"):
            return SignMode.ALTERNATING, -1, ()
    if name == "general" and arg and set(arg) <= {"+", "-"}:
        return SignMode.GENERAL, 1, tuple(1 if c == "+" else -1 for c in arg)
    raise InvalidParam(f"unknown sign mode {text!r}", name="sign")


@dataclass(frozen=True)
class Envelope:
    """A rational bound g(n) = numer(n)/denom(n)."""

    numer: SequenceExpr
    denom: SequenceExpr

    @classmethod
    def parse(cls, text: str) -> Envelope:
        """Split ``NUM/DEN`` at the first top-level slash (``1/(n+1)``)."""
        depth = 0
        for i, c in enumerate(text):
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
            elif c == "/" and depth == 0:
                return cls(parse_sequence_expr(text[:i]), parse_sequence_expr(text[i + 1 :]))
        return cls(parse_sequence_expr(text), parse_sequence_expr("1"))

    def value(self, n: int, evaluator: Evaluator) -> Fraction:
        return Fraction(evaluator(self.numer, n), evaluator(self.denom, n))

    def __str__(self) -> str:
        return f"{format_expr(self.numer)}/({format_expr(self.denom)})"


class TermCache:
    """Memoized aₙ and bₙ for one spec; evaluation limits are re-raised on every lookup."""

    def __init__(self, spec: SeriesSpec, evaluator: Evaluator) -> None:
        self.spec = spec
        self.evaluator = evaluator
        self._values: dict[tuple[bool, int], int | EvaluationLimit] = {}

    def _lookup(self, denominator: bool, n: int) -> int:
        if n < self.spec.start_index:
            raise ValueError(f"index {n} is before the start index {self.spec.start_index}")
        key = (denominator, n)
        cached = self._values.get(key)
        if cached is None:
            expr = self.spec.denom if denominator else self.spec.numer
            try:
                cached = self.evaluator(expr, n)
            except EvaluationLimit as exc:
                cached = exc
            self._values[key] = cached
        if isinstance(cached, EvaluationLimit):
            raise cached
        return cached

    def numer(self, n: int) -> int:
        return self._lookup(False, n)

    def denom(self, n: int) -> int:
        return self._lookup(True, n)

    def parts(self, n: int) -> tuple[int, int]:
        return self.numer(n), self.denom(n)

    def term(self, n: int) -> Fraction:
        a, b = self.parts(n)
        return Fraction(self.spec.sign(n) * a, b)


def _evaluator(config: Config | None) -> Evaluator:
    return log_space_for(config or Config()).evaluator


def term(spec: SeriesSpec, n: int, config: Config | None = None) -> Fraction:
    """Exact signed cₙ."""
    return TermCache(spec, _evaluator(config)).term(n)


def partial_sum(spec: SeriesSpec, N: int, config: Config | None = None) -> Fraction:
    """Exact Σ_{n=start}^{N} cₙ, summed in ascending n."""
    if N < spec.start_index:
        raise ValueError(f"N={N} is before the start index {spec.start_index}")
    terms = TermCache(spec, _evaluator(config))
    total = Fraction(0)
    for n in range(spec.start_index, N + 1):
        total += terms.term(n)
    return total


# --- ratio certificates ---


@dataclass(frozen=True)
class RatioCertificate:
    """|c_{n+1}/cₙ| ≤ 1/2 verified for from_index ≤ n ≤ checked_to."""

    from_index: int
    checked_to: int
    strength: Strength = Strength.PROVEN_ON_PREFIX
    envelope: str | None = None

    def __post_init__(self) -> None:
        if self.from_index > self.checked_to:
            raise ValueError(
                f"empty ratio certificate: {self.from_index} > {self.checked_to}"
            )


def ratio_at_most_half(terms: TermCache, n: int, space: LogSpace) -> bool | None:
    """Whether 2·a_{n+1}·bₙ ≤ aₙ·b_{n+1}; ``None`` when nothing decides it."""
    spec = terms.spec
    try:
        a0, b0 = terms.parts(n)
        a1, b1 = terms.parts(n + 1)
        return 2 * a1 * b0 <= a0 * b1
    except BitBudgetExceeded:
        pass
    try:
        lhs = space.mul(
            space.exact(2),
            space.mul(space.of(spec.numer, n + 1), space.of(spec.denom, n)),
        )
        rhs = space.mul(space.of(spec.numer, n), space.of(spec.denom, n + 1))
    except EvaluationLimit as exc:
        logger.debug("Ratio at n=%d undecided: %s", n, exc)
        return None
    if lhs.exact is not None and rhs.exact is not None:
        return lhs.exact <= rhs.exact
    verdict = space.compare(lhs, rhs)
    if verdict is Certainty.UNKNOWN:
        return None
    return verdict is Certainty.PROVEN_BELOW


def certify_ratios(
    spec: SeriesSpec,
    from_index: int,
    to_index: int,
    config: Config | None = None,
    *,
    terms: TermCache | None = None,
) -> RatioCertificate:
    """Verify the halving ratio from ``from_index`` upward, stopping at the first failure.

    The certificate covers the longest verified run starting at ``from_index``; a scan
    cut short by an evaluation limit keeps what it proved.
    """
    space = log_space_for(config or Config())
    terms = terms or TermCache(spec, space.evaluator)
    checked_to = from_index - 1
    for n in range(from_index, to_index + 1):
        ok = ratio_at_most_half(terms, n, space)
        if not ok:
            break
        checked_to = n
    if checked_to < from_index:
        raise CertificateGap(f"|c_{from_index + 1}/c_{from_index}| > 1/2 is not excluded")
    return RatioCertificate(from_index, checked_to)


def tail_bound(
    spec: SeriesSpec, N: int, cert: RatioCertificate, config: Config | None = None
) -> Fraction:
    """2·|c_{N+1}|, a bound on |Σ_{n>N} cₙ| under ``cert``."""
    if cert.from_index > N + 1 or cert.checked_to < N + 1:
        raise CertificateGap(
            f"ratio certificate covers {cert.from_index}..{cert.checked_to}, "
            f"the tail starts at {N + 1}"
        )
    return 2 * abs(term(spec, N + 1, config))


# --- enclosures ---


@dataclass(frozen=True)
class Enclosure:
    """Exact interval certified to contain the limit."""

    lo: Fraction
    hi: Fraction
    certified_from: int
    tail_bound: Fraction
    ratio: RatioCertificate | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    @classmethod
    def exact(cls, value: Fraction) -> Enclosure:
        return cls(value, value, certified_from=0, tail_bound=Fraction(0))


def _bracket(
    spec: SeriesSpec, partial: Fraction, next_term: Fraction, bound: Fraction
) -> tuple[Fraction, Fraction]:
    if spec.sign_mode is SignMode.ALL_POSITIVE:
        return partial, partial + bound
    if spec.sign_mode is SignMode.ALTERNATING:
        # ratio ≤ 1/2 makes |cₙ| strictly decreasing, so consecutive partial sums bracket.
        following = partial + next_term
        return min(partial, following), max(partial, following)
    return partial - bound, partial + bound


def enclose(
    spec: SeriesSpec,
    target_digits: int,
    config: Config | None = None,
    *,
    envelope: Envelope | None = None,
) -> Enclosure:
    """Smallest-N enclosure of width below 10^(−target_digits).

    The ratio condition must hold from N+1 through the look-ahead window (or as far
    as the terms can be evaluated). With an ``envelope`` g(n) ≥ |c_{n+1}/cₙ|, checked
    non-increasing with g(N+1) ≤ 1/2, the certificate is graded Envelope-certified.
    """
    if target_digits < 0:
        raise ValueError(f"target digits must be >= 0, got {target_digits}")
    config = config or Config()
    space = log_space_for(config)
    terms = TermCache(spec, space.evaluator)
    width = Fraction(1, 10**target_digits)
    window = config.criteria.window
    ratio_ok: dict[int, bool | None] = {}

    def ok(n: int) -> bool | None:
        if n not in ratio_ok:
            ratio_ok[n] = ratio_at_most_half(terms, n, space)
        return ratio_ok[n]

    partial = Fraction(0)
    for N in range(spec.start_index, spec.start_index + config.enclosure.scan_limit):
        partial += terms.term(N)
        next_term = terms.term(N + 1)
        bound = 2 * abs(next_term)
        lo, hi = _bracket(spec, partial, next_term, bound)
        if hi - lo >= width or not ok(N + 1):
            continue
        checked_to = N + 1
        for n in range(N + 2, N + 1 + window):
            verdict = ok(n)
            if verdict is None:
                break
            if not verdict:
                checked_to = -1
                break
            checked_to = n
        if checked_to < 0:
            continue
        cert = RatioCertificate(N + 1, checked_to)
        if envelope is not None:
            cert = _envelope_certificate(terms, envelope, cert)
        logger.debug("Enclosed %s at N=%d (width %s)", spec, N, hi - lo)
        return Enclosure(lo, hi, certified_from=N, tail_bound=bound, ratio=cert)
    raise NoConvergenceEvidence(
        f"no certified enclosure of width 10^-{target_digits} within "
        f"{config.enclosure.scan_limit} terms"
    )


def _envelope_certificate(
    terms: TermCache, envelope: Envelope, cert: RatioCertificate
) -> RatioCertificate:
    previous: Fraction | None = None
    for n in range(cert.from_index, cert.checked_to + 1):
        g = envelope.value(n, terms.evaluator)
        try:
            ratio = abs(terms.term(n + 1) / terms.term(n))
        except EvaluationLimit:
            break
        if g < ratio or (previous is not None and g > previous):
            logger.warning("Envelope %s does not bound the ratio at n=%d", envelope, n)
            return cert
        previous = g
    if envelope.value(cert.from_index, terms.evaluator) > Fraction(1, 2):
        return cert
    return RatioCertificate(
        cert.from_index,
        cert.checked_to,
        strength=Strength.ENVELOPE_CERTIFIED,
        envelope=str(envelope),
    )


def _truncated(value: Fraction, digits: int) -> int:
    scaled = abs(value) * 10**digits
    return scaled.numerator // scaled.denominator


def render_decimal(enc: Enclosure, digits: int) -> str:
    """Decimal prefix shared by both endpoints; "…" marks a non-degenerate enclosure."""
    if enc.width >= Fraction(1, 10**digits):
        raise InsufficientWidth(f"enclosure width {float(enc.width):.3g} exceeds 10^-{digits}")
    lo_digits, hi_digits = _truncated(enc.lo, digits), _truncated(enc.hi, digits)
    same_sign = enc.lo >= 0 or enc.hi <= 0
    if lo_digits != hi_digits or not same_sign:
        raise InsufficientWidth(f"endpoints disagree within the first {digits} digits")
    text = str(lo_digits).rjust(digits + 1, "0")
    body = f"{text[:-digits]}.{text[-digits:]}" if digits else text
    if enc.hi <= 0 and enc.lo < 0:
        body = "-" + body
    return body if enc.lo == enc.hi else body + "…"


def certified_decimal(
    spec: SeriesSpec,
    digits: int,
    config: Config | None = None,
    *,
    envelope: Envelope | None = None,
) -> tuple[str, Enclosure]:
    """Render ``digits`` certified digits, adding guard digits until the endpoints agree."""
    config = config or Config()
    guard = config.enclosure.guard_digits
    limit = max(guard, 1) * 4
    while True:
        enc = enclose(spec, digits + guard, config, envelope=envelope)
        try:
            return render_decimal(enc, digits), enc
        except InsufficientWidth:
            if guard >= limit:
                raise
            guard = min(limit, max(1, guard * 2))
            logger.debug("Retrying %s with %d guard digits", spec, guard)
