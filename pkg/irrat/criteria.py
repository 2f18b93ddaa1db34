"""Hypothesis checkers and classifiers; each returns graded evidence.

A finite prefix cannot prove a limit, so every checker scans indices ``start..N``
(pairs n, n+1), records exact values where they fit the bit budget, falls back to
:mod:`irrat.magnitude` where they do not, and grades the result:

* Proven-on-prefix: every inequality on the scanned range was decided exactly or by
  disjoint log intervals.
* Envelope-certified: a supplied decreasing envelope dominates the scanned values and
  is shown to fall below the threshold.
* Evidence-only: an undecided comparison, or reasoning from heuristic prime bounds.

A scan that hits an evaluation limit stops there and records the truncation; what it
proved up to that point stands.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from irrat.config import Config
from irrat.errors import (
    BitBudgetExceeded,
    EvaluationLimit,
    InvalidParam,
    InvalidPolynomial,
    UnsupportedSignMode,
)
from irrat.magnitude import Certainty, LogSpace, Magnitude, log_space_for
from irrat.series import (
    Envelope,
    SeriesSpec,
    SignMode,
    Strength,
    TermCache,
)
from irrat.seqexpr import (
    BinOp,
    Evaluator,
    Node,
    NthPrime,
    Num,
    Op,
    SequenceExpr,
    Tower,
    parse_sequence_expr,
)

logger = logging.getLogger(__name__)

__all__ = [
    "ApproximationWitness",
    "Certificate",
    "Condition",
    "GrowthFn",
    "HuaConstants",
    "PolyExp",
    "Theorem",
    "Verdict",
    "check_cremer_condition",
    "check_divisibility_chain",
    "check_growth_approx",
    "check_lcm_criterion",
    "check_roth_transcendence",
    "check_sum_pair",
    "check_tail_nonvanishing",
    "check_weighted_ratio_limit",
    "classify_geometric_poly",
    "classify_irrational",
]

_HALF = Fraction(1, 2)


class Theorem(Enum):
    T1 = "T1"  # general signs: divisibility, weighted ratio, tail nonvanishing
    T2 = "T2"  # positive terms
    T3 = "T3"  # sum of two positive series
    T4 = "T4"  # lcm instead of divisibility
    T5 = "T5"  # a^(-P(n))
    T6 = "T6"  # growth-function approximations
    T7 = "T7"  # transcendence
    T8 = "T8"  # Cremer condition


class Verdict(Enum):
    RATIONAL = "Rational"
    IRRATIONAL = "Irrational"
    TRANSCENDENTAL = "Transcendental"
    CREMER_CONDITION_HOLDS = "CremerConditionHolds"
    INCONCLUSIVE = "Inconclusive"

    @property
    def definite(self) -> bool:
        return self is not Verdict.INCONCLUSIVE


@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool
    strength: Strength
    verified_range: tuple[int, int] | None = None
    failed_at: int | None = None
    values: tuple[tuple[int, Fraction], ...] = ()
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ApproximationWitness:
    """|θ − p/q| < bound, with p = q·S_index and q = b_index."""

    index: int
    p: int
    q: int
    bound: Fraction


@dataclass(frozen=True)
class Certificate:
    theorem: Theorem
    verdict: Verdict
    strength: Strength
    conditions: tuple[Condition, ...]
    value: Fraction | None = None
    notes: tuple[str, ...] = ()
    witnesses: tuple[ApproximationWitness, ...] = ()


@dataclass(frozen=True)
class GrowthFn:
    """f(b) as a sequence expression whose variable ``n`` is bound to bₙ."""

    expr: SequenceExpr
    description: str = ""

    @classmethod
    def parse(cls, text: str) -> GrowthFn:
        return cls(parse_sequence_expr(text), f"f(b) = {text.strip()} with n standing for b")

    def __call__(self, b: int, evaluator: Evaluator) -> int:
        return evaluator(self.expr, b)


@dataclass(frozen=True)
class PolyExp:
    """cₙ = base^(−P(n)), P(n) = b₀nᵐ + … + bₘ with coefficients leading first."""

    coefficients: tuple[int, ...]
    base: int

    def __post_init__(self) -> None:
        if len(self.coefficients) < 2:
            raise InvalidPolynomial("the exponent polynomial must have degree m >= 1")
        if self.coefficients[0] < 1:
            raise InvalidPolynomial(
                f"leading coefficient must be a positive integer, got {self.coefficients[0]}"
            )
        if any(c < 0 for c in self.coefficients):
            raise InvalidPolynomial(f"coefficients must be non-negative: {self.coefficients}")
        if self.base < 2:
            raise InvalidPolynomial(f"base must be >= 2, got {self.base}")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def at(self, n: int) -> int:
        value = 0
        for c in self.coefficients:
            value = value * n + c
        return value

    def difference(self) -> tuple[int, ...]:
        """Coefficients of P(n+1) − P(n), leading first (degree m − 1)."""
        m = self.degree
        by_power = [0] * m
        for i, c in enumerate(self.coefficients):
            k = m - i
            for j in range(k):
                by_power[j] += c * math.comb(k, j)
        return tuple(reversed(by_power))

    def exponent_text(self) -> str:
        m = self.degree
        parts: list[str] = []
        for i, c in enumerate(self.coefficients):
            k = m - i
            if c == 0:
                continue
            power = "" if k == 0 else ("n" if k == 1 else f"n^{k}")
            if not power:
                parts.append(str(c))
            elif c == 1:
                parts.append(power)
            else:
                parts.append(f"{c}*{power}")
        return "+".join(parts)

    def to_spec(self) -> SeriesSpec:
        return SeriesSpec(
            parse_sequence_expr("1"),
            parse_sequence_expr(f"{self.base}^({self.exponent_text()})"),
        )

    def __str__(self) -> str:
        return f"{self.base}^(-({self.exponent_text()}))"


@dataclass(frozen=True)
class HuaConstants:
    """c₁·m·ln m < p_m < c₂·m·ln m, used once exact primes are out of reach."""

    c1: Fraction
    c2: Fraction

    def __post_init__(self) -> None:
        if not 0 < self.c1 < self.c2:
            raise InvalidParam(f"need 0 < c1 < c2, got c1={self.c1}, c2={self.c2}", name="hua")

    @classmethod
    def from_config(cls, config: Config) -> HuaConstants:
        return cls(config.criteria.hua_c1, config.criteria.hua_c2)


# --- prefix scans ---


Check = Callable[[int], bool | None]


@dataclass
class _Scan:
    """Runs a per-index check over a prefix.

    A strict scan stops at the first failure. An ``eventually`` scan keeps going and
    holds when the final run of successes reaches the end of the scan and spans
    ``window`` indices (or every checked index, if fewer were checkable). Undecided
    comparisons and evaluation limits end either kind of scan.
    """

    name: str
    first: int
    eventually: bool = False
    window: int = 1
    last: int | None = None
    run_start: int | None = None
    last_checked: int | None = None
    checked: int = 0
    failed_at: int | None = None
    undecided_at: int | None = None
    truncated: str | None = None
    values: list[tuple[int, Fraction]] = field(default_factory=list)

    def run(self, indices: range, check: Check) -> _Scan:
        for n in indices:
            try:
                ok = check(n)
            except EvaluationLimit as exc:
                self.truncated = f"scan stopped at n={n}: {exc}"
                logger.warning("%s: %s", self.name, self.truncated)
                break
            if ok is None:
                self.undecided_at = n
                logger.warning("%s: undecided at n=%d", self.name, n)
                break
            self.checked += 1
            self.last_checked = n
            if not ok:
                self.failed_at = n
                self.run_start = None
                logger.debug("%s: fails at n=%d", self.name, n)
                if not self.eventually:
                    break
                continue
            if self.run_start is None:
                self.run_start = n
            self.last = n
        return self

    @property
    def holds(self) -> bool:
        if self.last is None or self.run_start is None:
            return False
        if not self.eventually:
            return self.failed_at is None
        run = self.last - self.run_start + 1
        return self.last_checked == self.last and run >= min(self.window, self.checked)

    def tail_values(self) -> list[Fraction]:
        start = self.first if self.run_start is None else self.run_start
        return [v for n, v in self.values if n >= start]

    @property
    def strength(self) -> Strength:
        if self.undecided_at is not None:
            return Strength.EVIDENCE_ONLY
        return Strength.PROVEN_ON_PREFIX

    def notes(self) -> list[str]:
        notes = []
        if self.failed_at is not None:
            notes.append(f"fails at n={self.failed_at}")
            if self.eventually and self.holds:
                notes.append(f"holds from n={self.run_start} to the end of the scan")
        if self.undecided_at is not None:
            notes.append(f"comparison undecided at n={self.undecided_at}")
        if self.truncated:
            notes.append(self.truncated)
        if self.last is None and self.failed_at is None:
            notes.append("no index could be checked")
        return notes

    def condition(
        self,
        *,
        holds: bool | None = None,
        strength: Strength | None = None,
        extra: Sequence[str] = (),
    ) -> Condition:
        return Condition(
            name=self.name,
            holds=self.holds if holds is None else holds,
            strength=self.strength if strength is None else strength,
            verified_range=(
                None if self.last is None or self.run_start is None
                else (self.run_start, self.last)
            ),
            failed_at=self.failed_at,
            values=tuple(self.values),
            notes=tuple(self.notes()) + tuple(extra),
        )


def _prefix(spec: SeriesSpec, N: int) -> range:
    if N < spec.start_index:
        raise InvalidParam(
            f"prefix N={N} is before the start index {spec.start_index}", name="prefix"
        )
    return range(spec.start_index, N + 1)


def _decreasing_below(values: Sequence[Any], threshold: Any, window: int) -> bool:
    """Strictly decreasing over the final ``window`` values and the last below ``threshold``."""
    tail = list(values[-window:])
    if len(tail) < 2:
        return False
    return all(b < a for a, b in zip(tail, tail[1:], strict=False)) and tail[-1] < threshold


def _decided(certainty: Certainty) -> bool | None:
    if certainty is Certainty.PROVEN_BELOW:
        return True
    if certainty is Certainty.PROVEN_AT_OR_ABOVE:
        return False
    return None


def _bounded_product(evaluator: Evaluator, *factors: int) -> int:
    bits = sum(f.bit_length() for f in factors)
    if bits > evaluator.bit_budget:
        raise BitBudgetExceeded(bits=bits, budget=evaluator.bit_budget)
    return math.prod(factors)


def _require_positive(spec: SeriesSpec, what: str) -> None:
    if spec.sign_mode is not SignMode.ALL_POSITIVE:
        raise UnsupportedSignMode(f"{what} needs positive terms, got {spec.sign_text} signs")


def _certificate(
    theorem: Theorem,
    conditions: Sequence[Condition],
    verdict: Verdict,
    *,
    value: Fraction | None = None,
    notes: Sequence[str] = (),
    witnesses: Sequence[ApproximationWitness] = (),
    allow_evidence: bool = False,
) -> Certificate:
    strength = Strength.weakest(*(c.strength for c in conditions))
    definite = all(c.holds for c in conditions) and (
        allow_evidence or strength is not Strength.EVIDENCE_ONLY
    )
    if not definite:
        verdict, value, witnesses = Verdict.INCONCLUSIVE, None, ()
    logger.info("%s verdict: %s (%s)", theorem.value, verdict.value, strength.value)
    return Certificate(
        theorem=theorem,
        verdict=verdict,
        strength=strength,
        conditions=tuple(conditions),
        value=value,
        notes=tuple(notes),
        witnesses=tuple(witnesses),
    )


def _setup(spec: SeriesSpec, config: Config | None) -> tuple[Config, LogSpace, TermCache]:
    config = config or Config()
    space = log_space_for(config)
    return config, space, TermCache(spec, space.evaluator)


# --- structural conditions ---


def _power_form(node: Node, n: int, evaluator: Evaluator) -> tuple[int, Node] | None:
    """(base, exponent) when the node is base^exponent with a literal base >= 2."""
    match node:
        case BinOp(Op.POW, Num(base), exponent) if base >= 2:
            return base, exponent
        case Tower(Num(base), height, top) if base >= 2:
            h = evaluator.node(height, n)
            if h >= 2:
                return base, Tower(Num(base), Num(h - 1), top)
    return None


def _power_form_divides(spec: SeriesSpec, n: int, space: LogSpace) -> bool | None:
    """bₙ | b_{n+1} for same-base powers, decided on the exponents."""
    root = spec.denom.root
    here = _power_form(root, n, space.evaluator)
    there = _power_form(root, n + 1, space.evaluator)
    if here is None or there is None or here[0] != there[0]:
        return None
    x0, x1 = space.of(here[1], n), space.of(there[1], n + 1)
    if x0.exact is not None and x1.exact is not None:
        return x0.exact <= x1.exact
    if space.compare(x0, x1) is Certainty.PROVEN_BELOW:
        return True
    if space.compare(x1, x0) is Certainty.PROVEN_BELOW:
        return False
    return None


def _divides(terms: TermCache, n: int, space: LogSpace) -> bool | None:
    try:
        return terms.denom(n + 1) % terms.denom(n) == 0
    except BitBudgetExceeded:
        return _power_form_divides(terms.spec, n, space)


def _increases(terms: TermCache, n: int, space: LogSpace) -> bool | None:
    try:
        return terms.denom(n) < terms.denom(n + 1)
    except BitBudgetExceeded:
        spec = terms.spec
        return _decided(space.compare(space.of(spec.denom, n), space.of(spec.denom, n + 1)))


def check_divisibility_chain(
    spec: SeriesSpec, N: int, config: Config | None = None
) -> Condition:
    """bₙ | b_{n+1} for start ≤ n ≤ N, on the denominators as given."""
    _, space, terms = _setup(spec, config)
    scan = _Scan("divisibility b_n | b_(n+1)", spec.start_index)
    scan.run(_prefix(spec, N), lambda n: _divides(terms, n, space))
    return scan.condition()


def _check_chain(spec: SeriesSpec, N: int, space: LogSpace, terms: TermCache) -> Condition:
    def check(n: int) -> bool | None:
        divides = _divides(terms, n, space)
        if not divides:
            return divides
        return _increases(terms, n, space)

    scan = _Scan("strictly increasing divisibility chain", spec.start_index)
    return scan.run(_prefix(spec, N), check).condition()


# --- weighted ratio and tails ---


def _envelope_note(
    envelope: Envelope,
    values: Sequence[tuple[int, Fraction]],
    N: int,
    config: Config,
    evaluator: Evaluator,
) -> tuple[bool, str]:
    previous: Fraction | None = None
    for n, q in values:
        g = envelope.value(n, evaluator)
        if g < q:
            return False, f"envelope {envelope} is below the value at n={n}"
        if previous is not None and g > previous:
            return False, f"envelope {envelope} increases at n={n}"
        previous = g
    threshold = config.criteria.threshold
    m = max(N, 1)
    while m <= config.criteria.envelope_probe_limit:
        if envelope.value(m, evaluator) < threshold:
            return True, f"envelope {envelope} dominates the prefix and is < {threshold} at n={m}"
        m *= 2
    return False, f"envelope {envelope} stays >= {threshold} up to the probe limit"


def check_weighted_ratio_limit(
    spec: SeriesSpec,
    N: int,
    envelope: Envelope | None = None,
    config: Config | None = None,
) -> Condition:
    """qₙ = aₙ·|c_{n+1}/cₙ| = a_{n+1}·bₙ/b_{n+1} tends to 0."""
    config, _, terms = _setup(spec, config)
    scan = _Scan("weighted ratio a_(n+1)*b_n/b_(n+1) -> 0", spec.start_index)

    def check(n: int) -> bool:
        q = Fraction(terms.numer(n + 1) * terms.denom(n), terms.denom(n + 1))
        scan.values.append((n, q))
        return True

    scan.run(_prefix(spec, N), check)
    values = [q for _, q in scan.values]
    criteria = config.criteria
    decreasing = _decreasing_below(values, criteria.threshold, criteria.window)
    extra = []
    strength = Strength.PROVEN_ON_PREFIX
    if decreasing:
        extra.append(
            f"strictly decreasing over the last {min(criteria.window, len(values))} values, "
            f"last below {criteria.threshold}"
        )
    else:
        extra.append(f"not decreasing below {criteria.threshold} on the prefix")
    if envelope is not None:
        enveloped, note = _envelope_note(
            envelope, scan.values, N, config, terms.evaluator
        )
        extra.append(note)
        if enveloped:
            strength = Strength.ENVELOPE_CERTIFIED
            decreasing = True
    return scan.condition(holds=decreasing and scan.last is not None, strength=strength,
                          extra=extra)


def _magnitude_decreasing(terms: TermCache, n: int, space: LogSpace) -> bool | None:
    try:
        a0, b0 = terms.parts(n)
        a1, b1 = terms.parts(n + 1)
        return a1 * b0 < a0 * b1
    except BitBudgetExceeded:
        spec = terms.spec
        lhs = space.mul(space.of(spec.numer, n + 1), space.of(spec.denom, n))
        rhs = space.mul(space.of(spec.numer, n), space.of(spec.denom, n + 1))
        return _decided(space.compare(lhs, rhs))


def check_tail_nonvanishing(
    spec: SeriesSpec, N_max: int, config: Config | None = None
) -> Condition:
    """Every tail Σ_{n ≥ N} cₙ is nonzero for N up to ``N_max``."""
    name = "tail nonvanishing"
    if spec.sign_mode is SignMode.GENERAL:
        raise UnsupportedSignMode(
            "tail nonvanishing is only decided for positive or alternating signs"
        )
    if spec.sign_mode is SignMode.ALL_POSITIVE:
        return Condition(
            name=name,
            holds=True,
            strength=Strength.PROVEN_ON_PREFIX,
            verified_range=(spec.start_index, N_max),
            notes=("every term is positive, so every tail is positive",),
        )
    _, space, terms = _setup(spec, config)
    scan = _Scan(name, spec.start_index)
    scan.run(_prefix(spec, N_max), lambda n: _magnitude_decreasing(terms, n, space))
    return scan.condition(
        extra=(
            "|c_n| strictly decreasing: pairing consecutive terms gives every tail "
            "from N the sign of c_N",
            "checked for every N up to the prefix; eventual nonvanishing is what the "
            "irrationality argument needs",
        )
    )


def classify_irrational(
    spec: SeriesSpec,
    N: int,
    config: Config | None = None,
    envelope: Envelope | None = None,
) -> Certificate:
    """Divisibility, weighted ratio and tail nonvanishing; T2 for positive terms, else T1."""
    theorem = Theorem.T2 if spec.sign_mode is SignMode.ALL_POSITIVE else Theorem.T1
    conditions = [
        check_divisibility_chain(spec, N, config),
        check_weighted_ratio_limit(spec, N, envelope, config),
    ]
    try:
        conditions.append(check_tail_nonvanishing(spec, N, config))
    except UnsupportedSignMode as exc:
        conditions.append(
            Condition("tail nonvanishing", holds=False, strength=Strength.EVIDENCE_ONLY,
                      notes=(str(exc),))
        )
    return _certificate(theorem, conditions, Verdict.IRRATIONAL)


# --- sums of two series ---


def _combined(spec_a: SeriesSpec, spec_b: SeriesSpec) -> SeriesSpec:
    a, b = spec_a.numer.root, spec_a.denom.root
    a2, b2 = spec_b.numer.root, spec_b.denom.root
    numer = BinOp(Op.ADD, BinOp(Op.MUL, a, b2), BinOp(Op.MUL, b, a2))
    return SeriesSpec(
        SequenceExpr(numer),
        SequenceExpr(BinOp(Op.MUL, b, b2)),
        start_index=spec_a.start_index,
    )


def check_sum_pair(
    spec_a: SeriesSpec,
    spec_b: SeriesSpec,
    N: int,
    config: Config | None = None,
    *,
    envelopes: tuple[Envelope | None, Envelope | None] = (None, None),
) -> tuple[Certificate, SeriesSpec]:
    """α + β for two positive series, plus the combined spec (a·b′ + b·a′)/(b·b′)."""
    _require_positive(spec_a, "a sum pair")
    _require_positive(spec_b, "a sum pair")
    if spec_a.start_index != spec_b.start_index:
        raise InvalidParam("both series of a pair must share a start index", name="start")
    config = config or Config()
    space = log_space_for(config)
    conditions = []
    for label, spec, envelope in (("first", spec_a, envelopes[0]),
                                  ("second", spec_b, envelopes[1])):
        cert = classify_irrational(spec, N, config, envelope)
        conditions.append(
            Condition(
                name=f"{label} series irrational by {Theorem.T2.value}",
                holds=cert.verdict is Verdict.IRRATIONAL,
                strength=cert.strength,
                notes=tuple(f"{c.name}: {'holds' if c.holds else 'fails'}"
                            for c in cert.conditions),
            )
        )

    threshold, window = config.criteria.threshold, config.criteria.window
    for name, this, other in (
        ("cross ratio a_(n+1)*b_n*b'_n/b_(n+1)", spec_a, spec_b),
        ("cross ratio a'_(n+1)*b'_n*b_n/b'_(n+1)", spec_b, spec_a),
    ):
        own = TermCache(this, space.evaluator)
        partner = TermCache(other, space.evaluator)
        scan = _Scan(name, this.start_index)

        def check(n: int, own: TermCache = own, partner: TermCache = partner,
                  scan: _Scan = scan) -> bool:
            x = Fraction(own.numer(n + 1) * own.denom(n) * partner.denom(n), own.denom(n + 1))
            scan.values.append((n, x))
            return True

        scan.run(_prefix(this, N), check)
        decreasing = _decreasing_below([x for _, x in scan.values], threshold, window)
        conditions.append(scan.condition(holds=decreasing and scan.last is not None))

    cert = _certificate(Theorem.T3, conditions, Verdict.IRRATIONAL)
    return cert, _combined(spec_a, spec_b)


# --- lcm criterion ---


def _log2_of(fraction: Fraction, space: LogSpace, *, upward: bool = True) -> Any:
    """Directed bound of log₂ of a positive fraction."""
    num = space.log2_bounds(space.exact(fraction.numerator))
    den = space.log2_bounds(space.exact(fraction.denominator))
    if upward:
        return space.round_up(num[1] - den[0])
    return space.round_down(num[0] - den[1])


def _prime_log2_bounds(
    spec: SeriesSpec, k: int, space: LogSpace, hua: HuaConstants
) -> tuple[Any, Any]:
    """Bounds of log₂ b_k: exact while sieved, c₁·m·ln m < p_m < c₂·m·ln m beyond."""
    try:
        return space.lift(space.exact(space.evaluator(spec.denom, k)), 1)
    except EvaluationLimit:
        pass
    root = spec.denom.root
    if not isinstance(root, NthPrime):
        raise InvalidParam("prime bounds need an nthprime denominator", name="denom")
    ctx = space.ctx
    lo_m, hi_m = space.log2_bounds(space.of(root.index, k))

    def bound(c: Fraction, log2_m: Any) -> Any:
        log2_c = ctx.log(ctx.mpf(c.numerator) / c.denominator, 2)
        return log2_c + log2_m + ctx.log(log2_m * ctx.ln2, 2)

    return space.round_down(bound(hua.c1, lo_m)), space.round_up(bound(hua.c2, hi_m))


def check_lcm_criterion(
    spec: SeriesSpec, N: int, config: Config | None = None
) -> Certificate:
    """rₙ = a_{n+1}·lcm(b_start..bₙ)/b_{n+1} tends to 0, without a divisibility chain."""
    _require_positive(spec, "the lcm criterion")
    config, space, terms = _setup(spec, config)
    criteria = config.criteria
    scan = _Scan("lcm ratio a_(n+1)*lcm(b_1..b_n)/b_(n+1) -> 0", spec.start_index)
    state = {"lcm": 1, "through": spec.start_index - 1}

    def check(n: int) -> bool:
        if state["through"] < n:
            lcm = math.lcm(state["lcm"], terms.denom(n))
            if lcm.bit_length() > space.evaluator.bit_budget:
                raise BitBudgetExceeded(bits=lcm.bit_length(), budget=space.evaluator.bit_budget)
            state["lcm"], state["through"] = lcm, n
        r = Fraction(terms.numer(n + 1) * state["lcm"], terms.denom(n + 1))
        scan.values.append((n, r))
        return True

    scan.run(_prefix(spec, N), check)
    values = [r for _, r in scan.values]
    prime_mode = scan.truncated is not None and isinstance(spec.denom.root, NthPrime)
    if not prime_mode:
        decreasing = _decreasing_below(values, criteria.threshold, criteria.window)
        condition = scan.condition(holds=decreasing and scan.last is not None)
        return _certificate(Theorem.T4, [condition], Verdict.IRRATIONAL)

    hua = HuaConstants.from_config(config)
    logger.debug("Switching %s to prime-bound mode after n=%s", spec, scan.last)
    uppers = [_log2_of(r, space) for r in values]
    log2_lcm = space.lift(space.exact(state["lcm"]), 1)[1]
    through = state["through"]
    start = spec.start_index if scan.last is None else scan.last + 1
    bound_notes = []
    for n in _prefix(spec, N)[start - spec.start_index :]:
        try:
            while through < n:
                through += 1
                log2_lcm = space.round_up(
                    log2_lcm + _prime_log2_bounds(spec, through, space, hua)[1]
                )
            log2_a = space.log2_bounds(space.of(spec.numer, n + 1))[1]
            log2_b = _prime_log2_bounds(spec, n + 1, space, hua)[0]
        except EvaluationLimit as exc:
            bound_notes.append(f"prime-bound scan stopped at n={n}: {exc}")
            break
        upper = space.round_up(log2_a + log2_lcm - log2_b)
        uppers.append(upper)
        bound_notes.append(f"log2 r_{n} <= {space.ctx.nstr(upper, 12)}")
    log2_threshold = _log2_of(criteria.threshold, space, upward=False)
    decreasing = _decreasing_below(uppers, log2_threshold, criteria.window)
    condition = scan.condition(
        holds=decreasing,
        strength=Strength.EVIDENCE_ONLY,
        extra=[
            f"prime bounds c1*m*ln(m) < p_m < c2*m*ln(m) with c1={hua.c1}, c2={hua.c2} "
            "are heuristic constants",
            *bound_notes,
        ],
    )
    return _certificate(
        Theorem.T4,
        [condition],
        Verdict.IRRATIONAL,
        allow_evidence=True,
        notes=("exact primes only cover the start of the prefix; the rest uses prime bounds",),
    )


# --- a^(-P(n)) ---


def classify_geometric_poly(p: PolyExp) -> Certificate:
    """Rational 1/(a^b₁(a^b₀ − 1)) when m = 1, irrational when m ≥ 2."""
    identity = "holds for every n (polynomial identity)"
    chain = Condition(
        name="divisibility a^P(n) | a^P(n+1)",
        holds=True,
        strength=Strength.PROVEN_ON_PREFIX,
        notes=("P(n) < P(n+1) for non-negative coefficients with a positive leading one",
               identity),
    )
    diff = p.difference()
    diff_text = ", ".join(str(c) for c in diff)
    if p.degree == 1:
        b0, b1 = p.coefficients
        value = Fraction(1, p.base**b1 * (p.base**b0 - 1))
        ratio = Condition(
            name="ratio c_(n+1)/c_n constant",
            holds=True,
            strength=Strength.PROVEN_ON_PREFIX,
            notes=(f"c_(n+1)/c_n = {p.base}^-{b0} for every n, so the sum is geometric",),
        )
        return _certificate(Theorem.T5, [chain, ratio], Verdict.RATIONAL, value=value,
                            notes=(f"sum = 1/({p.base}^{b1}*({p.base}^{b0}-1))",))
    ratio = Condition(
        name="ratio c_(n+1)/c_n -> 0",
        holds=True,
        strength=Strength.PROVEN_ON_PREFIX,
        notes=(
            f"P(n+1) - P(n) has coefficients [{diff_text}], degree {p.degree - 1}, "
            f"leading term {diff[0]} = m*b0",
            identity,
        ),
    )
    return _certificate(Theorem.T5, [chain, ratio], Verdict.IRRATIONAL)


# --- growth-function approximations ---


def check_growth_approx(
    spec: SeriesSpec, f: GrowthFn, N: int, config: Config | None = None
) -> tuple[Certificate, list[ApproximationWitness]]:
    """Conditions for |θ − pₙ/bₙ| < 1/f(bₙ) with pₙ = bₙ·Sₙ."""
    _require_positive(spec, "growth approximations")
    config, space, terms = _setup(spec, config)
    ev = space.evaluator
    criteria = config.criteria
    prefix = _prefix(spec, N)

    chain = _check_chain(spec, N, space, terms)

    growth = _Scan("growth 2*f(b_n) < f(b_(n+1))", spec.start_index, eventually=True,
                   window=criteria.window)
    growth.run(prefix, lambda n: 2 * f(terms.denom(n), ev) < f(terms.denom(n + 1), ev))

    approx = _Scan("approximation 2*f(b_n)*a_(n+1) < b_(n+1)", spec.start_index,
                   eventually=True, window=criteria.window)

    def approx_check(n: int) -> bool:
        product = _bounded_product(ev, f(terms.denom(n), ev), terms.numer(n + 1))
        following = terms.denom(n + 1)
        approx.values.append((n, Fraction(product, following)))
        return 2 * product < following

    approx.run(prefix, approx_check)

    decay = _Scan("b_n/f(b_n) -> 0", spec.start_index)

    def decay_check(n: int) -> bool:
        b = terms.denom(n)
        decay.values.append((n, Fraction(b, f(b, ev))))
        return True

    decay.run(prefix, decay_check)
    decreasing = _decreasing_below([v for _, v in decay.values], criteria.threshold,
                                   criteria.window)
    conditions = [
        chain,
        growth.condition(),
        approx.condition(),
        decay.condition(holds=decreasing and decay.last is not None),
    ]

    witnesses = []
    ranges = [c.verified_range for c in conditions if c.verified_range is not None]
    if len(ranges) == len(conditions):
        # witnesses only where every condition holds through the end of its scan
        first = max(r[0] for r in ranges)
        total = sum((terms.term(k) for k in range(spec.start_index, first)), Fraction(0))
        for n in range(first, min(r[1] for r in ranges) + 1):
            total += terms.term(n)
            q = terms.denom(n)
            p = total * q
            if p.denominator != 1:
                break
            witnesses.append(ApproximationWitness(n, p.numerator, q, Fraction(1, f(q, ev))))

    cert = _certificate(
        Theorem.T6,
        conditions,
        Verdict.IRRATIONAL,
        witnesses=witnesses,
        notes=(
            f.description or f"f = {f.expr}",
            "growth is checked as f(b_n)/f(b_(n+1)) < 1/2, the direction the tail "
            "estimate uses",
        ),
    )
    return cert, list(cert.witnesses)


# --- transcendence ---


def _iroot(x: int, k: int) -> int:
    """floor(x^(1/k)) by Newton iteration from above."""
    if x < 2 or k == 1:
        return x
    guess = 1 << -(-x.bit_length() // k)
    while True:
        step = ((k - 1) * guess + x // guess ** (k - 1)) // k
        if step >= guess:
            return guess
        guess = step


def check_roth_transcendence(
    spec: SeriesSpec, epsilon: Fraction, N: int, config: Config | None = None
) -> Certificate:
    """tₙ = a_{n+1}·bₙ^(2+ε)/b_{n+1} < 1/2 and decreasing on the prefix."""
    _require_positive(spec, "the transcendence test")
    if epsilon <= 0:
        raise InvalidParam(f"epsilon must be positive, got {epsilon}", name="epsilon")
    config, space, terms = _setup(spec, config)
    ev = space.evaluator
    p, q = epsilon.numerator, epsilon.denominator
    scan = _Scan(
        f"a_(n+1)*b_n^(2+{epsilon})/b_(n+1) < 1/2",
        spec.start_index,
        eventually=True,
        window=config.criteria.window,
    )

    def check(n: int) -> bool | None:
        try:
            a1, b0, b1 = terms.numer(n + 1), terms.denom(n), terms.denom(n + 1)
            root = _iroot(b0, q)
            if root**q == b0:
                numerator = _bounded_product(ev, a1, b0, b0, ev.power(root, p))
                t = Fraction(numerator, b1)
                scan.values.append((n, t))
                return t < _HALF
            lhs = _bounded_product(ev, 2**q, ev.power(a1, q), ev.power(b0, 2 * q + p))
            return lhs < ev.power(b1, q)
        except BitBudgetExceeded:
            pass
        a1_m = space.of(spec.numer, n + 1)
        b0_m, b1_m = space.of(spec.denom, n), space.of(spec.denom, n + 1)
        lhs_m = space.mul(
            space.exact(2**q),
            space.mul(space.power(a1_m, space.exact(q)),
                      space.power(b0_m, space.exact(2 * q + p))),
        )
        return _decided(space.compare(lhs_m, space.power(b1_m, space.exact(q))))

    scan.run(_prefix(spec, N), check)
    exact = scan.tail_values()
    extra = []
    decreasing = True
    if len(exact) >= 2:
        decreasing = all(b < a for a, b in zip(exact, exact[1:], strict=False))
        extra.append("exact values strictly decreasing" if decreasing
                     else "exact values not decreasing")
    else:
        extra.append("fewer than two exact values; decrease not checked")
    roth = scan.condition(holds=scan.holds and decreasing, extra=extra)
    chain = _check_chain(spec, N, space, terms)
    return _certificate(
        Theorem.T7,
        [chain, roth],
        Verdict.TRANSCENDENTAL,
        notes=("transcendence follows from Roth's theorem, which is cited, not verified",),
    )


# --- Cremer condition ---


def _cremer_lhs(spec: SeriesSpec, d: int, n: int, space: LogSpace) -> Magnitude:
    b0 = space.of(spec.denom, n)
    exponent = space.decrement(space.power(space.exact(d), b0))
    return space.mul(
        space.exact(2), space.mul(space.of(spec.numer, n + 1), space.power(b0, exponent))
    )


def check_cremer_condition(
    spec: SeriesSpec, d: int, N: int, config: Config | None = None
) -> Certificate:
    """uₙ = a_{n+1}·bₙ^(d^bₙ − 1)/b_{n+1} < 1/2, decided in log space where needed."""
    _require_positive(spec, "the Cremer condition")
    if d < 2:
        raise InvalidParam(f"degree d must be >= 2, got {d}", name="degree")
    config, space, terms = _setup(spec, config)
    ev = space.evaluator
    scan = _Scan(
        f"a_(n+1)*b_n^({d}^b_n-1)/b_(n+1) < 1/2",
        spec.start_index,
        eventually=True,
        window=config.criteria.window,
    )

    def check(n: int) -> bool | None:
        try:
            a1, b0, b1 = terms.numer(n + 1), terms.denom(n), terms.denom(n + 1)
            numerator = _bounded_product(ev, a1, ev.power(b0, ev.power(d, b0) - 1))
            u = Fraction(numerator, b1)
            scan.values.append((n, u))
            return u < _HALF
        except BitBudgetExceeded:
            pass
        lhs = _cremer_lhs(spec, d, n, space)
        return _decided(space.compare(lhs, space.of(spec.denom, n + 1)))

    scan.run(_prefix(spec, N), check)
    cremer = scan.condition()

    def doubles(n: int) -> bool | None:
        try:
            return 2 * terms.denom(n) <= terms.denom(n + 1)
        except BitBudgetExceeded:
            lhs = space.mul(space.exact(2), space.of(spec.denom, n))
            rhs = space.of(spec.denom, n + 1)
            if space.compare(lhs, rhs) is Certainty.PROVEN_BELOW:
                return True
            return None

    doubling = _Scan("b_(n+1) >= 2*b_n", spec.start_index).run(_prefix(spec, N), doubles)
    chain = _check_chain(spec, N, space, terms)
    return _certificate(
        Theorem.T8,
        [chain, doubling.condition(), cremer],
        Verdict.CREMER_CONDITION_HOLDS,
        notes=(
            "Julia-set membership of the indifferent fixed point follows from Cremer's "
            "theorem, which is cited, not verified",
        ),
    )
