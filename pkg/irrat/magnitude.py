"""Iterated-logarithm intervals for quantities too large to materialize.

A :class:`Magnitude` at level k says log₂^{(k)}(x) ∈ [lo, hi]. Level 0 is the
quantity itself (possibly with its exact integer). Endpoints are mpmath floats from a
private context at the configured precision; every transcendental step is widened
outward by a few ulps, so comparisons are sound even though mpmath rounds to nearest.

All quantities handled here are integers ≥ 1, which lets level-0 lower bounds be
clamped to 1 and makes the +1 bounds for sums and products valid at every level.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any

import mpmath

from irrat.config import Config
from irrat.errors import (
    BitBudgetExceeded,
    LevelCapExceeded,
    MagnitudeUnresolved,
    NonPositiveValue,
)
from irrat.seqexpr import (
    BinOp,
    Evaluator,
    Factorial,
    Node,
    NthPrime,
    Num,
    Op,
    SequenceExpr,
    Tower,
    Var,
)

logger = logging.getLogger(__name__)

__all__ = [
    "Certainty",
    "LogSpace",
    "Magnitude",
    "compare",
    "log_space_for",
    "magnitude_of",
    "ratio_below_half",
]

_LOWERING_LIMIT = 2**53

Real = Any  # an mpf of the owning LogSpace's context


class Certainty(Enum):
    PROVEN_BELOW = "ProvenBelow"
    PROVEN_AT_OR_ABOVE = "ProvenAtOrAbove"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Magnitude:
    level: int
    lo: Real
    hi: Real
    exact: int | None = None

    def __str__(self) -> str:
        if self.exact is not None:
            bits = self.exact.bit_length()
            return str(self.exact) if bits <= 64 else f"<{bits}-bit integer>"
        logs = "log2(" * self.level
        close = ")" * self.level
        return (
            f"{logs}x{close} in [{mpmath.nstr(self.lo, 10)}, {mpmath.nstr(self.hi, 10)}]"
        )


class LogSpace:
    """Factory and arithmetic for magnitudes sharing one precision and level cap.

    ``prefer_exact=False`` forces every operator through the log-space path; it exists
    so the interval arithmetic can be checked against exact values that would
    otherwise short-circuit it.
    """

    def __init__(
        self,
        precision_bits: int = 128,
        level_cap: int = 8,
        evaluator: Evaluator | None = None,
        *,
        prefer_exact: bool = True,
    ) -> None:
        self.ctx = mpmath.MPContext()
        self.ctx.prec = precision_bits
        self.precision_bits = precision_bits
        self.level_cap = level_cap
        self.evaluator = evaluator or Evaluator()
        self.prefer_exact = prefer_exact
        self._eps = self.ctx.ldexp(self.ctx.mpf(1), -(precision_bits - 4))
        self._limit = self.ctx.mpf(_LOWERING_LIMIT)
        self._one = self.ctx.mpf(1)

    @classmethod
    def from_config(cls, config: Config) -> LogSpace:
        return cls(
            precision_bits=config.magnitude.precision_bits,
            level_cap=config.magnitude.level_cap,
            evaluator=Evaluator.from_config(config),
        )

    # --- directed rounding ---

    def round_down(self, x: Real) -> Real:
        if not self.ctx.isfinite(x):
            return x
        return x - abs(x) * self._eps

    def round_up(self, x: Real) -> Real:
        if not self.ctx.isfinite(x):
            return x
        return x + abs(x) * self._eps

    def _log2_down(self, x: Real) -> Real:
        if x <= 0:
            return self.ctx.ninf
        return self.round_down(self.ctx.log(x, 2))

    def _log2_up(self, x: Real) -> Real:
        if x <= 0:
            return self.ctx.ninf
        return self.round_up(self.ctx.log(x, 2))

    def _exp2_down(self, x: Real) -> Real:
        if x == self.ctx.ninf:
            return self.ctx.zero
        return self.round_down(self.ctx.power(2, x))

    def _exp2_up(self, x: Real) -> Real:
        if x == self.ctx.ninf:
            return self.ctx.zero
        return self.round_up(self.ctx.power(2, x))

    # --- construction ---

    def exact(self, value: int) -> Magnitude:
        """Level-0 magnitude of a positive integer."""
        if value <= 0:
            raise NonPositiveValue(f"magnitude of non-positive value {value}", value=value)
        converted = self.ctx.mpf(value)
        if value.bit_length() <= self.precision_bits:
            lo = hi = converted
        else:
            lo, hi = self.round_down(converted), self.round_up(converted)
        if value.bit_length() > self.evaluator.bit_budget:
            return Magnitude(0, lo, hi)
        return Magnitude(0, lo, hi, exact=value)

    def _make(self, level: int, lo: Real, hi: Real) -> Magnitude:
        """Normalize to the lowest admissible level and enforce the level cap."""
        while level >= 1 and (hi < self._limit or lo <= 0):
            if hi >= self._limit:
                raise MagnitudeUnresolved(f"level-{level} bound has no positive lower end")
            lo, hi = self._exp2_down(lo), self._exp2_up(hi)
            level -= 1
        if level == 0 and lo < self._one:
            lo = self._one
        if level > self.level_cap:
            raise LevelCapExceeded(level=level, cap=self.level_cap)
        return Magnitude(level, lo, hi)

    def lift(self, m: Magnitude, level: int) -> tuple[Real, Real]:
        """Endpoints of log₂^{(level)}(x); ``level`` must be >= ``m.level``."""
        if level < m.level:
            raise ValueError(f"cannot lift a level-{m.level} magnitude down to {level}")
        lo, hi = m.lo, m.hi
        if m.exact is not None and level > 0 and m.exact & (m.exact - 1) == 0:
            exponent = self.ctx.mpf(m.exact.bit_length() - 1)
            lo = hi = exponent
            start = 1
        else:
            start = 0
        for _ in range(m.level + start, level):
            lo, hi = self._log2_down(lo), self._log2_up(hi)
        return lo, hi

    def log2_bounds(self, m: Magnitude) -> tuple[Real, Real]:
        """Endpoints of log₂ x as plain numbers (magnitudes up to level 2)."""
        if m.level <= 1:
            return self.lift(m, 1)
        if m.level > 2:
            raise MagnitudeUnresolved(f"log2 of a level-{m.level} magnitude is not representable")
        return self._exp2_down(m.lo), self._exp2_up(m.hi)

    # --- comparison ---

    def compare_at(self, lhs: Magnitude, rhs: Magnitude, level: int) -> Certainty:
        """Compare after raising both sides to ``level`` (>= both levels)."""
        if level > self.level_cap:
            return Certainty.UNKNOWN
        x_lo, x_hi = self.lift(lhs, level)
        y_lo, y_hi = self.lift(rhs, level)
        if x_hi < y_lo:
            return Certainty.PROVEN_BELOW
        if x_lo >= y_hi:
            return Certainty.PROVEN_AT_OR_ABOVE
        return Certainty.UNKNOWN

    def compare(self, lhs: Magnitude, rhs: Magnitude) -> Certainty:
        """Sound tri-state comparison; PROVEN_BELOW means lhs < rhs."""
        if lhs.exact is not None and rhs.exact is not None:
            if lhs.exact < rhs.exact:
                return Certainty.PROVEN_BELOW
            return Certainty.PROVEN_AT_OR_ABOVE
        return self.compare_at(lhs, rhs, max(lhs.level, rhs.level))

    def ratio_below_half(self, num: Magnitude, den: Magnitude) -> Certainty:
        """PROVEN_BELOW iff 2·num < den is forced by the representations."""
        return self.compare(self.mul(self.exact(2), num), den)

    # --- arithmetic ---

    def _exact_pair(self, a: Magnitude, b: Magnitude) -> tuple[int, int] | None:
        if self.prefer_exact and a.exact is not None and b.exact is not None:
            return a.exact, b.exact
        return None

    def log2(self, m: Magnitude) -> Magnitude:
        """Magnitude of log₂ x; requires x >= 2."""
        if m.exact is not None and m.exact & (m.exact - 1) == 0:
            if m.exact == 1:
                raise NonPositiveValue("log2 of 1 is not a positive value", value=0)
            return self.exact(m.exact.bit_length() - 1)
        if m.level == 0:
            return self._make(0, self._log2_down(m.lo), self._log2_up(m.hi))
        return self._make(m.level - 1, m.lo, m.hi)

    def exp2(self, m: Magnitude) -> Magnitude:
        """Magnitude of 2^x."""
        if (
            self.prefer_exact
            and m.exact is not None
            and m.exact <= self.evaluator.bit_budget - 1
        ):
            return self.exact(1 << m.exact)
        return self._make(m.level + 1, m.lo, m.hi)

    def mul(self, a: Magnitude, b: Magnitude) -> Magnitude:
        if (pair := self._exact_pair(a, b)) is not None:
            try:
                return self.exact(self.evaluator.binop(Op.MUL, *pair))
            except BitBudgetExceeded:
                pass
        if a.exact == 1:
            return b
        if b.exact == 1:
            return a
        level = max(a.level, b.level)
        (a_lo, a_hi), (b_lo, b_hi) = self.lift(a, level), self.lift(b, level)
        if level == 0:
            return self._make(0, self.round_down(a_lo * b_lo), self.round_up(a_hi * b_hi))
        if level == 1:
            return self._make(1, self.round_down(a_lo + b_lo), self.round_up(a_hi + b_hi))
        # log₂(xy) = X + Y lies in [max, 2·max], one extra doubling per level above.
        return self._make(level, max(a_lo, b_lo), self.round_up(max(a_hi, b_hi, 0) + 1))

    def add(self, a: Magnitude, b: Magnitude) -> Magnitude:
        if (pair := self._exact_pair(a, b)) is not None:
            try:
                return self.exact(self.evaluator.binop(Op.ADD, *pair))
            except BitBudgetExceeded:
                pass
        level = max(a.level, b.level)
        (a_lo, a_hi), (b_lo, b_hi) = self.lift(a, level), self.lift(b, level)
        if level == 0:
            return self._make(0, self.round_down(a_lo + b_lo), self.round_up(a_hi + b_hi))
        return self._make(level, max(a_lo, b_lo), self.round_up(max(a_hi, b_hi, 0) + 1))

    def halve_lower(self, m: Magnitude) -> Magnitude:
        """A magnitude containing every y with x/2 <= y <= x."""
        if m.level == 0:
            return self._make(0, self.round_down(m.lo / 2), m.hi)
        if m.lo < 1:
            raise MagnitudeUnresolved("cannot halve a magnitude with a small lower bound")
        return self._make(m.level, self.round_down(m.lo - 1), m.hi)

    def decrement(self, m: Magnitude) -> Magnitude:
        """Magnitude of x − 1 for x >= 2."""
        if m.exact is not None and (self.prefer_exact or m.exact <= 2):
            return self.exact(m.exact - 1)
        if m.level == 0:
            return self._make(0, self.round_down(m.lo - 1), m.hi)
        return self.halve_lower(m)

    def subtract(self, a: Magnitude, b: Magnitude) -> Magnitude:
        if (pair := self._exact_pair(a, b)) is not None:
            return self.exact(pair[0] - pair[1])
        if a.level == 0 and b.level == 0:
            return self._make(0, self.round_down(a.lo - b.hi), self.round_up(a.hi - b.lo))
        if self.compare(self.mul(self.exact(2), b), a) is not Certainty.PROVEN_BELOW:
            raise MagnitudeUnresolved("subtraction of magnitudes that are not well separated")
        return self.halve_lower(a)

    def divide(self, a: Magnitude, b: Magnitude) -> Magnitude:
        if (pair := self._exact_pair(a, b)) is not None:
            return self.exact(self.evaluator.binop(Op.DIV, *pair))
        if b.exact == 1:
            return a
        level = max(a.level, b.level)
        if level == 0:
            return self._make(0, self.round_down(a.lo / b.hi), self.round_up(a.hi / b.lo))
        if level == 1:
            (a_lo, a_hi), (b_lo, b_hi) = self.lift(a, 1), self.lift(b, 1)
            return self._make(1, self.round_down(a_lo - b_hi), self.round_up(a_hi - b_lo))
        big, small = self.log2(a), self.log2(b)
        if self.compare(self.mul(self.exact(2), small), big) is not Certainty.PROVEN_BELOW:
            raise MagnitudeUnresolved("quotient of magnitudes that are not well separated")
        return self.exp2(self.halve_lower(big))

    def power(self, base: Magnitude, exponent: Magnitude) -> Magnitude:
        if (pair := self._exact_pair(base, exponent)) is not None:
            try:
                return self.exact(self.evaluator.power(*pair))
            except BitBudgetExceeded:
                pass
        if base.exact == 1 or exponent.exact == 0:
            return self.exact(1)
        if exponent.exact == 1:
            return base
        return self.exp2(self.mul(exponent, self.log2(base)))

    def factorial(self, k: Magnitude) -> Magnitude:
        if k.exact is None:
            raise MagnitudeUnresolved("factorial of a non-exact magnitude")
        if self.prefer_exact:
            try:
                return self.exact(self.evaluator.factorial(k.exact))
            except BitBudgetExceeded:
                pass
        if k.exact <= 1:
            return self.exact(1)
        bits = self.ctx.loggamma(self.ctx.mpf(k.exact) + 1) / self.ctx.ln2
        return self._make(1, self.round_down(bits), self.round_up(bits))

    def tower(self, base: Magnitude, height: Magnitude, top: Magnitude) -> Magnitude:
        if height.exact is None:
            raise MagnitudeUnresolved("tower height must be exactly known")
        if height.exact == 1:
            return top
        if base.exact == 1:
            return self.exact(1)
        value = top
        for _ in range(height.exact - 1):
            value = self.power(base, value)
        return value

    # --- expressions ---

    def of(self, expr: SequenceExpr | Node, n: int) -> Magnitude:
        """Magnitude of ``expr`` at ``n``: exact when it fits, log space otherwise."""
        root = expr.root if isinstance(expr, SequenceExpr) else expr
        if self.prefer_exact:
            try:
                return self.exact(self.evaluator(root, n))
            except BitBudgetExceeded:
                logger.debug("Falling back to log space for %s at n=%d", root, n)
        return self._walk(root, n)

    def _walk(self, node: Node, n: int) -> Magnitude:
        if isinstance(node, (Var, Num)):
            return self.exact(self.evaluator.node(node, n))
        if self.prefer_exact:
            try:
                return self.exact(self.evaluator.node(node, n))
            except BitBudgetExceeded:
                pass
        match node:
            case BinOp(op, left, right):
                a, b = self._walk(left, n), self._walk(right, n)
                if op is Op.ADD:
                    return self.add(a, b)
                if op is Op.SUB:
                    return self.subtract(a, b)
                if op is Op.MUL:
                    return self.mul(a, b)
                if op is Op.DIV:
                    return self.divide(a, b)
                return self.power(a, b)
            case Factorial(operand):
                return self.factorial(self._walk(operand, n))
            case NthPrime(index):
                k = self._walk(index, n)
                if k.exact is None:
                    raise MagnitudeUnresolved("nthprime of a non-exact index")
                return self.exact(self.evaluator.primes.nth(k.exact))
            case Tower(base, height, top):
                return self.tower(
                    self._walk(base, n), self._walk(height, n), self._walk(top, n)
                )
        raise TypeError(f"not a sequence node: {node!r}")


@lru_cache(maxsize=8)
def log_space_for(config: Config) -> LogSpace:
    """Shared log space for a configuration (one mpmath context per distinct config)."""
    return LogSpace.from_config(config)


def _default() -> LogSpace:
    return log_space_for(Config())


def magnitude_of(expr: SequenceExpr, n: int, space: LogSpace | None = None) -> Magnitude:
    return (space or _default()).of(expr, n)


def compare(lhs: Magnitude, rhs: Magnitude, space: LogSpace | None = None) -> Certainty:
    return (space or _default()).compare(lhs, rhs)


def ratio_below_half(num: Magnitude, den: Magnitude, space: LogSpace | None = None) -> Certainty:
    return (space or _default()).ratio_below_half(num, den)
