"""Brute-force cross-checks kept independent of the main summation path.

Nothing here reuses :mod:`irrat.series` arithmetic: sums are folded over raw
integer numerator/denominator pairs, and continued fractions are expanded with plain
floor division, so a bug in one path shows up as a disagreement with the other.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from irrat.criteria import GrowthFn
from irrat.errors import IndeterminateWidth
from irrat.seqexpr import Evaluator
from irrat.series import Enclosure, SeriesSpec

__all__ = ["Convergent", "Expansion", "brute_sum", "convergents", "verify_witness"]


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class Expansion:
    """Convergents shared by every point of an enclosure.

    ``truncated`` is set when the endpoints disagreed before ``count`` convergents
    were certified.
    """

    convergents: tuple[Convergent, ...]
    truncated: bool


def brute_sum(spec: SeriesSpec, N: int, evaluator: Evaluator | None = None) -> Fraction:
    """Σ_{n=start}^{N} ±aₙ/bₙ as a left fold over reduced integer pairs."""
    ev = evaluator or Evaluator()
    num, den = 0, 1
    for n in range(spec.start_index, N + 1):
        a, b = ev(spec.numer, n), ev(spec.denom, n)
        num = num * b + spec.sign(n) * a * den
        den *= b
        g = math.gcd(num, den)
        num, den = num // g, den // g
    return Fraction(num, den)


def _quotients(x: Fraction) -> Iterator[int]:
    p, q = x.numerator, x.denominator
    while q:
        a = p // q
        yield a
        p, q = q, p - a * q


def convergents(enc: Enclosure, count: int) -> Expansion:
    """The first ``count`` continued-fraction convergents of the enclosed value.

    Convergent k is emitted once both endpoints agree on the partial quotients through
    a_{k+1}, or when the expansion of an exact enclosure terminates.
    """
    lo, hi = _quotients(enc.lo), _quotients(enc.hi)
    found: list[Convergent] = []
    p_prev, q_prev, p, q = 0, 1, 1, 0
    started = False
    index = -1
    while len(found) < count:
        a_lo, a_hi = next(lo, None), next(hi, None)
        if a_lo != a_hi:
            return Expansion(tuple(found), truncated=True)
        if started:
            found.append(Convergent(index, p, q))
            if len(found) == count:
                break
        if a_lo is None:
            break
        index += 1
        p_prev, q_prev, p, q = p, q, a_lo * p + p_prev, a_lo * q + q_prev
        started = True
    return Expansion(tuple(found), truncated=False)


def verify_witness(
    enc: Enclosure,
    p: int,
    q: int,
    f: GrowthFn,
    evaluator: Evaluator | None = None,
) -> bool:
    """Whether |θ − p/q| < 1/f(q) for every θ in the enclosure."""
    if q < 1:
        raise ValueError(f"denominator must be positive, got {q}")
    bound = Fraction(1, f(q, evaluator or Evaluator()))
    x = Fraction(p, q)
    d_lo, d_hi = abs(enc.lo - x), abs(enc.hi - x)
    if max(d_lo, d_hi) < bound:
        return True
    nearest = Fraction(0) if enc.contains(x) else min(d_lo, d_hi)
    if nearest >= bound:
        return False
    raise IndeterminateWidth(
        f"enclosure of width {float(enc.width):.3g} straddles the bound 1/f({q})"
    )
