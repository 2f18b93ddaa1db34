"""Orbit demo for z ↦ z^d + e^{2πiθ}·z near the indifferent fixed point 0.

Purely illustrative: the orbits are floating-point iterations at a chosen mpmath
precision and prove nothing about the Julia set. θ comes from a certified enclosure
of the series, rounded to the working precision.
"""

from __future__ import annotations

import csv
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, TextIO

import mpmath

from irrat.config import Config
from irrat.errors import InvalidParam
from irrat.series import SeriesSpec, enclose

logger = logging.getLogger(__name__)

__all__ = ["CSV_HEADER", "OrbitRow", "iterate", "required_bits", "rotation_number", "write_csv"]

CSV_HEADER = ("seed_re", "seed_im", "step", "abs_z")
ESCAPE_RADIUS = 10**6


@dataclass(frozen=True)
class OrbitRow:
    seed_re: Any
    seed_im: Any
    step: int
    abs_z: Any


def required_bits(iterations: int) -> int:
    """Working precision the demo insists on for ``iterations`` steps."""
    if iterations < 0:
        raise InvalidParam(f"iterations must be >= 0, got {iterations}", name="iters")
    return 53 + math.ceil(math.log2(iterations + 1)) + 8


def rotation_number(
    spec: SeriesSpec, precision_bits: int, config: Config | None = None
) -> Fraction:
    """A certified rational within 2^-precision_bits of the series sum."""
    digits = math.ceil(precision_bits * math.log10(2)) + 1
    enc = enclose(spec, digits, config)
    logger.info("Rotation number enclosed from N=%d (width < 10^-%d)", enc.certified_from, digits)
    return enc.lo


def iterate(
    theta: Fraction,
    degree: int,
    iterations: int,
    precision_bits: int,
    *,
    seeds: int = 1,
    seed_radius: Fraction = Fraction(1, 1000),
) -> Iterator[OrbitRow]:
    """Orbit rows for ``seeds`` starting points on a circle of ``seed_radius``."""
    if degree < 2:
        raise InvalidParam(f"degree must be >= 2, got {degree}", name="degree")
    if seeds < 1:
        raise InvalidParam(f"need at least one seed, got {seeds}", name="seeds")
    needed = required_bits(iterations)
    if precision_bits < needed:
        raise InvalidParam(
            f"{iterations} iterations need at least {needed} bits of precision, "
            f"got {precision_bits}",
            name="precision",
        )
    ctx = mpmath.MPContext()
    ctx.prec = precision_bits
    multiplier = ctx.expjpi(2 * ctx.mpf(theta.numerator) / theta.denominator)
    radius = ctx.mpf(seed_radius.numerator) / seed_radius.denominator
    for k in range(seeds):
        seed = radius * ctx.expjpi(ctx.mpf(2 * k) / seeds)
        z = seed
        for step in range(1, iterations + 1):
            z = z**degree + multiplier * z
            size = abs(z)
            yield OrbitRow(seed.real, seed.imag, step, size)
            if size > ESCAPE_RADIUS:
                logger.debug("Seed %d escaped at step %d", k, step)
                break


def write_csv(rows: Iterator[OrbitRow], out: TextIO, digits: int = 17) -> int:
    """Write the CSV and return the number of data rows."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    count = 0
    for row in rows:
        writer.writerow(
            [
                mpmath.nstr(row.seed_re, digits),
                mpmath.nstr(row.seed_im, digits),
                row.step,
                mpmath.nstr(row.abs_z, digits),
            ]
        )
        count += 1
    return count
