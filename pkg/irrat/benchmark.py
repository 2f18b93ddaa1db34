"""Phase timing for reports and catalog regression runs.

``Benchmark`` records how long each phase of a command took (classify, enclose,
render) through the ``measure`` context manager or ``record``. ``RegressionStats``
summarises a parallel ``list --verify`` run. Durations are milliseconds; the clock is
injectable for tests.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass


@dataclass(frozen=True)
class Measurement:
    phase: str
    duration_ms: float
    timestamp_ms: float


class Benchmark:
    def __init__(self, name: str, *, clock: Callable[[], float] = time.monotonic) -> None:
        self._name = name
        self._clock = clock
        self._start = clock()
        self._measurements: list[Measurement] = []

    @contextmanager
    def measure(self, phase: str) -> Iterator[None]:
        start = self._clock()
        try:
            yield
        finally:
            self.record(phase, (self._clock() - start) * 1000)

    def record(self, phase: str, duration_ms: float) -> None:
        self._measurements.append(
            Measurement(phase, duration_ms, (self._clock() - self._start) * 1000)
        )

    @property
    def measurements(self) -> tuple[Measurement, ...]:
        return tuple(self._measurements)

    def summary(self) -> str:
        if not self._measurements:
            return f"timing [{self._name}]: nothing measured"
        total = sum(m.duration_ms for m in self._measurements)
        parts = ", ".join(f"{m.phase} {m.duration_ms:.1f}ms" for m in self._measurements)
        return f"timing [{self._name}]: {parts} (total {total:.1f}ms)"


@dataclass(frozen=True)
class RegressionStats:
    total: int
    matched: int
    mismatched: int
    total_duration_ms: float
    average_ms: float
    fastest_ms: float
    slowest_ms: float
    workers: int = 1

    @classmethod
    def from_outcomes(
        cls,
        outcomes: Sequence[tuple[bool, float]],
        *,
        total_duration_ms: float,
        workers: int,
    ) -> RegressionStats:
        """Build from (matched, duration_ms) pairs."""
        durations = [d for _, d in outcomes] or [0.0]
        matched = sum(1 for ok, _ in outcomes if ok)
        return cls(
            total=len(outcomes),
            matched=matched,
            mismatched=len(outcomes) - matched,
            total_duration_ms=total_duration_ms,
            average_ms=sum(durations) / len(durations),
            fastest_ms=min(durations),
            slowest_ms=max(durations),
            workers=workers,
        )

    def calculate_speedup(self) -> float:
        """Summed per-entry time over wall time; 1.0 when nothing was timed."""
        if self.total_duration_ms == 0:
            return 1.0
        return self.average_ms * self.total / self.total_duration_ms

    def calculate_efficiency(self) -> float:
        if self.workers == 0:
            return 0.0
        return self.calculate_speedup() / self.workers
