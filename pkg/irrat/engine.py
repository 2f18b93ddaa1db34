"""Classification dispatcher and the parallel catalog-regression runner.

``Engine.classify`` picks the checker a task asks for (explicitly, or from the extra
data it carries) and returns its certificate. ``Engine.run_all`` runs many tasks
with an ``asyncio.Semaphore`` worker pool; the checkers are CPU-bound and
synchronous, so each one runs in a worker thread via ``asyncio.to_thread``.
"""

from __future__ import annotations

import asyncio
import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TypeVar

from irrat.benchmark import RegressionStats
from irrat.catalog import DEFAULT_PREFIX, CatalogEntry
from irrat.config import Config
from irrat.criteria import (
    ApproximationWitness,
    Certificate,
    GrowthFn,
    PolyExp,
    Theorem,
    Verdict,
    check_cremer_condition,
    check_growth_approx,
    check_lcm_criterion,
    check_roth_transcendence,
    check_sum_pair,
    classify_geometric_poly,
    classify_irrational,
)
from irrat.errors import ErrorCategory, InvalidParam, IrratError, classify, display_name
from irrat.series import Envelope, SeriesSpec, SignMode

logger = logging.getLogger(__name__)

T = TypeVar("T")

__all__ = [
    "Classification",
    "ClassificationOutcome",
    "ClassificationTask",
    "Engine",
    "choose_theorem",
]


@dataclass(frozen=True)
class ClassificationTask:
    name: str
    spec: SeriesSpec
    prefix: int = DEFAULT_PREFIX
    theorem: Theorem | None = None
    envelope: Envelope | None = None
    pair: SeriesSpec | None = None
    pair_envelope: Envelope | None = None
    poly: PolyExp | None = None
    epsilon: Fraction | None = None
    growth: GrowthFn | None = None
    degree: int | None = None
    lcm: bool = False
    expected_verdict: Verdict | None = None
    expected_theorem: Theorem | None = None

    @classmethod
    def from_entry(cls, entry: CatalogEntry, *, prefix: int | None = None) -> ClassificationTask:
        return cls(
            name=entry.label,
            spec=entry.spec,
            prefix=entry.prefix if prefix is None else prefix,
            envelope=entry.envelope,
            pair=entry.pair,
            pair_envelope=entry.pair_envelope,
            poly=entry.poly,
            epsilon=entry.epsilon,
            growth=entry.growth,
            degree=entry.degree,
            lcm=entry.lcm,
            expected_verdict=entry.verdict,
            expected_theorem=entry.theorem,
        )


@dataclass(frozen=True)
class Classification:
    certificate: Certificate
    combined: SeriesSpec | None = None
    witnesses: tuple[ApproximationWitness, ...] = ()


@dataclass(frozen=True)
class ClassificationOutcome:
    task: ClassificationTask
    result: Classification | None = None
    error: str | None = None
    category: ErrorCategory | None = None
    duration_ms: float = 0.0

    @property
    def matches(self) -> bool:
        """True when the task classified as expected (or had no expectation)."""
        if self.result is None:
            return False
        cert = self.result.certificate
        task = self.task
        if task.expected_verdict is not None and cert.verdict is not task.expected_verdict:
            return False
        return task.expected_theorem is None or cert.theorem is task.expected_theorem


def choose_theorem(task: ClassificationTask) -> Theorem:
    """The checker a task runs: forced by ``theorem``, else implied by its extras."""
    if task.theorem is not None:
        return task.theorem
    if task.poly is not None:
        return Theorem.T5
    if task.pair is not None:
        return Theorem.T3
    if task.degree is not None:
        return Theorem.T8
    if task.epsilon is not None:
        return Theorem.T7
    if task.growth is not None:
        return Theorem.T6
    if task.lcm:
        return Theorem.T4
    return Theorem.T2 if task.spec.sign_mode is SignMode.ALL_POSITIVE else Theorem.T1


def _need(value: T | None, what: str, theorem: Theorem) -> T:
    if value is None:
        raise InvalidParam(f"{theorem.value} needs {what}", name=what)
    return value


@dataclass
class Engine:
    config: Config = field(default_factory=Config)
    workers: int | None = None
    stats: RegressionStats | None = field(default=None, init=False)

    def classify(self, task: ClassificationTask) -> Classification:
        theorem = choose_theorem(task)
        spec, N, config = task.spec, task.prefix, self.config
        logger.info("Classifying %s with %s at prefix %d", task.name, theorem.value, N)
        match theorem:
            case Theorem.T1 | Theorem.T2:
                return Classification(classify_irrational(spec, N, config, task.envelope))
            case Theorem.T3:
                pair = _need(task.pair, "pair", theorem)
                cert, combined = check_sum_pair(
                    spec, pair, N, config, envelopes=(task.envelope, task.pair_envelope)
                )
                return Classification(cert, combined=combined)
            case Theorem.T4:
                return Classification(check_lcm_criterion(spec, N, config))
            case Theorem.T5:
                return Classification(classify_geometric_poly(_need(task.poly, "poly", theorem)))
            case Theorem.T6:
                growth = _need(task.growth, "growth", theorem)
                cert, witnesses = check_growth_approx(spec, growth, N, config)
                return Classification(cert, witnesses=tuple(witnesses))
            case Theorem.T7:
                epsilon = _need(task.epsilon, "epsilon", theorem)
                return Classification(check_roth_transcendence(spec, epsilon, N, config))
            case Theorem.T8:
                degree = _need(task.degree, "degree", theorem)
                return Classification(check_cremer_condition(spec, degree, N, config))
        raise InvalidParam(f"no checker for {theorem}", name="theorem")

    def _classify_one(self, task: ClassificationTask) -> ClassificationOutcome:
        start = time.monotonic()
        try:
            result = self.classify(task)
        except IrratError as exc:
            category = classify(exc)
            logger.warning("Failed to classify %s [%s]: %s", task.name, display_name(category),
                           exc)
            return ClassificationOutcome(
                task=task,
                error=str(exc),
                category=category,
                duration_ms=(time.monotonic() - start) * 1000,
            )
        return ClassificationOutcome(
            task=task, result=result, duration_ms=(time.monotonic() - start) * 1000
        )

    async def run_all(self, tasks: Sequence[ClassificationTask]) -> list[ClassificationOutcome]:
        """Classify every task under the configured worker limit, keeping input order."""
        worker_count = self.workers or self.config.regression.workers
        semaphore = asyncio.Semaphore(worker_count)
        logger.info("Classifying %d series with %d workers", len(tasks), worker_count)

        async def run(task: ClassificationTask) -> ClassificationOutcome:
            async with semaphore:
                return await asyncio.to_thread(self._classify_one, task)

        start = time.monotonic()
        results = list(await asyncio.gather(*(run(t) for t in tasks)))
        stats = RegressionStats.from_outcomes(
            [(o.matches, o.duration_ms) for o in results],
            total_duration_ms=(time.monotonic() - start) * 1000,
            workers=worker_count,
        )
        self.stats = stats
        logger.info(
            "Regression complete: %d/%d as expected (speedup %.2f, efficiency %.2f)",
            stats.matched,
            stats.total,
            stats.calculate_speedup(),
            stats.calculate_efficiency(),
        )
        return results
