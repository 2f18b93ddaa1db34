"""Phase timing and regression statistics."""

from __future__ import annotations

import pytest

from irrat.benchmark import Benchmark, RegressionStats


class FakeClock:
    """Monotonic clock returning preset seconds on each call."""

    def __init__(self, values: list[float]) -> None:
        self._values = values
        self._i = 0

    def __call__(self) -> float:
        value = self._values[min(self._i, len(self._values) - 1)]
        self._i += 1
        return value


def test_record_and_measurements() -> None:
    bench = Benchmark("classify", clock=FakeClock([0.0, 1.0, 2.0]))
    bench.record("classify", 1500.0)
    bench.record("render", 500.0)
    assert [m.phase for m in bench.measurements] == ["classify", "render"]
    assert bench.measurements[0].duration_ms == 1500.0
    assert bench.measurements[1].timestamp_ms == 2000.0


def test_measure_context_manager_times_block() -> None:
    # clock() called: start(0), measure-start(1), measure-end(4), record-timestamp(4)
    bench = Benchmark("x", clock=FakeClock([0.0, 1.0, 4.0, 4.0]))
    with bench.measure("enclose"):
        pass
    assert bench.measurements[0].duration_ms == 3000.0


def test_measure_records_on_error() -> None:
    bench = Benchmark("x", clock=FakeClock([0.0, 1.0, 2.0, 2.0]))
    with pytest.raises(RuntimeError), bench.measure("classify"):
        raise RuntimeError("boom")
    assert [m.phase for m in bench.measurements] == ["classify"]


def test_summary_empty() -> None:
    bench = Benchmark("eval", clock=FakeClock([0.0]))
    assert bench.summary() == "timing [eval]: nothing measured"


def test_summary_lists_phases() -> None:
    bench = Benchmark("classify", clock=FakeClock([0.0]))
    bench.record("classify", 12.0)
    bench.record("render", 0.5)
    assert bench.summary() == "timing [classify]: classify 12.0ms, render 0.5ms (total 12.5ms)"


def test_regression_stats_from_outcomes() -> None:
    stats = RegressionStats.from_outcomes(
        [(True, 1000.0), (True, 500.0), (False, 1500.0), (True, 1000.0)],
        total_duration_ms=1000.0,
        workers=4,
    )
    assert (stats.total, stats.matched, stats.mismatched) == (4, 3, 1)
    assert stats.fastest_ms == 500.0
    assert stats.slowest_ms == 1500.0
    # summed = 1000 * 4 = 4000; speedup = 4000/1000 = 4.0; efficiency = 4/4 = 1.0
    assert stats.calculate_speedup() == pytest.approx(4.0)
    assert stats.calculate_efficiency() == pytest.approx(1.0)


def test_regression_stats_speedup_defaults_to_one_with_no_duration() -> None:
    stats = RegressionStats.from_outcomes([], total_duration_ms=0.0, workers=4)
    assert stats.total == 0
    assert stats.calculate_speedup() == 1.0
