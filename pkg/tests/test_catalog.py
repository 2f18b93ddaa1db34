"""Built-in series catalog."""

from __future__ import annotations

from fractions import Fraction

import pytest

from irrat.catalog import builtin, list_builtins, regression_entries
from irrat.criteria import Theorem, Verdict
from irrat.errors import InvalidParam, UnknownName
from irrat.series import partial_sum

NAMES = [
    "e",
    "n4_over_fact5",
    "sin_recip",
    "sum_pair",
    "prime_tower",
    "poly_rational",
    "poly_square",
    "liouville_witness",
    "liouville",
    "three_power",
    "cremer_tower",
    "geometric",
    "remark_2e",
]


def test_listing_order() -> None:
    assert [entry.name for entry in list_builtins()] == NAMES


def test_controls_are_marked() -> None:
    controls = {entry.name for entry in list_builtins() if entry.control}
    assert controls == {"geometric", "remark_2e"}
    for entry in list_builtins():
        if entry.control:
            assert entry.verdict is Verdict.INCONCLUSIVE


def test_expected_and_label() -> None:
    assert builtin("e").expected == "Irrational (T2)"
    assert builtin("e").label == "e"
    assert builtin("sin_recip", {"r": "3"}).label == "sin_recip[r=3]"
    assert builtin("cremer_tower").expected == "CremerConditionHolds (T8)"


def test_parameters_reach_the_series() -> None:
    entry = builtin("poly_rational", {"a": 3, "b0": 2, "b1": 1})
    assert entry.poly is not None
    assert entry.poly.base == 3
    assert entry.theorem is Theorem.T5
    assert partial_sum(entry.spec, 1) == Fraction(1, 27)


def test_unknown_name() -> None:
    with pytest.raises(UnknownName) as excinfo:
        builtin("pi")
    assert "e" in excinfo.value.known


@pytest.mark.parametrize(
    ("name", "params"),
    [
        ("sin_recip", {"x": 1}),
        ("sin_recip", {"r": "abc"}),
        ("sin_recip", {"r": 0}),
        ("cremer_tower", {"d": 1}),
        ("e", {"r": 1}),
    ],
)
def test_invalid_params(name: str, params: dict[str, int | str]) -> None:
    with pytest.raises(InvalidParam):
        builtin(name, params)


def test_regression_entries_cover_extra_parameter_sets() -> None:
    labels = [entry.label for entry in regression_entries()]
    assert len(labels) == len(NAMES) + 4
    assert "sin_recip[r=5]" in labels
    assert "poly_rational[a=3,b0=2,b1=1]" in labels
    assert len(set(labels)) == len(labels)
