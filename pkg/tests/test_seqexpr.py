"""Parser, formatter and exact evaluator for sequence expressions."""

from __future__ import annotations

import random

import pytest

from irrat.errors import BitBudgetExceeded, InexactDivision, NonPositiveValue, ParseError
from irrat.seqexpr import (
    BinOp,
    Evaluator,
    Factorial,
    N,
    Node,
    NthPrime,
    Num,
    Op,
    SequenceExpr,
    Tower,
    eval_sequence,
    format_expr,
    parse_sequence_expr,
)
from tests.helpers import load_json

_MALFORMED = load_json("seqexpr", "malformed.json")["cases"]
_FORMAT = load_json("seqexpr", "format_cases.json")["cases"]


def _value(text: str, n: int, evaluator: Evaluator | None = None) -> int:
    return eval_sequence(parse_sequence_expr(text), n, evaluator)


# --- parsing ---


def test_precedence_and_postfix() -> None:
    expr = parse_sequence_expr("2*n!+1")
    assert expr == SequenceExpr(
        BinOp(Op.ADD, BinOp(Op.MUL, Num(2), Factorial(N)), Num(1))
    )


def test_power_is_right_associative() -> None:
    assert _value("2^3^2", 1) == 512


@pytest.mark.parametrize("case", _MALFORMED, ids=[repr(c["text"]) for c in _MALFORMED])
def test_malformed_reports_position(case: dict) -> None:
    with pytest.raises(ParseError) as excinfo:
        parse_sequence_expr(case["text"])
    assert excinfo.value.position == case["position"]
    assert case["fragment"] in str(excinfo.value)


@pytest.mark.parametrize("case", _FORMAT, ids=[c["text"] for c in _FORMAT])
def test_format_is_canonical_and_reparses(case: dict) -> None:
    expr = parse_sequence_expr(case["text"])
    assert format_expr(expr) == case["canonical"]
    assert parse_sequence_expr(case["canonical"]) == expr


def _random_node(rng: random.Random, depth: int) -> Node:
    if depth == 0 or rng.random() < 0.2:
        return N if rng.random() < 0.5 else Num(rng.randint(0, 99))
    kind = rng.randrange(8)
    if kind < 5:
        op = list(Op)[kind]
        return BinOp(op, _random_node(rng, depth - 1), _random_node(rng, depth - 1))
    if kind == 5:
        return Factorial(_random_node(rng, depth - 1))
    if kind == 6:
        return NthPrime(_random_node(rng, depth - 1))
    return Tower(*(_random_node(rng, depth - 1) for _ in range(3)))


def test_random_trees_survive_format_then_parse() -> None:
    rng = random.Random(8)
    for _ in range(10_000):
        expr = SequenceExpr(_random_node(rng, 6))
        text = format_expr(expr)
        assert parse_sequence_expr(text) == expr, text


def test_oversized_literal_is_a_parse_error() -> None:
    text = "n+" + "7" * 5000
    with pytest.raises(ParseError) as excinfo:
        parse_sequence_expr(text)
    assert excinfo.value.position == 2
    assert "5000 digits" in str(excinfo.value)


# --- evaluation ---


@pytest.mark.characterization
@pytest.mark.parametrize(
    ("text", "n", "expected"),
    [
        ("n!", 0, 1),
        ("n!", 5, 120),
        ("2^(n!)", 3, 64),
        ("(n!)^5", 2, 32),
        ("(n+1)*(n+2)/2", 3, 10),
        ("n^2+5-4*n", 2, 1),
        ("nthprime(n)", 5, 11),
        ("nthprime(2^(2^(n!)))", 2, 53),
        ("tower(2,2*n,2*n)", 1, 4),
        ("tower(3,1,7)", 4, 7),
    ],
)
def test_values(text: str, n: int, expected: int) -> None:
    assert _value(text, n) == expected


def test_tower_at_two_is_two_to_the_65536() -> None:
    assert _value("tower(2,2*n,2*n)", 2) == 2**65536


def test_zero_value_is_rejected() -> None:
    with pytest.raises(NonPositiveValue):
        _value("n-1", 1)
    with pytest.raises(NonPositiveValue):
        _value("n", 0)


def test_division_must_be_exact() -> None:
    assert _value("n/2", 4) == 2
    with pytest.raises(InexactDivision):
        _value("n/2", 3)


def test_bit_budget_is_checked_before_computing() -> None:
    small = Evaluator(bit_budget=64)
    assert _value("2^n", 63, small) == 2**63
    with pytest.raises(BitBudgetExceeded) as excinfo:
        _value("2^n", 64, small)
    assert excinfo.value.budget == 64
    with pytest.raises(BitBudgetExceeded):
        _value("tower(2,2*n,2*n)", 3)


def test_negative_index_is_a_programming_error() -> None:
    with pytest.raises(ValueError):
        _value("n", -1)
