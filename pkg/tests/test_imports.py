"""Sanity check that the package and its public API surface import cleanly."""

from __future__ import annotations


def test_public_modules_import() -> None:
    from irrat import catalog, cli, config, criteria, errors, oracle, series, seqexpr

    assert errors.ErrorCategory.UNKNOWN
    assert config.Config()
    assert criteria.Theorem.T8
    assert callable(seqexpr.parse_sequence_expr)
    assert callable(series.enclose)
    assert callable(oracle.brute_sum)
    assert catalog.list_builtins()
    assert cli.app
