"""Shared pytest fixtures.

Collection-time helpers such as ``load_json`` live in ``tests.helpers``.
"""

from __future__ import annotations

import pytest

from irrat.catalog import CatalogEntry, builtin
from irrat.series import SeriesSpec


@pytest.fixture
def exp_series() -> SeriesSpec:
    """sum_{n>=0} 1/n!"""
    return SeriesSpec.from_text("1", "n!", start=0)


@pytest.fixture
def e_entry() -> CatalogEntry:
    return builtin("e")
