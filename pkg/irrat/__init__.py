"""irrat: exact-arithmetic irrationality, transcendence and Cremer-condition certificates.

A series Σ aₙ/bₙ is described by two integer sequence expressions; the checkers in
:mod:`irrat.criteria` decide their conditions on a finite prefix with exact rationals
and grade every verdict by the strength of its evidence.
"""

__version__ = "0.1.0"
