"""Built-in series with their expected classifications.

The catalog doubles as the regression corpus: ``irrat list --verify`` re-classifies
every entry at its documented prefix and compares against ``expected``.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from irrat.criteria import GrowthFn, PolyExp, Theorem, Verdict
from irrat.errors import InvalidParam, UnknownName
from irrat.series import Envelope, SeriesSpec

__all__ = ["CatalogEntry", "builtin", "list_builtins"]

DEFAULT_PREFIX = 12


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    title: str
    spec: SeriesSpec
    verdict: Verdict
    theorem: Theorem
    params: tuple[tuple[str, int], ...] = ()
    prefix: int = DEFAULT_PREFIX
    notes: tuple[str, ...] = ()
    envelope: Envelope | None = None
    pair: SeriesSpec | None = None
    pair_envelope: Envelope | None = None
    poly: PolyExp | None = None
    epsilon: Fraction | None = None
    growth: GrowthFn | None = None
    degree: int | None = None
    lcm: bool = False
    control: bool = field(default=False, compare=False)

    @property
    def expected(self) -> str:
        return f"{self.verdict.value} ({self.theorem.value})"

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}[{args}]"


def _spec(numer: str, denom: str, *, sign: str = "positive", start: int = 1) -> SeriesSpec:
    return SeriesSpec.from_text(numer, denom, sign=sign, start=start)


# --- builders ---


def _e(_: Mapping[str, int]) -> CatalogEntry:
    return CatalogEntry(
        name="e",
        title="e = sum 1/n! from n = 0",
        spec=_spec("1", "n!", start=0),
        verdict=Verdict.IRRATIONAL,
        theorem=Theorem.T2,
        envelope=Envelope.parse("1/(n+1)"),
        notes=("q_n = 1/(n+1) only reaches the threshold through the envelope",),
    )


def _n4_over_fact5(_: Mapping[str, int]) -> CatalogEntry:
    return CatalogEntry(
        name="n4_over_fact5",
        title="sum n^4/(n!)^5",
        spec=_spec("n^4", "(n!)^5"),
        verdict=Verdict.IRRATIONAL,
        theorem=Theorem.T2,
        envelope=Envelope.parse("1/(n+1)"),
        notes=("q_n = 1/(n+1)",),
    )


def _sin_recip(params: Mapping[str, int]) -> CatalogEntry:
    r = params["r"]
    if r < 1:
        raise InvalidParam(f"sin_recip needs r >= 1, got {r}", name="r")
    return CatalogEntry(
        name="sin_recip",
        title=f"sin(1/{r}) = sum (-1)^(n-1)/((2n-1)!*{r}^(2n-1))",
        spec=_spec("1", f"(2*n-1)!*{r}^(2*n-1)", sign="alternating"),
        verdict=Verdict.IRRATIONAL,
        theorem=Theorem.T1,
        params=(("r", r),),
        envelope=Envelope.parse("1/(4*n^2)"),
        notes=("q_n = 1/(2n(2n+1)r^2), enveloped by 1/(4n^2)",),
    )


def _sum_pair(_: Mapping[str, int]) -> CatalogEntry:
    return CatalogEntry(
        name="sum_pair",
        title="sum 2^(-n!) + sum 3^(-n!)",
        spec=_spec("1", "2^(n!)"),
        pair=_spec("1", "3^(n!)"),
        verdict=Verdict.IRRATIONAL,
        theorem=Theorem.T3,
        prefix=10,
        notes=("exact terms stop at n = 9 under the default bit budget",),
    )


def _prime_tower(_: Mapping[str, int]) -> CatalogEntry:
    return CatalogEntry(
        name="prime_tower",
        title="sum 1/p_(2^(2^(n!)))",
        spec=_spec("1", "nthprime(2^(2^(n!)))"),
        verdict=Verdict.IRRATIONAL,
        theorem=Theorem.T4,
        prefix=8,
        lcm=True,
        notes=(
            "exact-prime mode only for n <= 2 (p_4 = 7, p_16 = 53)",
            "beyond that the lcm ratio is bounded with c1*m*ln(m) < p_m < c2*m*ln(m): "
            "Evidence-only",
        ),
    )


def _poly_rational(params: Mapping[str, int]) -> CatalogEntry:
    a, b0, b1 = params["a"], params["b0"], params["b1"]
    poly = PolyExp((b0, b1), a)
    return CatalogEntry(
        name="poly_rational",
        title=f"sum {poly}",
        spec=poly.to_spec(),
        verdict=Verdict.RATIONAL,
        theorem=Theorem.T5,
        params=(("a", a), ("b0", b0), ("b1", b1)),
        poly=poly,
        notes=(f"value 1/({a}^{b1}*({a}^{b0}-1))",),
    )


def _poly_square(params: Mapping[str, int]) -> CatalogEntry:
    a = params["a"]
    poly = PolyExp((1, 0, 0), a)
    return CatalogEntry(
        name="poly_square",
        title=f"sum {poly}",
        spec=poly.to_spec(),
        verdict=Verdict.IRRATIONAL,
        theorem=Theorem.T5,
        params=(("a", a),),
        poly=poly,
    )


def _liouville_witness(_: Mapping[str, int]) -> CatalogEntry:
    return CatalogEntry(
        name="liouville_witness",
        title="sum 10^(-n!) with f(b) = b^3",
        spec=_spec("1", "10^(n!)"),
        verdict=Verdict.IRRATIONAL,
        theorem=Theorem.T6,
        prefix=10,
        growth=GrowthFn.parse("n^3"),
        notes=("witnesses p/q = S_n*10^(n!)/10^(n!) with |theta - p/q| < 1/q^3",),
    )


def _liouville(_: Mapping[str, int]) -> CatalogEntry:
    return CatalogEntry(
        name="liouville",
        title="sum 10^(-n!)",
        spec=_spec("1", "10^(n!)"),
        verdict=Verdict.TRANSCENDENTAL,
        theorem=Theorem.T7,
        epsilon=Fraction(1),
        notes=("t_n = 10^(-n!(n-2)) is below 1/2 from n = 3",),
    )


def _three_power(_: Mapping[str, int]) -> CatalogEntry:
    return CatalogEntry(
        name="three_power",
        title="sum 3^n/2^(3^n)",
        spec=_spec("3^n", "2^(3^n)"),
        verdict=Verdict.TRANSCENDENTAL,
        theorem=Theorem.T7,
        epsilon=Fraction(2, 3),
        notes=("t_n = 9*3^(n-1)/2^(3^(n-1)), below 1/2 from n = 3",),
    )


def _cremer_tower(params: Mapping[str, int]) -> CatalogEntry:
    d = params["d"]
    if d < 2:
        raise InvalidParam(f"cremer_tower needs d >= 2, got {d}", name="d")
    return CatalogEntry(
        name="cremer_tower",
        title=f"sum 1/tower({d}, 2n, {d}n)",
        spec=_spec("1", f"tower({d},2*n,{d}*n)"),
        verdict=Verdict.CREMER_CONDITION_HOLDS,
        theorem=Theorem.T8,
        params=(("d", d),),
        prefix=4,
        degree=d,
        notes=("b_3 onwards only exists as an iterated-log magnitude",),
    )


def _geometric(_: Mapping[str, int]) -> CatalogEntry:
    return CatalogEntry(
        name="geometric",
        title="sum 1/2^n = 1 (rational control)",
        spec=_spec("1", "2^n"),
        verdict=Verdict.INCONCLUSIVE,
        theorem=Theorem.T2,
        control=True,
        notes=("q_n = 1/2 does not tend to 0",),
    )


def _remark_2e(_: Mapping[str, int]) -> CatalogEntry:
    return CatalogEntry(
        name="remark_2e",
        title="sum (n+1)/n! = 2e (negative control)",
        spec=_spec("n+1", "n!", start=0),
        verdict=Verdict.INCONCLUSIVE,
        theorem=Theorem.T2,
        control=True,
        notes=("q_n = (n+2)/(n+1) tends to 1, so the criterion does not apply",),
    )


# name -> (builder, default parameters); order is the listing order.
_BUILTINS: dict[str, tuple[Callable[[Mapping[str, int]], CatalogEntry], dict[str, int]]] = {
    "e": (_e, {}),
    "n4_over_fact5": (_n4_over_fact5, {}),
    "sin_recip": (_sin_recip, {"r": 1}),
    "sum_pair": (_sum_pair, {}),
    "prime_tower": (_prime_tower, {}),
    "poly_rational": (_poly_rational, {"a": 2, "b0": 1, "b1": 1}),
    "poly_square": (_poly_square, {"a": 2}),
    "liouville_witness": (_liouville_witness, {}),
    "liouville": (_liouville, {}),
    "three_power": (_three_power, {}),
    "cremer_tower": (_cremer_tower, {"d": 2}),
    "geometric": (_geometric, {}),
    "remark_2e": (_remark_2e, {}),
}

# Parameter sets exercised by ``list --verify`` beyond the defaults.
REGRESSION_PARAMS: dict[str, tuple[dict[str, int], ...]] = {
    "sin_recip": ({"r": 1}, {"r": 2}, {"r": 3}, {"r": 5}),
    "poly_rational": ({"a": 2, "b0": 1, "b1": 1}, {"a": 3, "b0": 2, "b1": 1}),
}


def _coerce(name: str, key: str, value: int | str) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    try:
        return int(str(value).strip())
    except ValueError as exc:
        raise InvalidParam(f"{name}: parameter {key} must be an integer, got {value!r}",
                           name=key) from exc


def builtin(name: str, params: Mapping[str, int | str] | None = None) -> CatalogEntry:
    """Build the catalog entry ``name`` with ``params`` layered over its defaults."""
    try:
        build, defaults = _BUILTINS[name]
    except KeyError:
        raise UnknownName(name, known=tuple(_BUILTINS)) from None
    merged = dict(defaults)
    for key, value in (params or {}).items():
        if key not in defaults:
            accepted = ", ".join(defaults) or "none"
            raise InvalidParam(f"{name} has no parameter {key!r} (accepted: {accepted})",
                               name=key)
        merged[key] = _coerce(name, key, value)
    return build(merged)


def list_builtins() -> list[CatalogEntry]:
    """Every entry with default parameters, in a fixed order."""
    return [build(dict(defaults)) for build, defaults in _BUILTINS.values()]


def regression_entries() -> list[CatalogEntry]:
    """Defaults plus the extra parameter sets, for catalog regression runs."""
    entries = []
    for name in _BUILTINS:
        for params in REGRESSION_PARAMS.get(name, ({},)):
            entries.append(builtin(name, params))
    return entries
