"""Engine settings and TOML parsing.

The dataclasses and their defaults are the documented configuration surface
(docs/configuration.md). ``parse`` loads a TOML file into the dataclass tree,
ignoring unknown keys; ``validate`` enforces ranges and cross-field invariants;
``apply_environment`` layers the ``IRRAT_*`` environment overrides on top.
"""

from __future__ import annotations

import tomllib
from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from typing import Any

DEFAULT_BIT_BUDGET = 2**21
DEFAULT_PRIME_INDEX_CEILING = 10**7
BIT_BUDGET_ENV = "IRRAT_BIT_BUDGET"


@dataclass(frozen=True)
class Evaluation:
    bit_budget: int = DEFAULT_BIT_BUDGET
    prime_index_ceiling: int = DEFAULT_PRIME_INDEX_CEILING


@dataclass(frozen=True)
class MagnitudeConfig:
    precision_bits: int = 128
    level_cap: int = 8


@dataclass(frozen=True)
class Criteria:
    threshold: Fraction = Fraction(1, 10**6)
    window: int = 5
    envelope_probe_limit: int = 2**40
    hua_c1: Fraction = Fraction(1, 2)
    hua_c2: Fraction = Fraction(2)


@dataclass(frozen=True)
class EnclosureConfig:
    scan_limit: int = 2000
    guard_digits: int = 5


@dataclass(frozen=True)
class Regression:
    workers: int = 4


@dataclass(frozen=True)
class Config:
    version: int = 1
    evaluation: Evaluation = field(default_factory=Evaluation)
    magnitude: MagnitudeConfig = field(default_factory=MagnitudeConfig)
    criteria: Criteria = field(default_factory=Criteria)
    enclosure: EnclosureConfig = field(default_factory=EnclosureConfig)
    regression: Regression = field(default_factory=Regression)


def _build_message_map() -> dict[str, Callable[[dict[str, Any]], str]]:
    """Return a mapping from error code to a callable(detail) -> str."""

    def _fmt(template: str) -> Callable[[dict[str, Any]], str]:
        def _inner(d: dict[str, Any]) -> str:
            return template.format_map(d)

        return _inner

    return {
        "InvalidVersion": _fmt("version must be >= 1, got {version}"),
        "InvalidBitBudget": _fmt(
            "evaluation.bit_budget must be at least 64 bits, got {budget}"
        ),
        "InvalidPrimeCeiling": _fmt(
            "evaluation.prime_index_ceiling must be between 1 and 10^9, got {ceiling}"
        ),
        "InvalidPrecision": _fmt(
            "magnitude.precision_bits must be between 64 and 4096, got {bits}"
        ),
        "InvalidLevelCap": _fmt("magnitude.level_cap must be between 1 and 32, got {cap}"),
        "InvalidThreshold": _fmt(
            "criteria.threshold must be a rational in (0, 1/2), got {threshold}"
        ),
        "InvalidWindow": _fmt("criteria.window must be at least 2, got {window}"),
        "InvalidProbeLimit": _fmt(
            "criteria.envelope_probe_limit must be at least 2, got {limit}"
        ),
        "InvalidHuaConstants": _fmt(
            "criteria.hua_c1 and hua_c2 must satisfy 0 < c1 < c2, got {c1} and {c2}"
        ),
        "InvalidScanLimit": _fmt("enclosure.scan_limit must be at least 1, got {limit}"),
        "InvalidGuardDigits": _fmt(
            "enclosure.guard_digits must be between 0 and 50, got {digits}"
        ),
        "InvalidWorkerCount": _fmt("regression.workers must be at least 1, got {count}"),
        "TooManyWorkers": _fmt("regression.workers must be at most 32, got {count}"),
        "UnparsableRational": _fmt('{key} is not a rational number: "{value}"'),
    }


_MESSAGE_MAP: dict[str, Callable[[dict[str, Any]], str]] = _build_message_map()


@dataclass(frozen=True)
class ValidationError:
    """A configuration validation failure: a stable ``code`` plus offending values."""

    code: str
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def message(self) -> str:
        formatter = _MESSAGE_MAP.get(self.code)
        if formatter is not None:
            return formatter(self.detail)
        return f"{self.code} {self.detail}" if self.detail else self.code


class ConfigError(ValueError):
    """Raised by ``load`` when the parsed configuration does not validate."""

    def __init__(self, errors: list[ValidationError]) -> None:
        super().__init__("; ".join(e.message for e in errors))
        self.errors = errors


def _known_kwargs(cls: type, data: dict[str, Any]) -> dict[str, Any]:
    """Keep only keys that are fields of ``cls`` (lenient: drop unknown keys)."""
    names = {f.name for f in fields(cls)}
    return {k: v for k, v in data.items() if k in names}


def parse_rational(value: object) -> Fraction:
    """Read "p/q", an integer or a decimal string as an exact rational."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str) and value.strip():
        return Fraction(value.strip())
    raise ValueError(f"not a rational: {value!r}")


_RATIONAL_KEYS = ("threshold", "hua_c1", "hua_c2")


def parse(toml_text: str) -> Config:
    """Parse TOML into a :class:`Config`, ignoring unknown keys.

    Rational settings are written as strings ("1/1000000"); a malformed one raises
    :class:`ConfigError` with an ``UnparsableRational`` entry.
    """
    raw = tomllib.loads(toml_text)

    criteria_kwargs = _known_kwargs(Criteria, raw.get("criteria", {}))
    for key in _RATIONAL_KEYS:
        if key in criteria_kwargs:
            try:
                criteria_kwargs[key] = parse_rational(criteria_kwargs[key])
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(
                    [ValidationError("UnparsableRational",
                                     {"key": f"criteria.{key}", "value": criteria_kwargs[key]})]
                ) from exc

    return Config(
        version=raw.get("version", 1),
        evaluation=Evaluation(**_known_kwargs(Evaluation, raw.get("evaluation", {}))),
        magnitude=MagnitudeConfig(**_known_kwargs(MagnitudeConfig, raw.get("magnitude", {}))),
        criteria=Criteria(**criteria_kwargs),
        enclosure=EnclosureConfig(**_known_kwargs(EnclosureConfig, raw.get("enclosure", {}))),
        regression=Regression(**_known_kwargs(Regression, raw.get("regression", {}))),
    )


def apply_environment(config: Config, environ: Mapping[str, str]) -> Config:
    """Return ``config`` with ``IRRAT_BIT_BUDGET`` applied when set."""
    raw = environ.get(BIT_BUDGET_ENV)
    if raw is None or not raw.strip():
        return config
    try:
        budget = int(raw.strip(), 0)
    except ValueError as exc:
        raise ConfigError(
            [ValidationError("InvalidBitBudget", {"budget": raw.strip()})]
        ) from exc
    return replace(config, evaluation=replace(config.evaluation, bit_budget=budget))


def to_normalized_dict(config: Config) -> dict[str, Any]:
    """Plain-dict view for logging; rationals become "p/q" strings."""
    data = asdict(config)
    for key in _RATIONAL_KEYS:
        data["criteria"][key] = str(data["criteria"][key])
    return data


def validate(config: Config) -> list[ValidationError]:
    """Return validation errors for ``config`` (empty list when valid)."""
    errors: list[ValidationError] = []

    def err(code: str, **detail: Any) -> None:
        errors.append(ValidationError(code=code, detail=detail))

    if config.version < 1:
        err("InvalidVersion", version=config.version)

    ev = config.evaluation
    if ev.bit_budget < 64:
        err("InvalidBitBudget", budget=ev.bit_budget)
    if not 1 <= ev.prime_index_ceiling <= 10**9:
        err("InvalidPrimeCeiling", ceiling=ev.prime_index_ceiling)

    mg = config.magnitude
    if not 64 <= mg.precision_bits <= 4096:
        err("InvalidPrecision", bits=mg.precision_bits)
    if not 1 <= mg.level_cap <= 32:
        err("InvalidLevelCap", cap=mg.level_cap)

    cr = config.criteria
    if not 0 < cr.threshold < Fraction(1, 2):
        err("InvalidThreshold", threshold=cr.threshold)
    if cr.window < 2:
        err("InvalidWindow", window=cr.window)
    if cr.envelope_probe_limit < 2:
        err("InvalidProbeLimit", limit=cr.envelope_probe_limit)
    if not 0 < cr.hua_c1 < cr.hua_c2:
        err("InvalidHuaConstants", c1=cr.hua_c1, c2=cr.hua_c2)

    en = config.enclosure
    if en.scan_limit < 1:
        err("InvalidScanLimit", limit=en.scan_limit)
    if not 0 <= en.guard_digits <= 50:
        err("InvalidGuardDigits", digits=en.guard_digits)

    workers = config.regression.workers
    if workers < 1:
        err("InvalidWorkerCount", count=workers)
    if workers > 32:
        err("TooManyWorkers", count=workers)

    return errors


def load(toml_text: str | None, environ: Mapping[str, str]) -> Config:
    """Parse (or default), apply the environment, and validate in one step."""
    config = parse(toml_text) if toml_text is not None else Config()
    config = apply_environment(config, environ)
    errors = validate(config)
    if errors:
        raise ConfigError(errors)
    return config
