"""Typer CLI entry point.

Subcommands:
  irrat classify   run an irrationality / transcendence / Cremer checker on a series
  irrat eval       term table, exact partial sum and certified decimal of a series
  irrat demo-cremer  write illustrative orbits of z^d + e^{2πiθ}z to CSV
  irrat list       show (or re-verify) the built-in catalog

Exit codes: 0 definite verdict, 1 Inconclusive or no certified answer, 2 input error.
"""

from __future__ import annotations

import asyncio
import logging
import os
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path

import typer

from irrat import __version__
from irrat import config as config_module
from irrat.benchmark import Benchmark
from irrat.catalog import DEFAULT_PREFIX, builtin, list_builtins, regression_entries
from irrat.criteria import GrowthFn, Theorem
from irrat.engine import Classification, ClassificationTask, Engine
from irrat.errors import (
    CertificateError,
    EvaluationLimit,
    InvalidParam,
    IrratError,
    SpecFileError,
    classify,
    exit_code,
    suggestion,
)
from irrat.magnitude import log_space_for
from irrat.orbit import iterate, required_bits, rotation_number, write_csv
from irrat.report import (
    Report,
    SeriesEcho,
    TermRow,
    dumps,
    parse_spec_file,
    render_text,
)
from irrat.series import (
    Enclosure,
    Envelope,
    SeriesSpec,
    TermCache,
    certified_decimal,
    render_decimal,
)

logger = logging.getLogger(__name__)

app = typer.Typer(
    add_completion=False,
    help="Certify irrationality, transcendence and the Cremer condition for series.",
)


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


def _configure_logging(verbose: int, quiet: bool) -> None:
    """Configure the root logger for the application.

    Level mapping: quiet -> WARNING; default -> INFO; verbose>=1 -> DEBUG.
    quiet wins over verbose when both are set.
    """
    if quiet:
        level = logging.WARNING
    elif verbose >= 1:
        level = logging.DEBUG
    else:
        level = logging.INFO
    logging.basicConfig(
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)


def _version_callback(value: bool) -> None:
    if value:
        typer.echo(__version__)
        raise typer.Exit()


@contextmanager
def _reported_errors() -> Iterator[None]:
    """Turn library errors into "Error: ..." on stderr and the category's exit code."""
    try:
        yield
    except IrratError as exc:
        category = classify(exc)
        typer.echo(f"Error: {exc}", err=True)
        typer.echo(f"  {suggestion(category)}", err=True)
        raise typer.Exit(code=exit_code(category)) from exc


def _config(ctx: typer.Context) -> config_module.Config:
    obj = ctx.find_root().obj
    return obj if isinstance(obj, config_module.Config) else config_module.Config()


@app.callback()
def _root(
    ctx: typer.Context,
    config: Path | None = typer.Option(
        None, "--config", exists=True, dir_okay=False, help="Configuration TOML"
    ),
    verbose: int = typer.Option(
        0, "--verbose", "-v", count=True, help="Increase log verbosity (-v for debug)"
    ),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Only log warnings and errors"),
    version: bool = typer.Option(
        False, "--version", callback=_version_callback, is_eager=True, help="Show version and exit"
    ),
) -> None:
    """irrat: exact-arithmetic certificates for sums of a_n/b_n."""
    _configure_logging(verbose, quiet)
    try:
        cfg = config_module.load(config.read_text() if config else None, os.environ)
    except config_module.ConfigError as exc:
        typer.echo("Configuration validation failed:", err=True)
        for error in exc.errors:
            typer.echo(f"  - {error.message}", err=True)
        raise typer.Exit(code=2) from exc
    logger.debug("Configuration: %s", config_module.to_normalized_dict(cfg))
    ctx.obj = cfg


# --- series input ---


@dataclass(frozen=True)
class _Source:
    name: str | None
    task: ClassificationTask


def _parse_params(values: list[str]) -> dict[str, str]:
    params: dict[str, str] = {}
    for item in values:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InvalidParam(f"--param expects key=value, got {item!r}", name="param")
        params[key.strip()] = value.strip()
    return params


def _rational(text: str, name: str) -> Fraction:
    try:
        return config_module.parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParam(f"--{name} must be a rational like 2/3, got {text!r}",
                           name=name) from exc


def _resolve(
    *,
    numer: str | None,
    denom: str | None,
    sign: str | None,
    start: int | None,
    builtin_name: str | None,
    spec_file: Path | None,
    params: list[str],
) -> _Source:
    """Build a task from exactly one of --builtin, --spec-file or --numer/--denom."""
    inline = numer is not None or denom is not None
    if sum((inline, builtin_name is not None, spec_file is not None)) != 1:
        raise InvalidParam(
            "give exactly one of --numer/--denom, --builtin or --spec-file", name="series"
        )
    extra = _parse_params(params)
    if spec_file is not None:
        sf = parse_spec_file(spec_file.read_text())
        extra = {**dict(sf.params), **extra}
        if sf.builtin is not None:
            source = _from_builtin(sf.builtin, extra)
        elif sf.numer is not None and sf.denom is not None:
            source = _inline(sf.numer, sf.denom, sign or sf.sign,
                             sf.start if start is None else start, extra)
        else:
            raise SpecFileError("a spec file needs numer and denom, or builtin")
        task = source.task
        if sf.pair_numer and sf.pair_denom:
            task = replace(task, pair=SeriesSpec.from_text(sf.pair_numer, sf.pair_denom,
                                                           start=task.spec.start_index))
        if sf.epsilon is not None:
            task = replace(task, epsilon=_rational(sf.epsilon, "epsilon"))
        if sf.growth is not None:
            task = replace(task, growth=GrowthFn.parse(sf.growth))
        if sf.degree is not None:
            task = replace(task, degree=sf.degree)
        if sf.envelope is not None:
            task = replace(task, envelope=Envelope.parse(sf.envelope))
        return _Source(source.name, task)
    if builtin_name is not None:
        return _from_builtin(builtin_name, extra)
    if numer is None or denom is None:
        raise InvalidParam("--numer and --denom go together", name="series")
    return _inline(numer, denom, sign or "positive", 1 if start is None else start, extra)


def _from_builtin(name: str, params: dict[str, str]) -> _Source:
    entry = builtin(name, params)
    return _Source(entry.label, ClassificationTask.from_entry(entry))


def _inline(numer: str, denom: str, sign: str, start: int, params: dict[str, str]) -> _Source:
    if params:
        raise InvalidParam("--param only applies to catalog series", name="param")
    spec = SeriesSpec.from_text(numer, denom, sign=sign, start=start)
    return _Source(None, ClassificationTask(name=str(spec), spec=spec))


def _value_spec(task: ClassificationTask, result: Classification | None = None) -> SeriesSpec:
    """The series whose sum is the classified number."""
    if result is not None and result.combined is not None:
        return result.combined
    if task.poly is not None:
        return task.poly.to_spec()
    return task.spec


def _emit(report: Report, fmt: OutputFormat) -> None:
    typer.echo(dumps(report) if fmt is OutputFormat.JSON else render_text(report))


# --- commands ---


@app.command("classify")
def classify_command(
    ctx: typer.Context,
    numer: str | None = typer.Option(None, "--numer", help="Numerator expression a_n"),
    denom: str | None = typer.Option(None, "--denom", help="Denominator expression b_n"),
    sign: str | None = typer.Option(
        None, "--sign", help="positive, alternating, alternating:- or general:++-"
    ),
    start: int | None = typer.Option(None, "--start", help="First index (default 1)"),
    builtin_name: str | None = typer.Option(None, "--builtin", help="Catalog series name"),
    spec_file: Path | None = typer.Option(
        None, "--spec-file", exists=True, dir_okay=False, help="key=value series file"
    ),
    param: list[str] = typer.Option([], "--param", help="Catalog parameter key=value"),
    pair_numer: str | None = typer.Option(None, "--pair-numer", help="Second series numerator"),
    pair_denom: str | None = typer.Option(None, "--pair-denom", help="Second series denominator"),
    prefix: int | None = typer.Option(
        None, "--prefix", min=1, help=f"Checked prefix length (default {DEFAULT_PREFIX})"
    ),
    epsilon: str | None = typer.Option(None, "--epsilon", help="Exponent margin for T7"),
    growth: str | None = typer.Option(None, "--growth", help="Growth function f(n) for T6"),
    degree: int | None = typer.Option(None, "--degree", help="Polynomial degree d for T8"),
    digits: int | None = typer.Option(
        None, "--digits", min=0, help="Also render this many certified digits"
    ),
    envelope: str | None = typer.Option(
        None, "--envelope", help="Ratio envelope NUM/DEN bounding |c_(n+1)/c_n|"
    ),
    theorem: str | None = typer.Option(None, "--theorem", help="Force a checker (T1..T8)"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="text or json"),
) -> None:
    """Classify the sum of a series and print its certificate."""
    cfg = _config(ctx)
    bench = Benchmark("classify")
    with _reported_errors():
        source = _resolve(numer=numer, denom=denom, sign=sign, start=start,
                          builtin_name=builtin_name, spec_file=spec_file, params=param)
        task = source.task
        if (pair_numer is None) != (pair_denom is None):
            raise InvalidParam("--pair-numer and --pair-denom go together", name="pair")
        if pair_numer is not None and pair_denom is not None:
            task = replace(task, pair=SeriesSpec.from_text(pair_numer, pair_denom,
                                                           start=task.spec.start_index))
        if prefix is not None:
            task = replace(task, prefix=prefix)
        if task.prefix < task.spec.start_index:
            raise InvalidParam(
                f"prefix {task.prefix} ends before the start index {task.spec.start_index}",
                name="prefix",
            )
        if epsilon is not None:
            task = replace(task, epsilon=_rational(epsilon, "epsilon"))
        if growth is not None:
            task = replace(task, growth=GrowthFn.parse(growth))
        if degree is not None:
            task = replace(task, degree=degree)
        if envelope is not None:
            task = replace(task, envelope=Envelope.parse(envelope))
        if theorem is not None:
            try:
                task = replace(task, theorem=Theorem(theorem.strip().upper()))
            except ValueError as exc:
                raise InvalidParam(f"unknown theorem {theorem!r}; use T1..T8",
                                   name="theorem") from exc

        with bench.measure("classify"):
            result = Engine(cfg).classify(task)
        cert = result.certificate
        logger.info("%s: %s (%s, %s)", task.name, cert.verdict.value, cert.theorem.value,
                    cert.strength.value)

        notes: list[str] = []
        decimal: str | None = None
        enc: Enclosure | None = None
        if digits is not None:
            with bench.measure("enclose"):
                try:
                    if cert.value is not None:
                        enc = Enclosure.exact(cert.value)
                        decimal = render_decimal(enc, digits)
                    else:
                        decimal, enc = certified_decimal(_value_spec(task, result), digits, cfg,
                                                         envelope=task.envelope)
                except (EvaluationLimit, CertificateError) as exc:
                    logger.warning("No certified decimal for %s: %s", task.name, exc)
                    notes.append(f"decimal unavailable: {exc}")

        report = Report(
            command="classify",
            series=SeriesEcho.from_spec(task.spec),
            name=source.name,
            pair=None if task.pair is None else SeriesEcho.from_spec(task.pair),
            certificate=cert,
            enclosure=enc,
            digits=digits if decimal is not None else None,
            decimal=decimal,
            witnesses=result.witnesses,
            notes=tuple(notes),
        )
        with bench.measure("render"):
            _emit(replace(report, timing=bench.measurements), fmt)
    logger.debug(bench.summary())
    raise typer.Exit(code=report.exit_code)


def _term_rows(spec: SeriesSpec, last: int, cfg: config_module.Config) -> list[TermRow]:
    space = log_space_for(cfg)
    terms = TermCache(spec, space.evaluator)
    rows = []
    for n in range(spec.start_index, last + 1):
        try:
            a, b = terms.parts(n)
        except EvaluationLimit as exc:
            logger.debug("Term %d is past the exact range: %s", n, exc)
            rows.append(TermRow(n, None, None, None, magnitude=str(space.of(spec.denom, n))))
            continue
        # q_n = a_{n+1}·b_n / b_{n+1}
        try:
            a_next, b_next = terms.parts(n + 1)
            q: Fraction | None = Fraction(a_next * b, b_next)
        except EvaluationLimit:
            q = None
        rows.append(TermRow(n, a, b, terms.term(n), q))
    return rows


@app.command("eval")
def eval_command(
    ctx: typer.Context,
    numer: str | None = typer.Option(None, "--numer", help="Numerator expression a_n"),
    denom: str | None = typer.Option(None, "--denom", help="Denominator expression b_n"),
    sign: str | None = typer.Option(None, "--sign", help="Sign mode"),
    start: int | None = typer.Option(None, "--start", help="First index (default 1)"),
    builtin_name: str | None = typer.Option(None, "--builtin", help="Catalog series name"),
    spec_file: Path | None = typer.Option(
        None, "--spec-file", exists=True, dir_okay=False, help="key=value series file"
    ),
    param: list[str] = typer.Option([], "--param", help="Catalog parameter key=value"),
    terms: int | None = typer.Option(None, "--terms", help="Tabulate terms up to this index"),
    digits: int | None = typer.Option(None, "--digits", min=0, help="Certified decimal digits"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="text or json"),
) -> None:
    """Print terms, the exact partial sum and a certified enclosure."""
    cfg = _config(ctx)
    bench = Benchmark("eval")
    with _reported_errors():
        if terms is None and digits is None:
            raise InvalidParam("eval needs --terms or --digits", name="terms")
        source = _resolve(numer=numer, denom=denom, sign=sign, start=start,
                          builtin_name=builtin_name, spec_file=spec_file, params=param)
        spec = _value_spec(source.task)
        rows: list[TermRow] = []
        partial: Fraction | None = None
        notes: list[str] = []
        if terms is not None:
            if terms < spec.start_index:
                raise InvalidParam(
                    f"--terms {terms} is before the start index {spec.start_index}", name="terms"
                )
            with bench.measure("terms"):
                rows = _term_rows(spec, terms, cfg)
            if all(row.c is not None for row in rows):
                partial = sum((row.c for row in rows if row.c is not None), Fraction(0))
            else:
                notes.append("partial sum omitted: some terms exceed the bit budget")
        decimal: str | None = None
        enc: Enclosure | None = None
        if digits is not None:
            with bench.measure("enclose"):
                decimal, enc = certified_decimal(spec, digits, cfg, envelope=source.task.envelope)
        report = Report(
            command="eval",
            series=SeriesEcho.from_spec(spec),
            name=source.name,
            enclosure=enc,
            digits=digits,
            decimal=decimal,
            terms=tuple(rows),
            partial_sum=partial,
            notes=tuple(notes),
        )
        _emit(replace(report, timing=bench.measurements), fmt)
    logger.debug(bench.summary())


_DISCLAIMER = (
    "Illustrative only: floating-point orbits at finite precision say nothing rigorous "
    "about the Julia set."
)


@app.command("demo-cremer")
def demo_cremer(
    ctx: typer.Context,
    degree: int = typer.Option(2, "--degree", help="Polynomial degree d >= 2"),
    iters: int = typer.Option(100, "--iters", min=0, help="Iterations per seed"),
    precision: int | None = typer.Option(
        None, "--precision", help="Working precision in bits (default: the required minimum)"
    ),
    out: Path = typer.Option(Path("-"), "--out", help="CSV output path, - for stdout"),
    seeds: int = typer.Option(1, "--seeds", min=1, help="Seeds spaced around the circle"),
    seed_radius: str = typer.Option("1/1000", "--seed-radius", help="Seed circle radius"),
    theta_zero: bool = typer.Option(False, "--theta-zero", help="Use θ = 0 (debugging)"),
) -> None:
    """Iterate z^d + e^{2πiθ}z near 0 with θ the Cremer series for degree d."""
    cfg = _config(ctx)
    with _reported_errors():
        needed = required_bits(iters)
        bits = needed if precision is None else precision
        if bits < needed:
            raise InvalidParam(
                f"{iters} iterations need at least {needed} bits of precision, got {bits}",
                name="precision",
            )
        radius = _rational(seed_radius, "seed-radius")
        if radius <= 0:
            raise InvalidParam("--seed-radius must be positive", name="seed-radius")
        if theta_zero:
            theta = Fraction(0)
        else:
            theta = rotation_number(builtin("cremer_tower", {"d": degree}).spec, bits, cfg)
        rows = iterate(theta, degree, iters, bits, seeds=seeds, seed_radius=radius)
        typer.echo(_DISCLAIMER, err=True)
        if str(out) == "-":
            count = write_csv(rows, sys.stdout)
        else:
            with out.open("w", newline="", encoding="utf-8") as handle:
                count = write_csv(rows, handle)
            typer.echo(f"Wrote {count} rows to {out}", err=True)
    logger.info("Orbit demo: degree %d, %d bits, %d rows", degree, bits, count)


@app.command("list")
def list_command(
    ctx: typer.Context,
    verify: bool = typer.Option(
        False, "--verify", help="Re-classify every entry and fail on any mismatch"
    ),
    workers: int | None = typer.Option(None, "--workers", min=1, help="Parallel checkers"),
) -> None:
    """Show the built-in catalog with expected verdicts."""
    if not verify:
        for entry in list_builtins():
            params = ", ".join(f"{k}={v}" for k, v in entry.params)
            suffix = f" [{params}]" if params else ""
            control = "  (control)" if entry.control else ""
            typer.echo(f"{entry.name:<18} {entry.expected:<32} {entry.title}{suffix}{control}")
        return

    tasks = [ClassificationTask.from_entry(e) for e in regression_entries()]
    engine = Engine(_config(ctx), workers=workers)
    outcomes = asyncio.run(engine.run_all(tasks))
    for outcome in outcomes:
        task = outcome.task
        expected = " ".join(
            (
                task.expected_verdict.value if task.expected_verdict else "?",
                f"({task.expected_theorem.value if task.expected_theorem else '?'})",
            )
        )
        if outcome.result is None:
            got = f"error: {outcome.error}"
        else:
            cert = outcome.result.certificate
            got = f"{cert.verdict.value} ({cert.theorem.value}, {cert.strength.value})"
        status = "ok  " if outcome.matches else "FAIL"
        typer.echo(f"{status} {task.name:<28} expected {expected:<32} got {got}")
    failures = [o for o in outcomes if not o.matches]
    typer.echo(f"Verified {len(outcomes) - len(failures)}/{len(outcomes)} catalog entries.")
    if engine.stats is not None:
        stats = engine.stats
        typer.echo(
            f"Wall time {stats.total_duration_ms:.0f}ms with {stats.workers} workers: "
            f"speedup {stats.calculate_speedup():.2f}, "
            f"efficiency {stats.calculate_efficiency():.2f}"
        )
    if failures:
        raise typer.Exit(code=1)
