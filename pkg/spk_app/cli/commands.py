"""
Command Line Controller Module

This module defines the `spk` subcommands. It handles argument parsing,
delegates the work to the service layer and formats the result as canonical
text or as JSON records stamped with the schema version.

Exit codes: 0 on success, 1 when a requested check fails, 2 for usage
problems (click's own code) and 3 when an internal invariant breaks or an
unexpected error escapes, with the diagnostic on stderr.
"""

import functools
import json
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Optional

import click

from spk_app import SpkApp, create_app
from spk_app.cli import cli
from spk_app.config import SCHEMA_VERSION, Config
from spk_app.errors import (
    GrammarError,
    IndexRangeError,
    InvalidObjectError,
    InvariantError,
    NotRealRootedError,
    PolynomialError,
    ResourceGuardError,
    RouteDisagreementError,
    UnknownNameError,
)
from spk_app.logger.logger import logger
from spk_app.model.codec import parse, serialize
from spk_app.model.polynomial import Polynomial, substitute, var_name
from spk_app.model.records import RootReport, VerifyReport, ZeroTheoremRow
from spk_app.service.analysis import isolate_roots, theorem_zeros_report
from spk_app.service.catalog import FAMILIES, GAMMA_SUBSTITUTIONS, ROUTE_ENUMERATION, ROUTE_FAST, ROUTE_GRAMMAR
from spk_app.service.enumeration import Family, count_family, enumerate_family, parse_family
from spk_app.service.grammar import BUILTIN_GRAMMARS, builtin, derive_iter, derive_powers
from spk_app.service.stats import object_stats

EXIT_CHECK_FAILED = 1
EXIT_INVARIANT = 3

USAGE_ERRORS = (UnknownNameError, PolynomialError, GrammarError, InvalidObjectError, IndexRangeError)
INVARIANT_ERRORS = (InvariantError, ResourceGuardError, NotRealRootedError)


def get_app(cache_dir: Optional[Path], jobs: Optional[int]) -> SpkApp:
    """
    Factory function to create the application with its dependencies.

    The configuration class comes from the click context object when one was
    supplied (tests pass their own), otherwise the default Config is used.
    """
    # Explicit dependency injection for clarity
    ctx = click.get_current_context(silent=True)
    config_class = ctx.obj if ctx is not None and ctx.obj is not None else Config
    return create_app(config_class, cache_dir=cache_dir, jobs=jobs)


def handles_errors(func: Callable) -> Callable:
    """Maps application errors onto the documented exit codes."""
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except USAGE_ERRORS as e:
            raise click.UsageError(str(e)) from e
        except INVARIANT_ERRORS as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            if isinstance(e, RouteDisagreementError) and e.counterexample:
                click.echo(json.dumps(e.counterexample, sort_keys=True), err=True)
            click.get_current_context().exit(EXIT_INVARIANT)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except Exception as e:
            # exit 1 is reserved for failing checks
            logger.exception(f"Unexpected {type(e).__name__}: {e}")
            click.echo(f"Error: unexpected {type(e).__name__}: {e}", err=True)
            click.get_current_context().exit(EXIT_INVARIANT)
    return wrapper


def shared_options(func: Callable) -> Callable:
    """Adds --format, --jobs and --cache-dir to a command."""
    func = click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), envvar="SPK_CACHE_DIR",
                        default=None, help="Polynomial cache directory (env SPK_CACHE_DIR).")(func)
    func = click.option("--jobs", type=click.IntRange(min=1), default=None,
                        help="Worker processes (env SPK_JOBS, default 1).")(func)
    func = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True,
                        help="Output format.")(func)
    return func


def emit_json(payload: Dict[str, Any]) -> None:
    click.echo(json.dumps({"schema_version": SCHEMA_VERSION, **payload}))


def parse_var_map(text: str) -> Dict[str, Polynomial]:
    """
    Parses `k=v,k2=v2` where each value is polynomial text.

    Raises:
        click.BadParameter: For an item without '='.
    """
    mapping: Dict[str, Polynomial] = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise click.BadParameter(f"expected k=v, got {item!r}", param_hint="--var-map")
        mapping[var_name(key.strip())] = parse(value)
    return mapping


def _emit_objects(app: SpkApp, family: Family, n: int, with_stats: bool, fmt: str) -> None:
    for obj in enumerate_family(family, n, guard=app.config.RESOURCE_GUARD):
        record = object_stats(family, obj) if with_stats else None
        if fmt == "json":
            payload: Dict[str, Any] = {"family": family.value, "n": n, "object": obj.to_dict()}
            if record is not None:
                payload["stats"] = record.to_dict()
            emit_json(payload)
        elif record is not None:
            stats_text = " ".join(f"{name}={value}" for name, value in record.to_dict().items())
            click.echo(f"{obj}\t{stats_text}")
        else:
            click.echo(str(obj))


@cli.command("enumerate")
@click.option("--family", required=True, help=f"One of {', '.join(f.value for f in Family)}.")
@click.option("--n", "n", type=int, required=True, help="Size parameter.")
@click.option("--emit", type=click.Choice(["objects", "stats", "count"]), default="objects", show_default=True)
@shared_options
@handles_errors
def enumerate_command(family: str, n: int, emit: str, fmt: str, jobs: Optional[int], cache_dir: Optional[Path]) -> None:
    """
    Lists the objects of a family, their statistics or their number.
    """
    app = get_app(cache_dir, jobs)
    family_enum = parse_family(family)
    if n < 1:
        raise IndexRangeError(f"Family {family_enum.value} needs n >= 1, got {n}")
    if emit == "count":
        count = count_family(family_enum, n)
        if fmt == "json":
            emit_json({"family": family_enum.value, "n": n, "count": count})
        else:
            click.echo(str(count))
        return
    _emit_objects(app, family_enum, n, emit == "stats", fmt)


@cli.command("stats")
@click.option("--family", required=True, help=f"One of {', '.join(f.value for f in Family)}.")
@click.option("--n", "n", type=int, required=True, help="Size parameter.")
@shared_options
@handles_errors
def stats_command(family: str, n: int, fmt: str, jobs: Optional[int], cache_dir: Optional[Path]) -> None:
    """
    Prints every object of a family with its statistics record.
    """
    app = get_app(cache_dir, jobs)
    _emit_objects(app, parse_family(family), n, True, fmt)


@cli.command("poly")
@click.option("--family", required=True, help=f"One of {', '.join(FAMILIES)}.")
@click.option("--n", "n", type=int, required=True, help="Index.")
@click.option("--var-map", default=None, metavar="k=v,...", help="Substitutions applied to the result.")
@click.option("--route", type=click.Choice([ROUTE_FAST, ROUTE_ENUMERATION, ROUTE_GRAMMAR]), default=ROUTE_FAST,
              show_default=True)
@shared_options
@handles_errors
def poly_command(family: str, n: int, var_map: Optional[str], route: str, fmt: str, jobs: Optional[int],
                 cache_dir: Optional[Path]) -> None:
    """
    Computes a named family polynomial in canonical text.
    """
    app = get_app(cache_dir, jobs)
    polynomial = app.catalog.family_poly(family, n, route)
    if var_map:
        polynomial = substitute(polynomial, parse_var_map(var_map))
    if fmt == "json":
        emit_json({"family": family, "n": n, "route": route, "polynomial": serialize(polynomial)})
    else:
        click.echo(serialize(polynomial))


@cli.command("gamma")
@click.option("--n", "n", type=int, required=True, help="Index.")
@click.option("--substitute", "substitution", default=None,
              help=f"Evaluate the expansion under one of {', '.join(GAMMA_SUBSTITUTIONS)}.")
@shared_options
@handles_errors
def gamma_command(n: int, substitution: Optional[str], fmt: str, jobs: Optional[int],
                  cache_dir: Optional[Path]) -> None:
    """
    Prints the coefficients gamma(n,i,j,k), or their image under a substitution.
    """
    app = get_app(cache_dir, jobs)
    if substitution:
        polynomial = app.catalog.gamma_substitute(n, substitution)
        if fmt == "json":
            emit_json({"n": n, "substitution": substitution, "polynomial": serialize(polynomial)})
        else:
            click.echo(serialize(polynomial))
        return
    table = app.catalog.gamma_table(n)
    if fmt == "json":
        emit_json(table.to_dict())
        return
    for (i, j, k), value in table.rows():
        click.echo(f"({i},{j},{k}):{value}")


@cli.command("grammar")
@click.option("--name", required=True, help=f"One of {', '.join(BUILTIN_GRAMMARS)}.")
@click.option("--power", type=click.IntRange(min=0), required=True, help="Number of derivative steps.")
@click.option("--seed-word", default=None, metavar="POLY", help="Starting polynomial (default: the grammar's seed).")
@click.option("--steps", is_flag=True, help="Print every power D^0 .. D^power, one per line.")
@shared_options
@handles_errors
def grammar_command(name: str, power: int, seed_word: Optional[str], steps: bool, fmt: str, jobs: Optional[int],
                    cache_dir: Optional[Path]) -> None:
    """
    Applies a built-in grammar's formal derivative repeatedly.
    """
    grammar = builtin(name)
    seed = parse(seed_word) if seed_word is not None else grammar.seed
    if steps:
        powers = derive_powers(grammar, seed, power)
        if fmt == "json":
            emit_json({"grammar": name, "power": power, "seed": serialize(seed),
                       "steps": [serialize(p) for p in powers]})
        else:
            for k, p in enumerate(powers):
                click.echo(f"{k}\t{serialize(p)}")
        return
    result = derive_iter(grammar, seed, power)
    if fmt == "json":
        emit_json({"grammar": name, "power": power, "seed": serialize(seed), "polynomial": serialize(result)})
    else:
        click.echo(serialize(result))


def _verify_text(report: VerifyReport) -> Iterable[str]:
    for row in report.rows:
        line = f"{row.check_id:<20} {row.n:>3}  {row.status.value.upper()}"
        if row.detail:
            line += f"  {row.detail}"
        if row.counterexample:
            line += f"  counterexample={json.dumps(row.counterexample, sort_keys=True)}"
        yield line
    failed = len(report.failures)
    yield f"{len(report.rows)} tasks, {len(report.rows) - failed} passed, {failed} failed"


@cli.command("verify")
@click.option("--check", "check_ids", multiple=True, metavar="ID", help="Check to run; repeatable.")
@click.option("--all", "run_all", is_flag=True, help="Run every registered check.")
@click.option("--n-max", type=click.IntRange(min=1), default=None, help="Absolute upper bound on n.")
@click.option("--deep", is_flag=True, help="Raise each default range by one.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Also write the report, with timings, as JSON.")
@shared_options
@handles_errors
def verify_command(check_ids: tuple, run_all: bool, n_max: Optional[int], deep: bool, out: Optional[Path], fmt: str,
                   jobs: Optional[int], cache_dir: Optional[Path]) -> None:
    """
    Runs verification checks; exits 1 if any of them fails.
    """
    if run_all == bool(check_ids):
        raise click.UsageError("Pass either --all or at least one --check ID")
    app = get_app(cache_dir, jobs)
    report = app.verifier.run(list(check_ids) or None, n_max=n_max, deep=deep, jobs=app.config.JOBS)

    if out is not None:
        out.write_text(json.dumps({"schema_version": SCHEMA_VERSION, **report.to_dict(with_timing=True)}, indent=2))
        logger.info(f"Wrote verify report to {out}")
    if fmt == "json":
        emit_json(report.to_dict())
    else:
        for line in _verify_text(report):
            click.echo(line)
    if not report.passed:
        click.get_current_context().exit(EXIT_CHECK_FAILED)


def _root_text(report: RootReport) -> Iterable[str]:
    yield f"{report.label}: degree {report.degree}, {report.real_root_count} real roots"
    for root in report.roots:
        where = f"{root.lo}" if root.exact else f"({root.lo}, {root.hi})"
        yield f"  {where} multiplicity {root.multiplicity}"
    for window, count in report.window_counts.items():
        yield f"  {window}: {count}"


def _theorem_text(rows: Iterable[ZeroTheoremRow]) -> Iterable[str]:
    for row in rows:
        failing = [name for name, ok in row.checks.items() if not ok]
        line = f"n={row.n:<3} {'PASS' if row.passed else 'FAIL'}"
        if failing:
            line += f"  failing: {', '.join(failing)}"
        yield line


@cli.command("zeros")
@click.option("--family", type=click.Choice(["f", "xi", "zeta"]), default=None)
@click.option("--n", "n", type=int, default=None, help="Index of the family member.")
@click.option("--theorem", is_flag=True, help="Run the structural zero checks for 1 <= n <= n-max.")
@click.option("--n-max", type=click.IntRange(min=1), default=12, show_default=True)
@shared_options
@handles_errors
def zeros_command(family: Optional[str], n: Optional[int], theorem: bool, n_max: int, fmt: str,
                  jobs: Optional[int], cache_dir: Optional[Path]) -> None:
    """
    Locates real roots of f_n, xi_n or zeta_n, or runs the zero report.
    """
    app = get_app(cache_dir, jobs)
    if theorem:
        rows = theorem_zeros_report(n_max)
        passed = all(row.passed for row in rows)
        if fmt == "json":
            emit_json({"n_max": n_max, "passed": passed, "rows": [row.to_dict() for row in rows]})
        else:
            for line in _theorem_text(rows):
                click.echo(line)
        if not passed:
            click.get_current_context().exit(EXIT_CHECK_FAILED)
        return

    if family is None or n is None:
        raise click.UsageError("Pass --family and --n, or --theorem")
    report = isolate_roots(app.catalog.family_poly(family, n), label=f"{family}_{n}")
    if fmt == "json":
        emit_json(report.to_dict())
    else:
        for line in _root_text(report):
            click.echo(line)


@cli.command("cache")
@click.option("--clear", is_flag=True, help="Delete every cached polynomial.")
@shared_options
@handles_errors
def cache_command(clear: bool, fmt: str, jobs: Optional[int], cache_dir: Optional[Path]) -> None:
    """
    Lists or clears the polynomial cache.
    """
    app = get_app(cache_dir, jobs)
    if app.repository is None:
        raise click.UsageError("No cache directory configured; pass --cache-dir or set SPK_CACHE_DIR")
    if clear:
        app.repository.clear()
    entries = app.repository.list_entries()
    if fmt == "json":
        emit_json({"cache_dir": str(app.repository.cache_dir), "entries": [[f, n] for f, n in entries]})
    else:
        for family, n in entries:
            click.echo(f"{family} {n}")
