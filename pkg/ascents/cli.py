"""
Command line interface: lukas-ascents.

Subcommands map onto the library operations:

    count      number of paths
    dist       distribution of the r-ascent number
    moments    exact mean and variance
    constants  structural constants tau, rho, c, p
    series     generating function coefficients
    asym       asymptotic count, mean or variance
    compare    exact vs asymptotic table with fitted decay exponent
    sample     uniform samples, Monte Carlo moments, normality check
    tree       path <-> plane tree conversion (reads stdin)

Results go to stdout as JSON (default) or CSV; logs go to stderr.
Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

import logging
import sys
from collections.abc import Callable
from typing import Any

import click
import structlog

from ascents import __version__, asymptotics, bijection, exact, sampler, series
from ascents.errors import InvalidInputError, NumericalError
from ascents.exact import count_ascents
from ascents.kind import PathKind, parse_kind
from ascents.output_formatter import build_envelope, render
from ascents.stepset import StepSet, parse_step_set, to_text
from config.settings import ConfigurationError, settings

logger = structlog.get_logger()

EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL = 3


class AscentsGroup(click.Group):
    """Click group that turns library errors into exit codes."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except (InvalidInputError, ConfigurationError) as e:
            logger.error("cli_command_failed", error=str(e), error_type=type(e).__name__)
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_INVALID_INPUT)
        except NumericalError as e:
            logger.error("cli_command_failed", error=str(e), error_type=type(e).__name__)
            click.echo(f"Numerical error: {e}", err=True)
            ctx.exit(EXIT_NUMERICAL)


def _parse_steps(ctx: click.Context, param: click.Parameter, value: str) -> StepSet:
    try:
        return parse_step_set(value)
    except InvalidInputError as e:
        raise click.BadParameter(str(e)) from e


def _parse_kind(ctx: click.Context, param: click.Parameter, value: str) -> PathKind:
    try:
        return parse_kind(value)
    except InvalidInputError as e:
        raise click.BadParameter(str(e)) from e


def steps_option(f: Callable) -> Callable:
    return click.option(
        "--steps", required=True, callback=_parse_steps, help='Step set, e.g. "-1,0,2".'
    )(f)


def kind_option(f: Callable) -> Callable:
    return click.option(
        "--kind",
        default="excursion",
        show_default=True,
        callback=_parse_kind,
        help="excursion, dispersed or meander.",
    )(f)


def format_option(f: Callable) -> Callable:
    return click.option(
        "--format",
        "output_format",
        type=click.Choice(["json", "csv"]),
        default="json",
        show_default=True,
    )(f)


def digits_option(f: Callable) -> Callable:
    return click.option(
        "--digits",
        type=int,
        default=None,
        help="Significant digits (default: LUKAS_DIGITS or 30).",
    )(f)


def r_option(f: Callable) -> Callable:
    return click.option("-r", type=int, default=1, show_default=True, help="Ascent length.")(f)


def threads_option(f: Callable) -> Callable:
    return click.option(
        "--threads", type=int, default=1, show_default=True, help="Worker threads for the DP."
    )(f)


def _emit(command: str, payload: dict[str, Any], output_format: str, **meta: Any) -> None:
    click.echo(render(build_envelope(command, payload, **meta), output_format), nl=False)
    if output_format == "json":
        click.echo()


def _digits(digits: int | None) -> int:
    return settings().digits if digits is None else digits


@click.group(cls=AscentsGroup)
@click.option(
    "--log-level",
    default="WARNING",
    show_default=True,
    help="DEBUG, INFO, WARNING or ERROR; logs go to stderr.",
)
@click.version_option(version=__version__, prog_name="lukas-ascents")
def cli(log_level: str) -> None:
    """r-ascents in Łukasiewicz paths."""
    settings().log_level = log_level
    settings().validate()
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelNamesMapping()[log_level.upper()]
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
    )


@cli.command()
@steps_option
@kind_option
@click.option("-n", type=int, required=True, help="Path length.")
@format_option
def count(steps: StepSet, kind: PathKind, n: int, output_format: str) -> None:
    """Number of paths of length n."""
    total = exact.count(steps, kind, n)
    payload = {"kind": kind.value, "n": n, "count": total}
    _emit("count", payload, output_format, steps=to_text(steps))


@cli.command()
@steps_option
@kind_option
@click.option("-n", type=int, required=True, help="Path length.")
@r_option
@threads_option
@format_option
def dist(
    steps: StepSet, kind: PathKind, n: int, r: int, threads: int, output_format: str
) -> None:
    """Distribution of the number of r-ascents as (k, count) rows."""
    result = exact.distribution(steps, kind, n, r, threads=threads)
    rows = [{"k": k, "count": c} for k, c in enumerate(result.counts)]
    _emit(
        "dist",
        {"kind": kind.value, "n": n, "r": r, "total": result.total, "rows": rows},
        output_format,
        steps=to_text(steps),
    )


@cli.command()
@steps_option
@kind_option
@click.option("-n", type=int, required=True, help="Path length.")
@r_option
@threads_option
@format_option
def moments(
    steps: StepSet, kind: PathKind, n: int, r: int, threads: int, output_format: str
) -> None:
    """Exact mean and variance of the r-ascent number."""
    result = exact.moments(steps, kind, n, r, threads=threads)
    _emit(
        "moments",
        {
            "kind": kind.value,
            "n": n,
            "r": r,
            "count": result.count,
            "mean": result.mean,
            "variance": result.variance,
        },
        output_format,
        steps=to_text(steps),
    )


@cli.command()
@steps_option
@digits_option
@format_option
def constants(steps: StepSet, digits: int | None, output_format: str) -> None:
    """Structural constants tau, rho, c and the period."""
    digits = _digits(digits)
    k = asymptotics.structural_constants(steps, digits)
    payload = {
        "tau": k.tau,
        "rho": k.rho,
        "c": k.c,
        "p": k.period,
        "drift": k.drift,
        "tau_exact_one": k.tau_exact_one,
    }
    _emit("constants", payload, output_format, steps=to_text(steps), digits=digits)


@cli.command("series")
@steps_option
@kind_option
@r_option
@click.option("--order", type=int, default=10, show_default=True, help="Largest path length.")
@format_option
def series_command(steps: StepSet, kind: PathKind, r: int, order: int, output_format: str) -> None:
    """Coefficients [z^n t^k] of the generating function, one row per (n, k)."""
    if kind is PathKind.EXCURSION:
        # V counts excursions of length n at z^(n+1)
        gf = series.solve_V(steps, r, order + 1)
        slices = [gf.slice(n + 1) for n in range(order + 1)]
    elif kind is PathKind.DISPERSED:
        gf = series.dispersed_series(steps, r, order)
        slices = [gf.slice(n) for n in range(order + 1)]
    else:
        gf = series.meander_series(steps, r, order)
        slices = [gf.slice(n) for n in range(order + 1)]

    rows = [
        {"n": n, "k": k, "coefficient": c}
        for n, row in enumerate(slices)
        for k, c in enumerate(row)
    ]
    _emit(
        "series",
        {"kind": kind.value, "r": r, "order": order, "rows": rows},
        output_format,
        steps=to_text(steps),
    )


quantity_option = click.option(
    "--quantity",
    type=click.Choice(list(asymptotics.QUANTITIES)),
    default="mean",
    show_default=True,
)


@cli.command()
@steps_option
@kind_option
@click.option("-n", type=int, required=True, help="Path length.")
@r_option
@quantity_option
@digits_option
@format_option
def asym(
    steps: StepSet,
    kind: PathKind,
    n: int,
    r: int,
    quantity: str,
    digits: int | None,
    output_format: str,
) -> None:
    """Asymptotic count, mean or variance at length n."""
    digits = _digits(digits)
    value = asymptotics.asymptotic_value(steps, kind, r, quantity, n, digits)
    _emit(
        "asym",
        {"kind": kind.value, "n": n, "r": r, "quantity": quantity, "value": value},
        output_format,
        steps=to_text(steps),
        digits=digits,
    )


@cli.command()
@steps_option
@kind_option
@click.option(
    "-n", "n_list", type=int, multiple=True, required=True, help="Repeat for each length."
)
@r_option
@quantity_option
@digits_option
@threads_option
@format_option
def compare(
    steps: StepSet,
    kind: PathKind,
    n_list: tuple[int, ...],
    r: int,
    quantity: str,
    digits: int | None,
    threads: int,
    output_format: str,
) -> None:
    """Exact vs asymptotic values with the fitted decay exponent of the residual."""
    digits = _digits(digits)
    report = asymptotics.compare_report(steps, kind, r, n_list, quantity, digits, threads)
    rows = [
        {"n": row.n, "exact": row.exact, "asymptotic": row.asymptotic, "residual": row.residual}
        for row in report.rows
    ]
    _emit(
        "compare",
        {
            "kind": kind.value,
            "r": r,
            "quantity": quantity,
            "decay_exponent": report.decay_exponent,
            "rows": rows,
        },
        output_format,
        steps=to_text(steps),
        digits=digits,
    )


@cli.command()
@steps_option
@kind_option
@click.option("-n", type=int, required=True, help="Path length.")
@r_option
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=None, help="Monte Carlo trials instead of one path.")
@click.option("--normality", is_flag=True, help="KS distance to the normal law (meanders).")
@click.option(
    "--centering",
    type=click.Choice(["full", "leading"]),
    default="leading",
    show_default=True,
)
@click.option("--jitter", is_flag=True, help="Smooth the integer counts before the KS test.")
@format_option
def sample(
    steps: StepSet,
    kind: PathKind,
    n: int,
    r: int,
    seed: int,
    trials: int | None,
    normality: bool,
    centering: str,
    jitter: bool,
    output_format: str,
) -> None:
    """Uniform random paths, Monte Carlo moments or a normality check."""
    if normality:
        statistic = sampler.normality_check(
            steps,
            r,
            n,
            trials if trials is not None else 1000,
            seed,
            centering=centering,
            jitter=jitter,
        )
        payload: dict[str, Any] = {"n": n, "r": r, "seed": seed, "ks_statistic": statistic}
    elif trials is not None:
        result = sampler.empirical_moments(steps, kind, n, r, trials, seed)
        payload = {
            "kind": kind.value,
            "n": n,
            "r": r,
            "seed": seed,
            "trials": trials,
            "mean": result.mean,
            "variance": result.variance,
        }
    else:
        path = sampler.sample_path(steps, kind, n, seed)
        payload = {
            "kind": kind.value,
            "n": n,
            "seed": seed,
            "path": ",".join(str(s) for s in path.steps),
            "ascents": count_ascents(path.steps, r, kind is PathKind.DISPERSED),
        }
    _emit("sample", payload, output_format, steps=to_text(steps))


@cli.command()
@steps_option
@r_option
@format_option
def tree(steps: StepSet, r: int, output_format: str) -> None:
    """
    Convert between an excursion and its plane tree.

    Reads stdin: a parenthesised tree such as "((()())())" is converted to
    its path, anything else is read as a comma-separated path.
    """
    text = click.get_text_stream("stdin").read().strip()
    if text.startswith("("):
        plane_tree = bijection.tree_from_text(text)
        path = bijection.tree_to_path(steps, plane_tree).steps
    else:
        try:
            path = tuple(int(part) for part in text.split(",") if part.strip())
        except ValueError as e:
            raise InvalidInputError(
                f"Expected a comma-separated path or a tree, got {text!r}"
            ) from e
        plane_tree = bijection.path_to_tree(steps, path)

    payload = {
        "path": ",".join(str(s) for s in path),
        "tree": bijection.tree_to_text(plane_tree),
        "nodes": plane_tree.node_count,
        "r": r,
        "ascents": bijection.tree_ascent_count(plane_tree, r),
    }
    _emit("tree", payload, output_format, steps=to_text(steps))


def main(argv: list[str] | None = None) -> None:
    """Console script entry point; argv defaults to sys.argv[1:]. Exits with the command's code."""
    cli(args=argv, prog_name="lukas-ascents")
