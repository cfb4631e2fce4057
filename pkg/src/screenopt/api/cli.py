"""argparse command-line surface: construct, evaluate, compare and reproduce.

Exit codes:
    0  success
    2  invalid arguments, model or design files
    3  search failure (no usable start)
    4  singular design or no residual degrees of freedom
    5  a reproduction check failed
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError

from screenopt import __version__
from screenopt.adapters.design_catalog import PackagedDesignCatalog
from screenopt.adapters.design_files import DesignFileStore
from screenopt.adapters.report_writer import ReportWriter
from screenopt.core.models import CriterionConfig, CriterionFamily, DomainMode, PowerQuery, SearchConfig
from screenopt.core.services import (
    ConstructionRequest,
    ConstructionService,
    EvaluationService,
    ReproductionService,
    ReproductionTarget,
    SweepOptions,
)
from screenopt.errors import (
    ExchangeError,
    LinearAlgebraError,
    NoResidualDFError,
    ReproductionCheckError,
    ScreenoptError,
    SearchError,
    SingularDesignError,
)
from screenopt.observability import configure_logging, get_logger
from screenopt.settings import LOG_LEVELS, Settings

logger = get_logger(__name__)

EXIT_OK: int = 0
EXIT_INPUT: int = 2
EXIT_SEARCH: int = 3
EXIT_SINGULAR: int = 4
EXIT_REPRODUCTION: int = 5

_DOMAIN_CHOICES: dict[str, DomainMode | None] = {
    "pm1": DomainMode.PM1,
    "pm1_0": DomainMode.PM1_0,
    "continuous": DomainMode.CONTINUOUS,
    "per_factor": DomainMode.PER_FACTOR,
    "auto": None,
}


def exit_code_for(error: ScreenoptError) -> int:
    """Stable exit code for an error family."""
    if isinstance(error, ReproductionCheckError):
        return EXIT_REPRODUCTION
    if isinstance(error, SingularDesignError | NoResidualDFError | LinearAlgebraError):
        return EXIT_SINGULAR
    if isinstance(error, SearchError | ExchangeError):
        return EXIT_SEARCH
    return EXIT_INPUT


def parse_power(text: str) -> PowerQuery:
    """Parse ``j,beta_over_sigma[,alpha]`` with a 1-based effect index."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("power must be 'j,beta_over_sigma[,alpha]'")
    try:
        index = int(parts[0])
        query = PowerQuery(
            effect_index=index - 1,
            beta_over_sigma=float(parts[1]),
            alpha=float(parts[2]) if len(parts) == 3 else 0.05,
        )
    except (ValueError, ValidationError) as exc:
        raise argparse.ArgumentTypeError(f"invalid power query {text!r}") from exc
    return query


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _k_values(text: str) -> tuple[int, ...]:
    return tuple(_positive_int(part) for part in text.split(","))


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="screenopt",
        description="Optimal screening designs for linear factorial models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=sorted(LOG_LEVELS),
        default=settings.log_level,
        help="Log level for standard error",
    )
    parser.add_argument("--log-json", action="store_true", default=settings.log_json, help="Emit JSON log lines")
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", help="Construct an optimal design")
    construct.add_argument("--n", type=_positive_int, required=True, help="Number of runs")
    construct.add_argument("--model", type=Path, required=True, help="Model specification JSON")
    construct.add_argument(
        "--criterion",
        choices=[family.value for family in CriterionFamily],
        required=True,
        help="Criterion to optimise",
    )
    construct.add_argument("--domain", choices=list(_DOMAIN_CHOICES), default="per_factor", help="Search domain")
    construct.add_argument("--starts", type=_positive_int, default=100, help="Random starts")
    construct.add_argument("--seed", type=int, default=0, help="Seed of the first start")
    construct.add_argument("--w", type=float, default=settings.nuisance_weight, help="Nuisance weight")
    construct.add_argument("--out", type=Path, default=None, help="Design CSV to write")
    construct.add_argument("--report", type=Path, default=None, help="Report JSON to write (default: stdout)")
    construct.add_argument("--dual", action="store_true", help="Alternate discrete and continuous batches")
    construct.add_argument(
        "--batch", type=_positive_int, default=settings.default_batch, help="Starts per protocol batch"
    )
    construct.add_argument(
        "--threads", type=_positive_int, default=None, help="Parallel starts, capped by SCREENOPT_THREADS"
    )
    construct.add_argument("--max-passes", type=_positive_int, default=settings.max_passes, help="Pass cap per start")
    construct.add_argument("--equal-tol", type=float, default=settings.equal_tol, help="Relative tie tolerance")

    evaluate = commands.add_parser("evaluate", help="Evaluate a design file")
    evaluate.add_argument("--design", type=Path, required=True, help="Design CSV")
    evaluate.add_argument("--model", type=Path, required=True, help="Model specification JSON")
    evaluate.add_argument("--submodel", action="store_true", help="Report primary-term variances under the primary fit")
    evaluate.add_argument("--power", type=parse_power, default=None, help="'j,beta_over_sigma[,alpha]' (j 1-based)")
    evaluate.add_argument(
        "--df", type=float, default=None, help="Override residual df for power ('inf' for the z-test)"
    )
    evaluate.add_argument("--report", type=Path, default=None, help="Report JSON to write (default: stdout)")

    compare = commands.add_parser("compare", help="Compare design files by sorted variances")
    compare.add_argument("--design", type=Path, action="append", required=True, help="Design CSV (repeat)")
    compare.add_argument("--model", type=Path, required=True, help="Model specification JSON")
    compare.add_argument("--out", type=Path, default=None, help="Variance CSV to write (default: stdout)")
    compare.add_argument("--report", type=Path, default=None, help="Summary JSON to write")

    reproduce = commands.add_parser("reproduce", help="Evaluate the bundled reference designs")
    reproduce.add_argument("--target", choices=[target.value for target in ReproductionTarget], required=True)
    reproduce.add_argument("--check", action="store_true", help="Exit 5 if any check fails")
    reproduce.add_argument("--out", type=Path, default=None, help="Report JSON to write (default: stdout)")
    reproduce.add_argument("--k-values", type=_k_values, default=(3, 4), help="Sweep: comma-separated factor counts")
    reproduce.add_argument("--n-extra", type=_positive_int, default=3, help="Sweep: run sizes k+1 .. k+n_extra")
    reproduce.add_argument("--batch", type=_positive_int, default=20, help="Sweep: starts per mode")
    reproduce.add_argument("--seed", type=int, default=0, help="Sweep: seed")
    return parser


def _threads(requested: int | None, settings: Settings) -> int:
    return min(requested or settings.threads, settings.threads)


def _cmd_construct(args: argparse.Namespace, settings: Settings, store: DesignFileStore, writer: ReportWriter) -> int:
    if args.dual and args.domain not in ("per_factor", "auto"):
        raise argparse.ArgumentTypeError("--dual chooses its own domains; drop --domain")
    domain = _DOMAIN_CHOICES[args.domain]
    search = SearchConfig(
        starts=args.starts,
        seed=args.seed,
        domain_mode=domain or DomainMode.PER_FACTOR,
        max_passes=args.max_passes,
        improve_tol=settings.improve_tol,
        equal_tol=args.equal_tol,
        parallel_starts=_threads(args.threads, settings),
        start_attempts=settings.start_attempts,
    )
    request = ConstructionRequest(
        model_path=args.model,
        n=args.n,
        criterion=CriterionConfig(family=CriterionFamily(args.criterion), w=args.w),
        search=search,
        auto_domain=domain is None,
        dual=args.dual,
        batch=args.batch,
        start_cap=settings.protocol_start_cap,
        design_out=args.out,
        report_out=args.report,
    )
    ConstructionService(store, writer).run(request)
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace, store: DesignFileStore, writer: ReportWriter) -> int:
    power = args.power
    if power is not None and args.df is not None:
        power = power.model_copy(update={"df": args.df})
    EvaluationService(store, writer).evaluate(
        args.design,
        args.model,
        submodel=args.submodel,
        power=power,
        report_out=args.report,
    )
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace, store: DesignFileStore, writer: ReportWriter) -> int:
    if len(args.design) < 2:
        raise argparse.ArgumentTypeError("compare needs at least two --design files")
    EvaluationService(store, writer).compare(args.design, args.model, table_out=args.out, report_out=args.report)
    return EXIT_OK


def _cmd_reproduce(args: argparse.Namespace, settings: Settings, writer: ReportWriter) -> int:
    options = SweepOptions(
        k_values=args.k_values,
        n_extra=args.n_extra,
        batch=args.batch,
        seed=args.seed,
        parallel_starts=settings.threads,
    )
    service = ReproductionService(PackagedDesignCatalog(), options)
    report = service.run(ReproductionTarget(args.target))
    writer.write_report(report, args.out)
    if args.check:
        service.check(report)
    return EXIT_OK


def run(argv: list[str] | None, settings: Settings, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Parse arguments, dispatch one subcommand and map failures to exit codes.

    Args:
        argv: Arguments without the program name; sys.argv[1:] when None.
        settings: Runtime settings supplying defaults and caps.
        stdout: Stream for reports.
        stderr: Stream for error messages.

    Returns:
        Process exit code.
    """
    err = stderr if stderr is not None else sys.stderr
    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT
    configure_logging(args.log_level, args.log_json)

    store = DesignFileStore()
    writer = ReportWriter(stdout=stdout)
    try:
        if args.command == "construct":
            return _cmd_construct(args, settings, store, writer)
        if args.command == "evaluate":
            return _cmd_evaluate(args, store, writer)
        if args.command == "compare":
            return _cmd_compare(args, store, writer)
        return _cmd_reproduce(args, settings, writer)
    except argparse.ArgumentTypeError as exc:
        err.write(f"screenopt: error: {exc}\n")
        return EXIT_INPUT
    except ValidationError as exc:
        err.write(f"screenopt: error: {exc.errors()[0]['msg']}\n")
        return EXIT_INPUT
    except ScreenoptError as exc:
        code = exit_code_for(exc)
        logger.info("Command failed", command=args.command, error_code=exc.error_code.value, exit_code=code)
        err.write(f"screenopt: {exc.error_code.value}: {exc.message}\n")
        return code
