"""
Command-line interface for the extropy toolkit.

Usage:
    extropy measure --dist uniform:0,1 --kind wcpj --m 1 --method both
    extropy measure-sample --input sample.txt --m 1
    extropy critical-values --n 20,30,40,50 --m 1 --out table1.csv
    extropy test-uniformity --input sample.txt --table table1.csv
    extropy power --alt beta:1.5,1.5 --n 40,50,100,150 --m 1 --out power.csv
    extropy verify-properties [--full]

Exit codes: 0 success, 1 I/O error, 2 parse or usage error,
3 unsupported request (no closed form, or an alternative outside [0, 1]),
4 any other failure (including a failed invariant).
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from pydantic import BaseModel

from extropy.config import get_config
from extropy.distributions import parse_distribution
from extropy.empirical import empirical_wcpj, read_sample_file
from extropy.exceptions import (
    DistributionError,
    ExtropyError,
    SampleError,
    SupportViolationError,
    UnsupportedMeasureError,
)
from extropy.logging import setup_logging
from extropy.measures import MeasureRequest, evaluate
from extropy.models import (
    CriticalValues,
    EvaluationMethod,
    MeasureKind,
    MeasureTag,
    TestConfig,
    TestReport,
)
from extropy.montecarlo import (
    critical_value_table,
    critical_values,
    find_table_row,
    power_table,
    read_table_csv,
    uniformity_test,
    write_power_csv,
    write_table_csv,
)
from extropy.properties import first_failure, run_property_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_FAILURE = 4


def _size_list(text: str) -> list[int]:
    """Parse ``20,30,40`` into sample sizes."""
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from e
    if not sizes:
        raise argparse.ArgumentTypeError("at least one sample size is required")
    if any(n < 2 for n in sizes):
        raise argparse.ArgumentTypeError(f"sample sizes must be at least 2, got {text!r}")
    return sizes


def _emit_json(payload: str, out: str | None) -> None:
    if out:
        Path(out).write_text(payload + "\n")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(payload + "\n")


def _emit_csv(writer: Callable[..., None], rows: Sequence[BaseModel], out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as f:
            writer(rows, f)
        logger.info(f"Wrote {len(rows)} rows to {out}")
    else:
        writer(rows, sys.stdout)


# ============================================================================
# Subcommands
# ============================================================================


def run_measure(args: argparse.Namespace) -> int:
    """Evaluate one measure on one distribution."""
    dist = parse_distribution(args.dist)
    kind = MeasureKind.of(args.kind, m=args.m, n=args.n, p=args.p)
    report = evaluate(MeasureRequest(dist=dist, kind=kind, method=EvaluationMethod(args.method)))
    logger.info(f"Evaluated {report.measure} of {report.dist}")
    _emit_json(report.model_dump_json(indent=2), args.out)
    return EXIT_OK


def run_measure_sample(args: argparse.Namespace) -> int:
    """Empirical weighted measure of a sample file."""
    sample = read_sample_file(args.input)
    payload = {"n": sample.n, "m": args.m, "statistic": empirical_wcpj(sample, args.m)}
    _emit_json(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


def run_tables(args: argparse.Namespace) -> int:
    """Critical-value table, one row per sample size."""
    rows = critical_value_table(args.n, args.m, args.alpha, args.reps, args.seed)
    _emit_csv(write_table_csv, rows, args.out)
    return EXIT_OK


def run_test(args: argparse.Namespace) -> int:
    """Uniformity test of a sample file against tabulated or generated critical values."""
    sample = read_sample_file(args.input)
    if args.table:
        row = find_table_row(read_table_csv(args.table), sample.n, args.m, args.alpha)
        config = TestConfig(n=row.n, m=row.m, alpha=row.alpha, reps=row.reps, master_seed=row.seed)
        cv = CriticalValues(g1=row.g1, g2=row.g2, config=config)
        source = str(args.table)
    else:
        config = TestConfig(
            n=sample.n, m=args.m, alpha=args.alpha, reps=args.reps, master_seed=args.seed
        )
        cv = critical_values(config)
        source = "generated"

    decision = uniformity_test(sample, cv, strict=args.strict)
    report = TestReport(
        n=sample.n,
        m=args.m,
        alpha=args.alpha,
        statistic=decision.statistic,
        g1=cv.g1,
        g2=cv.g2,
        reject=decision.reject,
        support_violation=decision.support_violation,
        table_source=source,
    )
    logger.info(f"Uniformity test on {args.input}: reject={decision.reject}")
    _emit_json(report.model_dump_json(indent=2), args.out)
    return EXIT_OK


def run_power(args: argparse.Namespace) -> int:
    """Power of the uniformity test against an alternative."""
    alt = parse_distribution(args.alt)
    rows = power_table(alt, args.n, args.m, args.alpha, args.reps, args.seed)
    _emit_csv(write_power_csv, rows, args.out)
    return EXIT_OK


def run_verify(args: argparse.Namespace) -> int:
    """Run the invariant suite; non-zero exit on the first failure."""
    results = run_property_suite(fast=not args.full)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name} {result.detail}".rstrip())
    failed = first_failure(results)
    if failed is not None:
        print(f"First failing invariant: {failed}")
        return EXIT_FAILURE
    print(f"All {len(results)} invariants hold")
    return EXIT_OK


# ============================================================================
# Parser
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command; defaults come from configuration."""
    config = get_config()
    defaults = config.montecarlo_defaults()

    parser = argparse.ArgumentParser(
        prog="extropy",
        description="Weighted cumulative past extropy: measures, estimation and uniformity testing",
    )
    parser.add_argument(
        "--log-level",
        default=config.get("system.log_level", "INFO"),
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        type=str.upper,
        help="Logging level for messages on stderr",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def monte_carlo_flags(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--m", type=int, default=defaults.m, help="Weight order")
        sub.add_argument("--alpha", type=float, default=defaults.alpha, help="Significance level")
        sub.add_argument("--reps", type=int, default=defaults.reps, help="Monte Carlo replications")
        sub.add_argument("--seed", type=int, default=defaults.seed, help="Master seed")
        sub.add_argument("--out", help="Output file (stdout when omitted)")

    measure = commands.add_parser("measure", help="Evaluate a measure of a catalog distribution")
    measure.add_argument("--dist", required=True, help="uniform:a,b | powerlaw:l | beta:a,b")
    measure.add_argument(
        "--kind", default=MeasureTag.WCPJ.value, choices=[tag.value for tag in MeasureTag]
    )
    measure.add_argument("--m", type=int, default=defaults.m, help="Weight order")
    measure.add_argument("--n", type=int, default=1, help="Sample size for order-max")
    measure.add_argument("--p", type=float, help="Upper limit for phi-p")
    measure.add_argument(
        "--method",
        default=EvaluationMethod.QUADRATURE.value,
        choices=[method.value for method in EvaluationMethod],
    )
    measure.add_argument("--out", help="Output file (stdout when omitted)")
    measure.set_defaults(handler=run_measure)

    sample = commands.add_parser("measure-sample", help="Empirical measure of a sample file")
    sample.add_argument("--input", required=True, help="Sample file, one value per line")
    sample.add_argument("--m", type=int, default=defaults.m, help="Weight order")
    sample.add_argument("--out", help="Output file (stdout when omitted)")
    sample.set_defaults(handler=run_measure_sample)

    tables = commands.add_parser("critical-values", help="Generate a critical-value table")
    tables.add_argument("--n", type=_size_list, required=True, help="Sample sizes, e.g. 20,30,40,50")
    monte_carlo_flags(tables)
    tables.set_defaults(handler=run_tables)

    test = commands.add_parser("test-uniformity", help="Test a sample file for uniformity on [0, 1]")
    test.add_argument("--input", required=True, help="Sample file, one value per line")
    test.add_argument("--table", help="Critical-value CSV; generated on the fly when omitted")
    test.add_argument(
        "--strict", action="store_true", help="Fail when the sample size differs from the table's n"
    )
    monte_carlo_flags(test)
    test.set_defaults(handler=run_test)

    power = commands.add_parser("power", help="Estimate power against an alternative")
    power.add_argument("--alt", required=True, help="Alternative with support inside [0, 1]")
    power.add_argument("--n", type=_size_list, required=True, help="Sample sizes, e.g. 40,50,100")
    monte_carlo_flags(power)
    power.set_defaults(handler=run_power)

    verify = commands.add_parser("verify-properties", help="Run the invariant suite")
    verify.add_argument(
        "--full", action="store_true", help="Full replication counts for Monte Carlo invariants"
    )
    verify.set_defaults(handler=run_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name (``sys.argv[1:]`` when omitted)

    Returns:
        Process exit code
    """
    try:
        parser = build_parser()
    except OSError as e:
        setup_logging()
        logger.error(f"Cannot read configuration: {e}")
        return EXIT_IO
    except ValueError as e:
        setup_logging()
        logger.error(f"Invalid configuration: {e}")
        return EXIT_PARSE

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code not in (0, None) else EXIT_OK

    setup_logging(args.log_level)

    try:
        return args.handler(args)
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO
    except (UnsupportedMeasureError, SupportViolationError) as e:
        logger.error(f"Unsupported request: {e}")
        return EXIT_UNSUPPORTED
    except (DistributionError, SampleError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_PARSE
    except ExtropyError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE
    except ValueError as e:
        # malformed numbers in input files and rejected model fields
        logger.error(f"Invalid input: {e}")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
