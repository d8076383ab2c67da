"""Command-line launcher for the Riemann zeros toolkit.

Solves zeros, keeps them in a resumable on-disk cache and turns them into
the data behind pair-correlation and prime-counting comparisons. Data rows
go to stdout in the chosen format; logging goes to stderr.

Exit codes: 0 on success, 1 on a numerical or cache failure, 2 on a usage
error.
"""

import argparse
import logging
import math
import sys
from decimal import Decimal
from pathlib import Path
from typing import Dict, List, Optional

# Add parent directory to path to import riemann_zeros
sys.path.insert(0, str(Path(__file__).parent))

from riemann_zeros.config import load_run_config
from riemann_zeros.data_loader import OrdinateLoader
from riemann_zeros.errors import MissingZerosError, RiemannZerosError
from riemann_zeros.models import OutputFormat, RunConfig, ZeroMethod, ZeroRecord
from riemann_zeros.precision import PrecisionContext
from riemann_zeros.prime_reconstruct import reconstruct_figure, series_for
from riemann_zeros.report import ReportWriter
from riemann_zeros.special_functions import build_arithmetic_tables
from riemann_zeros.statistics import correlation_curve, fit_summary, normalized_spacings
from riemann_zeros.store import ZeroCacheFile
from riemann_zeros.utils import format_ranges
from riemann_zeros.zero_solver import (
    CountingVariant,
    asymptotic_lhs,
    count_zeros_smooth,
    exact_lhs,
    gram_point,
    seed_record,
    solve_range,
    solve_zero,
)
from riemann_zeros.zeta_engine import cos_sin_diagnostic, counting_trace


LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)

METHODS = {
    "seed": ZeroMethod.LAMBERT_SEED,
    "asymptotic": ZeroMethod.ASYMPTOTIC,
    "exact": ZeroMethod.EXACT,
}


class RiemannZerosLauncher:
    """Runs the subcommands against one run configuration.

    Attributes:
        config: Validated run configuration
        ctx: Working precision for every evaluation of the run
        writer: Output writer (stdout unless a stream is given)
    """

    def __init__(self, config: RunConfig, stream=None):
        """Initialize the launcher.

        Args:
            config: Run configuration (digits, cache, output format, jobs)
            stream: Output stream for data rows (defaults to stdout)
        """
        self.config = config
        self.ctx = PrecisionContext(config.digits)
        self.writer = ReportWriter(config.output_format, stream=stream)
        self.loader = OrdinateLoader()
        logger.info(f"Launcher initialized with {self.ctx} and cache at {config.cache_path}")

    def cache_for(self, method: ZeroMethod) -> ZeroCacheFile:
        return ZeroCacheFile(self.config.cache_path, method, self.config.digits)

    def _cached_zeros(self, n_lo: int, n_hi: int, method: ZeroMethod, jobs: int = 1) -> Dict[str, object]:
        """Load [n_lo, n_hi] from the cache, solving and caching what is missing.

        Returns:
            Summary with the records, how many were solved and the failures
        """
        cache = self.cache_for(method)
        missing = cache.missing(n_lo, n_hi)
        known = {record.n: record for record in cache.records(max(1, n_lo - 1), n_hi + 1)}
        solved: List[ZeroRecord] = []
        failures: Dict[int, str] = {}
        if missing:
            logger.info(f"Solving {len(missing)} zeros ({format_ranges(missing)}) with {method.value}")
            solved, failures = solve_range(
                missing, method, self.config.solver_config(), self.ctx, jobs=jobs, known=known
            )
            cache.merge(solved)
        else:
            logger.info(f"All zeros {n_lo}-{n_hi} found in {cache.path}")

        by_index = {record.n: record for record in cache.records(n_lo, n_hi)}
        return {
            "records": [by_index[n] for n in sorted(by_index)],
            "solved": solved,
            "failures": failures,
        }

    def _zeros(self, n_lo: int, n_hi: int, method: ZeroMethod,
               ordinates: Optional[Path] = None, offset: int = 0,
               solve: bool = True) -> List[ZeroRecord]:
        """Zeros n_lo..n_hi from an imported table, Lambert seeds or the cache."""
        if ordinates is not None:
            records = [r for r in self.loader.load(ordinates, offset) if n_lo <= r.n <= n_hi]
        elif method == ZeroMethod.LAMBERT_SEED:
            records = [seed_record(n, self.ctx) for n in range(n_lo, n_hi + 1)]
        elif solve:
            result = self._cached_zeros(n_lo, n_hi, method, jobs=self.config.jobs)
            if result["failures"]:
                failed = sorted(result["failures"])
                raise MissingZerosError(f"could not solve zeros {format_ranges(failed)}", missing=failed)
            records = result["records"]
        else:
            records = self.cache_for(method).records(n_lo, n_hi)

        have = {record.n for record in records}
        missing = [n for n in range(n_lo, n_hi + 1) if n not in have]
        if missing:
            raise MissingZerosError(f"missing zeros {format_ranges(missing)}", missing=missing)
        return records

    def cmd_zero(self, n: int, method: ZeroMethod) -> None:
        """Print one zero as the cache stores it, solving and caching it first if needed."""
        if method == ZeroMethod.LAMBERT_SEED:
            self.writer.write_zeros([seed_record(n, self.ctx)])
            return
        cache = self.cache_for(method)
        record = cache.get(n)
        if record is None:
            cache.merge([solve_zero(n, method, self.config.solver_config(), self.ctx)])
            record = cache.get(n)
        else:
            logger.info(f"Zero {n} served from {cache.path}")
        self.writer.write_zeros([record])

    def cmd_batch(self, n_lo: int, n_hi: int, method: ZeroMethod, jobs: int) -> int:
        """Fill the cache for [n_lo, n_hi] and print a one-row summary.

        Returns:
            Exit code: 1 if any zero failed, else 0
        """
        result = self._cached_zeros(n_lo, n_hi, method, jobs=jobs)
        solved = result["solved"]
        failures = result["failures"]
        residuals = [r.residual for r in solved if r.residual is not None]
        self.writer.write_rows(
            [(
                n_lo,
                n_hi,
                method.value,
                len(solved),
                len(result["records"]) - len(solved),
                len(failures),
                min(residuals) if residuals else None,
                max(residuals) if residuals else None,
            )],
            ["n_lo", "n_hi", "method", "solved", "cached", "failed", "min_residual", "max_residual"],
        )
        if failures:
            for n, message in sorted(failures.items()):
                logger.error(f"Zero {n}: {message}")
            logger.error(f"Failed zeros: {format_ranges(failures)}")
            return 1
        return 0

    def cmd_gue(self, M: int, N: int, step: float, x_max: float, method: ZeroMethod,
                ordinates: Optional[Path] = None, offset: int = 0) -> None:
        """Pair-correlation bins of the normalized spacings delta_M..delta_N."""
        zeros = self._zeros(M, N + 1, method, ordinates, offset, solve=False)
        spacings = normalized_spacings(zeros, M, N)
        bins = correlation_curve(spacings, step=step, x_max=x_max)
        summary = fit_summary(bins)
        logger.info(
            f"{len(bins)} bins from {N - M + 1} spacings: rms deviation {summary['rms']:.4f}, "
            f"max {summary['max_deviation']:.4f}"
        )
        self.writer.write_bins(bins)

    def cmd_prime(self, x_lo: float, x_hi: float, zero_count: int, what: str, samples: int,
                  method: ZeroMethod, ordinates: Optional[Path] = None, offset: int = 0) -> None:
        """Explicit-formula reconstruction of pi, psi or J next to its oracle."""
        zeros = self._zeros(1, zero_count, method, ordinates, offset) if zero_count else []
        tables = build_arithmetic_tables(int(math.ceil(x_hi)) + 1)
        rec = reconstruct_figure(x_lo, x_hi, samples, zeros, self.ctx, tables)
        self.writer.write_rows(series_for(what, rec), ["x", "reconstructed", "oracle"])

    def cmd_audit(self, n_lo: int, n_hi: int, delta: float, method: ZeroMethod,
                  decimals: Optional[int] = None, ordinates: Optional[Path] = None,
                  offset: int = 0) -> None:
        """|asymptotic_lhs| and |exact_lhs| of stored zeros at a fixed delta."""
        zeros = self._zeros(n_lo, n_hi, method, ordinates, offset)
        decade = math.ceil(-math.log10(delta))
        work = self.ctx.at_least(2 * decade + 2)
        rows = []
        for record in zeros:
            y_text = record.y
            if decimals is not None:
                y_text = str(Decimal(y_text).quantize(Decimal(1).scaleb(-decimals)))
            y = work.mpf(y_text)
            rows.append((
                record.n,
                y_text,
                float(abs(asymptotic_lhs(y, record.n, delta, work))),
                float(abs(exact_lhs(y, record.n, delta, work))),
            ))
        self.writer.write_rows(rows, ["n", "y", "asymptotic_residual", "exact_residual"])

    def cmd_gram(self, n: int) -> None:
        g = gram_point(n, self.ctx)
        self.writer.write_rows([(n, self.ctx.to_string(g))], ["n", "gram_point"])

    def cmd_count(self, T: float, variant: CountingVariant) -> None:
        value = count_zeros_smooth(T, variant, self.ctx)
        self.writer.write_rows([(T, variant.value, float(value))], ["T", "variant", "count"])

    def cmd_diagnose(self, y_lo: float, y_hi: float, delta: float, samples: int) -> None:
        rows = cos_sin_diagnostic(y_lo, y_hi, delta, samples, self.ctx)
        self.writer.write_rows(rows, ["y", "cos_theta", "sin_theta"])

    def cmd_trace(self, n: int, y_lo: float, y_hi: float, delta: float, samples: int) -> None:
        decade = math.ceil(-math.log10(delta))
        work = self.ctx.at_least(2 * decade + 2)
        rows = counting_trace(n, y_lo, y_hi, delta, samples, work)
        self.writer.write_rows(rows, ["y", "smooth", "arg_term", "total"])


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0 (delta may not be exactly zero), got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, help="Working decimal digits (>= 15, default 30)")
    common.add_argument("--cache-dir", type=Path, help="Directory of the zero cache")
    common.add_argument("--config", type=Path, help="TOML file with run settings")
    common.add_argument("--format", choices=[f.value for f in OutputFormat],
                        help="Output format (default: csv)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", default=None, help="Log at DEBUG level")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Log warnings and errors only")

    imported = argparse.ArgumentParser(add_help=False)
    imported.add_argument("--ordinates", type=Path, help="Import zeros from a file of ordinates")
    imported.add_argument("--offset", type=_non_negative_int, default=0,
                          help="Number of zeros below the first imported ordinate")

    method = argparse.ArgumentParser(add_help=False)
    method.add_argument("--method", choices=list(METHODS), default="asymptotic",
                        help="Solver producing the zeros (default: asymptotic)")

    parser = argparse.ArgumentParser(
        prog="riemann-zeros",
        description="High-precision nontrivial Riemann zeros and what they say about primes"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zero", parents=[common, method], help="Solve or estimate the n-th zero")
    p.add_argument("n", type=_positive_int)

    p = sub.add_parser("batch", parents=[common, method], help="Fill the cache for a range of zeros")
    p.add_argument("n_lo", type=_positive_int, nargs="?")
    p.add_argument("n_hi", type=_positive_int, nargs="?")
    p.add_argument("--jobs", type=_positive_int, help="Worker processes (default: 1)")

    p = sub.add_parser("gue", parents=[common, method, imported], help="Pair correlation against GUE")
    p.add_argument("M", type=_positive_int)
    p.add_argument("N", type=_positive_int)
    p.add_argument("--step", type=_positive_float, default=0.05, help="Bin width (default: 0.05)")
    p.add_argument("--x-max", type=_positive_float, default=3.0, help="Upper end of the bins (default: 3)")

    p = sub.add_parser("prime", parents=[common, method, imported],
                       help="Reconstruct pi, psi or J from zeros")
    p.add_argument("x_lo", type=float)
    p.add_argument("x_hi", type=float)
    p.add_argument("--zeros", type=_non_negative_int, default=50, help="Number of zeros K (default: 50)")
    p.add_argument("--what", choices=["pi", "psi", "j"], default="pi")
    p.add_argument("--samples", type=_positive_int, default=500, help="Grid points (default: 500)")

    p = sub.add_parser("audit", parents=[common, method, imported],
                       help="Residuals of stored zeros in both equations")
    p.add_argument("n_lo", type=_positive_int)
    p.add_argument("n_hi", type=_positive_int)
    p.add_argument("--delta", type=_positive_float, default=1e-9, help="Shift off the line (default: 1e-9)")
    p.add_argument("--decimals", type=_non_negative_int, help="Round the zeros to this many decimals first")

    p = sub.add_parser("gram", parents=[common], help="Gram point g_n")
    p.add_argument("n", type=_non_negative_int)

    p = sub.add_parser("count", parents=[common], help="Number of zeros up to height T")
    p.add_argument("T", type=_positive_float)
    p.add_argument("--variant", choices=[v.value for v in CountingVariant],
                   default=CountingVariant.BACKLUND_EXACT.value)

    p = sub.add_parser("diagnose", parents=[common], help="cos and sin of the chi phase along a line")
    p.add_argument("y_lo", type=_positive_float)
    p.add_argument("y_hi", type=_positive_float)
    p.add_argument("--delta", type=float, default=0.0, help="Shift off the line (default: 0)")
    p.add_argument("--samples", type=_positive_int, default=1000)

    p = sub.add_parser("trace", parents=[common], help="Terms of the asymptotic equation for zero n")
    p.add_argument("n", type=_positive_int)
    p.add_argument("y_lo", type=_positive_float)
    p.add_argument("y_hi", type=_positive_float)
    p.add_argument("--delta", type=_positive_float, default=1e-9, help="Shift off the line (default: 1e-9)")
    p.add_argument("--samples", type=_positive_int, default=1000)

    return parser


def _check_usage(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    command = args.command
    if command in ("batch", "audit") and None not in (args.n_lo, args.n_hi) and args.n_hi < args.n_lo:
        parser.error(f"need n_lo <= n_hi, got {args.n_lo} > {args.n_hi}")
    if command == "batch" and (args.n_lo is None) != (args.n_hi is None):
        parser.error("give both n_lo and n_hi, or neither to use n_range")
    if command == "count" and args.T <= 2 * math.pi:
        parser.error(f"counting needs T > 2 pi, got {args.T}")
    if command == "gue" and args.N <= args.M:
        parser.error(f"need N > M, got M={args.M}, N={args.N}")
    if command == "prime" and not 2 <= args.x_lo < args.x_hi:
        parser.error(f"need 2 <= x_lo < x_hi, got {args.x_lo}, {args.x_hi}")
    if command == "prime" and args.samples < 2:
        parser.error("--samples must be >= 2")
    if command in ("diagnose", "trace") and args.y_hi <= args.y_lo:
        parser.error(f"need y_lo < y_hi, got {args.y_lo}, {args.y_hi}")
    if command in ("diagnose", "trace") and args.samples < 2:
        parser.error("--samples must be >= 2")
    if command == "diagnose" and args.delta < 0:
        parser.error("--delta must be >= 0")
    if command in ("gue", "prime", "audit") and args.ordinates is not None and args.method == "seed":
        parser.error("--ordinates and --method seed are mutually exclusive")


def _configure_logging(config: RunConfig, quiet: bool) -> None:
    level = logging.DEBUG if config.verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)
    logging.captureWarnings(True)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the riemann-zeros command.

    Returns:
        Process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_usage(parser, args)

    overrides = {
        "digits": args.digits,
        "cache_path": args.cache_dir,
        "output_format": args.format,
        "verbose": args.verbose,
        "jobs": getattr(args, "jobs", None),
    }
    try:
        config = load_run_config(args.config, overrides)
    except (RiemannZerosError, FileNotFoundError) as exc:
        parser.error(str(exc))
    _configure_logging(config, args.quiet)

    method = METHODS.get(getattr(args, "method", "asymptotic"))
    try:
        launcher = RiemannZerosLauncher(config)
        command = args.command
        if command == "zero":
            launcher.cmd_zero(args.n, method)
        elif command == "batch":
            n_lo, n_hi = (args.n_lo, args.n_hi) if args.n_lo is not None else config.n_range
            return launcher.cmd_batch(n_lo, n_hi, method, config.jobs)
        elif command == "gue":
            launcher.cmd_gue(args.M, args.N, args.step, args.x_max, method, args.ordinates, args.offset)
        elif command == "prime":
            launcher.cmd_prime(args.x_lo, args.x_hi, args.zeros, args.what, args.samples,
                               method, args.ordinates, args.offset)
        elif command == "audit":
            launcher.cmd_audit(args.n_lo, args.n_hi, args.delta, method, args.decimals,
                               args.ordinates, args.offset)
        elif command == "gram":
            launcher.cmd_gram(args.n)
        elif command == "count":
            launcher.cmd_count(args.T, CountingVariant(args.variant))
        elif command == "diagnose":
            launcher.cmd_diagnose(args.y_lo, args.y_hi, args.delta, args.samples)
        elif command == "trace":
            launcher.cmd_trace(args.n, args.y_lo, args.y_hi, args.delta, args.samples)
    except (RiemannZerosError, FileNotFoundError) as exc:
        logger.error(f"{args.command} failed: {exc}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
