"""
Command line interface.
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from ..config.settings import Settings
from ..core.bell import criterion_report
from ..core.exceptions import (
    NpaBoundaryError,
    OnsetNotFoundError,
    OutputError,
    SamplerExhaustedError,
    SolverError,
    UsageError,
)
from ..core.models import CorrelationPoint, Level, Realization, SampleMode
from ..experiments.harness import (
    deviation_onset,
    level_value,
    max_lambda,
    run_crosscheck,
    run_scatter,
    run_table,
    summarize,
)
from ..experiments.oracles import QbFamily, qb_functional, quantum_value
from ..experiments.output import emit_csv, emit_svg_scatter, format_number, format_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_SAMPLER = 3


class ArgumentParser(argparse.ArgumentParser):
    """Parser that raises UsageError instead of exiting with status 2."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_floats(text: str, count: Optional[int] = None) -> List[float]:
    """Comma-separated floats, optionally of a fixed count."""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"Expected comma-separated numbers, got '{text}'")
    if count is not None and len(values) != count:
        raise UsageError(f"Expected {count} values, got {len(values)} in '{text}'")
    return values


def parse_grid(text: str) -> List[float]:
    """'a:b:step' (inclusive) or a comma-separated list."""
    if ":" not in text:
        return parse_floats(text)
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"Grid must look like a:b:step, got '{text}'")
    start, stop, step = parse_floats(",".join(parts), 3)
    if step <= 0 or stop < start:
        raise UsageError(f"Grid '{text}' needs step > 0 and b >= a")
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def parse_levels(text: str) -> List[Level]:
    try:
        return Level.parse_list(text)
    except NpaBoundaryError as exc:
        raise UsageError(str(exc))


def parse_level(text: str) -> Level:
    levels = parse_levels(text)
    if len(levels) != 1:
        raise UsageError(f"Expected a single level, got '{text}'")
    return levels[0]


def parse_choice(parse, text: str):
    try:
        return parse(text)
    except ValueError as exc:
        raise UsageError(str(exc))


def setup_argument_parser() -> argparse.ArgumentParser:
    """Setup command line argument parser."""
    parser = ArgumentParser(
        prog="npa_boundary",
        description="NPA hierarchy relaxations and the extremality criterion in the 2x2x2 Bell scenario",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s table --family qb2 --xs 0:2:0.4 --levels 1+AB,2
  %(prog)s scatter --mode random --n 500 --levels 1+AB,2 --seed 7 --svg fig.svg
  %(prog)s check --realization 0,1.5707963,0.7853982,-0.7853982,0.7853982
  %(prog)s lambda --point 0,0,0,0,0,0,0,0 --level 2
  %(prog)s maximize --family qb3 --x 1.0 --level 1+AB
  %(prog)s threshold --family qb3 --tol 1e-7
  %(prog)s crosscheck --n 100 --seed 0

Values starting with '-' need the --flag=value form.
        """
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='Warnings and errors only')
    parser.add_argument('--threads', type=int, default=1, help='Worker processes for sampling runs (default: 1)')

    commands = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=ArgumentParser)
    commands.required = True

    table = commands.add_parser('table', help='Relaxation values of a biased CHSH family against its quantum maximum')
    table.add_argument('--family', required=True, choices=[f.value for f in QbFamily])
    table.add_argument('--xs', required=True, help='Bias grid a:b:step (inclusive) or comma list')
    table.add_argument('--levels', default='1+AB,2', help='Comma-separated levels (default: 1+AB,2)')
    table.add_argument('--out', help='CSV path (default: standard output)')

    scatter = commands.add_parser('scatter', help='Maximum lambda per level for sampled points')
    scatter.add_argument('--mode', default='random', choices=[m.value for m in SampleMode])
    scatter.add_argument('--n', type=int, default=500, help='Number of samples (default: 500)')
    scatter.add_argument('--levels', default=None, help='Comma-separated levels (default: 1+AB,2)')
    scatter.add_argument('--seed', type=int, default=0, help='Master seed (default: 0)')
    scatter.add_argument('--deviation-tol', type=float, default=None, help='Deviation threshold (default: 1e-7)')
    scatter.add_argument('--svg', help='Also write a scatter plot of the two lowest levels')
    scatter.add_argument('--out', help='CSV path (default: standard output)')

    check = commands.add_parser('check', help='Extremality criterion for a two-qubit realization')
    check.add_argument('--realization', required=True, help='thetaA0,thetaA1,thetaB0,thetaB1,chi')
    check.add_argument('--tol', type=float, default=None, help='Criterion tolerance (default: 1e-9)')

    lam = commands.add_parser('lambda', help='Maximum lambda with Gamma - lambda I >= 0 at a point')
    lam.add_argument('--point', required=True, help='a0,a1,b0,b1,c00,c01,c10,c11')
    lam.add_argument('--level', default='2', help='Hierarchy level (default: 2)')

    maximize = commands.add_parser('maximize', help='Relaxation value of a biased CHSH functional')
    maximize.add_argument('--family', required=True, choices=[f.value for f in QbFamily])
    maximize.add_argument('--x', type=float, required=True, help='Bias parameter')
    maximize.add_argument('--level', default='1+AB', help='Hierarchy level (default: 1+AB)')

    threshold = commands.add_parser('threshold', help='Bias where level 1+AB starts exceeding the quantum value')
    threshold.add_argument('--family', default='qb3', choices=[f.value for f in QbFamily])
    threshold.add_argument('--tol', type=float, default=None, help='Detection tolerance (default: 1e-7)')

    crosscheck = commands.add_parser('crosscheck', help='Criterion on maximizers of random functionals')
    crosscheck.add_argument('--n', type=int, default=100, help='Number of functionals (default: 100)')
    crosscheck.add_argument('--seed', type=int, default=0, help='Master seed (default: 0)')
    crosscheck.add_argument('--tol', type=float, default=1e-5, help='Residual tolerance (default: 1e-5)')

    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> logging.Handler:
    """Attach a root handler on the current stderr and return it."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.setLevel(level)
    root.addHandler(handler)
    return handler


def _cmd_table(args, settings: Settings) -> int:
    family = QbFamily.parse(args.family)
    rows = run_table(family, parse_grid(args.xs), parse_levels(args.levels), settings)
    emit_csv(rows, args.out)
    failed = 0
    for row in rows:
        bad = {str(level): status for level, status in row.status_per_level.items() if status != "Optimal"}
        if bad or not row.certified:
            failed += 1
            logger.warning("x=%g: status %s, certified %s", row.x, bad or "Optimal", row.certified)
    if failed:
        logger.error("%d of %d rows did not solve to a certified optimum", failed, len(rows))
        return EXIT_SOLVER
    return EXIT_OK


def _cmd_scatter(args, settings: Settings) -> int:
    if args.n < 1:
        raise UsageError(f"--n must be at least 1, got {args.n}")
    levels = parse_levels(args.levels) if args.levels else list(settings.scatter_levels)
    if args.svg and len(levels) < 2:
        raise UsageError("--svg needs at least two levels")
    settings = settings.with_overrides(seed=args.seed, deviation_tol=args.deviation_tol)
    records = run_scatter(parse_choice(SampleMode.parse, args.mode), args.n, levels,
                          settings.seed, settings.deviation_tol, settings)
    summary = summarize(records)
    logger.info("%d/%d deviated (%.1f%%), max gap %.3e, %d non-optimal, %d uncertified",
                summary.deviated, summary.count, 100.0 * summary.deviated_fraction,
                summary.max_gap, summary.non_optimal, summary.uncertified)
    emit_csv(records, args.out)
    if args.svg:
        emit_svg_scatter(records, args.svg, axes=(levels[1], levels[0]))
    return EXIT_OK


def _cmd_check(args, settings: Settings) -> int:
    tol = args.tol if args.tol is not None else settings.criterion_tol
    realization = Realization.from_values(parse_floats(args.realization, 5))
    sys.stdout.write(format_report(criterion_report(realization, tol)))
    return EXIT_OK


def _cmd_lambda(args, settings: Settings) -> int:
    point = CorrelationPoint.from_values(parse_floats(args.point, 8))
    solution, certified = max_lambda(point, parse_level(args.level), settings.solver_options())
    solution.require_optimal()
    sys.stdout.write(f"lambda = {solution.objective:.9f}\nstatus = {solution.status.value}\n")
    if not certified:
        logger.warning("Independent certificate check failed")
    return EXIT_OK


def _cmd_maximize(args, settings: Settings) -> int:
    family = QbFamily.parse(args.family)
    quantum = quantum_value(family, args.x)
    solution, certified = level_value(qb_functional(family, args.x), parse_level(args.level),
                                      settings.solver_options())
    solution.require_optimal()
    sys.stdout.write(f"value = {format_number(solution.objective)}\n"
                     f"quantum = {format_number(quantum)}\n"
                     f"difference = {format_number(solution.objective - quantum)}\n")
    if not certified:
        logger.warning("Independent certificate check failed")
    return EXIT_OK


def _cmd_threshold(args, settings: Settings) -> int:
    tol = args.tol if args.tol is not None else settings.detect_tol
    onset = deviation_onset(QbFamily.parse(args.family), tol, settings)
    sys.stdout.write(f"onset = {onset:.4f}\n")
    return EXIT_OK


def _cmd_crosscheck(args, settings: Settings) -> int:
    if args.n < 1:
        raise UsageError(f"--n must be at least 1, got {args.n}")
    result = run_crosscheck(args.n, args.seed, args.tol, settings)
    sys.stdout.write(f"passed = {result.passed}\ncount = {result.count}\n"
                     f"fraction = {format_number(result.pass_fraction)}\n")
    return EXIT_OK


_COMMANDS = {
    'table': _cmd_table,
    'scatter': _cmd_scatter,
    'check': _cmd_check,
    'lambda': _cmd_lambda,
    'maximize': _cmd_maximize,
    'threshold': _cmd_threshold,
    'crosscheck': _cmd_crosscheck,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run the subcommand and map failures to exit codes."""
    parser = setup_argument_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)

    handler = configure_logging(args.verbose, args.quiet)
    try:
        return _run(args)
    finally:
        logging.getLogger().removeHandler(handler)


def _run(args) -> int:
    if args.threads < 1:
        logger.error("--threads must be at least 1")
        return EXIT_USAGE
    settings = Settings().with_overrides(threads=args.threads)
    logger.debug("Effective settings: %s", settings.as_dict())

    try:
        return _COMMANDS[args.command](args, settings)
    except SamplerExhaustedError as exc:
        logger.error("Sampler exhausted: %s", exc)
        return EXIT_SAMPLER
    except (SolverError, OnsetNotFoundError) as exc:
        logger.error("%s", exc)
        return EXIT_SOLVER
    except OutputError as exc:
        logger.error("Output failed: %s", exc)
        return EXIT_USAGE
    except (NpaBoundaryError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
