"""
Experiment runners: quantum-value tables, the deviation-onset search,
lambda scatters and the criterion cross-check.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from ..config.settings import Settings
from ..core.bell import criterion_report
from ..core.exceptions import NpaBoundaryError, OnsetNotFoundError
from ..core.models import (
    BellFunctional,
    CorrelationPoint,
    CrossCheckResult,
    Level,
    SampleMode,
    ScatterRecord,
    ScatterSummary,
    TableRow,
)
from ..moments.problems import lambda_problem, value_problem
from ..moments.structure import build_structure
from ..solver.interior_point import SdpSolution, SolverOptions, certify, solve
from .maximize import extremal_by_maximization, random_functional
from .oracles import QbFamily, qb_functional, quantum_value
from .samplers.factory import SamplerFactory

logger = logging.getLogger(__name__)

MIN_DETECT_TOL = 1e-9


def sample_rng(seed: int, sample_id: int) -> np.random.Generator:
    """Independent generator per (master seed, sample id)."""
    return np.random.default_rng([seed, sample_id])


def level_value(functional: BellFunctional, level: Level,
                options: Optional[SolverOptions] = None) -> Tuple[SdpSolution, bool]:
    """Maximize the functional over the level's relaxation; returns (solution, certified)."""
    options = options or SolverOptions()
    problem = value_problem(build_structure(level), functional)
    solution = solve(problem, options)
    return solution, certify(problem, solution).passed(options)


def max_lambda(point: CorrelationPoint, level: Level,
               options: Optional[SolverOptions] = None) -> Tuple[SdpSolution, bool]:
    """Largest lambda with Gamma - lambda I >= 0 at the point; returns (solution, certified)."""
    options = options or SolverOptions()
    problem = lambda_problem(build_structure(level), point)
    solution = solve(problem, options)
    return solution, certify(problem, solution).passed(options)


def run_table(family: QbFamily, xs: Iterable[float], levels: Sequence[Level],
              settings: Optional[Settings] = None) -> List[TableRow]:
    """Relaxation values of the family's functional next to its quantum maximum."""
    settings = settings or Settings()
    options = settings.solver_options()
    levels = sorted(set(levels), key=lambda level: level.rank)
    rows = []
    for x in xs:
        row = TableRow(x=float(x), quantum=quantum_value(family, x))
        functional = qb_functional(family, x)
        for level in levels:
            solution, certified = level_value(functional, level, options)
            row.value_per_level[level] = solution.objective
            row.status_per_level[level] = solution.status.value
            row.certified = row.certified and certified and solution.optimal
        logger.info("%s x=%.6g: quantum %.14f  %s", family.value, row.x, row.quantum,
                    "  ".join(f"{level}={row.value_per_level[level]:.14f}" for level in levels))
        rows.append(row)
    return rows


def onset_excess(family: QbFamily, x: float, options: Optional[SolverOptions] = None) -> float:
    """Level 1+AB value minus the quantum maximum at x."""
    solution, _ = level_value(qb_functional(family, x), Level.ONE_AB, options)
    solution.require_optimal()
    return solution.objective - quantum_value(family, x)


def deviation_onset(family: QbFamily = QbFamily.QB3, detect_tol: float = 1e-7,
                    settings: Optional[Settings] = None) -> float:
    """Bisect for the smallest x where level 1+AB exceeds the quantum maximum by detect_tol."""
    settings = settings or Settings()
    if detect_tol < MIN_DETECT_TOL:
        raise ValueError(f"detect_tol={detect_tol} below {MIN_DETECT_TOL}")
    options = settings.solver_options()
    lo, hi = settings.onset_bracket

    lo_excess = onset_excess(family, lo, options)
    hi_excess = onset_excess(family, hi, options)
    logger.debug("Bracket [%g, %g]: excess %.3e / %.3e", lo, hi, lo_excess, hi_excess)
    if lo_excess > detect_tol or hi_excess <= detect_tol:
        raise OnsetNotFoundError(
            f"No sign change of excess - {detect_tol:g} on [{lo}, {hi}] "
            f"(excess {lo_excess:.3e} and {hi_excess:.3e})"
        )

    while hi - lo > settings.onset_resolution:
        mid = 0.5 * (lo + hi)
        excess = onset_excess(family, mid, options)
        logger.debug("x=%.6f excess %.3e", mid, excess)
        if excess > detect_tol:
            hi = mid
        else:
            lo = mid
    onset = 0.5 * (lo + hi)
    logger.info("Deviation onset for %s at x=%.4f (tol %g)", family.value, onset, detect_tol)
    return onset


def _is_deviated(lambda_low: float, lambda_high: float, tol: float) -> bool:
    return lambda_low - lambda_high > tol * max(1.0, abs(lambda_high))


def scatter_sample(mode: SampleMode, sample_id: int, levels: Sequence[Level], seed: int,
                   deviation_tol: float, settings: Settings) -> ScatterRecord:
    """Draw the sample_id-th point of the stream and solve the lambda problem at each level."""
    options = settings.solver_options()
    point = SamplerFactory.create(mode, settings).draw(sample_rng(seed, sample_id))
    record = ScatterRecord(sample_id=sample_id, mode=mode, seed=seed, point=point)
    for level in levels:
        solution, certified = max_lambda(point, level, options)
        record.lambda_per_level[level] = solution.objective
        record.status_per_level[level] = solution.status.value
        record.certified = record.certified and certified
    if len(levels) >= 2:
        record.deviated = _is_deviated(record.lambda_per_level[levels[0]],
                                       record.lambda_per_level[levels[1]], deviation_tol)
    return record


def run_scatter(mode: SampleMode, n: int, levels: Sequence[Level], seed: int = 0,
                deviation_tol: float = 1e-7, settings: Optional[Settings] = None) -> List[ScatterRecord]:
    """Maximum lambda per level for n sampled points, ordered by sample id."""
    settings = settings or Settings()
    if n < 1:
        raise ValueError(f"n={n} must be at least 1")
    levels = sorted(set(levels), key=lambda level: level.rank)
    logger.info("Scatter: mode %s, n=%d, levels %s, seed %d, %d worker(s)",
                mode.value, n, ",".join(map(str, levels)), seed, settings.threads)
    records = Parallel(n_jobs=settings.threads)(
        delayed(scatter_sample)(mode, sample_id, levels, seed, deviation_tol, settings)
        for sample_id in range(n)
    )
    return sorted(records, key=lambda record: record.sample_id)


def summarize(records: Sequence[ScatterRecord]) -> ScatterSummary:
    """Counts and lambda ranges; the gap compares the two lowest levels present."""
    levels = sorted({level for record in records for level in record.lambda_per_level},
                    key=lambda level: level.rank)
    summary = ScatterSummary(
        count=len(records),
        deviated=sum(record.deviated for record in records),
        max_gap=0.0,
        non_optimal=sum(any(status != "Optimal" for status in record.status_per_level.values())
                        for record in records),
        uncertified=sum(not record.certified for record in records),
    )
    for level in levels:
        values = [record.lambda_per_level[level] for record in records
                  if level in record.lambda_per_level]
        summary.lambda_min[level] = min(values)
        summary.lambda_max[level] = max(values)
    if len(levels) >= 2:
        summary.max_gap = max(abs(record.lambda_gap(levels[0], levels[1])) for record in records)
    return summary


def crosscheck_sample(sample_id: int, seed: int, tol: float, restarts: int) -> Tuple[float, bool]:
    """(max residual, satisfied) for the maximizer of one random functional."""
    rng = sample_rng(seed, sample_id)
    functional = random_functional(rng)
    realization = extremal_by_maximization(rng, functional, restarts)
    try:
        report = criterion_report(realization, tol)
    except NpaBoundaryError as exc:
        logger.warning("Cross-check %d: criterion undefined at %s (%s)",
                       sample_id, realization.as_tuple(), exc)
        return float("inf"), False
    if not report.satisfied:
        logger.warning("Cross-check %d: residual %.3e, positivity %.3e at %s",
                       sample_id, report.max_residual, report.eq8_product, realization.as_tuple())
    return report.max_residual, report.satisfied


def run_crosscheck(n: int, seed: int = 0, tol: float = 1e-5,
                   settings: Optional[Settings] = None) -> CrossCheckResult:
    """Evaluate the criterion on n functional maximizers; misses are reported, not raised."""
    settings = settings or Settings()
    if n < 1:
        raise ValueError(f"n={n} must be at least 1")
    outcomes = Parallel(n_jobs=settings.threads)(
        delayed(crosscheck_sample)(sample_id, seed, tol, settings.maximize_restarts)
        for sample_id in range(n)
    )
    result = CrossCheckResult(tolerance=tol)
    for residual, satisfied in outcomes:
        result.max_residuals.append(residual)
        result.satisfied.append(satisfied)
    logger.info("Cross-check: %d/%d maximizers satisfy the criterion at %g",
                result.passed, result.count, tol)
    return result
