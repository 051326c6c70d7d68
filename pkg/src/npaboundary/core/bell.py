"""
Two-qubit correlations and the plausible extremality criterion.

All functions are pure. Settings are indexed 0/1; correlator grids are
indexed [x][y] with x Alice's setting and y Bob's.
"""

import logging
import math
from itertools import product
from typing import Sequence, Tuple

from .exceptions import DiscriminantNegativeError, ScaleOutOfRangeError
from .models import (
    BellFunctional,
    CorrelationPoint,
    CriterionReport,
    Realization,
    SBranch,
    ScaleSide,
)

logger = logging.getLogger(__name__)

DISCRIMINANT_SLACK = 1e-10
SCALE_SLACK = 1e-12
BRANCH_SLACK = 1e-12
DEFAULT_TOLERANCE = 1e-9

PAIRS = tuple(product((0, 1), (0, 1)))


def correlations_from_realization(r: Realization) -> CorrelationPoint:
    """Moments of the observables cos(t) s1 + sin(t) s3 on cos(chi)|00> + sin(chi)|11>."""
    s2, c2 = r.sin2chi, r.cos2chi
    sa = [math.sin(t) for t in r.theta_a]
    ca = [math.cos(t) for t in r.theta_a]
    sb = [math.sin(t) for t in r.theta_b]
    cb = [math.cos(t) for t in r.theta_b]
    c = tuple(tuple(sa[x] * sb[y] + ca[x] * cb[y] * s2 for y in (0, 1)) for x in (0, 1))
    return CorrelationPoint(
        a=(sa[0] * c2, sa[1] * c2),
        b=(sb[0] * c2, sb[1] * c2),
        c=c,
    )


def _guessing(theta: float, sin2chi: float) -> float:
    return math.sqrt(math.sin(theta) ** 2 + math.cos(theta) ** 2 * sin2chi ** 2)


def guessing_probabilities(r: Realization) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Return (d_b, d_a): Bob's guess of Alice's outcome per x, Alice's of Bob's per y."""
    s2 = r.sin2chi
    d_b = tuple(_guessing(t, s2) for t in r.theta_a)
    d_a = tuple(_guessing(t, s2) for t in r.theta_b)
    return d_b, d_a


def s_parameters(p: CorrelationPoint, x: int, y: int) -> SBranch:
    """Roots S+ >= S- of t^2 - J t + K^2 for the setting pair (x, y)."""
    c, a, b = p.c[x][y], p.a[x], p.b[y]
    j = c * c - a * a - b * b + 1.0
    k = c - a * b
    # J^2 - 4K^2 factored into the four outcome-probability terms; avoids cancellation.
    disc = (1 - c + a - b) * (1 - c - a + b) * (1 + c - a - b) * (1 + c + a + b)
    if disc < 0.0:
        if disc < -DISCRIMINANT_SLACK:
            raise DiscriminantNegativeError(
                f"J^2 - 4K^2 = {disc:.3e} for pair ({x},{y}); point is inconsistent"
            )
        logger.debug("Clamped discriminant %.3e to 0 for pair (%d,%d)", disc, x, y)
        disc = 0.0
    root = math.sqrt(disc)
    return SBranch(j=j, k=k, s_plus=0.5 * (j + root), s_minus=0.5 * (j - root))


def positivity_product(p: CorrelationPoint) -> float:
    """Product over pairs of (1 - S+) c - a b; a two-qubit realization needs it >= 0."""
    total = 1.0
    for x, y in PAIRS:
        s_plus = s_parameters(p, x, y).s_plus
        total *= (1.0 - s_plus) * p.c[x][y] - p.a[x] * p.b[y]
    return total


def criterion_one_residual(p: CorrelationPoint) -> float:
    """Largest deviation of S+_xy from S+_00."""
    s_plus = [s_parameters(p, x, y).s_plus for x, y in PAIRS]
    return max(abs(s - s_plus[0]) for s in s_plus)


def tlm_gap(c: Sequence[Sequence[float]]) -> float:
    """|c00 c01 - c10 c11| minus the two radical products (<= 0 inside the TLM region)."""
    lhs = abs(c[0][0] * c[0][1] - c[1][0] * c[1][1])
    rhs = (math.sqrt(max(0.0, 1.0 - c[0][0] ** 2)) * math.sqrt(max(0.0, 1.0 - c[0][1] ** 2))
           + math.sqrt(max(0.0, 1.0 - c[1][0] ** 2)) * math.sqrt(max(0.0, 1.0 - c[1][1] ** 2)))
    return lhs - rhs


def scaled_correlators(p: CorrelationPoint, d: Sequence[float], side: ScaleSide):
    """Correlators divided by the guessing probability of the given side."""
    scaled = [[0.0, 0.0], [0.0, 0.0]]
    for x, y in PAIRS:
        divisor = d[x] if side is ScaleSide.BY_B else d[y]
        if not 0.0 < divisor <= 1.0 + SCALE_SLACK:
            raise ScaleOutOfRangeError(f"Guessing probability {divisor} outside (0, 1]")
        value = p.c[x][y] / divisor
        if abs(value) > 1.0 + SCALE_SLACK:
            raise ScaleOutOfRangeError(
                f"Scaled correlator {value:.15g} at ({x},{y}) exceeds 1 ({side.value})"
            )
        scaled[x][y] = max(-1.0, min(1.0, value))
    return scaled


def scaled_tlm_residual(p: CorrelationPoint, d: Sequence[float], side: ScaleSide) -> float:
    """Distance from equality in the scaled TLM relation; 0 on the boundary."""
    return abs(tlm_gap(scaled_correlators(p, d, side)))


def tlm_unscaled_satisfied(p: CorrelationPoint, tol: float = DEFAULT_TOLERANCE) -> bool:
    """TLM inequality on the raw correlators."""
    return tlm_gap(p.c) <= tol


def bell_value(p: CorrelationPoint, f: BellFunctional) -> float:
    value = sum(f.alpha[x] * p.a[x] for x in (0, 1))
    value += sum(f.beta[y] * p.b[y] for y in (0, 1))
    value += sum(f.gamma[x][y] * p.c[x][y] for x, y in PAIRS)
    return value


def branch_condition(r: Realization) -> bool:
    """True when sin^2(2 chi) is the larger root S+ for every setting pair.

    The companion root is (sin tA sin tB sin2chi + cos tA cos tB)^2.
    """
    s2 = r.sin2chi
    target = s2 * s2
    for x, y in PAIRS:
        ta, tb = r.theta_a[x], r.theta_b[y]
        other = (math.sin(ta) * math.sin(tb) * s2 + math.cos(ta) * math.cos(tb)) ** 2
        if other > target + BRANCH_SLACK:
            return False
    return True


def criterion_report(r: Realization, tol: float = DEFAULT_TOLERANCE) -> CriterionReport:
    """Evaluate the positivity product, the S+ equalities and both scaled TLM equalities."""
    p = correlations_from_realization(r)
    branches = {(x, y): s_parameters(p, x, y) for x, y in PAIRS}
    d_b, d_a = guessing_probabilities(r)
    report = CriterionReport(
        s_plus=tuple(tuple(branches[x, y].s_plus for y in (0, 1)) for x in (0, 1)),
        s_minus=tuple(tuple(branches[x, y].s_minus for y in (0, 1)) for x in (0, 1)),
        eq11_residual=criterion_one_residual(p),
        eq8_product=positivity_product(p),
        tlm_scaled_residual_b=scaled_tlm_residual(p, d_b, ScaleSide.BY_B),
        tlm_scaled_residual_a=scaled_tlm_residual(p, d_a, ScaleSide.BY_A),
        d_b=d_b,
        d_a=d_a,
        branch_condition=branch_condition(r),
        tolerance=tol,
    )
    logger.debug("Criterion report for %s: max residual %.3e", r.as_tuple(), report.max_residual)
    return report
