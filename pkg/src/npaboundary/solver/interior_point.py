"""
Dense primal-dual interior-point solver for small linear matrix inequalities.

Solves the pair

    maximize  b'y                 minimize  <F0, X>
    s.t.  Z = F0 + sum y_i F_i    s.t.  <F_i, X> = -b_i
          Z >= 0                        X >= 0

with the HKM search direction and a Mehrotra predictor-corrector step,
starting from scaled identities (infeasible start). Sized for n <= 41.
"""

import logging
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy import linalg, sparse

from ..core.exceptions import MaxItersError, NumericalFailureError
from ..moments.problems import SdpProblem

logger = logging.getLogger(__name__)


class SolveStatus(Enum):
    """Outcome of a solve."""
    OPTIMAL = "Optimal"
    MAX_ITERS = "MaxIters"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and step control."""
    gap_tol: float = 1e-10
    feas_tol: float = 1e-9
    max_iters: int = 200
    step_fraction: float = 0.98

    def __post_init__(self):
        if self.gap_tol <= 0 or self.feas_tol <= 0:
            raise ValueError("gap_tol and feas_tol must be positive")
        if not 0.0 < self.step_fraction < 1.0:
            raise ValueError(f"step_fraction={self.step_fraction} outside (0, 1)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass(frozen=True, eq=False)
class SdpSolution:
    """Final primal-dual iterate and its quality measures."""
    y: np.ndarray
    objective: float
    bound: float
    gap: float
    min_eigenvalue: float
    status: SolveStatus
    iterations: int
    x: np.ndarray

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    def require_optimal(self) -> "SdpSolution":
        """Return self, or raise the error matching a non-optimal status."""
        if self.status is SolveStatus.MAX_ITERS:
            raise MaxItersError(f"No convergence after {self.iterations} iterations (gap {self.gap:.2e})")
        if self.status is SolveStatus.NUMERICAL_FAILURE:
            raise NumericalFailureError(
                f"Factorization breakdown at iteration {self.iterations} (gap {self.gap:.2e})"
            )
        return self


@dataclass(frozen=True)
class Certificate:
    """Quality measures recomputed from (y, X) alone."""
    min_eigenvalue: float
    x_min_eigenvalue: float
    objective: float
    bound: float
    gap: float
    equality_residual: float

    def passed(self, options: Optional[SolverOptions] = None, slack: float = 10.0) -> bool:
        """Both matrices PSD within feas_tol and the gap within slack * gap_tol."""
        options = options or SolverOptions()
        return (self.min_eigenvalue >= -options.feas_tol
                and self.x_min_eigenvalue >= -options.feas_tol
                and self.gap <= slack * options.gap_tol
                and self.equality_residual <= slack * options.feas_tol)


def _relative_gap(bound: float, objective: float) -> float:
    return abs(bound - objective) / (1.0 + abs(bound) + abs(objective))


def _max_step(matrix: np.ndarray, direction: np.ndarray) -> float:
    """Largest alpha keeping matrix + alpha * direction positive semidefinite."""
    factor = linalg.cholesky(matrix, lower=True)
    scaled = linalg.solve_triangular(factor, direction, lower=True)
    scaled = linalg.solve_triangular(factor, scaled.T, lower=True)
    smallest = linalg.eigvalsh(0.5 * (scaled + scaled.T))[0]
    return np.inf if smallest >= 0.0 else -1.0 / smallest


def _schur_solver(schur: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Cholesky solve of the Schur system, LU once it is no longer numerically definite."""
    schur = 0.5 * (schur + schur.T)
    try:
        factor = linalg.cho_factor(schur, lower=True)
    except linalg.LinAlgError as exc:
        logger.debug("Schur complement not positive definite (%s), using LU", exc)
    else:
        return lambda rhs: linalg.cho_solve(factor, rhs)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu = linalg.lu_factor(schur)

    def lu_solve(rhs: np.ndarray) -> np.ndarray:
        solution = linalg.lu_solve(lu, rhs)
        if not np.all(np.isfinite(solution)):
            raise linalg.LinAlgError("singular Schur complement")
        return solution

    return lu_solve


def _initial_scale(prob: SdpProblem, norms: np.ndarray):
    n = prob.n
    b = np.abs(prob.objective)
    x_scale = max(10.0, np.sqrt(n), n * float(np.max((1.0 + b) / (1.0 + norms), initial=0.0)))
    z_scale = max(10.0, np.sqrt(n), float(np.max(norms, initial=0.0)), float(np.linalg.norm(prob.f0)))
    return x_scale, z_scale


def solve(prob: SdpProblem, opts: Optional[SolverOptions] = None) -> SdpSolution:
    """Maximize prob.objective . y subject to prob.matrix(y) >= 0."""
    opts = opts or SolverOptions()
    n, m = prob.n, prob.m
    f0, b = prob.f0, prob.objective
    stacked = sparse.csr_matrix(prob.f.reshape(m, n * n))
    identity = np.eye(n)

    def inner(w: np.ndarray) -> np.ndarray:
        return stacked @ w.ravel()

    def combine(v: np.ndarray) -> np.ndarray:
        return (stacked.T @ v).reshape(n, n)

    x_scale, z_scale = _initial_scale(prob, np.linalg.norm(prob.f.reshape(m, -1), axis=1))
    x = x_scale * identity
    z = z_scale * identity
    y = np.zeros(m)
    b_norm = 1.0 + np.linalg.norm(b)

    status = SolveStatus.MAX_ITERS
    iteration = 0
    gap = np.inf
    for iteration in range(opts.max_iters + 1):
        dual_res = f0 + combine(y) - z
        primal_res = -b - inner(x)
        objective = float(b @ y)
        bound = float(np.sum(f0 * x))
        gap = _relative_gap(bound, objective)
        primal_inf = np.linalg.norm(primal_res) / b_norm
        dual_inf = np.linalg.norm(dual_res)
        logger.debug("iter %3d  obj %+.12e  bound %+.12e  gap %.2e  pinf %.2e  dinf %.2e",
                     iteration, objective, bound, gap, primal_inf, dual_inf)
        if gap <= opts.gap_tol and primal_inf <= opts.feas_tol and dual_inf <= opts.feas_tol:
            status = SolveStatus.OPTIMAL
            break
        if iteration == opts.max_iters:
            break

        try:
            z_inv = linalg.cho_solve(linalg.cho_factor(z, lower=True), identity)
            z_inv = 0.5 * (z_inv + z_inv.T)
            schur = stacked @ (stacked @ np.kron(x, z_inv)).T
            schur_solve = _schur_solver(schur)
        except (linalg.LinAlgError, ValueError) as exc:
            logger.debug("Factorization failed at iteration %d: %s", iteration, exc)
            status = SolveStatus.NUMERICAL_FAILURE
            break

        mu = float(np.sum(x * z)) / n
        residual_term = x @ dual_res @ z_inv

        def direction(g: np.ndarray):
            dy = schur_solve(inner(g - residual_term) - primal_res)
            dz = dual_res + combine(dy)
            dx = g - x @ dz @ z_inv
            return 0.5 * (dx + dx.T), dy, dz

        try:
            # Predictor: affine-scaling direction.
            dx, dy, dz = direction(-x)
            alpha_p = min(1.0, _max_step(x, dx))
            alpha_d = min(1.0, _max_step(z, dz))
            mu_affine = float(np.sum((x + alpha_p * dx) * (z + alpha_d * dz))) / n
            sigma = min(1.0, (max(mu_affine, 0.0) / mu) ** 3)

            # Corrector with the second-order term.
            g = sigma * mu * z_inv - x - dx @ dz @ z_inv
            dx, dy, dz = direction(g)
            alpha_p = min(1.0, opts.step_fraction * _max_step(x, dx))
            alpha_d = min(1.0, opts.step_fraction * _max_step(z, dz))
        except (linalg.LinAlgError, ValueError) as exc:
            logger.debug("Step computation failed at iteration %d: %s", iteration, exc)
            status = SolveStatus.NUMERICAL_FAILURE
            break
        if max(alpha_p, alpha_d) < 1e-12:
            logger.debug("Stalled at iteration %d", iteration)
            status = SolveStatus.NUMERICAL_FAILURE
            break

        x = x + alpha_p * dx
        y = y + alpha_d * dy
        z = z + alpha_d * dz

    min_eigenvalue = float(linalg.eigvalsh(prob.matrix(y))[0])
    solution = SdpSolution(
        y=y,
        objective=float(b @ y),
        bound=float(np.sum(f0 * x)),
        gap=float(gap),
        min_eigenvalue=min_eigenvalue,
        status=status,
        iterations=iteration,
        x=0.5 * (x + x.T),
    )
    if not solution.optimal:
        logger.warning("SDP (n=%d, m=%d) ended with status %s after %d iterations, gap %.2e",
                       n, m, status.value, iteration, gap)
    return solution


def certify(prob: SdpProblem, sol: SdpSolution) -> Certificate:
    """Recompute feasibility and the duality gap without trusting solver internals."""
    objective = float(prob.objective @ sol.y)
    bound = float(np.sum(prob.f0 * sol.x))
    equality = np.einsum("kij,ij->k", prob.f, sol.x) + prob.objective
    return Certificate(
        min_eigenvalue=float(np.linalg.eigvalsh(prob.matrix(sol.y))[0]),
        x_min_eigenvalue=float(np.linalg.eigvalsh(sol.x)[0]),
        objective=objective,
        bound=bound,
        gap=_relative_gap(bound, objective),
        equality_residual=float(np.linalg.norm(equality) / (1.0 + np.linalg.norm(prob.objective))),
    )
