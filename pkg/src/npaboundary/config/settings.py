"""
Configuration defaults for NPA boundary experiments.

Everything lives in code; the command line overrides individual fields.
"""

from dataclasses import asdict, dataclass, replace
from typing import Dict, Tuple

from ..core.models import Level
from ..solver.interior_point import SolverOptions


@dataclass(frozen=True)
class Settings:
    """Application settings and tolerances."""
    # Criterion
    criterion_tol: float = 1e-9

    # Solver
    gap_tol: float = 1e-10
    feas_tol: float = 1e-9
    max_iters: int = 200
    step_fraction: float = 0.98

    # Scatter
    scatter_levels: Tuple[Level, ...] = (Level.ONE_AB, Level.TWO)
    deviation_tol: float = 1e-7
    seed: int = 0
    threads: int = 1

    # Onset search
    detect_tol: float = 1e-7
    onset_bracket: Tuple[float, float] = (0.6, 0.8)
    onset_resolution: float = 1e-3

    # Samplers
    rejection_budget: int = 100_000
    crit12_starts: int = 64
    crit12_tol: float = 1e-9
    maximize_restarts: int = 32

    def solver_options(self) -> SolverOptions:
        return SolverOptions(
            gap_tol=self.gap_tol,
            feas_tol=self.feas_tol,
            max_iters=self.max_iters,
            step_fraction=self.step_fraction,
        )

    def with_overrides(self, **overrides) -> "Settings":
        """Copy with the given fields replaced; None values are ignored."""
        return replace(self, **{key: value for key, value in overrides.items() if value is not None})

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)
