"""
Extremal two-qubit realizations found by maximizing Bell functionals.

Exposed points of the quantum set are maximizers of linear functionals, so
the optimum of a random functional over the realization family is a
candidate extremal point on which the criterion can be checked.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from ..core.bell import bell_value, correlations_from_realization
from ..core.models import BellFunctional, Realization

logger = logging.getLogger(__name__)

MIN_CHI = 1e-9

_NELDER_MEAD_OPTIONS = {"xatol": 1e-10, "fatol": 1e-13, "maxiter": 5000, "maxfev": 10000}


def random_functional(rng: np.random.Generator) -> BellFunctional:
    """Eight coefficients i.i.d. uniform on [-1, 1]."""
    return BellFunctional.from_values(rng.uniform(-1.0, 1.0, size=8))


def realization_from_parameters(v: Sequence[float]) -> Realization:
    """Unconstrained 5-vector to a realization; chi = pi/8 (1 + sin t) covers [0, pi/4]."""
    chi = max(MIN_CHI, 0.125 * math.pi * (1.0 + math.sin(v[4])))
    return Realization((v[0], v[1]), (v[2], v[3]), chi)


def _negative_value(v: np.ndarray, functional: BellFunctional) -> float:
    return -bell_value(correlations_from_realization(realization_from_parameters(v)), functional)


def extremal_by_maximization(rng: np.random.Generator,
                             functional: Optional[BellFunctional] = None,
                             restarts: int = 32) -> Realization:
    """Best realization over Nelder-Mead restarts from random starting parameters.

    A fresh random functional is drawn when none is given.
    """
    if functional is None:
        functional = random_functional(rng)
    best = None
    for restart in range(max(1, restarts)):
        start = rng.uniform(-math.pi, math.pi, size=5)
        result = minimize(_negative_value, start, args=(functional,),
                          method="Nelder-Mead", options=_NELDER_MEAD_OPTIONS)
        if best is None or result.fun < best.fun:
            best = result
            logger.debug("restart %d: value %.12f", restart, -result.fun)

    # Polish from the best vertex.
    polished = minimize(_negative_value, best.x, args=(functional,),
                        method="Nelder-Mead", options=_NELDER_MEAD_OPTIONS)
    if polished.fun < best.fun:
        best = polished
    logger.debug("Best value %.12f after %d restarts", -best.fun, restarts)
    return realization_from_parameters(best.x)
