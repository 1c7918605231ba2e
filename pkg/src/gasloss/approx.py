"""Single-dimensional approximability.

The worst-case loss of the minimal gas measure equals the reciprocal of
the value of a zero-sum game between operations (minimizer) and
resources (maximizer) with utilities u_ij = w_ij / (B_j * g_i).  An
independent LP oracle encodes the loss definition directly and is used
as a cross-check.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import lpcore, model
from .errors import NumericalFailure


@dataclass(frozen=True)
class UtilityMatrix:
    entries: np.ndarray
    operation_names: tuple
    resource_names: tuple


@dataclass(frozen=True)
class ApproxReport:
    alpha: float
    measure: model.GasMeasure
    game: lpcore.GameSolution
    witness: np.ndarray
    oracle_alpha: Optional[float] = None


def build_game(instance: model.ResourceInstance) -> UtilityMatrix:
    """Utility matrix u_ij = w_ij / (B_j * g_i) with g the minimal measure.

    Every row attains 1 in the column realizing the row's max; entries
    lie in [0, 1].
    """
    g = model.minimal_gas_measure(instance).costs
    w_norm = instance.usage / instance.capacities
    entries = w_norm / g[:, None]
    entries = np.asarray(entries)
    entries.setflags(write=False)
    return UtilityMatrix(entries, instance.operation_names,
                         instance.resource_names)


def approximability(instance: model.ResourceInstance,
                    with_oracle: bool = False) -> ApproxReport:
    """Worst-case loss of the minimal measure, via the game value.

    alpha = 1 / value; the witness block x_i = alpha * x*_i / g_i is
    feasible and has gas exactly alpha, certifying tightness.
    """
    g = model.minimal_gas_measure(instance)
    game = lpcore.solve_zero_sum(build_game(instance).entries,
                                 row_minimizes=True)
    if game.value <= 0:
        raise NumericalFailure("nonpositive game value")
    alpha = 1.0 / game.value
    witness = alpha * game.row_strategy / g.costs
    oracle = approximability_oracle(instance) if with_oracle else None
    return ApproxReport(alpha=alpha, measure=g, game=game,
                        witness=witness, oracle_alpha=oracle)


def approximability_oracle(instance: model.ResourceInstance) -> float:
    """Direct LP encoding of the loss definition, independent of the game:
    max total gas of any feasible block under the minimal measure."""
    g = model.minimal_gas_measure(instance).costs
    lp = lpcore.LinearProgram(
        objective=g,
        matrix=instance.usage.T,
        bounds=instance.capacities,
        senses=("<=",) * instance.num_resources,
        maximize=True)
    res = lpcore.solve_lp(lp)
    if res.status != "optimal":
        raise NumericalFailure(f"oracle LP ended with status {res.status}")
    return float(res.value)
