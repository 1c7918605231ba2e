"""Distribution-aware loss of the minimal gas measure.

A historical operation mix induces a (generally suboptimal) row strategy
in the worst-case game; the column player's best reply to it gives a
loss that is never worse than the worst case.  For a box of plausible
frequency vectors, the worst loss over the box is a linear-fractional
minimax, solved by bisection on the value with a feasibility LP at each
step in the gas-scaled variables z_i = f_i * g_i.
"""

from dataclasses import dataclass

import numpy as np

from . import approx, lpcore, model
from .errors import DegenerateProfile, EmptyBox, NumericalFailure

BISECTION_TOL = 1e-9


@dataclass(frozen=True)
class HistReport:
    frequency: np.ndarray        # the operation mix the report is about
    x_hist: np.ndarray           # induced row strategy
    column_payoffs: np.ndarray
    nu_hist: float
    alpha_hist: float
    best_reply_column: int


def hist_strategy(g: model.GasMeasure, f) -> np.ndarray:
    """Row strategy induced by an operation mix: gas-weight the
    frequencies and renormalize, x_i = f_i g_i / sum f g."""
    costs = np.asarray(g.costs, dtype=float)
    f = np.asarray(f, dtype=float)
    if f.shape != costs.shape:
        raise ValueError("frequency vector length must match the measure")
    weighted = f * costs
    total = weighted.sum()
    if total <= 0:
        raise DegenerateProfile("all frequency mass on zero-cost operations")
    return weighted / total


def _report_for_strategy(U, f, x):
    payoffs = x @ U
    best = int(np.argmax(payoffs))        # ties resolve to the lowest index
    nu = float(payoffs[best])
    return HistReport(np.asarray(f, dtype=float), x, payoffs, nu,
                      1.0 / nu, best)


def hist_loss(instance: model.ResourceInstance, f) -> HistReport:
    """Best reply of the resource (maximizing) player to the mix-induced
    row strategy; the reciprocal is the loss under this mix."""
    g = model.minimal_gas_measure(instance)
    U = approx.build_game(instance).entries
    return _report_for_strategy(U, f, hist_strategy(g, f))


def hist_loss_range(instance: model.ResourceInstance, f_low,
                    f_high) -> HistReport:
    """Worst loss over all frequency vectors in a box intersected with
    the simplex: min over f of the best-reply payoff, by bisection on
    the payoff level with a feasibility LP per step."""
    f_low = np.asarray(f_low, dtype=float)
    f_high = np.asarray(f_high, dtype=float)
    m = instance.num_operations
    if f_low.shape != (m,) or f_high.shape != (m,):
        raise ValueError("box bounds need one entry per operation")
    if np.any(f_low < 0) or np.any(f_low > f_high + 1e-12):
        raise EmptyBox("need 0 <= f_low <= f_high componentwise")
    if f_low.sum() > 1 + 1e-9 or f_high.sum() < 1 - 1e-9:
        raise EmptyBox("the box does not intersect the simplex")

    g = model.minimal_gas_measure(instance).costs
    U = approx.build_game(instance).entries
    n = U.shape[1]
    z_low = f_low * g
    z_high = f_high * g

    def feasible(v):
        """min s s.t. sum_i z_i (u_ij - v) <= s for all j, z in box,
        sum z_i / g_i = 1; variables t = z - z_low >= 0, s free."""
        shifted = U - v
        c = np.zeros(m + 2)
        c[m], c[m + 1] = 1.0, -1.0
        rows = []
        bounds = []
        senses = []
        for j in range(n):
            row = np.concatenate([shifted[:, j], [-1.0, 1.0]])
            rows.append(row)
            bounds.append(-float(z_low @ shifted[:, j]))
            senses.append("<=")
        for i in range(m):        # upper box bounds on t
            row = np.zeros(m + 2)
            row[i] = 1.0
            rows.append(row)
            bounds.append(z_high[i] - z_low[i])
            senses.append("<=")
        row = np.concatenate([1.0 / g, [0.0, 0.0]])
        rows.append(row)
        bounds.append(1.0 - float(z_low @ (1.0 / g)))
        senses.append("==")
        res = lpcore.solve_lp(lpcore.LinearProgram(
            c, np.array(rows), np.array(bounds), tuple(senses)))
        if res.status != "optimal":
            return None
        if res.value > lpcore.FEAS_TOL:
            return None
        return z_low + res.x[:m]

    lo, hi = 0.0, 1.0
    witness_z = feasible(hi)
    if witness_z is None:
        raise NumericalFailure("range minimax: no feasible frequency found")
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        z = feasible(mid)
        if z is None:
            lo = mid
        else:
            hi = mid
            witness_z = z
    f = witness_z / g
    total = f.sum()
    if total > 0:
        f = f / total
    x = witness_z / witness_z.sum()
    return _report_for_strategy(U, f, x)
