"""k-dimensional gas measures via upper-bounding factorization.

A pair of nonnegative matrices (A, R) with W' <= A @ R elementwise and
R column sums at most 1 guarantees that the k-dimensional costs A
represent the normalized instance.  The loss of such a measure is the
largest per-dimension loss, each the reciprocal of a zero-sum game
value.  An alternating per-row / per-column LP heuristic improves on
the partition-derived starting point; finding the globally optimal
factorization is left open.
"""

from dataclasses import dataclass

import numpy as np

from . import lpcore, model, partition
from .errors import NumericalFailure, RepresentationViolated

REPRESENT_TOL = 1e-9


@dataclass(frozen=True)
class Factorization:
    A: np.ndarray   # operations x k: the k-dimensional gas costs
    R: np.ndarray   # k x resources: the right factor (column sums <= 1);
    k: int          # R is None when only the measure A is known


@dataclass(frozen=True)
class FactorReport:
    factorization: Factorization
    per_dimension_values: np.ndarray   # game value per dimension (nan: skipped)
    alpha: float
    represents: bool
    warnings: tuple = ()


def kdim_represents(instance_norm: model.NormalizedInstance, A) -> bool:
    """True iff A-feasibility implies feasibility for every resource:
    per resource j, max {sum_i x_i w'_ij : x A-feasible} <= 1."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    w = instance_norm.matrix
    if A.shape[0] != w.shape[0]:
        raise ValueError("A needs one row per operation")
    k = A.shape[1]
    for j in range(w.shape[1]):
        lp = lpcore.LinearProgram(
            objective=w[:, j], matrix=A.T, bounds=np.ones(k),
            senses=("<=",) * k, maximize=True)
        res = lpcore.solve_lp(lp)
        if res.status == "unbounded":
            return False
        if res.status != "optimal":
            raise NumericalFailure(
                f"representation LP for resource {j} ended {res.status}")
        if res.value > 1 + REPRESENT_TOL:
            return False
    return True


def partition_to_factorization(instance: model.ResourceInstance,
                               plan: partition.PartitionPlan) -> Factorization:
    """A_il = max over group l of w'_ij, R = group indicator matrix.

    Satisfies both factorization conditions by construction, so the
    resulting A is never worse than the partition it came from.
    """
    w = model.normalize(instance).matrix
    k = len(plan.groups)
    A = np.zeros((w.shape[0], k))
    R = np.zeros((k, w.shape[1]))
    for ell, group in enumerate(plan.groups):
        cols = list(group)
        A[:, ell] = np.max(w[:, cols], axis=1)
        R[ell, cols] = 1.0
    return Factorization(A, R, k)


def factor_loss(instance_norm: model.NormalizedInstance, A,
                R=None) -> FactorReport:
    """Loss of the k-dimensional measure A: per dimension, the game on
    u_ij = w'_ij / A_il over operations with A_il > 0; overall the
    largest per-dimension loss."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if not kdim_represents(instance_norm, A):
        raise RepresentationViolated(
            "the k-dimensional measure does not represent the instance")
    w = instance_norm.matrix
    k = A.shape[1]
    values = np.full(k, np.nan)
    warnings = []
    for ell in range(k):
        active = np.flatnonzero(A[:, ell] > 0)
        if active.size == 0:
            warnings.append(f"dimension {ell} has all-zero costs; skipped")
            continue
        # zero-cost operations are free in this dimension and drop out
        U = w[active] / A[active, ell][:, None]
        values[ell] = lpcore.solve_zero_sum(U, row_minimizes=True).value
    if np.all(np.isnan(values)):
        raise RepresentationViolated("every dimension is all-zero")
    alpha = float(1.0 / np.nanmin(values))
    return FactorReport(Factorization(A, R, k), values, alpha, True,
                        tuple(warnings))


def _row_update(w, R):
    """Per operation: cheapest nonnegative cost row with A_i @ R >= w'_i."""
    k, n = R.shape
    A = np.zeros((w.shape[0], k))
    for i in range(w.shape[0]):
        lp = lpcore.LinearProgram(
            objective=np.ones(k), matrix=-R.T, bounds=-w[i],
            senses=("<=",) * n)
        res = lpcore.solve_lp(lp)
        if res.status != "optimal":
            raise NumericalFailure(f"row update LP ended {res.status}")
        A[i] = np.maximum(res.x, 0.0)
    return A


def _col_update(w, A, R_prev):
    """Per resource: lightest column with A @ R_j >= w'_j and sum <= 1;
    keeps the previous column if the LP cannot improve on it."""
    m, k = A.shape
    R = R_prev.copy()
    for j in range(w.shape[1]):
        matrix = np.vstack([-A, np.ones(k)])
        bounds = np.concatenate([-w[:, j], [1.0]])
        lp = lpcore.LinearProgram(
            objective=np.ones(k), matrix=matrix, bounds=bounds,
            senses=("<=",) * (m + 1))
        res = lpcore.solve_lp(lp)
        if res.status == "optimal":
            R[:, j] = np.maximum(res.x, 0.0)
    return R


def alternating_factorization(instance_norm: model.NormalizedInstance,
                              k: int, max_rounds: int = 20) -> FactorReport:
    """Improve the partition-derived factorization by alternating
    per-operation-row and per-resource-column LPs; the best iterate by
    loss is kept, so the result is never worse than the initialization."""
    if k < 1:
        raise ValueError("k must be at least 1")
    w = instance_norm.matrix
    unit = instance_norm.as_instance()
    k = min(k, w.shape[1])
    if w.shape[1] <= partition.EXACT_ENUMERATION_LIMIT:
        plan = partition.optimal_partition_exact(unit, k)
    else:
        plan = partition.optimal_partition_greedy(unit, k)
    fact = partition_to_factorization(unit, plan)
    A, R = fact.A, fact.R

    best = factor_loss(instance_norm, A, R)
    for _ in range(max_rounds):
        A = _row_update(w, R)
        R = _col_update(w, A, R)
        report = factor_loss(instance_norm, A, R)
        if report.alpha < best.alpha - 1e-9:
            best = report
        else:
            break
    return best
