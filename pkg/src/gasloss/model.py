"""Instance data model: validation, normalization, the minimal gas measure,
and feasibility predicates.

An instance is an operations-by-resources usage matrix together with a
positive per-resource capacity vector.  Block vectors are plain float
arrays of per-operation counts; fractional counts are allowed (the LP
relaxation is the model of record, integrality is not modeled).
"""

from dataclasses import dataclass, field

import numpy as np

from . import lpcore
from .errors import (
    DuplicateName,
    EmptyInstance,
    InstanceError,
    LengthMismatch,
    NegativeUsage,
    NonPositiveCapacity,
    NumericalFailure,
)

FEASIBILITY_TOL = 1e-9  # relative, applied multiplicatively to capacities


def _frozen_array(a, ndim):
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise InstanceError(f"expected a {ndim}-dimensional array")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ResourceInstance:
    """Validated usage matrix W (operations x resources) with capacities B."""

    operation_names: tuple
    resource_names: tuple
    usage: np.ndarray
    capacities: np.ndarray
    excluded_resources: tuple = ()
    warnings: tuple = ()

    @property
    def num_operations(self):
        return len(self.operation_names)

    @property
    def num_resources(self):
        return len(self.resource_names)


@dataclass(frozen=True)
class NormalizedInstance:
    """Usage matrix with every capacity scaled to 1 (w'_ij = w_ij / B_j)."""

    operation_names: tuple
    resource_names: tuple
    matrix: np.ndarray

    def as_instance(self) -> ResourceInstance:
        """View with unit capacities, for reuse of instance-based analyses."""
        return ResourceInstance(
            self.operation_names,
            self.resource_names,
            self.matrix,
            _frozen_array(np.ones(self.matrix.shape[1]), 1),
        )


@dataclass(frozen=True)
class GasMeasure:
    """Per-operation nonnegative cost vector; a block is gas-feasible when
    the measure-weighted count total is at most 1."""

    costs: np.ndarray


@dataclass(frozen=True)
class SizeReport:
    """Largest 1-norm of any feasible block."""

    K: float


def instance_from_arrays(operation_names, resource_names, usage, capacities,
                         congesting=None, extra_excluded=()) -> ResourceInstance:
    """Validate raw arrays into a ResourceInstance.

    Non-congesting resources (congesting[j] is False) and resources named
    in extra_excluded are removed before any checks, and recorded.
    All-zero operation rows are dropped with a warning.
    """
    op_names = [str(s) for s in operation_names]
    res_names = [str(s) for s in resource_names]
    usage = np.atleast_2d(np.array(usage, dtype=float))
    capacities = np.array(capacities, dtype=float)
    if usage.shape != (len(op_names), len(res_names)):
        raise LengthMismatch(
            f"usage matrix shape {usage.shape} does not match "
            f"{len(op_names)} operations x {len(res_names)} resources")
    if capacities.shape != (len(res_names),):
        raise LengthMismatch("one capacity per resource required")

    for names, kind in ((op_names, "operation"), (res_names, "resource")):
        seen = set()
        for name in names:
            if not name:
                raise InstanceError(f"empty {kind} name")
            if name in seen:
                raise DuplicateName(f"duplicate {kind} name {name!r}")
            seen.add(name)

    if congesting is None:
        congesting = [True] * len(res_names)
    if len(congesting) != len(res_names):
        raise LengthMismatch("one congesting flag per resource required")
    unknown = set(extra_excluded) - set(res_names)
    if unknown:
        raise InstanceError(f"unknown resource names to exclude: {sorted(unknown)}")
    excluded = tuple(
        name for name, flag in zip(res_names, congesting)
        if not flag or name in set(extra_excluded))
    keep = [j for j, name in enumerate(res_names) if name not in excluded]
    res_names = [res_names[j] for j in keep]
    usage = usage[:, keep]
    capacities = capacities[keep]

    if not res_names:
        raise EmptyInstance("no congesting resources remain")
    bad = np.flatnonzero(capacities <= 0)
    if bad.size:
        raise NonPositiveCapacity(
            f"capacity of resource {res_names[bad[0]]!r} must be positive")
    if np.any(usage < 0):
        i, j = np.argwhere(usage < 0)[0]
        raise NegativeUsage(
            f"usage of operation {op_names[i]!r} on resource "
            f"{res_names[j]!r} is negative")

    warnings = []
    nonzero = np.any(usage > 0, axis=1)
    for i in np.flatnonzero(~nonzero):
        warnings.append(
            f"operation {op_names[i]!r} uses no resources and was dropped")
    op_names = [n for n, ok in zip(op_names, nonzero) if ok]
    usage = usage[nonzero]
    if not op_names:
        raise EmptyInstance("no operations with positive usage remain")

    return ResourceInstance(
        tuple(op_names), tuple(res_names),
        _frozen_array(usage, 2), _frozen_array(capacities, 1),
        excluded_resources=excluded, warnings=tuple(warnings))


def validate_instance(raw, extra_excluded=()) -> ResourceInstance:
    """Validate a parsed instance description (see the formats module).

    raw is a mapping with "resources": [{name, capacity, congesting?}]
    and "operations": [{name, usage: {resource-name: amount}}]; usage
    entries for unnamed resources default to 0.
    """
    try:
        resources = list(raw["resources"])
        operations = list(raw["operations"])
    except (KeyError, TypeError) as exc:
        raise InstanceError("instance needs 'resources' and 'operations'") from exc
    res_names = [str(r.get("name", "")) for r in resources]
    capacities = [r.get("capacity") for r in resources]
    if any(c is None for c in capacities):
        raise InstanceError("every resource needs a capacity")
    congesting = [bool(r.get("congesting", True)) for r in resources]
    op_names = [str(o.get("name", "")) for o in operations]
    usage = np.zeros((len(operations), len(resources)))
    index = {name: j for j, name in enumerate(res_names)}
    for i, op in enumerate(operations):
        for rname, amount in dict(op.get("usage", {})).items():
            if rname not in index:
                raise InstanceError(
                    f"operation {op_names[i]!r} uses unknown resource {rname!r}")
            usage[i, index[rname]] = float(amount)
    return instance_from_arrays(op_names, res_names, usage, capacities,
                                congesting, extra_excluded)


def normalize(instance: ResourceInstance) -> NormalizedInstance:
    """Divide each usage column by its capacity."""
    return NormalizedInstance(
        instance.operation_names, instance.resource_names,
        _frozen_array(instance.usage / instance.capacities, 2))


def minimal_gas_measure(instance: ResourceInstance) -> GasMeasure:
    """The pointwise-smallest representing measure: g_i = max_j w_ij / B_j."""
    g = np.max(instance.usage / instance.capacities, axis=1)
    return GasMeasure(_frozen_array(g, 1))


def represents(g: GasMeasure, instance: ResourceInstance) -> bool:
    """True iff g dominates the minimal measure pointwise, which is
    equivalent to g representing the instance."""
    costs = np.asarray(g.costs, dtype=float)
    if costs.shape[0] != instance.num_operations:
        raise LengthMismatch("one cost per operation required")
    minimal = minimal_gas_measure(instance).costs
    return bool(np.all(costs >= minimal - 1e-15 * np.abs(minimal)))


def is_feasible(instance: ResourceInstance, x) -> bool:
    """True iff the block x fits every resource capacity (relative slack
    FEASIBILITY_TOL absorbs LP round-off)."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != instance.num_operations:
        raise LengthMismatch("one count per operation required")
    used = x @ instance.usage
    return bool(np.all(used <= instance.capacities * (1 + FEASIBILITY_TOL)))


def gas_of(g: GasMeasure, x) -> float:
    """Total gas of a block under the measure."""
    costs = np.asarray(g.costs, dtype=float)
    x = np.asarray(x, dtype=float)
    if costs.shape != x.shape:
        raise LengthMismatch("measure and block lengths differ")
    return float(costs @ x)


def max_block_size(instance: ResourceInstance) -> SizeReport:
    """Largest 1-norm of any feasible block, by LP."""
    norm = normalize(instance)
    lp = lpcore.LinearProgram(
        objective=np.ones(instance.num_operations),
        matrix=norm.matrix.T,
        bounds=np.ones(instance.num_resources),
        senses=("<=",) * instance.num_resources,
        maximize=True)
    res = lpcore.solve_lp(lp)
    if res.status != "optimal":
        raise NumericalFailure(f"size LP ended with status {res.status}")
    return SizeReport(K=float(res.value))
