"""Instance and profile file formats, bundled presets, and generators.

The canonical instance format is a JSON document:

    {
      "notes": ["optional free-text lines"],
      "resources": [{"name": "gas", "capacity": 15, "congesting": true}],
      "operations": [{"name": "Op1", "usage": {"gas": 2}}]
    }

Missing usage entries mean 0; "congesting": false marks a resource that
is tracked and paid for but never binding, so it is excluded from the
analysis.  Serialization is canonical (two-space indent, keys in schema
order, zero usages omitted), so parse -> serialize -> parse is the
identity.

A simple delimited-table import is also supported: a header row with
the resource names, one row per operation, and a final "capacity" row.

Frequency profiles are flat JSON mappings operation-name -> nonnegative
weight; weights are renormalized to the simplex on load.

The random generator uses splitmix64 so fixtures are reproducible from
the seed alone, independent of any library RNG.
"""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import model, partition
from .errors import InstanceError

_MASK64 = (1 << 64) - 1


@dataclass
class InstanceDoc:
    """Parsed instance file, prior to validation and column exclusion."""

    resources: list          # (name, capacity, congesting) triples
    operations: list         # (name, {resource-name: usage}) pairs
    notes: list = field(default_factory=list)

    def raw(self):
        return {
            "resources": [
                {"name": n, "capacity": c, "congesting": flag}
                for n, c, flag in self.resources],
            "operations": [
                {"name": n, "usage": dict(u)} for n, u in self.operations],
        }

    def to_instance(self, extra_excluded=()) -> model.ResourceInstance:
        return model.validate_instance(self.raw(), extra_excluded)


def parse_instance(text: str) -> InstanceDoc:
    """Parse canonical JSON or the delimited-table format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(text)
    return _parse_table(text)


def _parse_json(text: str) -> InstanceDoc:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed instance file: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceError("instance file must be a JSON object")
    try:
        resources = [
            (str(r["name"]), float(r["capacity"]),
             bool(r.get("congesting", True)))
            for r in doc.get("resources", [])]
        res_order = [n for n, _, _ in resources]
        operations = []
        for op in doc.get("operations", []):
            usage = {str(k): float(v) for k, v in op.get("usage", {}).items()}
            ordered = {}
            for n in res_order:
                if n in usage:
                    value = usage.pop(n)
                    if value != 0:
                        ordered[n] = value
            if usage:
                raise InstanceError(
                    f"operation {op.get('name')!r} uses unknown "
                    f"resources {sorted(usage)}")
            operations.append((str(op["name"]), ordered))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(f"malformed instance file: {exc}") from exc
    notes = [str(s) for s in doc.get("notes", [])]
    return InstanceDoc(resources, operations, notes)


def _parse_table(text: str) -> InstanceDoc:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(
        cell.strip() for cell in r)]
    if len(rows) < 3:
        raise InstanceError("table needs a header, operations, and capacities")
    res_names = [c.strip() for c in rows[0][1:]]
    operations = []
    capacities = None
    for row in rows[1:]:
        name = row[0].strip()
        try:
            values = [float(c) for c in row[1:1 + len(res_names)]]
        except ValueError as exc:
            raise InstanceError(f"non-numeric entry in row {name!r}") from exc
        if len(values) != len(res_names):
            raise InstanceError(f"row {name!r} has the wrong width")
        if name.lower() == "capacity":
            capacities = values
        else:
            operations.append(
                (name, {rn: v for rn, v in zip(res_names, values) if v != 0}))
    if capacities is None:
        raise InstanceError("missing 'capacity' row")
    resources = [(n, c, True) for n, c in zip(res_names, capacities)]
    return InstanceDoc(resources, operations)


def _format_number(x: float):
    return int(x) if float(x).is_integer() and abs(x) < 1e15 else x


def serialize_instance(doc: InstanceDoc) -> str:
    out = {}
    if doc.notes:
        out["notes"] = list(doc.notes)
    out["resources"] = [
        {"name": n, "capacity": _format_number(c), "congesting": flag}
        for n, c, flag in doc.resources]
    out["operations"] = [
        {"name": n, "usage": {k: _format_number(v) for k, v in u.items()}}
        for n, u in doc.operations]
    return json.dumps(out, indent=2) + "\n"


def load_instance_doc(path) -> InstanceDoc:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_instance(fh.read())
    except OSError as exc:
        raise InstanceError(f"no such instance file: {path}") from exc


def load_profile(path, instance: model.ResourceInstance) -> np.ndarray:
    """Load a frequency profile and renormalize it to the simplex."""
    weights = _load_mapping(path, instance)
    total = weights.sum()
    if total <= 0:
        raise InstanceError(f"profile {path} has no positive weight")
    return weights / total


def load_bounds(path, instance: model.ResourceInstance) -> np.ndarray:
    """Load per-operation bounds for range mode (not renormalized)."""
    return _load_mapping(path, instance)


def _load_mapping(path, instance):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InstanceError(f"no such profile file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed profile file: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceError("profile must be a JSON object")
    names = set(instance.operation_names)
    unknown = sorted(set(doc) - names)
    if unknown:
        raise InstanceError(f"profile names unknown operations: {unknown}")
    out = np.zeros(instance.num_operations)
    for i, name in enumerate(instance.operation_names):
        value = float(doc.get(name, 0.0))
        if value < 0:
            raise InstanceError(f"negative weight for operation {name!r}")
        out[i] = value
    return out


# ---------------------------------------------------------------------------
# Generators and presets


class TinyRng:
    """splitmix64: next = gamma-stepped state mixed by two xor-shifts.

    state += 0x9E3779B97F4A7C15; z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
    z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next_u64() % n

    def uniform(self) -> float:
        return self.next_u64() / 2.0 ** 64


def random_instance_doc(num_ops: int, num_resources: int,
                        density: float = 1.0, seed: int = 0) -> InstanceDoc:
    """Seeded-deterministic instance: usage entries from {0..10} (kept
    with probability `density`), capacities from {1..10}; all-zero
    operation rows are re-rolled."""
    if not 0 < density <= 1:
        raise InstanceError("density must be in (0, 1]")
    if num_ops < 1 or num_resources < 1:
        raise InstanceError("need at least one operation and one resource")
    rng = TinyRng(seed)
    res_names = [f"res{j + 1}" for j in range(num_resources)]
    capacities = [float(1 + rng.below(10)) for _ in range(num_resources)]
    operations = []
    for i in range(num_ops):
        while True:
            row = []
            for _ in range(num_resources):
                value = rng.below(11)
                if density < 1 and rng.uniform() >= density:
                    value = 0
                row.append(float(value))
            if any(row):
                break
        operations.append(
            (f"op{i + 1}",
             {rn: v for rn, v in zip(res_names, row) if v != 0}))
    resources = [(n, c, True) for n, c in zip(res_names, capacities)]
    return InstanceDoc(resources, operations)


def ecp_instance_doc(elements, epsilon: float) -> InstanceDoc:
    """The equal-cardinality-partition reduction instance as a file doc."""
    ecp = partition.generate_ecp(elements, epsilon)
    inst = ecp.instance
    resources = [(n, float(c), True)
                 for n, c in zip(inst.resource_names, inst.capacities)]
    operations = []
    for i, name in enumerate(inst.operation_names):
        row = inst.usage[i]
        operations.append(
            (name, {rn: float(v)
                    for rn, v in zip(inst.resource_names, row) if v != 0}))
    notes = [f"reduction instance for elements {list(ecp.elements)} "
             f"with epsilon {ecp.epsilon}"]
    return InstanceDoc(resources, operations, notes)


def preset_doc(name: str) -> InstanceDoc:
    try:
        return _PRESETS[name]()
    except KeyError:
        raise InstanceError(
            f"unknown preset {name!r}; choose from {sorted(_PRESETS)}")


def _preset_table1():
    return InstanceDoc(
        resources=[("r1", 15.0, True), ("r2", 3.0, True)],
        operations=[("Op1", {"r1": 2.0, "r2": 1.0}),
                    ("Op2", {"r1": 6.0, "r2": 2.0}),
                    ("Op3", {"r1": 9.0, "r2": 1.0}),
                    ("Op4", {"r1": 10.0, "r2": 1.0})])


def _preset_table3():
    # A published caption for this example evaluates the mix
    # (5%, 80%, 15%) at payoff 0.85 and loss 20/17, but the maximizing
    # best reply earns 0.95 on the first resource, so the loss is 20/19.
    return InstanceDoc(
        resources=[("r1", 1.0, True), ("r2", 1.0, True)],
        operations=[("Op1", {"r2": 1.0}),
                    ("Op2", {"r1": 1.0, "r2": 1.0}),
                    ("Op3", {"r1": 1.0})],
        notes=["for the mix (5%, 80%, 15%) the best-reply payoff is 0.95 "
               "(loss 20/19), not the 0.85 / 20/17 sometimes quoted for "
               "this example"])


def _preset_figure1():
    # Two orthogonal unit operations with capacities (30, 6).  Published
    # variants of this two-resource example disagree on the gas cap
    # (36M prose vs 36 vs 30 in figure labels); none is treated as
    # ground truth, and the loss factor of 2 is independent of the
    # choice of positive capacities.
    return InstanceDoc(
        resources=[("gas", 30.0, True), ("blobs", 6.0, True)],
        operations=[("gas_unit", {"gas": 1.0}),
                    ("blob_unit", {"blobs": 1.0})],
        notes=["capacities follow one of several mutually inconsistent "
               "published variants of this example; the loss factor of 2 "
               "does not depend on the capacity values"])


_PRESETS = {
    "table1": _preset_table1,
    "table3": _preset_table3,
    "figure1": _preset_figure1,
}
