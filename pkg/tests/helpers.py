"""Shared test utilities: seeded instance generation and independent
brute-force oracles kept deliberately separate from the library code."""

import itertools

import numpy as np

from gasloss import formats, model


def random_instance(seed, max_ops=6, max_res=4):
    """Seeded small instance via the package's deterministic generator."""
    num_ops = 1 + seed % max_ops
    num_res = 1 + (seed // max_ops) % max_res
    doc = formats.random_instance_doc(num_ops, num_res, density=1.0,
                                      seed=seed * 1_000_003 + 17)
    return doc.to_instance()


def dual_vertex_oracle(weights, bounds, objective):
    """Brute-force oracle for max objective @ x s.t. weights @ x <= bounds,
    x >= 0, valid for exactly two resources.

    Works on the 2-variable dual min bounds @ y s.t. weights^T-rows
    y >= objective, y >= 0, by enumerating pairwise intersections of the
    constraint lines and taking the best feasible point.
    """
    W = np.asarray(weights, dtype=float)
    B = np.asarray(bounds, dtype=float)
    c = np.asarray(objective, dtype=float)
    assert W.shape[1] == 2
    # constraint rows a @ y >= b: the m operation rows plus y1,y2 >= 0
    rows = [(W[i], c[i]) for i in range(W.shape[0])]
    rows.append((np.array([1.0, 0.0]), 0.0))
    rows.append((np.array([0.0, 1.0]), 0.0))
    best = np.inf
    for (a1, b1), (a2, b2) in itertools.combinations(rows, 2):
        mat = np.array([a1, a2])
        if abs(np.linalg.det(mat)) < 1e-12:
            continue
        y = np.linalg.solve(mat, np.array([b1, b2]))
        if np.any(y < -1e-9):
            continue
        if all(a @ y >= b - 1e-9 for a, b in rows):
            best = min(best, float(B @ y))
    return best


def feasible_region_gas_max(instance):
    """Oracle for the worst-case loss: the dual-vertex maximum of total
    minimal-measure gas over the feasible region (two resources only)."""
    g = model.minimal_gas_measure(instance).costs
    return dual_vertex_oracle(instance.usage, instance.capacities, g)
