import pytest

from gasloss import model


@pytest.fixture
def table1():
    """Four operations, two resources, capacities (15, 3)."""
    return model.instance_from_arrays(
        ["Op1", "Op2", "Op3", "Op4"], ["r1", "r2"],
        [[2, 1], [6, 2], [9, 1], [10, 1]], [15, 3])


@pytest.fixture
def table3():
    """Three operations on two unit-capacity resources; worst case 2."""
    return model.instance_from_arrays(
        ["Op1", "Op2", "Op3"], ["r1", "r2"],
        [[0, 1], [1, 1], [1, 0]], [1, 1])


@pytest.fixture
def figure1():
    """Two orthogonal unit operations with capacities (30, 6)."""
    return model.instance_from_arrays(
        ["gas_unit", "blob_unit"], ["gas", "blobs"],
        [[1, 0], [0, 1]], [30, 6])
