import numpy as np
import pytest

from cliffsim.circuits import CliffordCircuit, Geometry, IqpCircuit


@pytest.fixture
def rng():
    return np.random.default_rng(20251019)


@pytest.fixture
def bell_circuit():
    return CliffordCircuit(2, [[("H", 0)], [("CNOT", 0, 1)]])


@pytest.fixture
def chain_circuit():
    """1D brickwork of CNOTs on 8 qubits, depth 2."""
    geometry = Geometry((8,))
    layers = [[("CNOT", q, q + 1) for q in range(0, 7, 2)], [("CNOT", q, q + 1) for q in range(1, 7, 2)]]
    return CliffordCircuit(8, layers, geometry)


@pytest.fixture
def small_iqp():
    return IqpCircuit(3, [[("PHASE", (0,), 0.3), ("CNOT", (1, 2))], [("CCZ", (0, 1, 2))], [("CPHASE", (0, 2), 1.1)]])
