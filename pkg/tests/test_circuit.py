import math

import numpy as np
import pytest

from cliffsim.circuits import BlochRotation, CliffordCircuit, CliffordGate, Geometry, IqpCircuit, IqpGate, \
    MeasurementBasis, ProductState, apply_gate, canonicalize_conjugated_clifford, random_clifford_circuit
from cliffsim.exceptions import ConfigError
from cliffsim.linalg.pauli import PauliString

P = PauliString.from_string

_ONE = {
    "H": np.array([[1, 1], [1, -1]]) / math.sqrt(2),
    "S": np.diag([1, 1j]),
    "SDG": np.diag([1, -1j]),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}


def gate_matrix(gate: CliffordGate, n: int) -> np.ndarray:
    """Dense unitary with qubit 0 as the least significant index bit."""
    dim = 2 ** n
    u = np.zeros((dim, dim), dtype=complex)
    if gate.kind in _ONE:
        (q,) = gate.qubits
        for col in range(dim):
            b = (col >> q) & 1
            for out in (0, 1):
                u[(col & ~(1 << q)) | (out << q), col] += _ONE[gate.kind][out, b]
        return u
    a, b = gate.qubits
    for col in range(dim):
        ba, bb = (col >> a) & 1, (col >> b) & 1
        if gate.kind == "CNOT":
            u[col ^ (ba << b), col] = 1
        elif gate.kind == "CZ":
            u[col, col] = -1 if ba and bb else 1
        else:
            row = col & ~((1 << a) | (1 << b)) | (bb << a) | (ba << b)
            u[row, col] = 1
    return u


def circuit_matrix(c: CliffordCircuit) -> np.ndarray:
    u = np.eye(2 ** c.n, dtype=complex)
    for _, gate in c.gates():
        u = gate_matrix(gate, c.n) @ u
    return u


class TestApplyGate:
    @pytest.mark.parametrize("kind,qubits,before,after", [
        ("H", (0,), "X", "+Z"),
        ("H", (0,), "Y", "-Y"),
        ("S", (0,), "X", "+Y"),
        ("CNOT", (0, 1), "XI", "+XX"),
        ("CNOT", (0, 1), "IZ", "+ZZ"),
        ("CZ", (0, 1), "XI", "+XZ"),
        ("SWAP", (0, 1), "XZ", "+ZX"),
    ])
    def test_examples(self, kind, qubits, before, after):
        p = P(before)
        out = PauliString(p.n, *apply_gate(kind, qubits, p.x, p.z, p.phase))
        assert out.to_string() == after

    @pytest.mark.parametrize("kind", ["H", "S", "SDG", "X", "Y", "Z", "CNOT", "CZ", "SWAP"])
    def test_matches_dense_conjugation(self, kind, rng):
        gate = CliffordGate.make(kind, *((1,) if kind in _ONE else (2, 0)))
        u = gate_matrix(gate, 3)
        for _ in range(20):
            p = PauliString(3, int(rng.integers(8)), int(rng.integers(8)), int(rng.integers(4)))
            out = PauliString(3, *apply_gate(gate.kind, gate.qubits, p.x, p.z, p.phase))
            assert np.allclose(out.to_matrix(), u @ p.to_matrix() @ u.conj().T)

    def test_rejects_bad_gates(self):
        with pytest.raises(ConfigError, match="unknown"):
            CliffordGate.make("T", 0)
        with pytest.raises(ConfigError, match="distinct"):
            CliffordGate.make("CNOT", 1, 1)
        with pytest.raises(ConfigError, match="takes 2"):
            CliffordGate.make("CZ", 0)


class TestCircuitConjugation:
    def test_bell_circuit(self, bell_circuit):
        assert bell_circuit.conjugate_forward(P("ZI")).to_string() == "+XX"
        assert bell_circuit.conjugate_forward(P("IZ")).to_string() == "+ZZ"
        assert bell_circuit.conjugate_forward(P("ZI"), upto=1).to_string() == "+XI"

    def test_backward_undoes_forward(self, rng):
        c = random_clifford_circuit(5, 6, rng)
        for _ in range(20):
            p = PauliString(5, int(rng.integers(32)), int(rng.integers(32)), int(rng.integers(4)))
            assert c.conjugate_backward(c.conjugate_forward(p)) == p
            mid = c.conjugate_forward(p, upto=3)
            assert c.conjugate_backward(mid, start=3) == p

    def test_matches_dense_circuit(self, rng):
        c = random_clifford_circuit(3, 5, rng)
        u = circuit_matrix(c)
        for _ in range(10):
            p = PauliString(3, int(rng.integers(8)), int(rng.integers(8)))
            assert np.allclose(c.conjugate_forward(p).to_matrix(), u @ p.to_matrix() @ u.conj().T)

    def test_inverse_layers(self, rng):
        c = random_clifford_circuit(3, 4, rng)
        inv = CliffordCircuit(3, c.inverse_layers())
        assert np.allclose(circuit_matrix(inv) @ circuit_matrix(c), np.eye(8))

    def test_size_checks(self, bell_circuit):
        with pytest.raises(ValueError, match="qubits"):
            bell_circuit.conjugate_forward(P("X"))
        with pytest.raises(ValueError, match="layer index"):
            bell_circuit.conjugate_forward(P("XI"), upto=5)


class TestLightcone:
    def test_frontiers(self, chain_circuit):
        assert chain_circuit.lightcone_frontiers(0) == [{0}, {0, 1}, {0, 1, 2}]
        assert chain_circuit.forward_lightcone(3) == {1, 2, 3, 4}

    def test_profiles(self, chain_circuit):
        assert chain_circuit.weight_profile(P("XIIIIIII")) == [1, 2, 3]
        assert chain_circuit.weight_profile(P("IIIIIIIZ")) == [1, 2, 3]
        assert chain_circuit.support_profile(P("XIIIIIII"))[-1] == 0b111

    def test_weight_profile_is_bounded_by_lightcone(self, rng):
        g = Geometry((10,))
        c = random_clifford_circuit(10, 5, rng, g)
        for q in range(10):
            cone = c.lightcone_frontiers(q)
            for t, mask in enumerate(c.support_profile(PauliString.single(10, q, "Y"))):
                assert {b for b in range(10) if mask >> b & 1} <= cone[t]


class TestCircuitValidation:
    def test_overlapping_gates(self):
        with pytest.raises(ConfigError, match="overlap"):
            CliffordCircuit(3, [[("H", 0), ("CNOT", 0, 1)]])

    def test_non_neighbours_under_geometry(self):
        with pytest.raises(ConfigError, match="non-neighbours"):
            CliffordCircuit(4, [[("CNOT", 0, 2)]], Geometry((4,)))

    def test_lattice_size_mismatch(self):
        with pytest.raises(ConfigError, match="sites"):
            CliffordCircuit(4, [[("H", 0)]], Geometry((2, 3)))

    def test_empty(self):
        with pytest.raises(ConfigError, match="no layers"):
            CliffordCircuit(2, [])

    def test_noise_layers(self, bell_circuit):
        assert (bell_circuit.depth, bell_circuit.noise_layers) == (2, 3)


class TestIqp:
    def test_aliases(self):
        assert IqpGate.make("T", (0,)) == IqpGate("PHASE", (0,), math.pi / 4)
        assert IqpGate.make("CZ", (0, 1)).theta == pytest.approx(math.pi)
        assert IqpGate.make("CCZ", (0, 1, 2)).local_unitary()[7, 7] == pytest.approx(-1)

    def test_z_propagation_through_cnot(self, small_iqp):
        assert small_iqp.propagate_z_backward(0b100, 3) == 0b110
        assert small_iqp.propagate_z_backward(0b010, 3) == 0b010
        assert small_iqp.propagate_z_backward(0b100, 0) == 0b100

    def test_bad_gate(self):
        with pytest.raises(ConfigError):
            IqpCircuit(2, [[("H", (0,))]])


class TestStates:
    def test_named_and_density(self):
        s = ProductState.named(["|+>", "|1>"])
        assert np.allclose(s.qubit_density(0), np.full((2, 2), 0.5))
        assert np.allclose(s.qubit_density(1), np.diag([0, 1]))

    def test_rejects_long_bloch_vectors(self):
        with pytest.raises(ConfigError, match="longer"):
            ProductState([(1.0, 1.0, 0.0)])

    def test_measurement_unitary_rows(self):
        b = MeasurementBasis.named(["X"])
        w = b.measurement_unitary(0)
        plus = np.array([1, 1]) / math.sqrt(2)
        assert abs(w @ plus)[0] == pytest.approx(1)
        with pytest.raises(ConfigError, match="unit"):
            MeasurementBasis([(0.5, 0, 0)])

    def test_hadamard_canonicalization(self, bell_circuit):
        c, state, basis = canonicalize_conjugated_clifford(BlochRotation.hadamard(), bell_circuit)
        assert c is bell_circuit
        assert np.allclose(state.bloch, [[1, 0, 0], [1, 0, 0]])
        assert np.allclose(basis.axes, state.bloch)

    def test_rotation_parsing(self):
        r = BlochRotation.parse("0,0,1,3.141592653589793")
        assert np.allclose(r.unitary(), np.diag([-1j, 1j]))
        with pytest.raises(ConfigError):
            BlochRotation.parse("1,2")
        with pytest.raises(ConfigError, match="unit"):
            BlochRotation((1, 1, 0), 0.3)
