"""Dense density-matrix reference simulation.

The state is kept as a (2,) * 2n tensor; qubit q lives on row axis n - 1 - q
and column axis 2n - 1 - q, so a flattened index has qubit 0 as its least
significant bit. Everything here is exponential in n and capped accordingly.
"""
import logging
from typing import NamedTuple, Sequence

import numpy as np

from ..circuits.clifford import CliffordCircuit
from ..circuits.iqp import IqpCircuit
from ..circuits.states import SIGMA, BlochRotation, MeasurementBasis, ProductState
from ..exceptions import SizeCapError, ToleranceError
from ..linalg.pauli import PauliString
from ..noise.noise import EVENT_KRAUS, Depolarizing, ErrorConfiguration, PauliChannel, survival_probability

logger = logging.getLogger(__name__)

MAX_QUBITS = 12
COLLISION_MAX_QUBITS = 6
PAULI_SUM_MAX_QUBITS = 10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
SUM_TOL = 1e-9

_I2 = np.eye(2, dtype=complex)
_PAULIS = (_I2,) + SIGMA
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

CLIFFORD_UNITARIES = {
    "H": _H,
    "S": np.diag([1, 1j]),
    "SDG": np.diag([1, -1j]),
    "X": SIGMA[0],
    "Y": SIGMA[1],
    "Z": SIGMA[2],
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


def _check_size(n: int, cap: int = MAX_QUBITS, what: str = "dense oracle"):
    if n > cap:
        raise SizeCapError("{} is capped at {} qubits, got {}".format(what, cap, n))


class DensityMatrix(object):
    """rho on n <= 12 qubits; gate matrices take their first qubit as the most significant."""

    def __init__(self, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        dim = matrix.shape[0]
        n = dim.bit_length() - 1
        if matrix.shape != (dim, dim) or dim != 1 << n:
            raise ValueError("density matrix must be 2^n x 2^n, got {}".format(matrix.shape))
        _check_size(n)
        self.n = n
        self.tensor = matrix.reshape((2,) * (2 * n))

    @classmethod
    def product(cls, state: ProductState) -> "DensityMatrix":
        rho = np.ones((1, 1), dtype=complex)
        _check_size(state.n)
        for q in reversed(range(state.n)):
            rho = np.kron(rho, state.qubit_density(q))
        return cls(rho)

    @property
    def matrix(self) -> np.ndarray:
        dim = 1 << self.n
        return self.tensor.reshape(dim, dim)

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.matrix.copy())

    def _row_axes(self, qubits: Sequence[int]):
        return [self.n - 1 - q for q in qubits]

    def _col_axes(self, qubits: Sequence[int]):
        return [2 * self.n - 1 - q for q in qubits]

    @staticmethod
    def _contract(tensor, op, axes):
        k = len(axes)
        op = np.asarray(op, dtype=complex).reshape((2,) * (2 * k))
        out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), axes))
        return np.moveaxis(out, list(range(k)), axes)

    def _conjugated(self, op, qubits):
        t = self._contract(self.tensor, op, self._row_axes(qubits))
        return self._contract(t, np.conj(op), self._col_axes(qubits))

    def apply_unitary(self, u, qubits: Sequence[int]) -> "DensityMatrix":
        self.tensor = self._conjugated(u, qubits)
        return self

    def apply_kraus(self, kraus, qubits: Sequence[int]) -> "DensityMatrix":
        self.tensor = sum(self._conjugated(k, qubits) for k in kraus)
        return self

    def apply_pauli_mixture(self, q: int, weights) -> "DensityMatrix":
        """sum_P w_P P rho P over (I, X, Y, Z)."""
        self.tensor = sum(w * self._conjugated(p, (q,)) for w, p in zip(weights, _PAULIS) if w)
        return self

    def maximally_mix(self, q: int) -> "DensityMatrix":
        return self.apply_pauli_mixture(q, (0.25, 0.25, 0.25, 0.25))

    def depolarize(self, q: int, gamma: float) -> "DensityMatrix":
        g = gamma / 4
        return self.apply_pauli_mixture(q, (1 - 3 * g, g, g, g))

    def pauli_channel(self, q: int, channel: PauliChannel) -> "DensityMatrix":
        return self.apply_pauli_mixture(q, (channel.p_i, channel.p_x, channel.p_y, channel.p_z))

    def probabilities(self, basis: MeasurementBasis) -> np.ndarray:
        if basis.n != self.n:
            raise ValueError("basis has {} qubits, state has {}".format(basis.n, self.n))
        rho = self.copy()
        for q in range(self.n):
            rho.apply_unitary(basis.measurement_unitary(q), (q,))
        p = np.real(np.diagonal(rho.matrix)).copy()
        if p.min() < -SUM_TOL or abs(p.sum() - 1) > SUM_TOL:
            raise ToleranceError("oracle distribution is not normalized")
        return np.clip(p, 0.0, None)

    def check(self) -> "DensityMatrix":
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ToleranceError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > TRACE_TOL:
            raise ToleranceError("density matrix trace drifted to {}".format(np.trace(m)))
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < -PSD_TOL:
            raise ToleranceError("density matrix has a negative eigenvalue")
        return self


def _noise_layer(rho: DensityMatrix, t: int, n: int, model, sites):
    """Noise layer ``t``: the fixed configuration when given, else the CPTP channel."""
    if sites is not None:
        for q, tag in sites.get(t, ()):
            if tag is None:
                rho.maximally_mix(q)
            else:
                rho.apply_kraus(EVENT_KRAUS[tag], (q,))
        return
    if model is None:
        return
    if isinstance(model, Depolarizing):
        for q in range(n):
            rho.depolarize(q, model.gamma)
    else:
        channel = model.as_pauli_channel()
        for q in range(n):
            rho.pauli_channel(q, channel)


def _sites_by_layer(config: ErrorConfiguration, c):
    if config is None:
        return None
    if config.n != c.n or config.depth != c.depth:
        raise ValueError("configuration does not fit the circuit")
    sites = {}
    for (t, q), tag in config.items():
        sites.setdefault(t, []).append((q, tag))
    return sites


def _run(c, rho: DensityMatrix, unitary_of, model, config) -> DensityMatrix:
    sites = _sites_by_layer(config, c)
    _noise_layer(rho, 0, c.n, model, sites)
    for t, layer in enumerate(c.layers, 1):
        for gate in layer:
            rho.apply_unitary(unitary_of(gate), gate.qubits)
        _noise_layer(rho, t, c.n, model, sites)
    return rho


def _clifford_unitary(gate):
    return CLIFFORD_UNITARIES[gate.kind]


def exact_noisy_distribution(c: CliffordCircuit, state: ProductState, basis: MeasurementBasis,
                             model=None, config: ErrorConfiguration = None) -> np.ndarray:
    """Output distribution of the noisy circuit; ``config`` fixes which sites fire."""
    _check_size(c.n)
    rho = _run(c, DensityMatrix.product(state), _clifford_unitary, model, config)
    return rho.probabilities(basis)


def exact_iqp_distribution(c: IqpCircuit, model=None, config: ErrorConfiguration = None) -> np.ndarray:
    _check_size(c.n)
    rho = DensityMatrix.product(ProductState.uniform(c.n, "|+>"))
    rho = _run(c, rho, lambda gate: gate.local_unitary(), model, config)
    return rho.probabilities(MeasurementBasis.named(["X"] * c.n))


def exact_ccc_distribution(c: CliffordCircuit, rotation: BlochRotation, model=None,
                           config: ErrorConfiguration = None) -> np.ndarray:
    """U^n C U^dagger^n on |0..0> simulated gate by gate, Z readout."""
    _check_size(c.n)
    u = rotation.unitary()
    rho = DensityMatrix.product(ProductState.uniform(c.n, "|0>"))
    for q in range(c.n):
        rho.apply_unitary(u.conj().T, (q,))
    rho = _run(c, rho, _clifford_unitary, model, config)
    for q in range(c.n):
        rho.apply_unitary(u, (q,))
    return rho.probabilities(MeasurementBasis.computational(c.n))


class TraceDistance(NamedTuple):
    l1: float
    tv: float


def tvd(p, q) -> TraceDistance:
    """Both the 1-norm and the total variation distance (half of it)."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions differ in length: {} vs {}".format(p.shape, q.shape))
    l1 = float(np.abs(p - q).sum())
    return TraceDistance(l1, l1 / 2)


def collision_probability(c: CliffordCircuit, model, basis: MeasurementBasis = None) -> float:
    """E_y sum_x p_y(x)^2 over all computational-basis inputs |y>."""
    _check_size(c.n, COLLISION_MAX_QUBITS, "collision probability")
    basis = basis or MeasurementBasis.computational(c.n)
    total = 0.0
    for y in range(2 ** c.n):
        state = ProductState.named(["|1>" if (y >> q) & 1 else "|0>" for q in range(c.n)])
        p = exact_noisy_distribution(c, state, basis, model)
        total += float(np.dot(p, p))
    return total / 2 ** c.n


def anticoncentration_bound(n: int, layers: int, gamma: float) -> float:
    """2^-n [1 + (1-gamma)^L L exp(3 (1-gamma)^L n)] with L noise layers."""
    decay = (1.0 - gamma) ** layers
    return float(2.0 ** -n * (1.0 + decay * layers * np.exp(3.0 * decay * n)))


def collision_pauli_bound(c: CliffordCircuit, model: Depolarizing) -> float:
    """2^-n sum over Z-type s of P(s survives)^2, s taken at the output.

    Dominates the Z-basis collision probability averaged over computational inputs.
    """
    _check_size(c.n, PAULI_SUM_MAX_QUBITS, "Pauli-sum collision bound")
    total = 0.0
    for z in range(2 ** c.n):
        s = c.conjugate_backward(PauliString(c.n, 0, z))
        total += survival_probability(c, s.hermitian(), model.gamma) ** 2
    return total / 2 ** c.n
