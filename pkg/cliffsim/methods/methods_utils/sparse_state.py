"""Computational-basis sparse state vectors for IQP+CNOT evolution.

The support is a (K, m) uint8 bit matrix over the component's qubits plus K
complex amplitudes. Diagonal gates only rephase, CNOT and X only permute keys,
so K never changes.
"""
import numpy as np

from ...exceptions import ToleranceError

NORM_TOL = 1e-9


class SparseState(object):

    def __init__(self, keys: np.ndarray, amps: np.ndarray, qubits):
        keys = np.asarray(keys, dtype=np.uint8)
        if keys.ndim != 2 or keys.shape[0] != len(amps) or keys.shape[1] != len(qubits):
            raise ValueError("keys must have shape (len(amps), len(qubits))")
        self.keys = keys
        self.amps = np.asarray(amps, dtype=complex)
        self.qubits = tuple(qubits)
        self.local = {q: i for i, q in enumerate(self.qubits)}

    def __len__(self):
        return self.amps.shape[0]

    def copy(self) -> "SparseState":
        return SparseState(self.keys.copy(), self.amps.copy(), self.qubits)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def check_norm(self):
        drift = abs(self.norm() - 1.0)
        if drift > NORM_TOL:
            raise ToleranceError("sparse state norm drifted by {:.3g}".format(drift))

    def flip(self, q: int):
        """In-place X on global qubit ``q``."""
        self.keys[:, self.local[q]] ^= 1

    def phase_flip(self, q: int):
        self.amps = np.where(self.keys[:, self.local[q]] == 1, -self.amps, self.amps)

    def apply(self, gate):
        cols = [self.local[q] for q in gate.qubits]
        if gate.kind == "CNOT":
            self.keys[:, cols[1]] ^= self.keys[:, cols[0]]
            return
        hit = np.all(self.keys[:, cols] == 1, axis=1)
        self.amps = np.where(hit, self.amps * np.exp(1j * gate.theta), self.amps)

    def to_dense(self) -> np.ndarray:
        """2^m vector with local qubit 0 as the least significant index bit."""
        m = len(self.qubits)
        index = self.keys.astype(np.int64) @ (1 << np.arange(m, dtype=np.int64))
        out = np.zeros(2 ** m, dtype=complex)
        np.add.at(out, index, self.amps)
        return out

    def sample_hadamard(self, rng: np.random.Generator) -> np.ndarray:
        """Measure every qubit in the X basis, one qubit at a time in ascending order.

        p(x_A) = 2^-|A| sum over groups of keys that agree outside A of
        |sum_e a_e (-1)^(x_A . k_e,A)|^2.
        """
        m = len(self.qubits)
        bits = np.zeros(m, dtype=np.uint8)
        signs = np.ones(len(self.amps))
        for k in range(m):
            rest = self.keys[:, k + 1:]
            if rest.shape[1]:
                _, groups = np.unique(rest, axis=0, return_inverse=True)
                groups = groups.reshape(-1)
            else:
                groups = np.zeros(len(self.amps), dtype=np.int64)
            flip = 1.0 - 2.0 * self.keys[:, k]
            probs = []
            for z in (0, 1):
                a = self.amps * signs * (flip if z else 1.0)
                re = np.bincount(groups, weights=a.real)
                im = np.bincount(groups, weights=a.imag)
                probs.append(float(np.sum(re * re + im * im)) / 2 ** (k + 1))
            total = probs[0] + probs[1]
            if total <= 0:
                raise ToleranceError("sampled prefix has zero probability")
            bits[k] = rng.random() >= probs[0] / total
            if bits[k]:
                signs = signs * flip
        return bits


def evolve_sparse_state(c, psi: SparseState, x_events=(), z_flips=()) -> SparseState:
    """Run ``psi`` through the layers of ``c`` with in-place X and Z events.

    Events are (noise layer, qubit) pairs; layer 0 precedes the first gate
    layer. Gates that only partly overlap the state's qubits act on qubits still
    outside every lightcone, which are maximally mixed, and are skipped.
    """
    psi = psi.copy()
    xs, zs = {}, {}
    for t, q in x_events:
        if q in psi.local:
            xs.setdefault(t, []).append(q)
    for t, q in z_flips:
        if q in psi.local:
            zs.setdefault(t, []).append(q)

    def noise(t):
        for q in zs.get(t, ()):
            psi.phase_flip(q)
        for q in xs.get(t, ()):
            psi.flip(q)

    noise(0)
    for t, layer in enumerate(c.layers, 1):
        for gate in layer:
            if all(q in psi.local for q in gate.qubits):
                psi.apply(gate)
        noise(t)
    psi.check_norm()
    return psi
