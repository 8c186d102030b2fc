import math
from typing import NamedTuple, Tuple

import numpy as np

from ..exceptions import ConfigError
from ..linalg.gf2 import iter_bits
from .geometry import Geometry, LayeredCircuit

IQP_ARITY = {"PHASE": 1, "CPHASE": 2, "CCZ": 3, "CNOT": 2}


class IqpGate(NamedTuple):
    kind: str
    qubits: Tuple[int, ...]
    theta: float = 0.0

    @classmethod
    def make(cls, kind: str, qubits, theta: float = 0.0) -> "IqpGate":
        kind = kind.upper()
        if kind == "T":
            kind, theta = "PHASE", math.pi / 4
        elif kind == "CZ":
            kind, theta = "CPHASE", math.pi
        if kind not in IQP_ARITY:
            raise ConfigError("unknown IQP gate {!r}".format(kind))
        qubits = tuple(int(q) for q in qubits)
        if len(qubits) != IQP_ARITY[kind]:
            raise ConfigError("{} takes {} qubit(s), got {}".format(kind, IQP_ARITY[kind], len(qubits)))
        if len(set(qubits)) != len(qubits):
            raise ConfigError("{} needs distinct qubits".format(kind))
        if kind == "CCZ":
            theta = math.pi
        elif kind == "CNOT":
            theta = 0.0
        return cls(kind, qubits, float(theta))

    @property
    def diagonal(self) -> bool:
        return self.kind != "CNOT"

    def local_diagonal(self) -> np.ndarray:
        """Phases on the local basis |q0 q1 ...> (q0 most significant)."""
        k = len(self.qubits)
        out = np.ones(2 ** k, dtype=complex)
        out[-1] = np.exp(1j * self.theta)
        return out

    def local_unitary(self) -> np.ndarray:
        if self.kind == "CNOT":
            return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
        return np.diag(self.local_diagonal())

    def __str__(self):
        qubits = " ".join(str(q) for q in self.qubits)
        if self.kind in ("PHASE", "CPHASE"):
            return "{} {!r} {}".format(self.kind, self.theta, qubits)
        return "{} {}".format(self.kind, qubits)


class IqpCircuit(LayeredCircuit):
    """Diagonal gates plus CNOTs, prepared and measured in the Hadamard basis."""

    def __init__(self, n: int, layers, geometry: Geometry = None):
        layers = [[g if isinstance(g, IqpGate) else IqpGate.make(*g) for g in layer] for layer in layers]
        super(IqpCircuit, self).__init__(n, layers, geometry)

    def propagate_z_backward(self, z: int, start: int) -> int:
        """Z-type string at layer ``start`` pulled back to the input.

        Diagonal gates commute with it; CNOT(c, t) maps Z_t to Z_c Z_t.
        """
        for t in range(start, 0, -1):
            gmap = self._gate_maps[t - 1]
            for q in list(iter_bits(z)):
                gate = gmap.get(q)
                if gate is not None and gate.kind == "CNOT" and q == gate.qubits[1]:
                    z ^= 1 << gate.qubits[0]
        return z
