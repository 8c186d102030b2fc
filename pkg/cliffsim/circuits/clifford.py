"""Clifford circuits and Heisenberg-picture Pauli conjugation.

Conjugation acts on the packed (x, z, phase) form of a Pauli string and only
visits gates that touch its current support, so the cost of pushing a local
operator through a wide circuit scales with its lightcone, not with n.
"""
from typing import List, NamedTuple, Tuple

from ..exceptions import ConfigError
from ..linalg.gf2 import iter_bits, popcount
from ..linalg.pauli import PauliString
from .geometry import Geometry, LayeredCircuit

ONE_QUBIT_KINDS = ("H", "S", "SDG", "X", "Y", "Z")
TWO_QUBIT_KINDS = ("CNOT", "CZ", "SWAP")
CLIFFORD_KINDS = ONE_QUBIT_KINDS + TWO_QUBIT_KINDS

_INVERSE = {"S": "SDG", "SDG": "S"}


class CliffordGate(NamedTuple):
    kind: str
    qubits: Tuple[int, ...]

    @classmethod
    def make(cls, kind: str, *qubits: int) -> "CliffordGate":
        kind = kind.upper()
        if kind not in CLIFFORD_KINDS:
            raise ConfigError("unknown Clifford gate {!r}".format(kind))
        arity = 1 if kind in ONE_QUBIT_KINDS else 2
        if len(qubits) != arity:
            raise ConfigError("{} takes {} qubit(s), got {}".format(kind, arity, len(qubits)))
        if arity == 2 and qubits[0] == qubits[1]:
            raise ConfigError("{} needs two distinct qubits".format(kind))
        return cls(kind, tuple(int(q) for q in qubits))

    def inverse(self) -> "CliffordGate":
        return CliffordGate(_INVERSE.get(self.kind, self.kind), self.qubits)

    def __str__(self):
        return " ".join([self.kind] + [str(q) for q in self.qubits])


def _bit(v: int, q: int) -> int:
    return (v >> q) & 1


def apply_gate(kind: str, qubits: Tuple[int, ...], x: int, z: int, phase: int):
    """Conjugate i^phase P(x, z) by one gate: P -> U P U^dagger."""
    if kind in ONE_QUBIT_KINDS:
        q = qubits[0]
        xq, zq = _bit(x, q), _bit(z, q)
        if not (xq or zq):
            return x, z, phase
        m = 1 << q
        if kind == "H":
            phase += 2 * (xq & zq)
            if xq != zq:
                x ^= m
                z ^= m
        elif kind == "S":
            phase += 2 * (xq & zq)
            if xq:
                z ^= m
        elif kind == "SDG":
            phase += 2 * (xq & (1 - zq))
            if xq:
                z ^= m
        elif kind == "X":
            phase += 2 * zq
        elif kind == "Y":
            phase += 2 * (xq ^ zq)
        else:
            phase += 2 * xq
        return x, z, phase & 3

    a, b = qubits
    xa, za, xb, zb = _bit(x, a), _bit(z, a), _bit(x, b), _bit(z, b)
    ma, mb = 1 << a, 1 << b
    if kind == "CNOT":
        phase += 2 * (xa & zb & (xb ^ za ^ 1))
        if xa:
            x ^= mb
        if zb:
            z ^= ma
    elif kind == "CZ":
        phase += 2 * (xa & xb & (za ^ zb))
        if xb:
            z ^= ma
        if xa:
            z ^= mb
    else:
        if xa != xb:
            x ^= ma | mb
        if za != zb:
            z ^= ma | mb
    return x, z, phase & 3


class CliffordCircuit(LayeredCircuit):
    """C = U_d ... U_1 with optional input state and measurement basis from the circuit file."""

    def __init__(self, n: int, layers, geometry: Geometry = None, state=None, basis=None):
        layers = [[g if isinstance(g, CliffordGate) else CliffordGate.make(*g) for g in layer]
                  for layer in layers]
        super(CliffordCircuit, self).__init__(n, layers, geometry)
        if state is not None and state.n != n:
            raise ConfigError("input state has {} qubits, circuit has {}".format(state.n, n))
        if basis is not None and basis.n != n:
            raise ConfigError("measurement basis has {} qubits, circuit has {}".format(basis.n, n))
        self.state = state
        self.basis = basis

    def gates(self):
        for t, layer in enumerate(self.layers, 1):
            for gate in layer:
                yield t, gate

    def _sweep(self, x: int, z: int, phase: int, layer_ids, inverse: bool):
        for t in layer_ids:
            gmap = self._gate_maps[t - 1]
            done = set()
            for q in iter_bits(x | z):
                gate = gmap.get(q)
                if gate is None or gate.qubits[0] in done:
                    continue
                done.add(gate.qubits[0])
                kind = _INVERSE.get(gate.kind, gate.kind) if inverse else gate.kind
                x, z, phase = apply_gate(kind, gate.qubits, x, z, phase)
        return x, z, phase

    def _check(self, p: PauliString, t: int):
        if p.n != self.n:
            raise ValueError("Pauli has {} qubits, circuit has {}".format(p.n, self.n))
        if not 0 <= t <= self.depth:
            raise ValueError("layer index {} outside 0..{}".format(t, self.depth))

    def conjugate_forward(self, p: PauliString, upto: int = None) -> PauliString:
        upto = self.depth if upto is None else upto
        self._check(p, upto)
        x, z, phase = self._sweep(p.x, p.z, p.phase, range(1, upto + 1), False)
        return PauliString(self.n, x, z, phase)

    def conjugate_backward(self, p: PauliString, start: int = None) -> PauliString:
        start = self.depth if start is None else start
        self._check(p, start)
        x, z, phase = self._sweep(p.x, p.z, p.phase, range(start, 0, -1), True)
        return PauliString(self.n, x, z, phase)

    def support_profile(self, s: PauliString) -> List[int]:
        """Support masks of C_t(s) for the noise layers t = 0..d."""
        self._check(s, 0)
        x, z, phase = s.x, s.z, s.phase
        out = [x | z]
        for t in range(1, self.depth + 1):
            x, z, phase = self._sweep(x, z, phase, (t,), False)
            out.append(x | z)
        return out

    def weight_profile(self, s: PauliString) -> List[int]:
        return [popcount(m) for m in self.support_profile(s)]

    def inverse_layers(self):
        return [[g.inverse() for g in layer] for layer in reversed(self.layers)]


def conjugate_forward(c: CliffordCircuit, p: PauliString, upto: int = None) -> PauliString:
    return c.conjugate_forward(p, upto)


def conjugate_backward(c: CliffordCircuit, p: PauliString, start: int = None) -> PauliString:
    return c.conjugate_backward(p, start)


def forward_lightcone(c: LayeredCircuit, q: int):
    return c.forward_lightcone(q)


def weight_profile(c: CliffordCircuit, s: PauliString) -> List[int]:
    return c.weight_profile(s)
