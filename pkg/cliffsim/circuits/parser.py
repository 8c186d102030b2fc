"""Line-oriented circuit files.

    qubits 4
    lattice 1 4
    input
    state 0 |+>
    state 1 bloch 0.6 0 0.8
    measure
    basis 2 X
    H 0
    CNOT 1 2
    ---
    CZ 0 1
    ---

``#`` starts a comment. ``---`` closes a layer; gates after the last ``---``
form a final layer. IQP files use the same framing with PHASE/T/CPHASE/CZ/CCZ/
CNOT gate lines and no input or measure blocks.
"""
import math
import re

from ..exceptions import CircuitSyntaxError, ConfigError
from .clifford import CLIFFORD_KINDS, CliffordCircuit, CliffordGate
from .geometry import Geometry
from .iqp import IqpCircuit, IqpGate
from .states import NAMED_BASES, NAMED_STATES, MeasurementBasis, ProductState

_ANGLE = re.compile(r"^([+-]?)(\d*\.?\d*(?:[eE][+-]?\d+)?)?\*?pi(?:/(\d+(?:\.\d*)?))?$")


def parse_angle(token: str) -> float:
    token = token.strip().lower()
    try:
        return float(token)
    except ValueError:
        pass
    m = _ANGLE.match(token)
    if not m:
        raise ValueError("bad angle {!r}".format(token))
    sign, coef, denom = m.groups()
    value = (float(coef) if coef else 1.0) * math.pi / (float(denom) if denom else 1.0)
    return -value if sign == "-" else value


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitSyntaxError("expected an integer, got {!r}".format(token), lineno)


def _floats(tokens, count, lineno):
    if len(tokens) != count:
        raise CircuitSyntaxError("expected {} numbers".format(count), lineno)
    try:
        return [float(t) for t in tokens]
    except ValueError:
        raise CircuitSyntaxError("bad number in {!r}".format(" ".join(tokens)), lineno)


class _Reader(object):
    def __init__(self, text: str, iqp: bool):
        self.iqp = iqp
        self.n = None
        self.geometry = None
        self.states = {}
        self.bases = {}
        self.layers = []
        self.current = []
        self.in_body = False
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.line(line.split(), lineno)
        if self.current:
            self.layers.append(self.current)
        if self.n is None:
            raise CircuitSyntaxError("missing 'qubits N' header")
        if not self.layers:
            raise CircuitSyntaxError("circuit has no layers")

    def _qubit(self, token, lineno):
        q = _int(token, lineno)
        if not 0 <= q < self.n:
            raise CircuitSyntaxError("qubit {} out of range".format(q), lineno)
        return q

    def line(self, tokens, lineno):
        head = tokens[0]
        key = head.lower()
        if key == "qubits":
            if self.n is not None or len(tokens) != 2:
                raise CircuitSyntaxError("expected a single 'qubits N'", lineno)
            self.n = _int(tokens[1], lineno)
            if self.n < 1:
                raise CircuitSyntaxError("qubit count must be positive", lineno)
            return
        if self.n is None:
            raise CircuitSyntaxError("'qubits N' must come first", lineno)
        if key == "lattice":
            if len(tokens) < 3:
                raise CircuitSyntaxError("expected 'lattice D e1 ...'", lineno)
            dims = tuple(_int(t, lineno) for t in tokens[2:])
            if len(dims) != _int(tokens[1], lineno) or min(dims) < 1:
                raise CircuitSyntaxError("lattice extents do not match D", lineno)
            self.geometry = Geometry(dims)
            return
        if key in ("input", "measure", "state", "basis"):
            if self.iqp:
                raise CircuitSyntaxError("IQP circuits are fixed to the Hadamard basis", lineno)
            if self.in_body:
                raise CircuitSyntaxError("'{}' after the first gate".format(key), lineno)
            if key == "state":
                self.state_line(tokens, lineno)
            elif key == "basis":
                self.basis_line(tokens, lineno)
            return
        if head == "---":
            self.in_body = True
            self.layers.append(self.current)
            self.current = []
            return
        self.in_body = True
        self.current.append(self.gate_line(tokens, lineno))

    def state_line(self, tokens, lineno):
        if len(tokens) < 3:
            raise CircuitSyntaxError("expected 'state q NAME' or 'state q bloch bx by bz'", lineno)
        q = self._qubit(tokens[1], lineno)
        if tokens[2].lower() == "bloch":
            self.states[q] = tuple(_floats(tokens[3:], 3, lineno))
        elif tokens[2] in NAMED_STATES and len(tokens) == 3:
            self.states[q] = NAMED_STATES[tokens[2]]
        else:
            raise CircuitSyntaxError("unknown state {!r}".format(" ".join(tokens[2:])), lineno)

    def basis_line(self, tokens, lineno):
        if len(tokens) < 3:
            raise CircuitSyntaxError("expected 'basis q Z|X|Y' or 'basis q bloch nx ny nz'", lineno)
        q = self._qubit(tokens[1], lineno)
        if tokens[2].lower() == "bloch":
            self.bases[q] = tuple(_floats(tokens[3:], 3, lineno))
        elif tokens[2].upper() in NAMED_BASES and len(tokens) == 3:
            self.bases[q] = NAMED_BASES[tokens[2].upper()]
        else:
            raise CircuitSyntaxError("unknown basis {!r}".format(" ".join(tokens[2:])), lineno)

    def gate_line(self, tokens, lineno):
        kind = tokens[0].upper()
        try:
            if self.iqp:
                if kind in ("PHASE", "CPHASE"):
                    if len(tokens) < 2:
                        raise CircuitSyntaxError("{} needs an angle".format(kind), lineno)
                    theta = parse_angle(tokens[1])
                    return IqpGate.make(kind, [self._qubit(t, lineno) for t in tokens[2:]], theta)
                return IqpGate.make(kind, [self._qubit(t, lineno) for t in tokens[1:]])
            if kind not in CLIFFORD_KINDS:
                raise CircuitSyntaxError("unknown gate {!r}".format(tokens[0]), lineno)
            return CliffordGate.make(kind, *[self._qubit(t, lineno) for t in tokens[1:]])
        except CircuitSyntaxError:
            raise
        except (ConfigError, ValueError) as e:
            raise CircuitSyntaxError(str(e), lineno)

    def state(self):
        if not self.states:
            return None
        return ProductState([self.states.get(q, NAMED_STATES["|0>"]) for q in range(self.n)])

    def basis(self):
        if not self.bases:
            return None
        return MeasurementBasis([self.bases.get(q, NAMED_BASES["Z"]) for q in range(self.n)])


def parse_circuit(text: str) -> CliffordCircuit:
    reader = _Reader(text, iqp=False)
    return CliffordCircuit(reader.n, reader.layers, reader.geometry, reader.state(), reader.basis())


def parse_iqp_circuit(text: str) -> IqpCircuit:
    reader = _Reader(text, iqp=True)
    return IqpCircuit(reader.n, reader.layers, reader.geometry)


def read_circuit(path: str, kind: str = "clifford"):
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise ConfigError("cannot read circuit {}: {}".format(path, e))
    if kind == "iqp":
        return parse_iqp_circuit(text)
    return parse_circuit(text)


def _vec(v):
    return " ".join(repr(float(c)) for c in v)


def render(c) -> str:
    lines = ["qubits {}".format(c.n)]
    if c.geometry is not None:
        lines.append("lattice {} {}".format(c.geometry.D, " ".join(str(e) for e in c.geometry.dims)))
    state = getattr(c, "state", None)
    basis = getattr(c, "basis", None)
    if state is not None:
        lines.append("input")
        lines.extend("state {} bloch {}".format(q, _vec(b)) for q, b in enumerate(state.bloch))
    if basis is not None:
        lines.append("measure")
        lines.extend("basis {} bloch {}".format(q, _vec(b)) for q, b in enumerate(basis.axes))
    for layer in c.layers:
        lines.extend(str(g) for g in layer)
        lines.append("---")
    return "\n".join(lines) + "\n"
