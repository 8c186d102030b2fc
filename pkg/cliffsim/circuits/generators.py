"""Random fixtures: brickwork circuits, product states and measurement bases."""
from typing import List, Tuple

import numpy as np

from .clifford import ONE_QUBIT_KINDS, TWO_QUBIT_KINDS, CliffordCircuit, CliffordGate
from .geometry import Geometry
from .iqp import IqpCircuit, IqpGate
from .states import MeasurementBasis, ProductState


def brick_pairs(geometry: Geometry, t: int) -> List[Tuple[int, int]]:
    """Nearest-neighbour pairs for layer ``t``; cycles over axes and both parities."""
    axis = (t // 2) % geometry.D
    parity = t % 2
    pairs = []
    for q in range(geometry.n_sites):
        c = list(geometry.coords(q))
        if c[axis] % 2 == parity and c[axis] + 1 < geometry.dims[axis]:
            c[axis] += 1
            pairs.append((q, geometry.index(c)))
    return pairs


def _random_pairs(n: int, rng: np.random.Generator):
    perm = rng.permutation(n).tolist()
    return [(perm[i], perm[i + 1]) for i in range(0, n - 1, 2)]


def _layer_pairs(n, geometry, t, rng):
    if geometry is None:
        return _random_pairs(n, rng)
    return brick_pairs(geometry, t)


def random_clifford_circuit(n: int, depth: int, rng: np.random.Generator, geometry: Geometry = None,
                            p_two: float = 0.8) -> CliffordCircuit:
    layers = []
    for t in range(depth):
        layer, used = [], set()
        for a, b in _layer_pairs(n, geometry, t, rng):
            if rng.random() < p_two:
                if rng.random() < 0.5:
                    a, b = b, a
                layer.append(CliffordGate.make(TWO_QUBIT_KINDS[rng.integers(len(TWO_QUBIT_KINDS))], a, b))
                used.update((a, b))
        for q in range(n):
            if q not in used and rng.random() < 0.75:
                layer.append(CliffordGate.make(ONE_QUBIT_KINDS[rng.integers(len(ONE_QUBIT_KINDS))], q))
        layers.append(layer)
    return CliffordCircuit(n, layers, geometry)


def random_iqp_circuit(n: int, depth: int, rng: np.random.Generator, geometry: Geometry = None,
                       p_cnot: float = 0.4, p_ccz: float = 0.15) -> IqpCircuit:
    layers = []
    for t in range(depth):
        layer, used = [], set()
        if geometry is None and n >= 3 and rng.random() < p_ccz:
            triple = rng.choice(n, size=3, replace=False).tolist()
            layer.append(IqpGate.make("CCZ", triple))
            used.update(triple)
        for a, b in _layer_pairs(n, geometry, t, rng):
            if a in used or b in used or rng.random() < 0.2:
                continue
            if rng.random() < p_cnot:
                if rng.random() < 0.5:
                    a, b = b, a
                layer.append(IqpGate.make("CNOT", (a, b)))
            else:
                layer.append(IqpGate.make("CPHASE", (a, b), rng.uniform(0, 2 * np.pi)))
            used.update((a, b))
        for q in range(n):
            if q not in used and rng.random() < 0.6:
                layer.append(IqpGate.make("PHASE", (q,), rng.uniform(0, 2 * np.pi)))
        layers.append(layer)
    return IqpCircuit(n, layers, geometry)


def _unit_vectors(n, rng):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_product_state(n: int, rng: np.random.Generator, pure: bool = False) -> ProductState:
    v = _unit_vectors(n, rng)
    if not pure:
        v *= rng.random((n, 1)) ** (1 / 3)
    return ProductState(v)


def random_measurement_basis(n: int, rng: np.random.Generator) -> MeasurementBasis:
    return MeasurementBasis(_unit_vectors(n, rng))
