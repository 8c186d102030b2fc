from typing import Iterable, List, NamedTuple, Sequence, Set, Tuple

import numpy as np

from ..exceptions import ConfigError


class Geometry(NamedTuple):
    """D-dimensional open lattice; qubits are numbered row-major (last axis fastest)."""

    dims: Tuple[int, ...]

    @property
    def D(self) -> int:
        return len(self.dims)

    @property
    def n_sites(self) -> int:
        return int(np.prod(self.dims)) if self.dims else 0

    def coords(self, q: int) -> Tuple[int, ...]:
        if not 0 <= q < self.n_sites:
            raise ValueError("qubit {} outside lattice {}".format(q, self.dims))
        return tuple(int(c) for c in np.unravel_index(q, self.dims))

    def index(self, coords: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(coords), self.dims))

    def distance(self, a: int, b: int) -> int:
        return sum(abs(i - j) for i, j in zip(self.coords(a), self.coords(b)))

    def are_neighbors(self, a: int, b: int) -> bool:
        return self.distance(a, b) == 1

    def ball(self, q: int, radius: int) -> Set[int]:
        return {p for p in range(self.n_sites) if self.distance(q, p) <= radius}


class LayeredCircuit(object):
    """Shared plumbing for layered gate lists.

    Gates only need a ``qubits`` attribute. Within one layer gates must act on
    disjoint qubits; under a geometry every multi-qubit gate must be a chain of
    lattice neighbours.
    """

    def __init__(self, n: int, layers: Iterable[Sequence], geometry: Geometry = None):
        if n < 1:
            raise ConfigError("circuit needs at least one qubit")
        if geometry is not None and geometry.n_sites != n:
            raise ConfigError("lattice {} has {} sites but circuit has {} qubits".format(
                geometry.dims, geometry.n_sites, n))
        self.n = n
        self.geometry = geometry
        self.layers: Tuple[Tuple, ...] = tuple(tuple(layer) for layer in layers)
        if not self.layers:
            raise ConfigError("circuit has no layers")
        self._gate_maps = []
        for t, layer in enumerate(self.layers, 1):
            gmap = {}
            for gate in layer:
                for q in gate.qubits:
                    if not 0 <= q < n:
                        raise ConfigError("layer {}: qubit {} out of range".format(t, q))
                    if q in gmap:
                        raise ConfigError("layer {}: gates overlap on qubit {}".format(t, q))
                    gmap[q] = gate
                if geometry is not None:
                    for a, b in zip(gate.qubits, gate.qubits[1:]):
                        if not geometry.are_neighbors(a, b):
                            raise ConfigError("layer {}: gate {} joins non-neighbours {} and {}".format(
                                t, gate.kind, a, b))
            self._gate_maps.append(gmap)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def noise_layers(self) -> int:
        return len(self.layers) + 1

    def gate_map(self, t: int) -> dict:
        """qubit -> gate for layer ``t`` (1-based)."""
        return self._gate_maps[t - 1]

    def forward_lightcone(self, q: int) -> Set[int]:
        if not 0 <= q < self.n:
            raise ValueError("qubit {} out of range".format(q))
        cone = {q}
        for gmap in self._gate_maps:
            for p in [p for p in cone if p in gmap]:
                cone.update(gmap[p].qubits)
        return cone

    def lightcone_frontiers(self, q: int) -> List[Set[int]]:
        """Lightcone of ``q`` after each layer (entry t covers layers 1..t)."""
        if not 0 <= q < self.n:
            raise ValueError("qubit {} out of range".format(q))
        cone = {q}
        out = [set(cone)]
        for gmap in self._gate_maps:
            for p in list(cone):
                gate = gmap.get(p)
                if gate is not None:
                    cone.update(gate.qubits)
            out.append(set(cone))
        return out

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.n, self.layers, self.geometry) == (other.n, other.layers, other.geometry)

    def __hash__(self):
        return hash((self.n, self.layers, self.geometry))
