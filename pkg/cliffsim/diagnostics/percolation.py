"""Sublattice coarse-graining and Monte Carlo component-size statistics."""
import itertools
import logging
from typing import Dict, List, NamedTuple, Sequence, Set, Tuple

import numpy as np

from ..circuits.clifford import CliffordCircuit
from ..circuits.geometry import Geometry
from ..exceptions import ConfigError
from ..methods.clifford import plan_components
from ..methods.samplermethod import shot_rng
from ..noise.noise import Depolarizing, sample_error_configuration
from .bounds import tail_bound

logger = logging.getLogger(__name__)

COMPONENT_FIELDS = ("trial", "component", "size", "sublattice_span")
SUMMARY_FIELDS = ("x", "exceedance", "stderr", "tail_bound")


class SublatticeGraph(NamedTuple):
    """Blocks of side 2d; neighbours include diagonals."""

    D: int
    side: int
    shape: Tuple[int, ...]
    adjacency: Dict[int, Set[int]]
    qubit_map: np.ndarray

    @property
    def n_vertices(self) -> int:
        return int(np.prod(self.shape))

    def block_of(self, q: int) -> int:
        return int(self.qubit_map[q])

    def adjacent_or_same(self, u: int, v: int) -> bool:
        return u == v or v in self.adjacency[u]

    def is_connected(self, blocks) -> bool:
        blocks = set(blocks)
        if not blocks:
            return True
        start = next(iter(blocks))
        seen, stack = {start}, [start]
        while stack:
            u = stack.pop()
            for v in self.adjacency[u] & blocks:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen == blocks


def sublattice_graph(geometry: Geometry, d: int) -> SublatticeGraph:
    if geometry is None:
        raise ConfigError("sublattice coarse-graining needs a lattice geometry")
    if d < 1:
        raise ConfigError("depth must be positive")
    side = 2 * d
    shape = tuple(-(-extent // side) for extent in geometry.dims)
    offsets = [o for o in itertools.product((-1, 0, 1), repeat=len(shape)) if any(o)]
    adjacency = {}
    for block in itertools.product(*(range(s) for s in shape)):
        u = int(np.ravel_multi_index(block, shape))
        adjacency[u] = set()
        for o in offsets:
            other = tuple(b + k for b, k in zip(block, o))
            if all(0 <= b < s for b, s in zip(other, shape)):
                adjacency[u].add(int(np.ravel_multi_index(other, shape)))
    coords = np.array(np.unravel_index(np.arange(geometry.n_sites), geometry.dims)).T // side
    qubit_map = np.ravel_multi_index(tuple(coords.T), shape)
    return SublatticeGraph(len(shape), side, shape, adjacency, qubit_map)


def component_sublattices_connected(graph: SublatticeGraph, component: Sequence[int]) -> bool:
    return graph.is_connected(graph.block_of(q) for q in component)


class ComponentStats(NamedTuple):
    n: int
    layers: int
    trials: int
    max_sizes: np.ndarray
    rows: List[tuple]

    @property
    def sizes(self) -> np.ndarray:
        return np.array([row[2] for row in self.rows], dtype=np.int64)

    def exceedance(self, x: int) -> float:
        """Fraction of trials with some component of size >= x."""
        return float(np.mean(self.max_sizes >= x))

    def histogram(self) -> Dict[int, int]:
        values, counts = np.unique(self.sizes, return_counts=True)
        return dict(zip(values.tolist(), counts.tolist()))

    def summary_rows(self, d: int, D: int, xs: Sequence[int] = None) -> List[tuple]:
        if xs is None:
            xs = range(1, self.n + 1)
        out = []
        for x in xs:
            p = self.exceedance(x)
            out.append((x, p, float(np.sqrt(p * (1 - p) / self.trials)), tail_bound(self.n, self.layers, x, d, D)))
        return out


def component_size_stats(c: CliffordCircuit, model: Depolarizing, trials: int, seed: int) -> ComponentStats:
    """Merged component sizes over ``trials`` sampled configurations; trial k uses stream k."""
    if c.geometry is None:
        raise ConfigError("component statistics need a lattice geometry")
    if not isinstance(model, Depolarizing):
        raise ConfigError("component statistics take depolarizing noise")
    graph = sublattice_graph(c.geometry, c.depth)
    max_sizes = np.zeros(trials, dtype=np.int64)
    rows = []
    for trial in range(trials):
        b = sample_error_configuration(shot_rng(seed, trial), c.n, c.depth, model)
        plan = plan_components(c, b)
        for j, comp in enumerate(plan.components):
            span = len({graph.block_of(q) for q in comp})
            rows.append((trial, j, len(comp), span))
            max_sizes[trial] = max(max_sizes[trial], len(comp))
        logger.debug("trial %d: %d components, largest %d", trial, len(plan.components), max_sizes[trial])
    return ComponentStats(c.n, c.noise_layers, trials, max_sizes, rows)
