"""Exact sampling from noisy Clifford circuits with product inputs.

One shot: sample which depolarizing sites fire, pull the fired X/Z errors back
to the input, keep the Paulis that commute with all of them, split the
surviving qubits into independent lightcone components and sample each
component bit by bit from exact marginals. Qubits in no component are uniform.
"""
import logging
from typing import Dict, Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np

from ..circuits.clifford import CliffordCircuit
from ..circuits.states import BlochRotation, MeasurementBasis, ProductState, canonicalize_conjugated_clifford
from ..exceptions import ConfigError, CutoffExceeded, ToleranceError
from ..linalg.gf2 import BitVector, EchelonBasis, Gf2Matrix, iter_bits, popcount
from ..linalg.pauli import PauliString, deinterleave, hermitian_from_symplectic, interleave, swap_pairs
from ..noise.noise import Depolarizing, ErrorConfiguration, PropagatedErrorSet, propagate_errors, \
    sample_error_configuration
from .methods_utils.group_table import GroupTable
from .methods_utils.union_find import UnionFind
from .samplermethod import DEFAULT_CUTOFF_LOG2, RunReport, SamplerMethod

logger = logging.getLogger(__name__)


class ComponentPlan(NamedTuple):
    """Depolarized flags, merged lightcone components L_j and their truncated bases G_j."""

    n: int
    depolarized: np.ndarray
    components: List[Tuple[int, ...]]
    generators: List[List[PauliString]]

    @property
    def outside(self) -> List[int]:
        inside = set()
        for comp in self.components:
            inside.update(comp)
        return [q for q in range(self.n) if q not in inside]

    @property
    def ranks(self) -> List[int]:
        return [len(g) for g in self.generators]

    def generator_matrix(self, j: int) -> Gf2Matrix:
        return Gf2Matrix([g.symplectic_vector().bits for g in self.generators[j]], 2 * self.n)


# --- interleaved helpers (x_q at bit 2q, z_q at bit 2q+1) -------------------

def _to_interleaved(p: PauliString) -> int:
    return interleave(p.x, p.z)


def _from_interleaved(n: int, v: int) -> PauliString:
    x, z = deinterleave(v)
    return PauliString(n, x, z)


def _centralizer_interleaved(rows: Sequence[int], n: int) -> List[int]:
    """Basis of null(T Lambda) for interleaved generator rows."""
    basis = EchelonBasis(2 * n)
    for v in rows:
        if basis.rank == 2 * n:
            break
        basis.insert(swap_pairs(v, n))
    return basis.reduce_fully().nullspace()


def _flags_from_support(support: int, n: int) -> np.ndarray:
    flags = np.ones(n, dtype=bool)
    for b in iter_bits(support):
        flags[b >> 1] = False
    return flags


def check_commutation(pieces: Sequence[int], m_rows: Sequence[int], n: int) -> None:
    """Raise ToleranceError unless every interleaved piece commutes with every row of M_b."""
    twisted = [swap_pairs(v, n) for v in m_rows]
    for piece in pieces:
        for j, w in enumerate(twisted):
            if popcount(piece & w) & 1:
                raise ToleranceError("truncated generator {} anticommutes with M_b row {}".format(
                    _from_interleaved(n, piece).to_string(), j))


def _interleaved_to_matrix(rows: Sequence[int], n: int) -> Gf2Matrix:
    out = []
    for v in rows:
        x, z = deinterleave(v)
        out.append(x | (z << n))
    return Gf2Matrix(out, 2 * n)


# --- pipeline steps ---------------------------------------------------------

def centralizer_basis(m: PropagatedErrorSet, n: int) -> Gf2Matrix:
    """Basis (symplectic [x|z] rows) of the Paulis commuting with every generator of M_b."""
    rows = [_to_interleaved(g) for g in m.generators]
    return _interleaved_to_matrix(_centralizer_interleaved(rows, n), n)


def depolarized_qubits(centralizer: Gf2Matrix, n: int) -> np.ndarray:
    """Qubit q is depolarized iff no centralizer basis vector touches it."""
    support = 0
    for r in centralizer.rows:
        support |= r | (r >> n)
    support &= (1 << n) - 1
    return np.array([not (support >> q) & 1 for q in range(n)], dtype=bool)


def depolarized_by_membership(m: PropagatedErrorSet, n: int) -> np.ndarray:
    """Same flags from the other side: X_q and Z_q both lie in the span of M_b."""
    basis = EchelonBasis(2 * n)
    for g in m.generators:
        basis.insert(g.symplectic_vector().bits)
    return np.array([basis.contains(1 << q) and basis.contains(1 << (n + q)) for q in range(n)], dtype=bool)


def build_components(c: CliffordCircuit, flags) -> List[Tuple[int, ...]]:
    """Forward lightcones of non-depolarized qubits, merged until disjoint.

    Without a lattice the union of all lightcones is one component.
    """
    seeds = [q for q in range(c.n) if not flags[q]]
    if not seeds:
        return []
    cones = [c.forward_lightcone(q) for q in seeds]
    if c.geometry is None:
        return [tuple(sorted(set().union(*cones)))]
    uf = UnionFind()
    for cone in cones:
        uf.union_all(cone)
    comps = [tuple(sorted(members)) for members in uf.clusters().values()]
    return sorted(comps)


def truncate_generators(centralizer: Gf2Matrix, component: Sequence[int]) -> Gf2Matrix:
    """Zero coordinates outside ``component`` and keep an independent subset."""
    n = centralizer.n_cols // 2
    mask = 0
    for q in component:
        mask |= (1 << q) | (1 << (n + q))
    basis = EchelonBasis(centralizer.n_cols)
    kept = [r & mask for r in centralizer.rows if r & mask and basis.insert(r & mask)]
    return Gf2Matrix(kept, centralizer.n_cols)


def enumerate_group(generators: Gf2Matrix, cutoff_log2: int = DEFAULT_CUTOFF_LOG2) -> Iterator[PauliString]:
    """All 2^rank elements of the span as phase-0 Paulis, in Gray-code order."""
    rows = list(generators.rows)
    if len(rows) > cutoff_log2:
        raise CutoffExceeded(len(rows), cutoff_log2)
    length = generators.n_cols
    cur = 0
    yield hermitian_from_symplectic(BitVector(length, cur))
    for i in range(1, 2 ** len(rows)):
        cur ^= rows[(i & -i).bit_length() - 1]
        yield hermitian_from_symplectic(BitVector(length, cur))


def plan_components(c: CliffordCircuit, b: ErrorConfiguration) -> ComponentPlan:
    """Steps from a fired configuration to per-component generator bases."""
    n = c.n
    m = propagate_errors(c, b)
    m_rows = [_to_interleaved(g) for g in m.generators]
    cent = _centralizer_interleaved(m_rows, n)
    support = 0
    for v in cent:
        support |= v
    flags = _flags_from_support(support, n)
    components = build_components(c, flags)
    owner = {}
    for j, comp in enumerate(components):
        for q in comp:
            owner[q] = j
    pieces = [EchelonBasis(2 * n) for _ in components]
    gens = [[] for _ in components]
    kept = []
    for v in cent:
        split = {}
        for bit in iter_bits(v):
            j = owner[bit >> 1]
            split[j] = split.get(j, 0) | (1 << bit)
        for j, piece in split.items():
            if pieces[j].insert(piece):
                kept.append(piece)
                gens[j].append(_from_interleaved(n, piece))
    check_commutation(kept, m_rows, n)
    return ComponentPlan(n, flags, components, gens)


def component_table(c: CliffordCircuit, state: ProductState, generators: Sequence[PauliString],
                    component: Sequence[int]) -> GroupTable:
    comp = list(component)
    r, m = len(generators), len(comp)
    in_x = np.zeros((r, m), dtype=bool)
    in_z = np.zeros((r, m), dtype=bool)
    out_x = np.zeros((r, m), dtype=bool)
    out_z = np.zeros((r, m), dtype=bool)
    out_phase = np.zeros(r, dtype=np.int64)
    local = {q: i for i, q in enumerate(comp)}
    for k, g in enumerate(generators):
        image = c.conjugate_forward(g)
        for q in iter_bits(g.x):
            in_x[k, local[q]] = True
        for q in iter_bits(g.z):
            in_z[k, local[q]] = True
        for q in iter_bits(image.x):
            out_x[k, local[q]] = True
        for q in iter_bits(image.z):
            out_z[k, local[q]] = True
        out_phase[k] = image.phase
    return GroupTable.build(in_x, in_z, out_x, out_z, out_phase, state.bloch[comp])


def marginal_probability(c: CliffordCircuit, state: ProductState, basis: MeasurementBasis,
                         generators: Sequence[PauliString], component: Sequence[int],
                         assignment: Dict[int, int]) -> float:
    """p(z_A) for A a subset of the component; ``assignment`` maps global qubit -> bit."""
    comp = list(component)
    local = {q: i for i, q in enumerate(comp)}
    if any(q not in local for q in assignment):
        raise ValueError("assignment must lie inside the component")
    table = component_table(c, state, generators, comp)
    return table.marginal_probability(basis.axes[comp], {local[q]: int(z) for q, z in assignment.items()})


def sample_component(table: GroupTable, axes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return table.sample(axes, rng)


def configuration_distribution(c: CliffordCircuit, state: ProductState, basis: MeasurementBasis,
                               b: ErrorConfiguration) -> np.ndarray:
    """Exact 2^n output distribution of the circuit conditioned on ``b``."""
    plan = plan_components(c, b)
    xs = np.arange(2 ** c.n, dtype=np.int64)
    p = np.full(xs.shape, 0.5 ** len(plan.outside))
    for comp, gens in zip(plan.components, plan.generators):
        local = component_table(c, state, gens, comp).distribution(basis.axes[list(comp)])
        idx = np.zeros_like(xs)
        for i, q in enumerate(comp):
            idx |= ((xs >> q) & 1) << i
        p *= local[idx]
    return p


def sample_output(c: CliffordCircuit, state: ProductState, basis: MeasurementBasis, model,
                  rng: np.random.Generator, cutoff_log2: int = DEFAULT_CUTOFF_LOG2):
    if not isinstance(model, Depolarizing):
        raise ConfigError("the Clifford sampler takes depolarizing noise only")
    b = sample_error_configuration(rng, c.n, c.depth, model)
    plan = plan_components(c, b)
    report = RunReport(n_depolarized=int(plan.depolarized.sum()),
                       component_sizes=[len(comp) for comp in plan.components], ranks=plan.ranks)
    if report.max_rank > cutoff_log2:
        logger.debug("rank %d over cutoff %d, emitting uniform bits", report.max_rank, cutoff_log2)
        report.aborted = True
        bits = SamplerMethod.assemble(c.n, dict(zip(range(c.n), rng.integers(0, 2, size=c.n).tolist())))
        report.bitstring = bits
        return bits, report
    assignment = {}
    for comp, gens in zip(plan.components, plan.generators):
        table = component_table(c, state, gens, comp)
        local_bits = sample_component(table, basis.axes[list(comp)], rng)
        assignment.update(zip(comp, local_bits.tolist()))
        report.work += c.depth * len(comp) ** 2 * len(table)
    outside = plan.outside
    assignment.update(zip(outside, rng.integers(0, 2, size=len(outside)).tolist()))
    report.bitstring = SamplerMethod.assemble(c.n, assignment)
    return report.bitstring, report


class Clifford(SamplerMethod):
    def __init__(self, circuit: CliffordCircuit, model, cutoff_log2: int = DEFAULT_CUTOFF_LOG2,
                 state: ProductState = None, basis: MeasurementBasis = None, **kwargs):
        super(Clifford, self).__init__(circuit, model, cutoff_log2, **kwargs)
        if not isinstance(self.model, Depolarizing):
            raise ConfigError("the Clifford sampler takes depolarizing noise only")
        self.state = state or circuit.state or ProductState.uniform(circuit.n, "|0>")
        self.basis = basis or circuit.basis or MeasurementBasis.computational(circuit.n)

    def sample(self, rng: np.random.Generator, **kwargs):
        return sample_output(self.circuit, self.state, self.basis, self.model, rng, self.cutoff_log2)

    def distribution(self, b: ErrorConfiguration) -> np.ndarray:
        return configuration_distribution(self.circuit, self.state, self.basis, b)


class Cm(Clifford):
    """Clifford-magic circuits: |A> inputs unless the file says otherwise, Z readout."""

    def __init__(self, circuit: CliffordCircuit, model, cutoff_log2: int = DEFAULT_CUTOFF_LOG2, **kwargs):
        state = circuit.state or ProductState.uniform(circuit.n, "|A>")
        super(Cm, self).__init__(circuit, model, cutoff_log2, state=state,
                                 basis=MeasurementBasis.computational(circuit.n))


class Ccc(Clifford):
    """Conjugated Clifford circuits U^n C U^dagger^n on |0..0> with Z readout."""

    def __init__(self, circuit: CliffordCircuit, model, cutoff_log2: int = DEFAULT_CUTOFF_LOG2,
                 rotation: BlochRotation = None, **kwargs):
        if rotation is None:
            raise ConfigError("conjugated Clifford circuits need a rotation")
        inner, state, basis = canonicalize_conjugated_clifford(rotation, circuit)
        super(Ccc, self).__init__(inner, model, cutoff_log2, state=state, basis=basis)
        self.rotation = rotation
