"""Exact sampling from noisy IQP+CNOT circuits.

Z-type projectors are pulled back to the |+..+> input, where they leave an
X-type stabilizer mixture on each component. A column reduction of that group
turns the mixture into an average of uniform superpositions over computational
basis strings, which diagonal gates and CNOTs only rephase or permute.
"""
import logging
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from ..circuits.iqp import IqpCircuit
from ..exceptions import ToleranceError
from ..linalg.gf2 import ColumnOp, EchelonBasis, Gf2Matrix, column_reduce_with_ops, popcount, rank
from ..linalg.pauli import PauliString
from ..noise.noise import ErrorConfiguration, Event, PropagatedErrorSet, sample_error_configuration
from .clifford import build_components
from .methods_utils.sparse_state import SparseState, evolve_sparse_state
from .samplermethod import DEFAULT_CUTOFF_LOG2, RunReport, SamplerMethod

logger = logging.getLogger(__name__)

X_EVENTS = (Event.X_INPLACE, Event.Y_DET, Event.X_PROJ_Z)
SIGN_EVENTS = (Event.Z_DET, Event.Y_DET)


def _require_tags(b: ErrorConfiguration):
    if b.tags is None:
        raise ValueError("IQP configurations need Pauli-channel event tags")


def propagate_z_errors(c: IqpCircuit, b: ErrorConfiguration) -> PropagatedErrorSet:
    """Pi_Z and X o Pi_Z sites contribute C_t^dagger(Z_i), all Z-type."""
    _require_tags(b)
    gens = []
    for (t, q), tag in b.items():
        if tag.projects:
            gens.append(PauliString(c.n, 0, c.propagate_z_backward(1 << q, t)))
    return PropagatedErrorSet(c.n, gens)


def input_sign_flips(c: IqpCircuit, b: ErrorConfiguration) -> int:
    """Deterministic Z (and the Z half of Y) moved to the input as |+> -> |-> flips."""
    _require_tags(b)
    s = 0
    for (t, q), tag in b.items():
        if tag in SIGN_EVENTS:
            s ^= c.propagate_z_backward(1 << q, t)
    return s


def inplace_x_events(b: ErrorConfiguration) -> List[Tuple[int, int]]:
    _require_tags(b)
    return b.with_event(*X_EVENTS)


def depolarized_qubits_z(m: PropagatedErrorSet) -> np.ndarray:
    """Qubit q is depolarized iff e_q lies in the row space of the Z parts."""
    basis = EchelonBasis(m.n)
    for g in m.generators:
        basis.insert(g.z)
    return np.array([basis.contains(1 << q) for q in range(m.n)], dtype=bool)


def centralizer_x_basis(m: PropagatedErrorSet, n: int) -> Gf2Matrix:
    """X-type strings commuting with every generator: the null space of the Z parts."""
    if any(g.x for g in m.generators):
        raise ValueError("centralizer_x_basis expects Z-type generators")
    basis = EchelonBasis(n)
    for g in m.generators:
        basis.insert(g.z)
    return Gf2Matrix(basis.reduce_fully().nullspace(), n)


class Converter(NamedTuple):
    """Column operations taking the X-group matrix to [I_k | 0]."""

    ops: List[ColumnOp]
    rank: int
    width: int

    def apply(self, bits: np.ndarray) -> np.ndarray:
        """f: replay the inverse operations on rows of computational-basis bits."""
        bits = np.array(bits, dtype=np.uint8, copy=True)
        single = bits.ndim == 1
        bits = np.atleast_2d(bits)
        for op in reversed(self.ops):
            if op.kind == "swap":
                bits[:, [op.target, op.source]] = bits[:, [op.source, op.target]]
            else:
                bits[:, op.target] ^= bits[:, op.source]
        return bits[0] if single else bits

    def gates(self) -> List[Tuple[str, int, int]]:
        """The circuit reading: SWAP(i, j) or CNOT(control j, target i)."""
        return [("SWAP", op.target, op.source) if op.kind == "swap" else ("CNOT", op.source, op.target)
                for op in self.ops]


def iqp_converter(g: Gf2Matrix) -> Converter:
    k = len(g)
    if rank(g) != k:
        raise ValueError("converter needs independent generators")
    reduced, ops = column_reduce_with_ops(g)
    if reduced.rows != tuple(1 << i for i in range(k)):
        raise ToleranceError("column reduction did not reach [I | 0]")
    return Converter(ops, k, g.n_cols)


class ComponentInput(NamedTuple):
    """Everything needed to build the initial sparse state of one component."""

    qubits: Tuple[int, ...]
    seeds: List[int]
    converter: Converter
    sigma: np.ndarray

    @property
    def free_bits(self) -> int:
        return len(self.qubits) - self.converter.rank

    def state(self, free: np.ndarray) -> SparseState:
        """psi_r = 2^(-k/2) sum_i (-1)^(sigma . i) |f(i, r)>, plus classical bits on depolarized qubits."""
        k = self.converter.rank
        m_s = len(self.seeds)
        prefix = ((np.arange(2 ** k)[:, None] >> np.arange(k)) & 1).astype(np.uint8)
        block = np.zeros((2 ** k, m_s), dtype=np.uint8)
        block[:, :k] = prefix
        block[:, k:] = free[:m_s - k]
        keys = np.zeros((2 ** k, len(self.qubits)), dtype=np.uint8)
        keys[:, self.seeds] = self.converter.apply(block)
        seeds = set(self.seeds)
        others = [i for i in range(len(self.qubits)) if i not in seeds]
        keys[:, others] = free[m_s - k:]
        amps = (1.0 - 2.0 * ((prefix @ self.sigma) & 1)) * 2.0 ** (-k / 2)
        return SparseState(keys, amps.astype(complex), self.qubits)


class IqpPlan(NamedTuple):
    n: int
    depolarized: np.ndarray
    components: List[ComponentInput]
    x_events: List[Tuple[int, int]]

    @property
    def ranks(self) -> List[int]:
        return [comp.converter.rank for comp in self.components]

    @property
    def outside(self) -> List[int]:
        inside = set()
        for comp in self.components:
            inside.update(comp.qubits)
        return [q for q in range(self.n) if q not in inside]


def plan_iqp(c: IqpCircuit, b: ErrorConfiguration) -> IqpPlan:
    m = propagate_z_errors(c, b)
    flags = depolarized_qubits_z(m)
    cent = centralizer_x_basis(m, c.n).rows
    signs = input_sign_flips(c, b)
    components = []
    for comp in build_components(c, flags):
        seeds = [i for i, q in enumerate(comp) if not flags[q]]
        seed_qubits = [comp[i] for i in seeds]
        mask = 0
        for q in seed_qubits:
            mask |= 1 << q
        basis = EchelonBasis(c.n)
        gens = [v & mask for v in cent if v & mask and basis.insert(v & mask)]
        local = Gf2Matrix([sum(((g >> q) & 1) << i for i, q in enumerate(seed_qubits)) for g in gens],
                          len(seed_qubits))
        sigma = np.array([popcount(signs & g) & 1 for g in gens], dtype=np.int64)
        components.append(ComponentInput(comp, seeds, iqp_converter(local), sigma))
    return IqpPlan(c.n, flags, components, inplace_x_events(b))


def _hadamard_distribution(vec: np.ndarray, m: int) -> np.ndarray:
    t = vec.reshape((2,) * m) if m else vec
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    for axis in range(m):
        t = np.moveaxis(np.tensordot(h, t, axes=([1], [axis])), 0, axis)
    return np.abs(t.reshape(-1)) ** 2


def configuration_distribution_iqp(c: IqpCircuit, b: ErrorConfiguration) -> np.ndarray:
    """Exact output distribution conditioned on ``b``, averaging every free bit."""
    plan = plan_iqp(c, b)
    xs = np.arange(2 ** c.n, dtype=np.int64)
    p = np.full(xs.shape, 0.5 ** len(plan.outside))
    for comp in plan.components:
        m, f = len(comp.qubits), comp.free_bits
        local = np.zeros(2 ** m)
        for r in range(2 ** f):
            free = ((r >> np.arange(f)) & 1).astype(np.uint8)
            psi = evolve_sparse_state(c, comp.state(free), plan.x_events)
            local += _hadamard_distribution(psi.to_dense(), m) / 2 ** f
        idx = np.zeros_like(xs)
        for i, q in enumerate(comp.qubits):
            idx |= ((xs >> q) & 1) << i
        p *= local[idx]
    return p


def sample_iqp_output(c: IqpCircuit, model, rng: np.random.Generator, cutoff_log2: int = DEFAULT_CUTOFF_LOG2):
    b = sample_error_configuration(rng, c.n, c.depth, model.as_pauli_channel())
    plan = plan_iqp(c, b)
    report = RunReport(n_depolarized=int(plan.depolarized.sum()),
                       component_sizes=[len(comp.qubits) for comp in plan.components], ranks=plan.ranks)
    if report.max_rank > cutoff_log2:
        logger.debug("rank %d over cutoff %d, emitting uniform bits", report.max_rank, cutoff_log2)
        report.aborted = True
        report.bitstring = SamplerMethod.assemble(c.n, dict(enumerate(rng.integers(0, 2, size=c.n).tolist())))
        return report.bitstring, report
    assignment = {}
    for comp in plan.components:
        free = rng.integers(0, 2, size=comp.free_bits).astype(np.uint8)
        psi = evolve_sparse_state(c, comp.state(free), plan.x_events)
        assignment.update(zip(comp.qubits, psi.sample_hadamard(rng).tolist()))
        report.work += c.depth * len(comp.qubits) ** 2 * len(psi)
    outside = plan.outside
    assignment.update(zip(outside, rng.integers(0, 2, size=len(outside)).tolist()))
    report.bitstring = SamplerMethod.assemble(c.n, assignment)
    return report.bitstring, report


class Iqp(SamplerMethod):
    def __init__(self, circuit: IqpCircuit, model, cutoff_log2: int = DEFAULT_CUTOFF_LOG2, **kwargs):
        super(Iqp, self).__init__(circuit, model, cutoff_log2, **kwargs)

    def sample(self, rng: np.random.Generator, **kwargs):
        return sample_iqp_output(self.circuit, self.model, rng, self.cutoff_log2)

    def distribution(self, b: ErrorConfiguration) -> np.ndarray:
        return configuration_distribution_iqp(self.circuit, b)
