import numpy as np
import pytest

from cliffsim.checks import converter_error
from cliffsim.circuits import IqpCircuit, random_iqp_circuit
from cliffsim.linalg.gf2 import EchelonBasis, Gf2Matrix, add_op
from cliffsim.linalg.pauli import PauliString
from cliffsim.methods import ComponentInput, Iqp, centralizer_x_basis, configuration_distribution_iqp, \
    depolarized_qubits_z, inplace_x_events, input_sign_flips, iqp_converter, plan_iqp, propagate_z_errors
from cliffsim.methods.methods_utils import SparseState, evolve_sparse_state
from cliffsim.noise import Depolarizing, ErrorConfiguration, Event, PauliChannel, PropagatedErrorSet, \
    sample_error_configuration
from cliffsim.oracle import exact_iqp_distribution, tvd


def _xx_mixture(sign):
    idx = np.arange(4)
    xx = np.zeros((4, 4))
    xx[idx ^ 3, idx] = 1.0
    return (np.eye(4) + sign * xx) / 4


def _mixture(comp: ComponentInput) -> np.ndarray:
    f = comp.free_bits
    out = 0
    for r in range(2 ** f):
        psi = comp.state(((r >> np.arange(f)) & 1).astype(np.uint8)).to_dense()
        out = out + np.outer(psi, psi.conj()) / 2 ** f
    return out


class TestConverter:
    def test_single_pair(self):
        conv = iqp_converter(Gf2Matrix.from_strings(["11"]))
        assert conv.ops == [add_op(1, 0)]
        assert conv.gates() == [("CNOT", 0, 1)]
        assert conv.apply(np.array([1, 0])).tolist() == [1, 1]
        assert conv.apply(np.array([[0, 1], [1, 1]])).tolist() == [[0, 1], [1, 0]]

    @pytest.mark.parametrize("sign", [0, 1])
    def test_pair_mixture(self, sign):
        conv = iqp_converter(Gf2Matrix.from_strings(["11"]))
        comp = ComponentInput((0, 1), [0, 1], conv, np.array([sign]))
        assert comp.free_bits == 1
        assert np.allclose(_mixture(comp), _xx_mixture(1 - 2 * sign))

    def test_random_groups(self, rng):
        for _ in range(30):
            m = int(rng.integers(1, 6))
            basis = EchelonBasis(m)
            rows = [r for r in rng.integers(1, 2 ** m, size=int(rng.integers(0, m + 1))).tolist()
                    if basis.insert(r)]
            assert converter_error(m, rows) < 1e-12

    def test_dependent_rows(self):
        with pytest.raises(ValueError, match="independent"):
            iqp_converter(Gf2Matrix.from_strings(["11", "11"]))

    def test_empty_group_is_maximally_mixed(self):
        conv = iqp_converter(Gf2Matrix([], 2))
        comp = ComponentInput((0, 1), [0, 1], conv, np.zeros(0, dtype=np.int64))
        assert np.allclose(_mixture(comp), np.eye(4) / 4)


class TestZPropagation:
    def test_projector_generators(self, small_iqp):
        b = ErrorConfiguration(3, 3, ((3, 2), (1, 0)), (Event.PROJ_Z, Event.X_INPLACE))
        m = propagate_z_errors(small_iqp, b)
        assert [g.z for g in m.generators] == [0b110]
        assert all(g.x == 0 for g in m.generators)
        assert inplace_x_events(b) == [(1, 0)]

    def test_sign_flips(self, small_iqp):
        b = ErrorConfiguration(3, 3, ((1, 2), (0, 0), (2, 1)), (Event.Z_DET, Event.Y_DET, Event.PROJ_Z))
        assert input_sign_flips(small_iqp, b) == 0b111

    def test_untagged_configurations_are_rejected(self, small_iqp):
        with pytest.raises(ValueError, match="tags"):
            propagate_z_errors(small_iqp, ErrorConfiguration(3, 3, ((0, 0),)))

    def test_depolarized_and_centralizer(self):
        m = PropagatedErrorSet(2, [PauliString(2, 0, 0b01)])
        assert depolarized_qubits_z(m).tolist() == [True, False]
        assert centralizer_x_basis(m, 2).to_strings() == ["01"]
        with pytest.raises(ValueError, match="Z-type"):
            centralizer_x_basis(PropagatedErrorSet(2, [PauliString(2, 1, 0)]), 2)


class TestSparseState:
    def test_noiseless_evolution_matches_oracle(self, small_iqp):
        b = ErrorConfiguration(3, 3, (), ())
        assert np.allclose(configuration_distribution_iqp(small_iqp, b), exact_iqp_distribution(small_iqp))

    def test_gates_permute_and_rephase(self):
        c = IqpCircuit(2, [[("PHASE", (0,), np.pi / 2)], [("CNOT", (0, 1))]])
        psi = SparseState(np.array([[1, 0], [0, 0]]), np.array([1, 1]) / np.sqrt(2), (0, 1))
        out = evolve_sparse_state(c, psi, x_events=[(2, 1)])
        dense = out.to_dense()
        # key (q0, q1): (1, 0) picks up i, CNOT gives (1, 1), X on q1 gives (1, 0); (0, 0) ends at (0, 1)
        assert np.allclose(dense, [0, 1j / np.sqrt(2), 1 / np.sqrt(2), 0])
        assert len(out) == 2
        assert psi.keys.tolist() == [[1, 0], [0, 0]]

    def test_partial_gates_are_skipped(self):
        c = IqpCircuit(2, [[("CNOT", (0, 1))]])
        psi = SparseState(np.array([[1]]), np.array([1.0]), (0,))
        assert evolve_sparse_state(c, psi).keys.tolist() == [[1]]


class TestExactness:
    @pytest.mark.parametrize("model", [Depolarizing(0.3), PauliChannel(0.1, 0.05, 0.08), PauliChannel(0, 0, 0.2)])
    def test_fixed_configurations_match_dense_oracle(self, model, rng):
        channel = model.as_pauli_channel()
        for _ in range(10):
            n, d = int(rng.integers(1, 5)), int(rng.integers(1, 4))
            c = random_iqp_circuit(n, d, rng)
            for _ in range(3):
                b = sample_error_configuration(rng, n, d, channel)
                p = configuration_distribution_iqp(c, b)
                assert tvd(p, exact_iqp_distribution(c, config=b)).tv < 1e-9

    def test_plan_ranks(self, small_iqp):
        plan = plan_iqp(small_iqp, ErrorConfiguration(3, 3, (), ()))
        assert plan.ranks == [3]
        assert plan.outside == []
        sites = tuple((t, q) for t in range(4) for q in range(3))
        plan = plan_iqp(small_iqp, ErrorConfiguration(3, 3, sites, (Event.PROJ_Z,) * len(sites)))
        assert plan.depolarized.all() and plan.components == []

    def test_sampler_is_deterministic(self, small_iqp):
        sampler = Iqp(small_iqp, PauliChannel(0.05, 0.05, 0.1))
        assert sampler.run_shot(3, 9)[0] == sampler.run_shot(3, 9)[0]

    @pytest.mark.slow
    def test_shots_follow_channel_distribution(self, small_iqp):
        model = PauliChannel(0.02, 0.03, 0.1)
        sampler = Iqp(small_iqp, model)
        shots = 2000
        counts = np.zeros(8)
        for shot in range(shots):
            counts[sampler.run_shot(4, shot)[0].bits] += 1
        assert tvd(counts / shots, exact_iqp_distribution(small_iqp, model)).tv < 0.07
