import math

import numpy as np
import pytest

from cliffsim.circuits import BlochRotation, CliffordCircuit, Geometry, MeasurementBasis, ProductState, \
    random_clifford_circuit, random_measurement_basis, random_product_state
from cliffsim.exceptions import ConfigError, CutoffExceeded, ToleranceError
from cliffsim.linalg.gf2 import Gf2Matrix, rank
from cliffsim.linalg.pauli import PauliString, hermitian_from_symplectic, interleave
from cliffsim.methods import Ccc, Clifford, Cm, build_components, centralizer_basis, check_commutation, \
    component_table, configuration_distribution, depolarized_by_membership, depolarized_qubits, enumerate_group, \
    marginal_probability, plan_components, truncate_generators
from cliffsim.noise import Depolarizing, ErrorConfiguration, PauliChannel, propagate_errors, \
    sample_error_configuration
from cliffsim.oracle import exact_ccc_distribution, exact_noisy_distribution, tvd


def _single_site(n, d, *sites):
    return ErrorConfiguration(n, d, tuple(sites))


class TestCentralizer:
    def test_single_x_generator(self, bell_circuit):
        m = propagate_errors(bell_circuit, _single_site(2, 2, (0, 0)))
        # M_b = {X0, Z0}: qubit 0 is fully depolarized
        cent = centralizer_basis(m, 2)
        assert rank(cent) == 2
        assert depolarized_qubits(cent, 2).tolist() == [True, False]

    def test_rows_commute_with_generators(self, rng):
        for _ in range(10):
            c = random_clifford_circuit(5, 4, rng)
            m = propagate_errors(c, sample_error_configuration(rng, 5, 4, Depolarizing(0.15)))
            cent = centralizer_basis(m, 5)
            assert len(cent) == 10 - rank(m.tableau)
            for row in cent:
                s = hermitian_from_symplectic(row)
                assert all(s.commutes(g) for g in m.generators)

    def test_flags_agree_with_membership_test(self, rng):
        for _ in range(20):
            c = random_clifford_circuit(4, 3, rng)
            m = propagate_errors(c, sample_error_configuration(rng, 4, 3, Depolarizing(0.3)))
            assert depolarized_qubits(centralizer_basis(m, 4), 4).tolist() == \
                depolarized_by_membership(m, 4).tolist()

    def test_no_errors_keeps_everything(self, bell_circuit):
        m = propagate_errors(bell_circuit, _single_site(2, 2))
        assert len(centralizer_basis(m, 2)) == 4


class TestComponents:
    def test_single_seed(self, chain_circuit):
        flags = np.ones(8, dtype=bool)
        flags[0] = False
        assert build_components(chain_circuit, flags) == [(0, 1, 2)]

    def test_disjoint_cones_stay_apart(self, chain_circuit):
        flags = np.ones(8, dtype=bool)
        flags[[0, 7]] = False
        assert build_components(chain_circuit, flags) == [(0, 1, 2), (5, 6, 7)]

    def test_overlapping_cones_merge(self, chain_circuit):
        flags = np.ones(8, dtype=bool)
        flags[[0, 3]] = False
        assert build_components(chain_circuit, flags) == [(0, 1, 2, 3, 4)]

    def test_everything_depolarized(self, chain_circuit):
        assert build_components(chain_circuit, np.ones(8, dtype=bool)) == []

    def test_no_lattice_is_one_component(self):
        c = CliffordCircuit(4, [[("H", 0)], [("CNOT", 2, 3)]])
        assert build_components(c, np.array([False, True, False, True])) == [(0, 2, 3)]

    def test_plan_covers_every_surviving_qubit(self, chain_circuit, rng):
        for _ in range(10):
            b = sample_error_configuration(rng, 8, 2, Depolarizing(0.5))
            plan = plan_components(chain_circuit, b)
            inside = {q for comp in plan.components for q in comp}
            assert {q for q in range(8) if not plan.depolarized[q]} <= inside
            assert sorted(inside | set(plan.outside)) == list(range(8))
            for comp, gens in zip(plan.components, plan.generators):
                assert rank(Gf2Matrix([g.symplectic_vector().bits for g in gens], 16)) == len(gens)
                for g in gens:
                    assert set(g.support()) <= set(comp)

    def test_truncate_generators(self):
        cent = Gf2Matrix.from_strings(["1100" + "0000", "0110" + "0000", "1000" + "1000"])
        kept = truncate_generators(cent, [0])
        assert kept.to_strings() == ["10000000", "10001000"]

    @pytest.mark.parametrize("n,depth,lattice", [(12, 3, True), (10, 2, True), (5, 3, False)])
    def test_truncated_generators_commute_with_errors(self, rng, n, depth, lattice):
        c = random_clifford_circuit(n, depth, rng, Geometry((n,)) if lattice else None)
        mask = (1 << n) - 1
        for _ in range(20):
            b = sample_error_configuration(rng, n, depth, Depolarizing(0.15))
            m = propagate_errors(c, b)
            plan = plan_components(c, b)
            cent = centralizer_basis(m, n)
            for comp, gens in zip(plan.components, plan.generators):
                truncated = [PauliString(n, r & mask, r >> n) for r in truncate_generators(cent, comp).rows]
                for g in gens + truncated:
                    assert all(g.commutes(h) for h in m.generators)

    def test_anticommuting_piece_is_rejected(self):
        x0, z0 = interleave(0b01, 0b00), interleave(0b00, 0b01)
        check_commutation([x0], [x0, interleave(0b10, 0b10)], 2)
        with pytest.raises(ToleranceError, match="anticommutes"):
            check_commutation([x0], [x0, z0], 2)


class TestEnumerateGroup:
    def test_two_generators(self):
        gens = Gf2Matrix.from_strings(["1000", "0001"])
        elements = [p.to_string() for p in enumerate_group(gens)]
        assert elements == ["+II", "+XI", "+XZ", "+IZ"]

    def test_empty_group(self):
        assert [p.to_string() for p in enumerate_group(Gf2Matrix([], 4))] == ["+II"]

    def test_cutoff(self):
        with pytest.raises(CutoffExceeded) as info:
            list(enumerate_group(Gf2Matrix.identity(4), cutoff_log2=3))
        assert (info.value.rank, info.value.cutoff_log2) == (4, 3)


class TestMarginals:
    def test_magic_state_in_x_basis(self):
        c = CliffordCircuit(1, [[]])
        state = ProductState.named(["|A>"])
        plan = plan_components(c, _single_site(1, 1))
        p0 = marginal_probability(c, state, MeasurementBasis.named(["X"]), plan.generators[0], (0,), {0: 0})
        assert p0 == pytest.approx((1 + 1 / math.sqrt(2)) / 2)
        assert p0 == pytest.approx(0.853553, abs=1e-6)

    def test_marginals_sum_the_distribution(self, rng):
        c = random_clifford_circuit(4, 3, rng)
        state, basis = random_product_state(4, rng), random_measurement_basis(4, rng)
        plan = plan_components(c, _single_site(4, 3))
        (comp,), (gens,) = plan.components, plan.generators
        full = component_table(c, state, gens, comp).distribution(basis.axes[list(comp)])
        for q in comp:
            for z in (0, 1):
                expected = sum(full[i] for i in range(16) if (i >> comp.index(q)) & 1 == z)
                assert marginal_probability(c, state, basis, gens, comp, {q: z}) == pytest.approx(expected)

    def test_assignment_outside_component(self, bell_circuit):
        state, basis = ProductState.uniform(2), MeasurementBasis.computational(2)
        with pytest.raises(ValueError, match="inside the component"):
            marginal_probability(bell_circuit, state, basis, [], (0,), {1: 0})


class TestExactness:
    def test_ideal_bell_state(self, bell_circuit):
        p = configuration_distribution(bell_circuit, ProductState.uniform(2), MeasurementBasis.computational(2),
                                       _single_site(2, 2))
        assert np.allclose(p, [0.5, 0, 0, 0.5])

    def test_fully_depolarized_is_uniform(self, bell_circuit):
        b = _single_site(2, 2, *[(t, q) for t in range(3) for q in range(2)])
        p = configuration_distribution(bell_circuit, ProductState.uniform(2), MeasurementBasis.computational(2), b)
        assert np.allclose(p, 0.25)

    def test_fixed_configurations_match_dense_oracle(self, rng):
        for _ in range(15):
            n, d = int(rng.integers(1, 5)), int(rng.integers(1, 5))
            c = random_clifford_circuit(n, d, rng)
            state, basis = random_product_state(n, rng), random_measurement_basis(n, rng)
            for _ in range(3):
                b = sample_error_configuration(rng, n, d, Depolarizing(0.3))
                p = configuration_distribution(c, state, basis, b)
                q = exact_noisy_distribution(c, state, basis, config=b)
                assert tvd(p, q).tv < 1e-9

    def test_conjugated_clifford_matches_oracle(self, rng):
        c = random_clifford_circuit(3, 3, rng)
        rotation = BlochRotation((0.0, 0.6, 0.8), 1.1)
        sampler = Ccc(c, Depolarizing(0.2), rotation=rotation)
        for _ in range(5):
            b = sample_error_configuration(rng, 3, 3, Depolarizing(0.2))
            assert np.allclose(sampler.distribution(b), exact_ccc_distribution(c, rotation, config=b), atol=1e-9)

    @pytest.mark.slow
    def test_shots_follow_channel_distribution(self, bell_circuit):
        model = Depolarizing(0.2)
        sampler = Clifford(bell_circuit, model)
        counts = np.zeros(4)
        shots = 2000
        for shot in range(shots):
            bits, _ = sampler.run_shot(11, shot)
            counts[bits.bits] += 1
        exact = exact_noisy_distribution(bell_circuit, ProductState.uniform(2), MeasurementBasis.computational(2),
                                         model)
        assert tvd(counts / shots, exact).tv < 0.06


class TestSamplerClasses:
    def test_run_shot_is_deterministic(self, chain_circuit):
        sampler = Clifford(chain_circuit, Depolarizing(0.1))
        first, report = sampler.run_shot(5, 3)
        again, _ = sampler.run_shot(5, 3)
        assert first == again
        assert (report.seed, report.shot) == (5, 3)
        assert report.bitstring == first
        assert len(report.hex_bits()) == 2

    def test_cutoff_zero_aborts(self, chain_circuit):
        sampler = Clifford(chain_circuit, Depolarizing(0.0), cutoff_log2=0)
        bits, report = sampler.run_shot(1, 0)
        assert report.aborted
        assert report.max_rank == 16
        assert bits.length == 8

    def test_rejects_pauli_channels(self, bell_circuit):
        with pytest.raises(ConfigError, match="depolarizing"):
            Clifford(bell_circuit, PauliChannel(0.1, 0, 0))

    def test_cm_defaults_to_magic_inputs(self, bell_circuit):
        sampler = Cm(bell_circuit, Depolarizing(0.1))
        assert sampler.state == ProductState.uniform(2, "|A>")
        assert sampler.basis == MeasurementBasis.computational(2)

    def test_ccc_needs_rotation(self, bell_circuit):
        with pytest.raises(ConfigError, match="rotation"):
            Ccc(bell_circuit, Depolarizing(0.1))

    def test_report_row(self, bell_circuit):
        _, report = Clifford(bell_circuit, Depolarizing(0.5)).run_shot(2, 7)
        row = report.to_row(record_timing=False)
        assert row[:2] == [2, 7] and row[7] == 0
        assert row[3] == report.n_components
