import math

import numpy as np
import pytest
from scipy.special import comb

from cliffsim.circuits import BlochRotation, CliffordCircuit, MeasurementBasis, ProductState, random_clifford_circuit
from cliffsim.exceptions import SizeCapError, ToleranceError
from cliffsim.noise import Depolarizing
from cliffsim.oracle import DensityMatrix, anticoncentration_bound, census_by_weight, collision_pauli_bound, \
    collision_probability, enumerate_S_w, exact_ccc_distribution, exact_noisy_distribution, tvd


def identity_circuit(n):
    return CliffordCircuit(n, [[]])


class TestTvd:
    def test_equal(self):
        assert tvd([0.5, 0.5], [0.5, 0.5]) == (0.0, 0.0)

    def test_point_masses(self):
        d = tvd([1, 0], [0, 1])
        assert (d.l1, d.tv) == (2.0, 1.0)

    def test_uniform_vs_point_mass(self):
        assert tvd([0.5, 0.5], [1, 0]).l1 == pytest.approx(1.0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="differ in length"):
            tvd([1.0], [0.5, 0.5])


class TestDensityMatrix:
    def test_point_mass(self):
        p = exact_noisy_distribution(identity_circuit(3), ProductState.uniform(3), MeasurementBasis.computational(3),
                                     Depolarizing(0.0))
        assert np.allclose(p, np.eye(8)[0])

    def test_full_depolarizing_single_qubit(self):
        p = exact_noisy_distribution(identity_circuit(1), ProductState.named(["|A>"]),
                                     MeasurementBasis.named(["Y"]), Depolarizing(1.0))
        assert np.allclose(p, [0.5, 0.5])

    def test_bell_state(self, bell_circuit):
        p = exact_noisy_distribution(bell_circuit, ProductState.uniform(2), MeasurementBasis.computational(2))
        assert np.allclose(p, [0.5, 0, 0, 0.5])
        xx = exact_noisy_distribution(bell_circuit, ProductState.uniform(2), MeasurementBasis.named(["X", "X"]))
        assert np.allclose(xx, [0.5, 0, 0, 0.5])

    def test_qubit_order(self):
        c = CliffordCircuit(2, [[("X", 1)]])
        p = exact_noisy_distribution(c, ProductState.uniform(2), MeasurementBasis.computational(2))
        assert np.allclose(p, [0, 0, 1, 0])

    def test_cnot_direction(self):
        c = CliffordCircuit(2, [[("X", 0)], [("CNOT", 0, 1)]])
        p = exact_noisy_distribution(c, ProductState.uniform(2), MeasurementBasis.computational(2))
        assert np.allclose(p, [0, 0, 0, 1])

    def test_channels_keep_a_valid_state(self, rng):
        rho = DensityMatrix.product(ProductState([(0.3, 0.4, 0.5), (0.0, 0.0, -1.0), (0.6, 0.0, 0.0)]))
        rho.depolarize(0, 0.3).maximally_mix(2).apply_unitary(np.eye(4)[[0, 1, 3, 2]], (1, 2))
        rho.check()
        assert rho.matrix.shape == (8, 8)

    def test_size_cap(self):
        with pytest.raises(SizeCapError, match="capped"):
            DensityMatrix.product(ProductState.uniform(13))

    def test_unnormalized_state_is_a_tolerance_error(self):
        rho = DensityMatrix(np.diag([0.6, 0.6]))
        with pytest.raises(ToleranceError):
            rho.probabilities(MeasurementBasis.computational(1))
        with pytest.raises(ToleranceError, match="trace"):
            rho.check()

    def test_conjugated_identity_is_a_point_mass(self):
        rotation = BlochRotation((0.0, 0.6, 0.8), 0.7)
        p = exact_ccc_distribution(identity_circuit(2), rotation, Depolarizing(0.0))
        assert np.allclose(p, [1, 0, 0, 0])


class TestCensus:
    @pytest.mark.parametrize("w", [0, 1, 2, 3])
    def test_identity_circuit(self, w):
        census = enumerate_S_w(identity_circuit(3), range(3), w)
        assert census.count == int(comb(3, w, exact=True)) * 3 ** w
        assert census.bound == 2 * census.count
        assert census.members is None

    def test_identity_string_has_weight_zero(self, rng):
        c = random_clifford_circuit(4, 3, rng)
        census = enumerate_S_w(c, range(4), 0, return_set=True)
        assert census.count == 1
        assert census.members[0].weight() == 0

    def test_random_circuit_respects_bound(self, rng):
        c = random_clifford_circuit(4, 3, rng)
        region = [0, 1, 3]
        for w in range(4):
            census = enumerate_S_w(c, region, w, return_set=True)
            assert census.count <= census.bound
            for s in census.members:
                supports = c.support_profile(s)
                assert all(m & ~0b1011 == 0 for m in supports)
                assert min(bin(m).count("1") for m in supports) == w

    def test_counts_partition_the_region(self, chain_circuit):
        census = census_by_weight(chain_circuit, [0, 1, 2])
        assert all(len(v) > 0 for v in census.values())
        assert sum(len(v) for v in census.values()) <= 4 ** 3

    def test_region_cap(self, rng):
        c = random_clifford_circuit(9, 1, rng)
        with pytest.raises(SizeCapError):
            enumerate_S_w(c, range(9), 1)


class TestCollision:
    def test_fully_depolarizing(self, rng):
        c = random_clifford_circuit(3, 2, rng)
        assert collision_probability(c, Depolarizing(1.0)) == pytest.approx(1 / 8)

    def test_noiseless_identity_is_deterministic(self):
        assert collision_probability(identity_circuit(3), Depolarizing(0.0)) == pytest.approx(1.0)

    def test_random_circuit_below_bounds(self, rng):
        model = Depolarizing(0.2)
        for _ in range(3):
            c = random_clifford_circuit(3, 10, rng)
            value = collision_probability(c, model)
            assert 1 / 8 - 1e-12 <= value
            assert value <= anticoncentration_bound(3, c.noise_layers, 0.2)
            assert value <= collision_pauli_bound(c, model) + 1e-12

    def test_size_cap(self):
        with pytest.raises(SizeCapError):
            collision_probability(identity_circuit(7), Depolarizing(0.1))


class TestAnticoncentrationBound:
    def test_fully_depolarizing(self):
        assert anticoncentration_bound(5, 7, 1.0) == pytest.approx(2.0 ** -5)

    def test_noiseless_single_layer(self):
        assert anticoncentration_bound(1, 1, 0.0) == pytest.approx(0.5 * (1 + math.e ** 3))

    def test_monotone_in_layers(self):
        values = [anticoncentration_bound(6, d, 0.3) for d in range(1, 40)]
        assert all(a >= b for a, b in zip(values, values[1:]))
