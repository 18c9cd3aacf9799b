import importlib
import itertools
import math
import os
import sys
import unittest
from unittest.mock import patch

import numpy as np
import pytest

# Add project root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.core.config import ENUMERATION_CHUNK
from src.domain.compact import export_explicit, optimal_weights
from src.domain.errors import CapacityError, DomainError
from src.domain.rbm import (
    amplitude, empirical_kl, fidelity_exact, gibbs_chain, gibbs_step, log_likelihood,
    log_unnormalized_probability, partition_function, sample_rbm, softplus,
)
from src.domain.schemas import DickeState, RbmParameters
from src.domain.states import iter_basis_chunks, iter_weight_chunks, weight_basis

rbm_model = importlib.import_module("src.domain.rbm.model")


def random_rbm(n_visible, n_hidden, seed, scale=0.5):
    rng = np.random.default_rng(seed)
    return RbmParameters(
        weights=rng.uniform(-scale, scale, size=(n_visible, n_hidden)),
        visible_bias=rng.uniform(-scale, scale, size=n_visible),
        hidden_bias=rng.uniform(-scale, scale, size=n_hidden),
    )


def linear_unnormalized(rbm, v):
    v = np.asarray(v, dtype=np.float64)
    return math.exp(v @ rbm.visible_bias) * float(np.prod(1.0 + np.exp(rbm.hidden_bias + v @ rbm.weights)))


class TestUnnormalizedProbability(unittest.TestCase):

    def test_zero_parameters(self):
        """All-zero parameters give log p~ = M ln 2 for every string"""
        rbm = RbmParameters.zeros(4, 3)
        for v in ("0000", "1010", "1111"):
            self.assertAlmostEqual(log_unnormalized_probability(rbm, v), 3 * math.log(2), places=12)

    def test_single_unit_probability(self):
        """N = M = 1, a = ln 2, W = b = 0: p(1) = 2/3"""
        rbm = RbmParameters(weights=[[0.0]], visible_bias=[math.log(2)], hidden_bias=[0.0])
        log_z = partition_function(rbm)
        p_one = math.exp(log_unnormalized_probability(rbm, "1") - log_z)
        self.assertAlmostEqual(p_one, 2 / 3, places=12)

    def test_matches_linear_space_formula(self):
        rbm = random_rbm(3, 3, seed=2)
        for bits in itertools.product((0, 1), repeat=3):
            expected = math.log(linear_unnormalized(rbm, bits))
            self.assertLess(abs(log_unnormalized_probability(rbm, np.array(bits)) - expected), 1e-12)

    def test_batch_evaluation(self):
        rbm = random_rbm(4, 2, seed=3)
        batch = weight_basis(4, 2)
        values = log_unnormalized_probability(rbm, batch)
        self.assertEqual(values.shape, (6,))
        self.assertAlmostEqual(values[0], log_unnormalized_probability(rbm, batch[0]), places=12)

    def test_length_mismatch(self):
        with self.assertRaises(DomainError):
            log_unnormalized_probability(RbmParameters.zeros(4, 2), "101")

    def test_softplus_is_stable(self):
        self.assertEqual(float(softplus(1e4)), 1e4)
        self.assertEqual(float(softplus(-1e4)), 0.0)
        self.assertAlmostEqual(float(softplus(0.0)), math.log(2), places=15)

    def test_hidden_unit_flip_gauge(self):
        """
        Flipping hidden unit j (W_j -> -W_j, b_j -> -b_j, a -> a + W_j)
        shifts log p~ by the constant -b_j and leaves p(v) unchanged.
        """
        rbm = random_rbm(4, 3, seed=4)
        j = 1
        weights = rbm.weights.copy()
        weights[:, j] *= -1
        hidden_bias = rbm.hidden_bias.copy()
        hidden_bias[j] *= -1
        flipped = RbmParameters(weights=weights, visible_bias=rbm.visible_bias + rbm.weights[:, j],
                                hidden_bias=hidden_bias)

        basis = np.concatenate(list(iter_basis_chunks(4)))
        shift = log_unnormalized_probability(flipped, basis) - log_unnormalized_probability(rbm, basis)
        np.testing.assert_allclose(shift, -rbm.hidden_bias[j], atol=1e-12)

        p_original = np.exp(log_unnormalized_probability(rbm, basis) - partition_function(rbm))
        p_flipped = np.exp(log_unnormalized_probability(flipped, basis) - partition_function(flipped))
        np.testing.assert_allclose(p_flipped, p_original, atol=1e-12)


class TestPartitionFunction(unittest.TestCase):

    def test_zero_parameters(self):
        """log Z = (N + M) ln 2"""
        self.assertAlmostEqual(partition_function(RbmParameters.zeros(5, 3)), 8 * math.log(2), places=12)

    def test_linear_space(self):
        rbm = random_rbm(2, 1, seed=5)
        z = sum(linear_unnormalized(rbm, bits) for bits in itertools.product((0, 1), repeat=2))
        self.assertAlmostEqual(partition_function(rbm), math.log(z), places=12)

    def test_visible_bias_shift_bound(self):
        """Raising every a_i by c > 0 raises log Z by at most c N"""
        rbm = random_rbm(5, 2, seed=6)
        c = 0.7
        shifted = RbmParameters(weights=rbm.weights, visible_bias=rbm.visible_bias + c, hidden_bias=rbm.hidden_bias)
        increase = partition_function(shifted) - partition_function(rbm)
        self.assertGreaterEqual(increase, 0.0)
        self.assertLessEqual(increase, c * 5 + 1e-12)

    def test_guard(self):
        with self.assertRaises(CapacityError):
            partition_function(RbmParameters.zeros(25, 1))


class TestAmplitudeAndFidelity(unittest.TestCase):

    def test_uniform_amplitude(self):
        rbm = RbmParameters.zeros(2, 2)
        self.assertAlmostEqual(float(amplitude(rbm, "01", partition_function(rbm))), 0.5, places=12)

    def test_amplitudes_are_normalized(self):
        rbm = random_rbm(10, 5, seed=7)
        log_z = partition_function(rbm)
        total = sum(float(np.sum(amplitude(rbm, chunk, log_z) ** 2)) for chunk in iter_basis_chunks(10))
        self.assertLess(abs(total - 1.0), 1e-10)

    def test_uniform_state_against_w_state(self):
        """The uniform 4-qubit state overlaps the W state with fidelity 1/4"""
        fidelity = fidelity_exact(RbmParameters.zeros(4, 2), DickeState(n_qubits=4, dicke_index=1))
        self.assertAlmostEqual(fidelity, 0.25, places=12)

    def test_compact_network_is_orthogonal_to_other_sectors(self):
        rbm = export_explicit(optimal_weights(8, 3, 50.0))
        self.assertLess(fidelity_exact(rbm, DickeState(n_qubits=8, dicke_index=4)), 1e-10)
        self.assertGreater(fidelity_exact(rbm, DickeState(n_qubits=8, dicke_index=3)), 0.999)

    def test_fidelity_range(self):
        for seed in range(5):
            fidelity = fidelity_exact(random_rbm(6, 4, seed=seed, scale=2.0), DickeState(n_qubits=6, dicke_index=2))
            self.assertGreaterEqual(fidelity, 0.0)
            self.assertLessEqual(fidelity, 1.0)

    def test_qubit_mismatch(self):
        with self.assertRaises(DomainError):
            fidelity_exact(RbmParameters.zeros(4, 2), DickeState(n_qubits=5, dicke_index=1))

    def test_sector_is_streamed_in_chunks(self):
        rbm = random_rbm(12, 6, seed=11)
        target = DickeState(n_qubits=12, dicke_index=6)
        sizes = []

        def small_chunks(n_qubits, weight):
            for chunk in iter_weight_chunks(n_qubits, weight, chunk_size=500):
                sizes.append(len(chunk))
                yield chunk

        with patch.object(rbm_model, "iter_weight_chunks", small_chunks):
            streamed = fidelity_exact(rbm, target)
        self.assertEqual(sizes, [500, 424])

        log_z = partition_function(rbm)
        sector = log_unnormalized_probability(rbm, weight_basis(12, 6))
        overlap = np.sum(np.exp((sector - log_z) / 2.0))
        self.assertAlmostEqual(streamed, overlap ** 2 / math.comb(12, 6), places=12)

    def test_large_sector_stays_within_chunk_size(self):
        """N = 20, D = 10 (184756 strings) never materializes more than one chunk"""
        sizes = []

        def recording(n_qubits, weight):
            for chunk in iter_weight_chunks(n_qubits, weight):
                sizes.append(len(chunk))
                yield chunk

        with patch.object(rbm_model, "iter_weight_chunks", recording):
            fidelity = fidelity_exact(RbmParameters.zeros(20, 2), DickeState(n_qubits=20, dicke_index=10))
        self.assertAlmostEqual(fidelity, math.comb(20, 10) / 2 ** 20, places=12)
        self.assertEqual(sum(sizes), math.comb(20, 10))
        self.assertLessEqual(max(sizes), ENUMERATION_CHUNK)

    def test_likelihood_and_kl(self):
        """Uniform model on W-state data: mean log p = -4 ln 2 and KL = 2 ln 2"""
        rbm = RbmParameters.zeros(4, 2)
        data = np.tile(weight_basis(4, 1), (25, 1))
        self.assertAlmostEqual(log_likelihood(rbm, data), -4 * math.log(2), places=12)
        self.assertAlmostEqual(empirical_kl(rbm, data), 2 * math.log(2), places=12)


class TestGibbsSampling(unittest.TestCase):

    def test_zero_parameters_give_fair_bits(self):
        rng = np.random.default_rng(0)
        v = gibbs_step(RbmParameters.zeros(4, 3), np.zeros((10000, 4), dtype=np.uint8), rng)
        self.assertEqual(v.dtype, np.uint8)
        self.assertLess(abs(float(v.mean()) - 0.5), 0.02)

    def test_strong_visible_bias(self):
        rbm = RbmParameters(weights=np.zeros((3, 2)), visible_bias=np.full(3, 50.0), hidden_bias=np.zeros(2))
        v = gibbs_step(rbm, np.zeros((100, 3), dtype=np.uint8), np.random.default_rng(1))
        self.assertTrue(np.all(v == 1))

    def test_chains_reach_model_distribution(self):
        """Empirical frequencies of 40000 chains match p_rbm within 0.01"""
        rbm = random_rbm(2, 2, seed=9)
        rng = np.random.default_rng(10)
        start = rng.integers(0, 2, size=(40000, 2), dtype=np.uint8)
        final = gibbs_chain(rbm, start, 30, rng)

        log_z = partition_function(rbm)
        for bits in itertools.product((0, 1), repeat=2):
            expected = math.exp(log_unnormalized_probability(rbm, np.array(bits)) - log_z)
            observed = float(np.mean(np.all(final == np.array(bits), axis=1)))
            self.assertLess(abs(observed - expected), 0.01, msg=f"v={bits}")

    def test_length_mismatch(self):
        with self.assertRaises(DomainError):
            gibbs_step(RbmParameters.zeros(3, 2), np.zeros(4, dtype=np.uint8), np.random.default_rng(0))


def test_sample_rbm_is_reproducible():
    rbm = random_rbm(5, 3, seed=11)
    first = sample_rbm(rbm, 5000, seed=12, burn_in=5)
    second = sample_rbm(rbm, 5000, seed=12, burn_in=5)
    assert first.count == 5000
    assert first.seed == 12
    np.testing.assert_array_equal(first.samples, second.samples)


def test_sample_rbm_rejects_zero_count():
    with pytest.raises(DomainError):
        sample_rbm(RbmParameters.zeros(3, 2), 0, seed=1)


if __name__ == '__main__':
    unittest.main()
