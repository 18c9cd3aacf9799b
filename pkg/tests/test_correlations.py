import itertools
import math
import os
import sys
import unittest

import numpy as np
import pytest

# Add project root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.domain.correlations import (
    MomentCache, compare_reports, correlation_histogram, correlation_histogram_from_vector,
    dicke_state_vector, pauli_expectation, product_state_vector, projection_labels,
    rbm_state_vector, report_table, ursell,
)
from src.domain.errors import CapacityError, DomainError
from src.domain.schemas import DickeState, PauliString, RbmParameters, StateVector


def set_partitions(items):
    """Every partition of a list into non-empty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


def cumulant_oracle(psi, sites, label):
    """Joint cumulant by the general moment-partition formula."""
    total = 0.0
    for partition in set_partitions(list(range(len(sites)))):
        term = (-1) ** (len(partition) - 1) * math.factorial(len(partition) - 1)
        for block in partition:
            pauli = PauliString.from_label(tuple(sites[p] for p in block), "".join(label[p] for p in block))
            term *= pauli_expectation(psi, pauli)
        total += term
    return total


def random_state(n_qubits, seed):
    rng = np.random.default_rng(seed)
    amplitudes = rng.normal(size=1 << n_qubits)
    return StateVector(n_qubits=n_qubits, amplitudes=amplitudes / np.linalg.norm(amplitudes))


class TestPauliExpectation(unittest.TestCase):

    def test_single_site_z(self):
        """<Z_1> = 0.5 on the 4-qubit W state and exactly 0 at half filling"""
        w_state = dicke_state_vector(DickeState(n_qubits=4, dicke_index=1))
        half = dicke_state_vector(DickeState(n_qubits=16, dicke_index=8))
        self.assertAlmostEqual(pauli_expectation(w_state, PauliString.from_label((1,), "z")), 0.5, places=12)
        self.assertEqual(pauli_expectation(half, PauliString.from_label((1,), "z")), 0.0)

    def test_xx_on_w_state(self):
        w_state = dicke_state_vector(DickeState(n_qubits=4, dicke_index=1))
        self.assertAlmostEqual(pauli_expectation(w_state, PauliString.from_label((1, 2), "xx")), 0.5, places=12)

    def test_odd_y_is_exactly_zero(self):
        psi = random_state(3, seed=1)
        for label in ("y", "xy", "yzz", "yyy"):
            sites = tuple(range(1, len(label) + 1))
            self.assertEqual(pauli_expectation(psi, PauliString.from_label(sites, label)), 0.0)

    def test_product_state(self):
        """|0000> gives <Z> = 1 and <X> = 0 on every site"""
        psi = product_state_vector("0000")
        for site in range(1, 5):
            self.assertEqual(pauli_expectation(psi, PauliString.from_label((site,), "z")), 1.0)
            self.assertEqual(pauli_expectation(psi, PauliString.from_label((site,), "x")), 0.0)

    def test_site_out_of_range(self):
        psi = product_state_vector("00")
        with self.assertRaises(DomainError):
            pauli_expectation(psi, PauliString.from_label((3,), "z"))

    def test_cache_reuses_values(self):
        psi = dicke_state_vector(DickeState(n_qubits=6, dicke_index=2))
        cache = MomentCache(psi)
        first = cache.expectation((1, 2), "xx")
        second = cache.expectation((1, 2), "xx")
        self.assertEqual(first, second)
        self.assertEqual(len(cache), 1)


class TestUrsell(unittest.TestCase):

    def test_zz_at_half_filling(self):
        """Gamma^zz on the 16-qubit half-filled state is -1/15"""
        psi = dicke_state_vector(DickeState(n_qubits=16, dicke_index=8))
        self.assertLess(abs(ursell(psi, (1, 2), "zz") - (-1.0 / 15.0)), 1e-12)

    def test_product_state_has_no_connected_correlations(self):
        psi = product_state_vector("0000")
        for order in (2, 3, 4):
            report = correlation_histogram_from_vector(psi, order)
            self.assertTrue(report.all_zero)

    def test_odd_y_label_is_exactly_zero(self):
        psi = dicke_state_vector(DickeState(n_qubits=8, dicke_index=3))
        self.assertEqual(ursell(psi, (1, 2, 3), "xyz"), 0.0)
        self.assertEqual(ursell(psi, (4, 2), "yz"), 0.0)

    def test_matches_partition_formula(self):
        """Orders 1-3 on random 3-qubit states agree with the set-partition cumulant"""
        for seed in range(5):
            psi = random_state(3, seed)
            for order in (1, 2, 3):
                for sites in itertools.permutations((1, 2, 3), order):
                    for label in projection_labels(order):
                        expected = cumulant_oracle(psi, sites, label)
                        self.assertLess(abs(ursell(psi, sites, label) - expected), 1e-10,
                                        msg=f"seed={seed} sites={sites} label={label}")

    def test_fourth_order_matches_partition_formula(self):
        psi = random_state(4, seed=8)
        for label in ("xxxx", "xxzz", "zxzx", "yyzz", "zzzz", "xyyx"):
            expected = cumulant_oracle(psi, (1, 2, 3, 4), label)
            self.assertLess(abs(ursell(psi, (1, 2, 3, 4), label) - expected), 1e-10)

    def test_fourth_order_site_exchange(self):
        """Any ordering of four sites of a Dicke state gives the same value"""
        psi = dicke_state_vector(DickeState(n_qubits=16, dicke_index=8))
        cache = MomentCache(psi)
        for label in ("xxzz", "xyxy", "zzzz"):
            reference = ursell(psi, (1, 2, 3, 4), label, cache)
            for sites in list(itertools.permutations((2, 5, 9, 14)))[:6]:
                self.assertLess(abs(ursell(psi, sites, label, cache) - reference), 1e-10)

    def test_invalid_requests(self):
        psi = dicke_state_vector(DickeState(n_qubits=6, dicke_index=2))
        with self.assertRaises(DomainError):
            ursell(psi, (1, 2, 3, 4, 5), "xxxxx")
        with self.assertRaises(DomainError):
            ursell(psi, (1, 1), "xx")
        with self.assertRaises(DomainError):
            ursell(psi, (1, 2), "xa")
        with self.assertRaises(DomainError):
            ursell(psi, (1, 7), "xx")
        with self.assertRaises(DomainError):
            ursell(psi, (1, 2), "x")


class TestCorrelationHistogram(unittest.TestCase):

    def test_labels(self):
        self.assertEqual(len(projection_labels(4)), 81)
        self.assertEqual(projection_labels(2)[:3], ["xx", "xy", "xz"])

    def test_first_order_z(self):
        """Gamma^z vanishes only at half filling"""
        values = {d: correlation_histogram(DickeState(n_qubits=16, dicke_index=d), 1).value("z")
                  for d in (1, 4, 8)}
        self.assertNotEqual(values[1], 0.0)
        self.assertNotEqual(values[4], 0.0)
        self.assertEqual(values[8], 0.0)
        self.assertAlmostEqual(values[1], 1 - 2 / 16, places=12)

    def test_xx_grows_toward_half_filling(self):
        values = [correlation_histogram(DickeState(n_qubits=16, dicke_index=d), 2).value("xx") for d in (1, 4, 8)]
        self.assertLess(values[0], values[1])
        self.assertLess(values[1], values[2])
        self.assertAlmostEqual(values[2], 128 / 240, places=12)

    def test_fourth_order_grows_toward_half_filling(self):
        reports = {d: correlation_histogram(DickeState(n_qubits=16, dicke_index=d), 4, audit_tuples=2)
                   for d in (1, 4, 8)}
        self.assertLess(reports[1].max_abs(), reports[4].max_abs())
        self.assertLess(reports[4].max_abs(), reports[8].max_abs())
        second_order = correlation_histogram(DickeState(n_qubits=16, dicke_index=8), 2)
        self.assertGreaterEqual(reports[8].max_abs(), 0.1 * second_order.max_abs())

    def test_audit_passes(self):
        report = correlation_histogram(DickeState(n_qubits=10, dicke_index=3), 3, audit_tuples=10, seed=4)
        self.assertTrue(report.audit.passed)
        self.assertEqual(report.audit.tuples_checked, 10)
        self.assertLessEqual(report.audit.max_deviation, 1e-10)

    def test_levels_cover_every_label(self):
        report = correlation_histogram(DickeState(n_qubits=8, dicke_index=4), 2)
        self.assertEqual(sum(level.multiplicity for level in report.levels), 9)
        # xy, yx, yz, zy, xz, zx vanish by symmetry
        self.assertIn("xy", report.zero_labels)
        self.assertIn("xz", report.zero_labels)

    def test_order_above_qubit_count(self):
        with self.assertRaises(DomainError):
            correlation_histogram(DickeState(n_qubits=3, dicke_index=1), 4)

    def test_state_vector_guard(self):
        with self.assertRaises(CapacityError):
            correlation_histogram(DickeState(n_qubits=21, dicke_index=3), 2)


class TestReportTables(unittest.TestCase):

    def test_report_table(self):
        report = correlation_histogram(DickeState(n_qubits=6, dicke_index=2), 2)
        table = report_table(report)
        self.assertEqual(list(table.columns), ["order", "label", "sites", "value"])
        self.assertEqual(len(table), 9)
        self.assertEqual(table.iloc[0]["sites"], "1-2")

    def test_compare_identical_reports(self):
        state = DickeState(n_qubits=6, dicke_index=2)
        table = compare_reports(correlation_histogram(state, 2), correlation_histogram_from_vector(
            dicke_state_vector(state), 2))
        self.assertLess(table["abs_deviation"].max(), 1e-12)


def test_rbm_state_vector_is_normalized():
    rng = np.random.default_rng(0)
    rbm = RbmParameters.initialize(5, 3, 0.5, rng)
    psi = rbm_state_vector(rbm)
    assert abs(float(np.dot(psi.amplitudes, psi.amplitudes)) - 1.0) < 1e-12


def test_compare_rejects_mixed_orders():
    state = DickeState(n_qubits=5, dicke_index=2)
    with pytest.raises(DomainError):
        compare_reports(correlation_histogram(state, 1), correlation_histogram(state, 2))


if __name__ == '__main__':
    unittest.main()
