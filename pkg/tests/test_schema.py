import sys
import os

import numpy as np
import pytest
from pydantic import ValidationError

# Add the project root to the python path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.domain.schemas import (
    AxisSpec, CompactRbm, DickeState, PauliString, RbmParameters, SampleSet, StateVector,
)


def test_dicke_state():
    state = DickeState(n_qubits=8, dicke_index=3)
    assert state.label == "dicke(N=8,D=3)"
    with pytest.raises(ValidationError):
        DickeState(n_qubits=4, dicke_index=5)
    with pytest.raises(ValidationError):
        DickeState(n_qubits=0, dicke_index=0)


def test_sample_set():
    samples = SampleSet(samples=[[0, 1], [1, 0]], seed=3)
    assert samples.samples.dtype == np.uint8
    assert (samples.count, samples.n_qubits) == (2, 2)
    with pytest.raises(ValidationError):
        SampleSet(samples=[[0, 2]])
    with pytest.raises(ValidationError):
        SampleSet(samples=np.zeros((0, 3)))


def test_pauli_string_is_sorted_by_site():
    pauli = PauliString.from_label((3, 1), "zx")
    assert pauli.sites == (1, 3)
    assert pauli.label == "xz"
    with pytest.raises(ValidationError):
        PauliString.from_label((1, 1), "xx")
    with pytest.raises(ValidationError):
        PauliString.from_label((0,), "x")


def test_state_vector_norm():
    StateVector(n_qubits=1, amplitudes=[0.6, 0.8])
    with pytest.raises(ValidationError):
        StateVector(n_qubits=1, amplitudes=[0.6, 0.6])
    with pytest.raises(ValidationError):
        StateVector(n_qubits=2, amplitudes=[0.6, 0.8])


def test_rbm_parameters():
    rbm = RbmParameters.zeros(3, 2)
    assert (rbm.n_visible, rbm.n_hidden) == (3, 2)
    restored = RbmParameters.from_dict(rbm.to_dict())
    np.testing.assert_array_equal(restored.weights, rbm.weights)
    with pytest.raises(ValidationError):
        RbmParameters(weights=np.zeros((3, 2)), visible_bias=np.zeros(2), hidden_bias=np.zeros(2))
    with pytest.raises(ValidationError):
        RbmParameters(weights=[[np.inf, 0.0]], visible_bias=[0.0], hidden_bias=[0.0, 0.0])
    with pytest.raises(ValueError):
        RbmParameters.from_dict({**rbm.to_dict(), "n_hidden": 5})


def test_snapshot_is_read_only():
    rbm = RbmParameters.zeros(2, 2)
    snapshot = rbm.snapshot()
    rbm.weights[0, 0] = 1.0
    assert snapshot.weights[0, 0] == 0.0
    with pytest.raises(ValueError):
        snapshot.weights[0, 0] = 2.0


def test_compact_rbm():
    c = CompactRbm(n_qubits=8, w_min=-2.0, w_max=10.0)
    assert c.has_global_rf_signs
    assert c.ratio == 5.0
    assert CompactRbm(n_qubits=8, w_min=0.0, w_max=1.0).ratio == float("inf")


def test_axis_spec():
    axis = AxisSpec.from_count(0.0, 1.0, 11)
    assert axis.count == 11
    assert AxisSpec.from_count(2.0, 5.0, 1).count == 1
    with pytest.raises(ValidationError):
        AxisSpec(start=1.0, stop=0.0, step=0.1)
    with pytest.raises(ValidationError):
        AxisSpec(start=0.0, stop=1.0, step=0.0)
