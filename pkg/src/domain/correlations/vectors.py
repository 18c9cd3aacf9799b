import numpy as np
from scipy.special import logsumexp

from src.core.config import STATE_VECTOR_GUARD
from src.domain.errors import CapacityError
from src.domain.rbm.model import log_unnormalized_probability
from src.domain.schemas import DickeState, RbmParameters, StateVector
from src.domain.states import as_bitstring, bits_to_index, iter_basis_chunks, log_binomial, weight_basis


def _check_guard(n_qubits: int):
    if n_qubits > STATE_VECTOR_GUARD:
        raise CapacityError(
            f"A dense state vector of {n_qubits} qubits exceeds the guard of {STATE_VECTOR_GUARD}",
            n_qubits=n_qubits, guard=STATE_VECTOR_GUARD,
        )


def dicke_state_vector(state: DickeState) -> StateVector:
    _check_guard(state.n_qubits)
    amplitudes = np.zeros(1 << state.n_qubits)
    indices = bits_to_index(weight_basis(state.n_qubits, state.dicke_index))
    amplitudes[np.atleast_1d(indices)] = np.exp(-0.5 * log_binomial(state.n_qubits, state.dicke_index))
    return StateVector(n_qubits=state.n_qubits, amplitudes=amplitudes, source=state.label)


def product_state_vector(bits) -> StateVector:
    """Computational basis state |v>, e.g. "0000" for |0...0>."""
    bits = as_bitstring(bits)
    _check_guard(bits.shape[0])
    amplitudes = np.zeros(1 << bits.shape[0])
    amplitudes[bits_to_index(bits)] = 1.0
    label = "".join(str(b) for b in bits)
    return StateVector(n_qubits=bits.shape[0], amplitudes=amplitudes, source=f"product({label})")


def rbm_state_vector(rbm: RbmParameters) -> StateVector:
    """Normalized RBM amplitudes sqrt(p_rbm(v)) over the full basis."""
    _check_guard(rbm.n_visible)
    log_p = np.concatenate([log_unnormalized_probability(rbm, chunk) for chunk in iter_basis_chunks(rbm.n_visible)])
    amplitudes = np.exp((log_p - logsumexp(log_p)) / 2.0)
    # Renormalize so the squared norm is 1 to rounding
    amplitudes /= np.sqrt(np.dot(amplitudes, amplitudes))
    return StateVector(
        n_qubits=rbm.n_visible, amplitudes=amplitudes,
        source=f"rbm(N={rbm.n_visible},M={rbm.n_hidden})",
    )
