"""
RBM amplitude model.

p~(v) = exp(a.v) * prod_j (1 + exp(b_j + sum_i W_ij v_i)) and
Psi(v) = sqrt(p~(v) / Z). Everything is evaluated in log space; full-basis
sums stream through `iter_basis_chunks`.
"""
import math
from typing import Optional, Union, Sequence

import numpy as np
from scipy.special import logsumexp

from src.core.config import KL_GUARD, ENUMERATION_GUARD
from src.domain.errors import CapacityError, DomainError
from src.domain.schemas import DickeState, RbmParameters, SampleSet
from src.domain.states import iter_basis_chunks, iter_weight_chunks, log_binomial, as_bitstring
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

BitInput = Union[str, Sequence[int], np.ndarray]


def softplus(x):
    """ln(1 + e^x), finite for |x| up to 1e4 and beyond."""
    return np.logaddexp(0.0, x)


def _as_batch(rbm: RbmParameters, v: BitInput) -> np.ndarray:
    if isinstance(v, str):
        return as_bitstring(v, rbm.n_visible)[None, :].astype(np.float64)
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != rbm.n_visible:
        raise DomainError(f"Visible configuration has shape {np.shape(v)}, expected length {rbm.n_visible}")
    return arr


def log_unnormalized_probability(rbm: RbmParameters, v: BitInput) -> Union[float, np.ndarray]:
    """
    sum_i a_i v_i + sum_j softplus(b_j + sum_i W_ij v_i).
    A single bitstring gives a float; a (batch, N) array gives one value per row.
    """
    batch = _as_batch(rbm, v)
    values = batch @ rbm.visible_bias + softplus(batch @ rbm.weights + rbm.hidden_bias).sum(axis=1)
    if isinstance(v, str) or np.asarray(v).ndim == 1:
        return float(values[0])
    return values


def partition_function(rbm: RbmParameters) -> float:
    """
    log Z by streaming log-sum-exp over the full basis (N <= ENUMERATION_GUARD).
    """
    partials = [
        logsumexp(log_unnormalized_probability(rbm, chunk))
        for chunk in iter_basis_chunks(rbm.n_visible)
    ]
    return float(logsumexp(partials))


def amplitude(rbm: RbmParameters, v: BitInput, log_z: float) -> Union[float, np.ndarray]:
    """
    Psi(v) = exp((log p~(v) - log Z) / 2). `log_z` must come from
    `partition_function` for this same rbm; a stale value is not detected.
    """
    return np.exp((log_unnormalized_probability(rbm, v) - log_z) / 2.0)


def fidelity_exact(rbm: RbmParameters, target: DickeState, log_z: Optional[float] = None) -> float:
    """
    |<Psi^D_N|Psi_rbm>|^2 by enumeration:
    (sum_{|v|=D} sqrt(p~(v)))^2 / (C(N, D) Z), evaluated in log space with
    the weight-D sector streamed in chunks.
    """
    if target.n_qubits != rbm.n_visible:
        raise DomainError(f"Target has {target.n_qubits} qubits, RBM has {rbm.n_visible} visible units")
    if rbm.n_visible > ENUMERATION_GUARD:
        raise CapacityError(
            f"Exact fidelity needs enumeration of {rbm.n_visible} qubits (guard {ENUMERATION_GUARD})",
            n_qubits=rbm.n_visible, guard=ENUMERATION_GUARD,
        )
    if log_z is None:
        log_z = partition_function(rbm)

    partials = [
        logsumexp(log_unnormalized_probability(rbm, chunk) / 2.0)
        for chunk in iter_weight_chunks(target.n_qubits, target.dicke_index)
    ]
    log_overlap = logsumexp(partials)
    log_fidelity = 2.0 * log_overlap - log_binomial(target.n_qubits, target.dicke_index) - log_z
    return float(min(1.0, max(0.0, math.exp(log_fidelity))))


def log_likelihood(rbm: RbmParameters, samples: Union[SampleSet, np.ndarray],
                   log_z: Optional[float] = None) -> float:
    """Mean log p(v) over the samples; the negative is the training NLL."""
    data = samples.samples if isinstance(samples, SampleSet) else np.asarray(samples)
    if log_z is None:
        log_z = partition_function(rbm)
    return float(np.mean(log_unnormalized_probability(rbm, data)) - log_z)


def empirical_kl(rbm: RbmParameters, samples: Union[SampleSet, np.ndarray],
                 log_z: Optional[float] = None) -> float:
    """
    KL(q || p) with q the empirical distribution of the samples:
    sum_v q(v) ln q(v) - mean log p(v).
    """
    data = samples.samples if isinstance(samples, SampleSet) else np.asarray(samples)
    if rbm.n_visible > KL_GUARD:
        raise CapacityError(
            f"KL monitoring needs log Z for {rbm.n_visible} qubits (guard {KL_GUARD})",
            n_qubits=rbm.n_visible, guard=KL_GUARD,
        )
    _, counts = np.unique(data, axis=0, return_counts=True)
    q = counts / counts.sum()
    neg_entropy = float(np.sum(q * np.log(q)))
    return max(0.0, neg_entropy - log_likelihood(rbm, data, log_z))
