"""
Two-parameter circulant RBM (M = N, zero biases).

Every weight-d bitstring has the same unnormalized probability
  log p~(d) = d softplus(w_max + (d-1) w_min) + (N-d) softplus(d w_min),
so the network state decomposes exactly over Dicke sectors with
F_D = p~(D) C(N, D) / sum_d p~(d) C(N, d).
"""
import math

import numpy as np
from scipy.special import logsumexp

from src.domain.constants import FIDELITY_EXPONENT_CUTOFF, SECTOR_THRESHOLD, TOLERANCES
from src.domain.errors import DegenerateStateError, DomainError
from src.domain.schemas import CompactRbm, RbmParameters, SectorPoint
from src.domain.states import log_binomial_row
from src.domain.rbm.model import softplus


def _check_d(c: CompactRbm, d: int):
    if not 0 <= d <= c.n_qubits:
        raise DomainError(f"Hamming weight {d} outside [0, {c.n_qubits}]")


def log_unnormalized_weight_probability(c: CompactRbm, d: int) -> float:
    """log p~ of any single bitstring of Hamming weight d."""
    _check_d(c, d)
    n = c.n_qubits
    return float(d * softplus(c.w_max + (d - 1) * c.w_min) + (n - d) * softplus(d * c.w_min))


def log_weight_profile(c: CompactRbm) -> np.ndarray:
    """log(p~(d) C(N, d)) for d = 0..N: the unnormalized weight of each sector."""
    n = c.n_qubits
    d = np.arange(n + 1, dtype=np.float64)
    log_p = d * softplus(c.w_max + (d - 1) * c.w_min) + (n - d) * softplus(d * c.w_min)
    return log_p + log_binomial_row(n)


def sector_fidelities(c: CompactRbm) -> np.ndarray:
    """F_D for every D = 0..N; sums to 1."""
    profile = log_weight_profile(c)
    return np.exp(profile - logsumexp(profile))


def fidelity_analytic(c: CompactRbm, dicke_index: int) -> float:
    """
    F_D = (1 + sum_{d != D} exp(delta_d))^-1 with
    delta_d = log p~(d) - log p~(D) + log C(N, d) - log C(N, D).
    Any delta_d above the exponent cutoff makes the result 0.
    """
    _check_d(c, dicke_index)
    profile = log_weight_profile(c)
    delta = np.delete(profile - profile[dicke_index], dicke_index)
    if delta.size and delta.max() > FIDELITY_EXPONENT_CUTOFF:
        return 0.0
    return float(1.0 / (1.0 + np.exp(delta).sum()))


def optimal_weights(n_qubits: int, dicke_index: int, scale: float) -> CompactRbm:
    """
    Weights on the optimal ray of sector D: w_min = -w, w_max = (2D - 1) w.

    A hidden unit whose partner is on and which sees K other active sites has
    input w_max + K w_min; the sector energy is maximal when
    K = (1 - w_max / w_min) / 2 = D - 1, which fixes the ratio. Fidelity
    approaches 1 as w grows because larger weights suppress the thermal
    weight of neighbouring sectors.
    """
    if n_qubits < 1:
        raise DomainError(f"Need at least one qubit, got {n_qubits}")
    if not 0 <= dicke_index <= n_qubits:
        raise DomainError(f"Dicke index {dicke_index} outside [0, {n_qubits}]")
    if dicke_index == 0 or dicke_index == n_qubits:
        raise DegenerateStateError(
            f"D={dicke_index} is a product state; the optimal-ratio rule needs 1 <= D <= N-1"
        )
    if not (scale > 0 and math.isfinite(scale)):
        raise DomainError(f"Weight scale must be positive and finite, got {scale}")
    return CompactRbm(n_qubits=n_qubits, w_min=-scale, w_max=(2 * dicke_index - 1) * scale)


def from_ratio(n_qubits: int, scale: float, ratio: float) -> CompactRbm:
    """w_min = -w, w_max = ratio * w."""
    if not (scale > 0 and math.isfinite(scale)):
        raise DomainError(f"Weight scale must be positive and finite, got {scale}")
    if not math.isfinite(ratio):
        raise DomainError(f"Ratio must be finite, got {ratio}")
    return CompactRbm(n_qubits=n_qubits, w_min=-scale, w_max=ratio * scale)


def export_explicit(c: CompactRbm) -> RbmParameters:
    """N x N circulant: w_max on the diagonal, w_min elsewhere, zero biases."""
    weights = np.full((c.n_qubits, c.n_qubits), c.w_min, dtype=np.float64)
    np.fill_diagonal(weights, c.w_max)
    return RbmParameters(
        weights=weights,
        visible_bias=np.zeros(c.n_qubits),
        hidden_bias=np.zeros(c.n_qubits),
    )


def pick_sector(fidelities: np.ndarray, threshold: float):
    """
    (best_d or -1, best fidelity, tie flag) for one row of sector fidelities.
    Sectors within SECTOR_TIE of the maximum tie; the smallest D wins.
    """
    best = float(fidelities.max())
    candidates = np.flatnonzero(fidelities >= best - TOLERANCES['SECTOR_TIE'])
    best_d = int(candidates[0]) if best > threshold else -1
    return best_d, min(1.0, max(0.0, best)), bool(candidates.size > 1)


def classify_point(c: CompactRbm, threshold: float = SECTOR_THRESHOLD) -> SectorPoint:
    best_d, best_fidelity, tie = pick_sector(sector_fidelities(c), threshold)
    return SectorPoint(
        w_min=c.w_min, w_max=c.w_max,
        best_d=None if best_d < 0 else best_d,
        best_fidelity=best_fidelity, tie=tie,
    )
