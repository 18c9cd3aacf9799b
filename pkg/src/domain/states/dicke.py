import math
from typing import Optional, Union, Sequence

import numpy as np

from src.domain.constants import DEFAULT_SAMPLE_COUNT
from src.domain.errors import DomainError
from src.domain.schemas import DickeState, SampleSet, StateVector
from src.domain.states.bitstrings import as_bitstring, index_to_bits
from src.domain.states.combinatorics import log_binomial
from src.services.worker_pool import pool, resolve_seed, spawn_seeds
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

# Samples drawn per seeded chunk. Fixed so chunk i always covers the same rows.
SAMPLE_CHUNK = 8192


def dicke_amplitude(state: DickeState, v: Union[str, Sequence[int], np.ndarray]) -> float:
    """
    <v|Psi^D_N> = 1/sqrt(C(N, D)) on weight-D strings, 0 elsewhere.
    """
    bits = as_bitstring(v, state.n_qubits)
    if int(bits.sum()) != state.dicke_index:
        return 0.0
    return math.exp(-0.5 * log_binomial(state.n_qubits, state.dicke_index))


def _draw_weight_chunk(n_qubits: int, weight: int, count: int, seed_seq: np.random.SeedSequence) -> np.ndarray:
    """
    Uniform weight-`weight` strings by a partial Fisher-Yates shuffle of the
    positions, vectorized over rows: step t swaps slot t with a uniform slot in [t, N).
    """
    rng = np.random.default_rng(seed_seq)
    positions = np.tile(np.arange(n_qubits), (count, 1))
    rows = np.arange(count)
    for t in range(weight):
        pick = rng.integers(t, n_qubits, size=count)
        chosen = positions[rows, pick]
        positions[rows, pick] = positions[rows, t]
        positions[rows, t] = chosen

    bits = np.zeros((count, n_qubits), dtype=np.uint8)
    if weight:
        np.put_along_axis(bits, positions[:, :weight], 1, axis=1)
    return bits


def _chunk_sizes(count: int):
    full, rest = divmod(count, SAMPLE_CHUNK)
    return [SAMPLE_CHUNK] * full + ([rest] if rest else [])


def sample_measurements(state: DickeState, count: int = DEFAULT_SAMPLE_COUNT,
                        seed: Optional[int] = None) -> SampleSet:
    """
    Draws `count` projective measurements of |Psi^D_N>, i.e. uniform samples
    over the C(N, D) weight-D strings.

    Rows are produced in fixed-size chunks; chunk i uses
    SeedSequence(seed, spawn_key=(i,)), so the result depends only on
    (state, count, seed) and not on the worker count.
    """
    if count < 1:
        raise DomainError(f"Sample count must be positive, got {count}")
    seed = resolve_seed(seed)
    sizes = _chunk_sizes(count)
    seeds = spawn_seeds(seed, len(sizes))

    chunks = pool.map_ordered(
        lambda job: _draw_weight_chunk(state.n_qubits, state.dicke_index, job[0], job[1]),
        list(zip(sizes, seeds)),
    )
    logger.info(f"Drew {count} samples from {state.label} with seed {seed}")
    return SampleSet(samples=np.concatenate(chunks, axis=0), seed=seed, source=state.label)


def sample_state_vector(psi: StateVector, count: int = DEFAULT_SAMPLE_COUNT,
                        seed: Optional[int] = None) -> SampleSet:
    """
    Projective measurements of an arbitrary real state vector: basis index k
    is drawn with probability |psi_k|^2.
    """
    if count < 1:
        raise DomainError(f"Sample count must be positive, got {count}")
    seed = resolve_seed(seed)
    probabilities = psi.amplitudes ** 2
    probabilities = probabilities / probabilities.sum()
    sizes = _chunk_sizes(count)
    seeds = spawn_seeds(seed, len(sizes))

    def draw(job):
        size, seed_seq = job
        rng = np.random.default_rng(seed_seq)
        return rng.choice(probabilities.shape[0], size=size, p=probabilities)

    indices = np.concatenate(pool.map_ordered(draw, list(zip(sizes, seeds))))
    return SampleSet(samples=index_to_bits(indices, psi.n_qubits), seed=seed, source=psi.source)
