from typing import Optional

import numpy as np
from scipy.special import expit

from src.domain.errors import DomainError
from src.domain.schemas import RbmParameters, SampleSet
from src.services.metrics import gibbs_sweeps_total
from src.services.worker_pool import pool, resolve_seed, spawn_seeds

# Default sweeps before a chain's state is taken as a sample
BURN_IN = 500
CHAIN_CHUNK = 4096


def hidden_probabilities(rbm: RbmParameters, v: np.ndarray) -> np.ndarray:
    """P(h_j = 1 | v) = sigma(b_j + sum_i W_ij v_i)."""
    return expit(np.asarray(v, dtype=np.float64) @ rbm.weights + rbm.hidden_bias)


def visible_probabilities(rbm: RbmParameters, h: np.ndarray) -> np.ndarray:
    """P(v_i = 1 | h) = sigma(a_i + sum_j W_ij h_j)."""
    return expit(np.asarray(h, dtype=np.float64) @ rbm.weights.T + rbm.visible_bias)


def gibbs_step(rbm: RbmParameters, v: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    One block-Gibbs sweep: sample h ~ P(h | v), then v' ~ P(v | h).
    Works on a single bitstring or a (batch, N) array; returns uint8 of the same shape.
    """
    v = np.asarray(v)
    if v.shape[-1] != rbm.n_visible:
        raise DomainError(f"Visible configuration has length {v.shape[-1]}, expected {rbm.n_visible}")
    p_h = hidden_probabilities(rbm, v)
    h = (rng.random(p_h.shape) < p_h).astype(np.float64)
    p_v = visible_probabilities(rbm, h)
    gibbs_sweeps_total.inc()
    return (rng.random(p_v.shape) < p_v).astype(np.uint8)


def gibbs_chain(rbm: RbmParameters, v: np.ndarray, steps: int, rng: np.random.Generator) -> np.ndarray:
    for _ in range(steps):
        v = gibbs_step(rbm, v, rng)
    return np.asarray(v, dtype=np.uint8)


def sample_rbm(rbm: RbmParameters, count: int, seed: Optional[int] = None, burn_in: int = BURN_IN) -> SampleSet:
    """
    Draws `count` bitstrings from p_rbm with independent chains started from
    uniform random strings, each run for `burn_in` sweeps. Chains are
    grouped in seeded chunks like `sample_measurements`.
    """
    if count < 1:
        raise DomainError(f"Sample count must be positive, got {count}")
    seed = resolve_seed(seed)
    full, rest = divmod(count, CHAIN_CHUNK)
    sizes = [CHAIN_CHUNK] * full + ([rest] if rest else [])

    def run(job):
        size, seed_seq = job
        rng = np.random.default_rng(seed_seq)
        start = rng.integers(0, 2, size=(size, rbm.n_visible), dtype=np.uint8)
        return gibbs_chain(rbm, start, burn_in, rng)

    chunks = pool.map_ordered(run, list(zip(sizes, spawn_seeds(seed, len(sizes)))))
    source = f"rbm(N={rbm.n_visible},M={rbm.n_hidden})"
    return SampleSet(samples=np.concatenate(chunks, axis=0), seed=seed, source=source)
