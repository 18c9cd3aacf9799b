"""
Contrastive-divergence tomography.

Per batch the positive phase uses the data with hidden units replaced by
their conditional means; the negative phase runs k block-Gibbs sweeps from
the batch and pairs the resulting visible states with hidden states sampled
from P(h | v).
The update is lambda <- lambda + lr * (<.>_data - <.>_model).
"""
import math
from typing import NamedTuple, Optional, Tuple

import numpy as np

from src.core.config import ENUMERATION_GUARD, KL_GUARD
from src.domain.errors import DomainError, TrainingError
from src.domain.schemas import (
    DickeState, EpochRecord, RbmParameters, SampleSet, TrainingConfig, TrainingTrace,
)
from src.domain.states import iter_basis_chunks
from src.domain.rbm.model import (
    empirical_kl, fidelity_exact, log_likelihood, log_unnormalized_probability, partition_function,
)
from src.domain.rbm.sampling import gibbs_chain, hidden_probabilities
from src.services.metrics import training_best_fidelity, training_epochs_total
from src.services.worker_pool import resolve_seed
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class RbmGradient(NamedTuple):
    """Log-likelihood ascent direction, shaped like the parameters."""
    weights: np.ndarray
    visible_bias: np.ndarray
    hidden_bias: np.ndarray

    def norm(self) -> float:
        return float(math.sqrt(
            np.sum(self.weights ** 2) + np.sum(self.visible_bias ** 2) + np.sum(self.hidden_bias ** 2)
        ))

    def is_finite(self) -> bool:
        return bool(
            np.all(np.isfinite(self.weights))
            and np.all(np.isfinite(self.visible_bias))
            and np.all(np.isfinite(self.hidden_bias))
        )


def _statistics(rbm: RbmParameters, v: np.ndarray, weights: Optional[np.ndarray] = None):
    """(<v h^T>, <v>, <h>) with h at its conditional mean, optionally weighted."""
    v = np.asarray(v, dtype=np.float64)
    p_h = hidden_probabilities(rbm, v)
    if weights is None:
        weights = np.full(v.shape[0], 1.0 / v.shape[0])
    return (v * weights[:, None]).T @ p_h, weights @ v, weights @ p_h


def _sampled_statistics(rbm: RbmParameters, v: np.ndarray, rng: np.random.Generator):
    """(<v h^T>, <v>, <h>) with h drawn from P(h | v)."""
    v = np.asarray(v, dtype=np.float64)
    p_h = hidden_probabilities(rbm, v)
    h = (rng.random(p_h.shape) < p_h).astype(np.float64)
    return v.T @ h / v.shape[0], v.mean(axis=0), h.mean(axis=0)


def cd_gradient(rbm: RbmParameters, batch: np.ndarray, cd_steps: int, rng: np.random.Generator) -> RbmGradient:
    """One CD-k estimate of the log-likelihood gradient from a data batch."""
    batch = np.asarray(batch, dtype=np.uint8)
    if batch.ndim != 2 or batch.shape[1] != rbm.n_visible:
        raise DomainError(f"Batch has shape {batch.shape}, expected (*, {rbm.n_visible})")
    pos_w, pos_a, pos_b = _statistics(rbm, batch)
    negative = gibbs_chain(rbm, batch, cd_steps, rng)
    neg_w, neg_a, neg_b = _sampled_statistics(rbm, negative, rng)
    return RbmGradient(pos_w - neg_w, pos_a - neg_a, pos_b - neg_b)


def exact_gradient(rbm: RbmParameters, samples: np.ndarray) -> RbmGradient:
    """
    Exact gradient of the mean log-likelihood: data statistics minus
    model statistics summed over the full basis.
    """
    samples = np.asarray(samples)
    pos_w, pos_a, pos_b = _statistics(rbm, samples)

    log_z = partition_function(rbm)
    neg_w = np.zeros_like(rbm.weights)
    neg_a = np.zeros_like(rbm.visible_bias)
    neg_b = np.zeros_like(rbm.hidden_bias)
    for chunk in iter_basis_chunks(rbm.n_visible):
        probabilities = np.exp(log_unnormalized_probability(rbm, chunk) - log_z)
        chunk_w, chunk_a, chunk_b = _statistics(rbm, chunk, probabilities)
        neg_w += chunk_w
        neg_a += chunk_a
        neg_b += chunk_b
    return RbmGradient(pos_w - neg_w, pos_a - neg_a, pos_b - neg_b)


def _evaluate(rbm: RbmParameters, data: np.ndarray, epoch: int, target: Optional[DickeState]) -> EpochRecord:
    n = rbm.n_visible
    wants_log_z = n <= KL_GUARD or target is not None
    log_z = partition_function(rbm) if n <= ENUMERATION_GUARD and wants_log_z else None
    record = EpochRecord(epoch=epoch)
    if target is not None and log_z is not None:
        record.fidelity = fidelity_exact(rbm, target, log_z)
    if log_z is not None and n <= KL_GUARD:
        record.nll = -log_likelihood(rbm, data, log_z)
        record.kl = empirical_kl(rbm, data, log_z)
    return record


def _checkpoint_metric(config: TrainingConfig, target: Optional[DickeState], n_visible: int) -> str:
    metric = config.checkpoint_metric
    if metric == 'fidelity' and (target is None or n_visible > ENUMERATION_GUARD):
        metric = 'nll'
        logger.warning("No usable target for fidelity checkpoints. Selecting by training-set NLL")
    if metric in ('nll', 'kl') and n_visible > KL_GUARD:
        logger.warning(f"log Z unavailable at N={n_visible}. Keeping the final epoch")
        metric = 'final'
    return metric


def _score(record: EpochRecord, metric: str) -> float:
    """Larger is better."""
    if metric == 'fidelity':
        return record.fidelity
    if metric == 'kl':
        return -record.kl
    if metric == 'nll':
        return -record.nll
    return float(record.epoch)


def train_tomography(data: SampleSet, n_hidden: int, config: Optional[TrainingConfig] = None,
                     target: Optional[DickeState] = None) -> Tuple[RbmParameters, TrainingTrace]:
    """
    Fits an RBM with `n_hidden` hidden units to measurement data by CD-k.

    Returns a writable copy of the best checkpoint and the trace. Epoch 0 in
    the trace is the initial parameters; with epochs=0 they are returned
    unchanged. The whole run draws from one generator seeded by
    `config.seed`, so repeated runs with the same seed are bitwise identical.
    """
    config = config or TrainingConfig()
    if n_hidden < 1:
        raise DomainError(f"Hidden unit count must be positive, got {n_hidden}")
    samples = data.samples
    n_visible = data.n_qubits
    if target is not None and target.n_qubits != n_visible:
        raise DomainError(f"Target has {target.n_qubits} qubits, samples have {n_visible}")

    seed = resolve_seed(config.seed)
    rng = np.random.default_rng(seed)
    rbm = RbmParameters.initialize(n_visible, n_hidden, config.init_scale, rng)
    metric = _checkpoint_metric(config, target, n_visible)
    trace = TrainingTrace(checkpoint_metric=metric, seed=seed, log_z_available=n_visible <= KL_GUARD)

    best_score = -math.inf

    def checkpoint(record: EpochRecord):
        nonlocal best_score
        score = _score(record, metric)
        if score > best_score:
            best_score = score
            trace.best_epoch = record.epoch
            trace.best_value = {'fidelity': record.fidelity, 'kl': record.kl,
                                'nll': record.nll}.get(metric, float(record.epoch))
            trace.best_parameters = rbm.snapshot()

    record = _evaluate(rbm, samples, 0, target)
    trace.records.append(record)
    checkpoint(record)

    logger.info(
        f"CD-{config.cd_steps} training: N={n_visible}, M={n_hidden}, {len(samples)} samples, "
        f"{config.epochs} epochs, lr={config.learning_rate}, seed={seed}, checkpoint={metric}"
    )
    batch_size = config.batch_size
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(samples))
        for batch_index, start in enumerate(range(0, len(samples), batch_size)):
            batch = samples[order[start:start + batch_size]]
            grad = cd_gradient(rbm, batch, config.cd_steps, rng)
            if not grad.is_finite():
                raise TrainingError(
                    "Non-finite contrastive-divergence gradient",
                    diagnostics={
                        "epoch": epoch, "batch": batch_index,
                        "weight_norm": float(np.linalg.norm(rbm.weights)),
                        "max_abs_weight": float(np.max(np.abs(rbm.weights))),
                    },
                )
            rbm.weights += config.learning_rate * grad.weights
            rbm.visible_bias += config.learning_rate * grad.visible_bias
            rbm.hidden_bias += config.learning_rate * grad.hidden_bias
            if not np.all(np.isfinite(rbm.weights)):
                raise TrainingError(
                    "Parameters became non-finite after an update",
                    diagnostics={"epoch": epoch, "batch": batch_index, "gradient_norm": grad.norm()},
                )

        record = _evaluate(rbm, samples, epoch, target)
        trace.records.append(record)
        checkpoint(record)
        training_epochs_total.inc()

        if epoch % config.log_every == 0 or epoch == config.epochs:
            logger.info(
                f"Epoch {epoch}/{config.epochs}: fidelity={record.fidelity}, kl={record.kl}, "
                f"best epoch {trace.best_epoch}"
            )

    if trace.best_fidelity is not None:
        training_best_fidelity.set(trace.best_fidelity)
    best = trace.best_parameters
    return RbmParameters(weights=best.weights, visible_bias=best.visible_bias,
                         hidden_bias=best.hidden_bias), trace
