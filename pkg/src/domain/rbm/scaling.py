from typing import List, Optional, Sequence

from src.domain.constants import SCALING_STUDY_LEARNING_RATE
from src.domain.errors import DomainError
from src.domain.schemas import DickeState, SampleSet, ScalingResult, TrainingConfig
from src.domain.rbm.training import train_tomography
from src.services.worker_pool import resolve_seed
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def hidden_unit_scaling_study(data: SampleSet, target: DickeState, hidden_counts: Sequence[int],
                              config: Optional[TrainingConfig] = None,
                              learning_rate: float = SCALING_STUDY_LEARNING_RATE) -> List[ScalingResult]:
    """
    Trains one RBM per hidden-unit count on the same data with the same seed
    and reports the best fidelity of each run. The scaling runs use the
    smaller learning rate (0.01) unless another is given.
    """
    if not hidden_counts:
        raise DomainError("Scaling study needs at least one hidden-unit count")
    bad = [m for m in hidden_counts if m < 1]
    if bad:
        raise DomainError(f"Hidden-unit counts must be positive, got {bad}")

    config = config or TrainingConfig()
    # one seed shared by every hidden-unit count
    seed = resolve_seed(config.seed)
    config = config.model_copy(update={"learning_rate": learning_rate, "seed": seed})
    results = []
    for n_hidden in hidden_counts:
        _, trace = train_tomography(data, n_hidden, config, target)
        results.append(ScalingResult(
            n_hidden=n_hidden,
            best_fidelity=trace.best_fidelity,
            best_epoch=trace.best_epoch,
            seed=trace.seed,
        ))
        logger.info(f"M={n_hidden}: best fidelity {trace.best_fidelity} at epoch {trace.best_epoch}")
    return results
