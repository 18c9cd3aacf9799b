from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.config import get_output_dir
from src.domain.constants import (
    DEFAULT_SAMPLE_COUNT, PHASE_DIAGRAM_DEFAULTS, RF_PRESENT_THRESHOLD, SCALING_STUDY_LEARNING_RATE,
    SECTOR_THRESHOLD, SYMMETRY_AUDIT_TUPLES, TRAINING_DEFAULTS, URSELL_ORDERS,
)
from src.domain.schemas import TrainingConfig


class ExperimentConfig(BaseModel):
    """
    Parameters shared by every command. Stochastic commands replace a
    missing seed with a generated one before running, so the recorded
    config always carries the seed actually used.
    """
    model_config = ConfigDict(extra='forbid')

    output_dir: str = Field(default_factory=get_output_dir)
    seed: Optional[int] = Field(None, ge=0)


class SampleConfig(ExperimentConfig):
    n_qubits: int = Field(..., ge=1)
    dicke_index: int = Field(..., ge=0)
    count: int = Field(DEFAULT_SAMPLE_COUNT, ge=1)
    output: Optional[str] = None

    @model_validator(mode='after')
    def check_index(self) -> 'SampleConfig':
        if self.dicke_index > self.n_qubits:
            raise ValueError(f"Dicke index {self.dicke_index} exceeds qubit count {self.n_qubits}")
        return self


class TrainingFields(ExperimentConfig):
    cd_steps: int = Field(TRAINING_DEFAULTS['CD_STEPS'], ge=1)
    learning_rate: float = Field(TRAINING_DEFAULTS['LEARNING_RATE'], gt=0)
    epochs: int = Field(TRAINING_DEFAULTS['EPOCHS'], ge=0)
    batch_size: int = Field(TRAINING_DEFAULTS['BATCH_SIZE'], ge=1)
    checkpoint_metric: Literal['fidelity', 'kl'] = 'fidelity'
    init_scale: float = Field(TRAINING_DEFAULTS['INIT_SCALE'], ge=0)
    log_every: int = Field(TRAINING_DEFAULTS['LOG_EVERY'], ge=1)

    def training_config(self) -> TrainingConfig:
        return TrainingConfig(
            cd_steps=self.cd_steps, learning_rate=self.learning_rate, epochs=self.epochs,
            batch_size=self.batch_size, seed=self.seed, checkpoint_metric=self.checkpoint_metric,
            init_scale=self.init_scale, log_every=self.log_every,
        )


class TrainConfig(TrainingFields):
    samples: str
    n_hidden: Optional[int] = Field(None, ge=1, description="Defaults to the visible count.")
    target: Optional[Tuple[int, int]] = Field(None, description="(N, D) of the Dicke target.")
    pgm: bool = False


class FidelityConfig(ExperimentConfig):
    """Exact fidelity of a weights file, or analytic fidelities of a compact RBM."""
    weights: Optional[str] = None
    n_qubits: Optional[int] = Field(None, ge=1)
    dicke_index: Optional[int] = Field(None, ge=0)
    w_min: Optional[float] = None
    w_max: Optional[float] = None

    @model_validator(mode='after')
    def check_mode(self) -> 'FidelityConfig':
        compact = self.w_min is not None or self.w_max is not None
        if self.weights and compact:
            raise ValueError("Give either a weights file or compact weights, not both")
        if not self.weights and not compact:
            raise ValueError("Give a weights file or both w_min and w_max")
        if compact and (self.w_min is None or self.w_max is None or self.n_qubits is None):
            raise ValueError("Compact fidelities need n_qubits, w_min and w_max")
        return self


class UrsellConfig(ExperimentConfig):
    n_qubits: int = Field(16, ge=1)
    dicke_indices: List[int] = Field(default_factory=lambda: [1, 4, 8])
    orders: List[int] = Field(default_factory=lambda: list(URSELL_ORDERS))
    product_state: Optional[str] = Field(None, description="Bitstring of a product state to check instead.")
    weights: Optional[str] = Field(None, description="Evaluate the state of an RBM weights file instead.")
    audit_tuples: int = Field(SYMMETRY_AUDIT_TUPLES, ge=0)

    @field_validator('orders')
    @classmethod
    def check_orders(cls, orders: List[int]) -> List[int]:
        bad = [o for o in orders if o not in URSELL_ORDERS]
        if bad or not orders:
            raise ValueError(f"Correlation orders must be among {URSELL_ORDERS}, got {orders}")
        return orders


class PhaseDiagramConfig(ExperimentConfig):
    n_qubits: int = Field(..., ge=1)
    w_min_start: float = PHASE_DIAGRAM_DEFAULTS['W_MIN_START']
    w_min_stop: float = PHASE_DIAGRAM_DEFAULTS['W_MIN_STOP']
    w_max_start: float = PHASE_DIAGRAM_DEFAULTS['W_MAX_START']
    w_max_stop: Optional[float] = Field(None, description="Defaults to 10 N.")
    w_min_points: int = Field(PHASE_DIAGRAM_DEFAULTS['POINTS'], ge=1)
    w_max_points: int = Field(PHASE_DIAGRAM_DEFAULTS['POINTS'], ge=1)
    w_min_step: Optional[float] = Field(None, gt=0, description="Overrides w_min_points.")
    w_max_step: Optional[float] = Field(None, gt=0, description="Overrides w_max_points.")
    threshold: float = Field(SECTOR_THRESHOLD, ge=0, le=1)
    pixmap: bool = False


class PathConfig(ExperimentConfig):
    n_qubits: int = Field(..., ge=1)
    start: Tuple[float, float]
    stop: Tuple[float, float]
    dicke_indices: List[int]
    points: int = Field(101, ge=1)
    crossing: Optional[Tuple[int, int]] = Field(None, description="Pair of sectors whose crossing to locate.")


class RfReportConfig(ExperimentConfig):
    weights: str
    threshold: float = Field(RF_PRESENT_THRESHOLD, ge=0, le=1)
    template_fit: bool = True


class ScalingStudyConfig(TrainingFields):
    n_qubits: int = Field(16, ge=1)
    dicke_index: int = Field(8, ge=0)
    hidden_counts: List[int] = Field(default_factory=lambda: [16, 32, 64])
    count: int = Field(DEFAULT_SAMPLE_COUNT, ge=1)
    samples: Optional[str] = None
    learning_rate: float = Field(SCALING_STUDY_LEARNING_RATE, gt=0)


class CommandResult(BaseModel):
    """Artifacts written by a command and a JSON-ready summary of what it found."""
    outputs: Dict[str, str] = Field(default_factory=dict)
    summary: Dict[str, Any] = Field(default_factory=dict)
