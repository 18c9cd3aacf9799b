import math
from typing import List, Optional, Literal, Tuple, Dict, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.domain.constants import TRAINING_DEFAULTS, SECTOR_THRESHOLD, TOLERANCES

PauliAxis = Literal['x', 'y', 'z']


# --- State core ---

class DickeState(BaseModel):
    """
    Exact reference state |Psi^D_N>: equal superposition of all N-qubit
    basis strings with Hamming weight D.
    """
    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(..., ge=1, description="Qubit count N.")
    dicke_index: int = Field(..., ge=0, description="Number of ones D in every contributing bitstring.")

    @model_validator(mode='after')
    def check_index(self) -> 'DickeState':
        if self.dicke_index > self.n_qubits:
            raise ValueError(f"Dicke index {self.dicke_index} exceeds qubit count {self.n_qubits}")
        return self

    @property
    def label(self) -> str:
        return f"dicke(N={self.n_qubits},D={self.dicke_index})"


class SampleSet(BaseModel):
    """
    Projective measurements in the computational basis.
    `samples` is a (count, N) uint8 array; row r is v_1..v_N of measurement r.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    samples: np.ndarray
    seed: Optional[int] = Field(None, description="Seed the samples were drawn with.")
    source: str = Field("unknown", description="Descriptor of the generating state.")

    @field_validator('samples', mode='before')
    @classmethod
    def coerce_samples(cls, value: Any) -> np.ndarray:
        arr = np.asarray(value)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError(f"Samples must be a non-empty (count, N) array, got shape {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("Samples may only contain 0 and 1")
        return arr.astype(np.uint8)

    @property
    def n_qubits(self) -> int:
        return int(self.samples.shape[1])

    @property
    def count(self) -> int:
        return int(self.samples.shape[0])

    def __len__(self) -> int:
        return self.count


# --- Correlations ---

class PauliString(BaseModel):
    """
    Product of single-site Pauli operators on distinct sites (1-based).
    Terms are kept sorted by site; operators on distinct sites commute.
    """
    model_config = ConfigDict(frozen=True)

    terms: Tuple[Tuple[int, PauliAxis], ...]

    @field_validator('terms', mode='after')
    @classmethod
    def check_terms(cls, terms: Tuple[Tuple[int, str], ...]) -> Tuple[Tuple[int, str], ...]:
        if not 1 <= len(terms) <= 4:
            raise ValueError(f"Pauli strings span 1 to 4 sites, got {len(terms)}")
        ordered = tuple(sorted(terms))
        sites = [site for site, _ in ordered]
        if len(set(sites)) != len(sites):
            raise ValueError(f"Repeated site in Pauli string: {sites}")
        if sites[0] < 1:
            raise ValueError(f"Sites are 1-based, got {sites[0]}")
        return ordered

    @classmethod
    def from_label(cls, sites: Tuple[int, ...], label: str) -> 'PauliString':
        if len(sites) != len(label):
            raise ValueError(f"Label '{label}' does not match {len(sites)} sites")
        return cls(terms=tuple(zip(sites, label)))

    @property
    def sites(self) -> Tuple[int, ...]:
        return tuple(site for site, _ in self.terms)

    @property
    def label(self) -> str:
        return "".join(axis for _, axis in self.terms)


class StateVector(BaseModel):
    """
    Real amplitudes over the full computational basis. Index k holds the
    amplitude of the bitstring whose binary expansion (v_1 most significant)
    equals k, i.e. the order of `enumerate_basis`.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n_qubits: int = Field(..., ge=1)
    amplitudes: np.ndarray
    source: str = "unknown"

    @field_validator('amplitudes', mode='before')
    @classmethod
    def coerce_amplitudes(cls, value: Any) -> np.ndarray:
        return np.asarray(value, dtype=np.float64)

    @model_validator(mode='after')
    def check_norm(self) -> 'StateVector':
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(f"Expected {1 << self.n_qubits} amplitudes, got shape {self.amplitudes.shape}")
        norm = float(np.dot(self.amplitudes, self.amplitudes))
        if abs(norm - 1.0) > TOLERANCES['NORM']:
            raise ValueError(f"State vector is not normalized (squared norm {norm!r})")
        return self


class CorrelationEntry(BaseModel):
    label: str
    sites: Tuple[int, ...]
    value: float


class CorrelationLevel(BaseModel):
    """One distinct Ursell value with every label that attains it."""
    value: float
    multiplicity: int
    labels: List[str] = Field(default_factory=list)


class SymmetryAudit(BaseModel):
    tuples_checked: int = 0
    max_deviation: float = 0.0
    passed: bool = True
    site_tuples: List[Tuple[int, ...]] = Field(default_factory=list)


class CorrelationReport(BaseModel):
    """
    Ursell functions of one order for one state, evaluated on a representative
    site tuple per projection label.
    """
    order: int = Field(..., ge=1, le=4)
    n_qubits: int
    source: str
    entries: List[CorrelationEntry] = Field(default_factory=list)
    levels: List[CorrelationLevel] = Field(default_factory=list)
    zero_labels: List[str] = Field(default_factory=list)
    all_zero: bool = False
    audit: SymmetryAudit = Field(default_factory=SymmetryAudit)

    def value(self, label: str, sites: Optional[Tuple[int, ...]] = None) -> float:
        for entry in self.entries:
            if entry.label == label and (sites is None or tuple(sites) == entry.sites):
                return entry.value
        raise KeyError(f"No entry for label '{label}' at sites {sites}")

    def max_abs(self) -> float:
        return max((abs(e.value) for e in self.entries), default=0.0)


# --- RBM engine ---

class RbmParameters(BaseModel):
    """
    lambda = {a, b, W}: W is (N, M) with rows indexed by visible units,
    a has length N, b has length M.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    weights: np.ndarray
    visible_bias: np.ndarray
    hidden_bias: np.ndarray

    @field_validator('weights', 'visible_bias', 'hidden_bias', mode='before')
    @classmethod
    def coerce_float(cls, value: Any) -> np.ndarray:
        return np.array(value, dtype=np.float64)

    @model_validator(mode='after')
    def check_shapes(self) -> 'RbmParameters':
        if self.weights.ndim != 2:
            raise ValueError(f"Weight matrix must be 2-D, got shape {self.weights.shape}")
        n, m = self.weights.shape
        if n == 0 or m == 0:
            raise ValueError(f"Weight matrix must be non-empty, got shape {self.weights.shape}")
        if self.visible_bias.shape != (n,):
            raise ValueError(f"Visible bias must have length {n}, got shape {self.visible_bias.shape}")
        if self.hidden_bias.shape != (m,):
            raise ValueError(f"Hidden bias must have length {m}, got shape {self.hidden_bias.shape}")
        for name in ('weights', 'visible_bias', 'hidden_bias'):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"RBM {name} contains non-finite entries")
        return self

    @property
    def n_visible(self) -> int:
        return int(self.weights.shape[0])

    @property
    def n_hidden(self) -> int:
        return int(self.weights.shape[1])

    @classmethod
    def zeros(cls, n_visible: int, n_hidden: int) -> 'RbmParameters':
        return cls(
            weights=np.zeros((n_visible, n_hidden)),
            visible_bias=np.zeros(n_visible),
            hidden_bias=np.zeros(n_hidden),
        )

    @classmethod
    def initialize(cls, n_visible: int, n_hidden: int, scale: float, rng: np.random.Generator) -> 'RbmParameters':
        """Weights i.i.d. uniform in [-scale, scale], biases zero."""
        return cls(
            weights=rng.uniform(-scale, scale, size=(n_visible, n_hidden)),
            visible_bias=np.zeros(n_visible),
            hidden_bias=np.zeros(n_hidden),
        )

    def snapshot(self) -> 'RbmParameters':
        """Immutable copy: arrays are copied and flagged read-only."""
        copied = RbmParameters(
            weights=self.weights.copy(),
            visible_bias=self.visible_bias.copy(),
            hidden_bias=self.hidden_bias.copy(),
        )
        for arr in (copied.weights, copied.visible_bias, copied.hidden_bias):
            arr.flags.writeable = False
        return copied

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_visible": self.n_visible,
            "n_hidden": self.n_hidden,
            "W": self.weights.tolist(),
            "a": self.visible_bias.tolist(),
            "b": self.hidden_bias.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RbmParameters':
        params = cls(weights=data["W"], visible_bias=data["a"], hidden_bias=data["b"])
        if "n_visible" in data and int(data["n_visible"]) != params.n_visible:
            raise ValueError(f"n_visible={data['n_visible']} disagrees with W rows ({params.n_visible})")
        if "n_hidden" in data and int(data["n_hidden"]) != params.n_hidden:
            raise ValueError(f"n_hidden={data['n_hidden']} disagrees with W columns ({params.n_hidden})")
        return params


class TrainingConfig(BaseModel):
    """
    Hyperparameters of CD-k tomography. Defaults are the published run
    settings (10 CD steps, learning rate 0.1, at most 2000 epochs).
    """
    cd_steps: int = Field(TRAINING_DEFAULTS['CD_STEPS'], ge=1)
    learning_rate: float = Field(TRAINING_DEFAULTS['LEARNING_RATE'], gt=0)
    epochs: int = Field(TRAINING_DEFAULTS['EPOCHS'], ge=0)
    batch_size: int = Field(TRAINING_DEFAULTS['BATCH_SIZE'], ge=1)
    seed: Optional[int] = Field(None, ge=0, description="RNG seed; generated and recorded when missing.")
    checkpoint_metric: Literal['fidelity', 'kl'] = 'fidelity'
    init_scale: float = Field(TRAINING_DEFAULTS['INIT_SCALE'], ge=0)
    log_every: int = Field(TRAINING_DEFAULTS['LOG_EVERY'], ge=1)


class EpochRecord(BaseModel):
    epoch: int
    fidelity: Optional[float] = None
    kl: Optional[float] = None
    nll: Optional[float] = None


class TrainingTrace(BaseModel):
    """
    Per-epoch metrics. Epoch 0 is the evaluation of the initial parameters.
    `best_parameters` is the snapshot taken at `best_epoch`.
    `checkpoint_metric` is the metric actually used: 'nll' when fidelity was
    requested without a target, 'final' when no metric was computable.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    records: List[EpochRecord] = Field(default_factory=list)
    checkpoint_metric: Literal['fidelity', 'kl', 'nll', 'final'] = 'fidelity'
    best_epoch: int = 0
    best_value: Optional[float] = None
    best_parameters: Optional[RbmParameters] = None
    seed: Optional[int] = None
    log_z_available: bool = True

    @property
    def best_fidelity(self) -> Optional[float]:
        for record in self.records:
            if record.epoch == self.best_epoch:
                return record.fidelity
        return None


class ScalingResult(BaseModel):
    n_hidden: int
    best_fidelity: Optional[float]
    best_epoch: int
    seed: Optional[int]


# --- Compact RBM ---

class CompactRbm(BaseModel):
    """
    Two-parameter circulant RBM with M = N and zero biases:
    W_ij = w_max on the diagonal (each hidden unit's unique partner), w_min elsewhere.
    The global-RF regime is w_min < 0 < w_max; other finite values are
    accepted so the degenerate and uniform corners of parameter space stay reachable.
    """
    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(..., ge=1)
    w_min: float
    w_max: float

    @model_validator(mode='after')
    def check_finite(self) -> 'CompactRbm':
        if not (math.isfinite(self.w_min) and math.isfinite(self.w_max)):
            raise ValueError(f"Compact RBM weights must be finite, got ({self.w_min}, {self.w_max})")
        return self

    @property
    def has_global_rf_signs(self) -> bool:
        return self.w_min < 0 < self.w_max

    @property
    def ratio(self) -> float:
        """w_max / (-w_min); 2D - 1 on the optimal ray of sector D."""
        if self.w_min == 0:
            return math.inf
        return self.w_max / -self.w_min


class SectorPoint(BaseModel):
    """
    Classification of one (w_min, w_max) point. `best_d` is None when no
    sector fidelity exceeds the threshold (superposition of sectors).
    """
    w_min: float
    w_max: float
    best_d: Optional[int] = None
    best_fidelity: float = Field(..., ge=0.0, le=1.0)
    tie: bool = False


class AxisSpec(BaseModel):
    """Uniform axis: start, start + step, ... up to and including stop."""
    start: float
    stop: float
    step: float = Field(..., gt=0)

    @model_validator(mode='after')
    def check_range(self) -> 'AxisSpec':
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("Axis range must be finite")
        if self.stop < self.start:
            raise ValueError(f"Axis stop {self.stop} is below start {self.start}")
        return self

    @classmethod
    def from_count(cls, start: float, stop: float, count: int) -> 'AxisSpec':
        if count < 1:
            raise ValueError("Axis needs at least one point")
        if count == 1:
            return cls(start=start, stop=start, step=1.0)
        return cls(start=start, stop=stop, step=(stop - start) / (count - 1))

    @property
    def count(self) -> int:
        # 1e-9 absorbs floating error when (stop - start) is a multiple of step
        return int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1

    def values(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)


class PhaseDiagramGrid(BaseModel):
    """
    Sector classification over a (w_max rows) x (w_min columns) mesh.
    `best_d` uses -1 for points below the threshold.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n_qubits: int
    w_min_axis: AxisSpec
    w_max_axis: AxisSpec
    threshold: float = SECTOR_THRESHOLD
    best_d: np.ndarray
    best_fidelity: np.ndarray
    ties: np.ndarray

    @model_validator(mode='after')
    def check_dims(self) -> 'PhaseDiagramGrid':
        shape = (self.w_max_axis.count, self.w_min_axis.count)
        for name in ('best_d', 'best_fidelity', 'ties'):
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} has shape {getattr(self, name).shape}, axes imply {shape}")
        return self

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.w_max_axis.count, self.w_min_axis.count)

    def point(self, row: int, col: int) -> SectorPoint:
        best = int(self.best_d[row, col])
        return SectorPoint(
            w_min=float(self.w_min_axis.values()[col]),
            w_max=float(self.w_max_axis.values()[row]),
            best_d=None if best < 0 else best,
            best_fidelity=float(self.best_fidelity[row, col]),
            tie=bool(self.ties[row, col]),
        )

    def sectors_present(self) -> List[int]:
        return sorted(int(d) for d in np.unique(self.best_d) if d >= 0)


# --- Receptive fields ---

class RfUnit(BaseModel):
    hidden_index: int
    dominant_index: int
    dominant_weight: float
    residual_mean: float
    residual_std: float
    separation: float
    score: float
    opposite_sign: bool
    matched: bool = True


class RfReport(BaseModel):
    """
    Global receptive-field analysis of a weight matrix. `permutation[j]` is
    the visible unit matched to hidden unit j, None when the match collided.
    """
    units: List[RfUnit] = Field(default_factory=list)
    global_score: float = Field(..., ge=0.0, le=1.0)
    permutation: List[Optional[int]] = Field(default_factory=list)
    unmatched: List[int] = Field(default_factory=list)
    global_rf_present: bool = False

    @property
    def matching_complete(self) -> bool:
        return not self.unmatched


class TemplateFit(BaseModel):
    """Least-squares fit of a weight matrix to the two-parameter circulant template."""
    w_max_est: float
    w_min_est: float
    permutation: List[Optional[int]]
    residual: float
    partial: bool = False
