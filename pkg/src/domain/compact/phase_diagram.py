import math
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq
from scipy.special import logsumexp

from src.domain.constants import PHASE_DIAGRAM_DEFAULTS, SECTOR_THRESHOLD, TOLERANCES
from src.domain.errors import DomainError
from src.domain.schemas import AxisSpec, CompactRbm, PhaseDiagramGrid
from src.domain.states import log_binomial_row
from src.domain.rbm.model import softplus
from src.domain.compact.model import optimal_weights, sector_fidelities
from src.services.metrics import phase_diagram_points_total
from src.services.worker_pool import pool
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

Point = Tuple[float, float]
# Called once per finished row, in row order: (row index, w_max, best_d, best_fidelity, ties)
RowSink = Callable[[int, float, np.ndarray, np.ndarray, np.ndarray], None]


class Crossing(NamedTuple):
    t: float
    w_min: float
    w_max: float
    fidelity: float


def default_axes(n_qubits: int, points: int = PHASE_DIAGRAM_DEFAULTS['POINTS']) -> Tuple[AxisSpec, AxisSpec]:
    """w_min in [-10, 0), w_max in (0, 10 N]."""
    w_min_axis = AxisSpec.from_count(
        PHASE_DIAGRAM_DEFAULTS['W_MIN_START'], PHASE_DIAGRAM_DEFAULTS['W_MIN_STOP'], points,
    )
    w_max_axis = AxisSpec.from_count(
        PHASE_DIAGRAM_DEFAULTS['W_MAX_START'], PHASE_DIAGRAM_DEFAULTS['W_MAX_PER_QUBIT'] * n_qubits, points,
    )
    return w_min_axis, w_max_axis


def row_fidelities(n_qubits: int, w_max: float, w_min_values: np.ndarray) -> np.ndarray:
    """Sector fidelities for one w_max and many w_min: shape (len(w_min_values), N + 1)."""
    d = np.arange(n_qubits + 1, dtype=np.float64)[None, :]
    w_min = np.asarray(w_min_values, dtype=np.float64)[:, None]
    profile = (d * softplus(w_max + (d - 1) * w_min)
               + (n_qubits - d) * softplus(d * w_min)
               + log_binomial_row(n_qubits)[None, :])
    return np.exp(profile - logsumexp(profile, axis=1, keepdims=True))


def _classify_row(n_qubits: int, w_max: float, w_min_values: np.ndarray, threshold: float):
    fidelities = row_fidelities(n_qubits, w_max, w_min_values)
    best_fidelity = fidelities.max(axis=1)
    within = fidelities >= (best_fidelity - TOLERANCES['SECTOR_TIE'])[:, None]
    # argmax over a boolean row returns the first True: the smallest tied D
    best_d = np.argmax(within, axis=1)
    ties = within.sum(axis=1) > 1
    best_d = np.where(best_fidelity > threshold, best_d, -1)
    return best_d.astype(np.int64), np.clip(best_fidelity, 0.0, 1.0), ties


def phase_diagram(n_qubits: int, w_min_axis: Optional[AxisSpec] = None, w_max_axis: Optional[AxisSpec] = None,
                  threshold: float = SECTOR_THRESHOLD, row_sink: Optional[RowSink] = None) -> PhaseDiagramGrid:
    """
    Classifies every (w_min, w_max) mesh point by its best Dicke sector.

    Rows (one w_max each) are evaluated in parallel and handed to `row_sink`
    strictly in row order, so a streamed file is identical for any worker count.
    """
    if n_qubits < 1:
        raise DomainError(f"Need at least one qubit, got {n_qubits}")
    if w_min_axis is None or w_max_axis is None:
        default_min, default_max = default_axes(n_qubits)
        w_min_axis = w_min_axis or default_min
        w_max_axis = w_max_axis or default_max

    w_min_values = w_min_axis.values()
    w_max_values = w_max_axis.values()
    shape = (len(w_max_values), len(w_min_values))
    best_d = np.empty(shape, dtype=np.int64)
    best_fidelity = np.empty(shape, dtype=np.float64)
    ties = np.empty(shape, dtype=bool)

    rows = pool.imap_ordered(
        lambda w_max: _classify_row(n_qubits, float(w_max), w_min_values, threshold), w_max_values,
    )
    for row, (row_d, row_f, row_ties) in enumerate(rows):
        best_d[row], best_fidelity[row], ties[row] = row_d, row_f, row_ties
        phase_diagram_points_total.inc(len(w_min_values))
        if row_sink is not None:
            row_sink(row, float(w_max_values[row]), row_d, row_f, row_ties)

    grid = PhaseDiagramGrid(
        n_qubits=n_qubits, w_min_axis=w_min_axis, w_max_axis=w_max_axis, threshold=threshold,
        best_d=best_d, best_fidelity=best_fidelity, ties=ties,
    )
    logger.info(
        f"Phase diagram N={n_qubits}, {shape[0]}x{shape[1]} points: sectors {grid.sectors_present()}, "
        f"{int((best_d < 0).sum())} below threshold, {int(ties.sum())} tie(s)"
    )
    return grid


def _check_point(point: Point, name: str) -> Point:
    w_min, w_max = (float(x) for x in point)
    if not (math.isfinite(w_min) and math.isfinite(w_max)):
        raise DomainError(f"Path {name} must be finite, got {point}")
    return w_min, w_max


def _point_on(start: Point, stop: Point, t: float) -> Point:
    return start[0] + t * (stop[0] - start[0]), start[1] + t * (stop[1] - start[1])


def fidelity_path(n_qubits: int, start: Point, stop: Point, dicke_indices: Sequence[int],
                  points: int = 101) -> pd.DataFrame:
    """
    F_D along the straight line start -> stop in (w_min, w_max) space,
    t in [0, 1]. Columns: t, w_min, w_max, F_<D> per requested D.
    A degenerate path (start == stop or points == 1) yields one row.
    """
    start = _check_point(start, "start")
    stop = _check_point(stop, "stop")
    for d in dicke_indices:
        if not 0 <= d <= n_qubits:
            raise DomainError(f"Dicke index {d} outside [0, {n_qubits}]")
    if points < 1:
        raise DomainError(f"Path needs at least one point, got {points}")
    if start == stop:
        points = 1

    t_values = np.linspace(0.0, 1.0, points) if points > 1 else np.zeros(1)
    rows = []
    for t in t_values:
        w_min, w_max = _point_on(start, stop, float(t))
        fidelities = sector_fidelities(CompactRbm(n_qubits=n_qubits, w_min=w_min, w_max=w_max))
        row: Dict[str, float] = {"t": float(t), "w_min": w_min, "w_max": w_max}
        row.update({f"F_{d}": float(fidelities[d]) for d in dicke_indices})
        rows.append(row)
    return pd.DataFrame(rows, columns=["t", "w_min", "w_max"] + [f"F_{d}" for d in dicke_indices])


def find_crossing(n_qubits: int, start: Point, stop: Point, first: int, second: int,
                  samples: int = 201) -> Optional[Crossing]:
    """
    First point along the path where F_first = F_second, bracketed on a
    uniform t grid and refined with Brent's method. None when the curves never cross.
    """
    start = _check_point(start, "start")
    stop = _check_point(stop, "stop")

    def gap(t: float) -> float:
        w_min, w_max = _point_on(start, stop, t)
        fidelities = sector_fidelities(CompactRbm(n_qubits=n_qubits, w_min=w_min, w_max=w_max))
        return float(fidelities[first] - fidelities[second])

    t_grid = np.linspace(0.0, 1.0, samples)
    gaps = [gap(float(t)) for t in t_grid]
    for index in range(len(t_grid) - 1):
        left, right = gaps[index], gaps[index + 1]
        if left == 0.0:
            t = float(t_grid[index])
            break
        if left * right < 0:
            t = brentq(gap, float(t_grid[index]), float(t_grid[index + 1]), xtol=1e-13)
            break
    else:
        return None

    w_min, w_max = _point_on(start, stop, t)
    fidelity = float(sector_fidelities(CompactRbm(n_qubits=n_qubits, w_min=w_min, w_max=w_max))[first])
    return Crossing(t=t, w_min=w_min, w_max=w_max, fidelity=fidelity)


def sharpening_violations(n_qubits: int, dicke_index: int, scales: Sequence[float]) -> List[Dict[str, float]]:
    """
    Consecutive scales w < w' on the optimal ray where F_D(w') < F_D(w).
    An empty list means F_D was non-decreasing on the given scales.
    """
    scales = sorted(float(w) for w in scales)
    values = [float(sector_fidelities(optimal_weights(n_qubits, dicke_index, w))[dicke_index]) for w in scales]
    violations = []
    for (w0, f0), (w1, f1) in zip(zip(scales, values), zip(scales[1:], values[1:])):
        if f1 < f0 - TOLERANCES['ZERO']:
            violations.append({"w": w0, "w_next": w1, "fidelity": f0, "fidelity_next": f1})
    if violations:
        logger.warning(f"F_{dicke_index} decreased at {len(violations)} step(s) along the optimal ray, N={n_qubits}")
    return violations


def boundary_fraction(grid: PhaseDiagramGrid, lower: int, upper: int, margin: float = 0.5,
                      min_scale: float = 1.0) -> float:
    """
    Share of below-threshold points in the wedge between the optimal rays of
    sectors `lower` and `upper` (ratios 2D - 1, widened by `margin`), counting
    only points with -w_min >= min_scale.
    """
    w_min = grid.w_min_axis.values()[None, :]
    w_max = grid.w_max_axis.values()[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(w_min < 0, w_max / -w_min, np.inf)
    wedge = ((ratio >= 2 * lower - 1 - margin) & (ratio <= 2 * upper - 1 + margin)
             & (-w_min >= min_scale))
    wedge = np.broadcast_to(wedge, grid.shape)
    total = int(wedge.sum())
    if total == 0:
        return 0.0
    return float((grid.best_d[wedge] < 0).sum()) / total
