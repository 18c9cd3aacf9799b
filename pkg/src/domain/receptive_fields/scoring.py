"""
Global receptive-field score.

A hidden unit (one column of W) has a global RF when one visible coupling
stands out from a nearly constant background. Per unit j the background m
is the column median (0 for a two-row W), the dominant index i* is the
entry furthest from m, and the residuals are r = {W_ij : i != i*}:

  spike s        = |W* - m|
  separation g_j = (s - max|r - m|) / (s - min|r - m| + eps)
  unit score     = g_j * exp(-std(r) / (|mean(r)| + eps))

The global score is the mean unit score clamped to [0, 1]. An exact
circulant with N >= 3 scores 1 whichever of its two weights is larger in magnitude;
i.i.d. noise scores near 0 because its residual mean is small next to its
spread.
"""
from typing import List, Optional

import numpy as np
import pandas as pd

from src.domain.constants import RF_PRESENT_THRESHOLD, TOLERANCES
from src.domain.errors import DomainError
from src.domain.schemas import RfReport, RfUnit
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def as_weight_matrix(weights) -> np.ndarray:
    matrix = np.asarray(weights, dtype=np.float64)
    if matrix.ndim != 2 or matrix.size == 0:
        raise DomainError(f"Weight matrix must be a non-empty 2-D array, got shape {matrix.shape}")
    if matrix.shape[0] < 2:
        raise DomainError("Receptive fields need at least two visible units")
    if not np.all(np.isfinite(matrix)):
        raise DomainError("Weight matrix contains non-finite entries")
    return matrix


def _dominant_index(column: np.ndarray, background: float) -> int:
    """Entry furthest from the column background; ties go to the larger |W_ij|, then the lower index."""
    deviation = np.abs(column - background)
    candidates = np.flatnonzero(deviation == deviation.max())
    return int(candidates[np.argmax(np.abs(column[candidates]))])


def _unit(column: np.ndarray, hidden_index: int) -> RfUnit:
    eps = TOLERANCES['RF_EPSILON']
    # two entries leave no background to estimate
    background = float(np.median(column)) if column.size > 2 else 0.0
    dominant = _dominant_index(column, background)
    dominant_weight = float(column[dominant])
    residuals = np.delete(column, dominant)
    spike = abs(dominant_weight - background)
    residual_deviation = np.abs(residuals - background)

    separation = (spike - residual_deviation.max()) / (spike - residual_deviation.min() + eps)
    mean = float(residuals.mean())
    std = float(residuals.std())
    score = separation * np.exp(-std / (abs(mean) + eps))
    return RfUnit(
        hidden_index=hidden_index,
        dominant_index=dominant,
        dominant_weight=dominant_weight,
        residual_mean=mean,
        residual_std=std,
        separation=float(separation),
        score=float(score),
        opposite_sign=bool(mean != 0.0 and np.sign(mean) != np.sign(dominant_weight)),
    )


def _match(units: List[RfUnit]) -> List[Optional[int]]:
    """
    Greedy matching by descending spike over the residual mean; a hidden unit whose
    dominant visible unit is already taken stays unmatched.
    """
    permutation: List[Optional[int]] = [None] * len(units)
    taken = set()
    for unit in sorted(units, key=lambda u: (-abs(u.dominant_weight - u.residual_mean), u.hidden_index)):
        if unit.dominant_index in taken:
            unit.matched = False
            continue
        taken.add(unit.dominant_index)
        permutation[unit.hidden_index] = unit.dominant_index
    return permutation


def rf_score(weights, threshold: float = RF_PRESENT_THRESHOLD) -> RfReport:
    """
    Scores the receptive fields of W (rows visible, columns hidden).
    `global_rf_present` requires score >= threshold and most dominant
    couplings opposite in sign to their background.
    """
    matrix = as_weight_matrix(weights)
    units = [_unit(matrix[:, j], j) for j in range(matrix.shape[1])]
    permutation = _match(units)
    unmatched = [u.hidden_index for u in units if not u.matched]
    global_score = float(np.clip(np.mean([u.score for u in units]), 0.0, 1.0))
    opposite = sum(u.opposite_sign for u in units)
    present = global_score >= threshold and opposite > len(units) / 2

    if unmatched:
        logger.info(f"RF matching collided for hidden unit(s) {unmatched}")
    return RfReport(
        units=units,
        global_score=global_score,
        permutation=permutation,
        unmatched=unmatched,
        global_rf_present=present,
    )


def rf_unit_table(report: RfReport) -> pd.DataFrame:
    return pd.DataFrame([u.model_dump() for u in report.units])
