"""
Artifact I/O: sample files, JSON documents, CSV tables, weight files and
images. Every OSError surfaces as ArtifactIOError; malformed content
surfaces as ArtifactFormatError with file, line and column.
"""
import json
import os
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from src.domain.constants import SAMPLE_TOKEN_SEPARATOR
from src.domain.errors import ArtifactFormatError, ArtifactIOError
from src.domain.schemas import PhaseDiagramGrid, RbmParameters, SampleSet
from src.utils.logging_config import get_logger

logger = get_logger("storage")

FLOAT_FORMAT = "%.17g"


def _ensure_parent(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(parent, exist_ok=True)
    except OSError as e:
        raise ArtifactIOError(f"Cannot create directory {parent}: {e}") from e


def _open(path: str, mode: str):
    if "w" in mode or "a" in mode:
        _ensure_parent(path)
    try:
        return open(path, mode, encoding=None if "b" in mode else "utf-8")
    except OSError as e:
        raise ArtifactIOError(f"Cannot open {path}: {e}") from e


# --- Samples ---

def write_samples(path: str, sample_set: SampleSet) -> str:
    """One measurement per line, N tokens of 0/1 separated by single spaces."""
    with _open(path, "w") as f:
        for row in sample_set.samples:
            f.write(SAMPLE_TOKEN_SEPARATOR.join("1" if b else "0" for b in row))
            f.write("\n")
    logger.info(f"Wrote {sample_set.count} samples to {path}")
    return path


def read_samples(path: str, source: Optional[str] = None, seed: Optional[int] = None) -> SampleSet:
    rows = []
    width = None
    with _open(path, "r") as f:
        for line_number, line in enumerate(f, start=1):
            text = line.rstrip("\n")
            if not text.strip():
                continue
            tokens = text.split(SAMPLE_TOKEN_SEPARATOR)
            for index, token in enumerate(tokens):
                if token not in ("0", "1"):
                    column = sum(len(t) + 1 for t in tokens[:index]) + 1
                    raise ArtifactFormatError(
                        f"Invalid sample token {token!r}", path=path, line=line_number,
                        column=column, context=text,
                    )
            if width is None:
                width = len(tokens)
            elif len(tokens) != width:
                raise ArtifactFormatError(
                    f"Expected {width} tokens, found {len(tokens)}", path=path, line=line_number,
                    context=text,
                )
            rows.append([int(t) for t in tokens])
    if not rows:
        raise ArtifactFormatError("Sample file holds no measurements", path=path)
    return SampleSet(samples=np.array(rows, dtype=np.uint8), seed=seed, source=source or os.path.basename(path))


# --- JSON ---

def _json_default(value: Any):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if hasattr(value, "model_dump"):
        return value.model_dump()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_json(path: str, data: Any) -> str:
    """Floats are written with repr, which round-trips float64 exactly."""
    with _open(path, "w") as f:
        json.dump(data, f, indent=2, default=_json_default)
        f.write("\n")
    return path


def read_json(path: str) -> Any:
    with _open(path, "r") as f:
        text = f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        lines = text.splitlines()
        context = lines[e.lineno - 1] if 0 < e.lineno <= len(lines) else ""
        raise ArtifactFormatError(
            f"Malformed JSON: {e.msg}", path=path, line=e.lineno, column=e.colno, context=context,
        ) from e


# --- Tables ---

def write_table(path: str, table: pd.DataFrame) -> str:
    _ensure_parent(path)
    try:
        table.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    except OSError as e:
        raise ArtifactIOError(f"Cannot write {path}: {e}") from e
    return path


def read_table(path: str) -> pd.DataFrame:
    try:
        return pd.read_csv(path, float_precision="round_trip")
    except OSError as e:
        raise ArtifactIOError(f"Cannot read {path}: {e}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ArtifactFormatError(f"Malformed CSV: {e}", path=path) from e


# --- Weights ---

def save_weights(path: str, rbm: RbmParameters, metadata: Optional[Dict[str, Any]] = None) -> str:
    document = rbm.to_dict()
    document["metadata"] = metadata or {}
    return write_json(path, document)


def load_weights(path: str) -> Tuple[RbmParameters, Dict[str, Any]]:
    document = read_json(path)
    if not isinstance(document, dict):
        raise ArtifactFormatError("Weight file must hold a JSON object", path=path)
    missing = [key for key in ("W", "a", "b") if key not in document]
    if missing:
        raise ArtifactFormatError(f"Weight file is missing field(s) {missing}", path=path)
    try:
        rbm = RbmParameters.from_dict(document)
    except ValueError as e:
        raise ArtifactFormatError(f"Invalid weights: {e}", path=path) from e
    return rbm, document.get("metadata", {})


def write_heatmap_csv(path: str, weights: np.ndarray) -> str:
    """W as a bare grid: row i is visible unit i."""
    _ensure_parent(path)
    try:
        pd.DataFrame(np.asarray(weights)).to_csv(path, header=False, index=False, float_format=FLOAT_FORMAT)
    except OSError as e:
        raise ArtifactIOError(f"Cannot write {path}: {e}") from e
    return path


def write_pgm(path: str, weights: np.ndarray, max_gray: int = 255) -> str:
    """Plain graymap (P2) of W, linearly scaled from [min, max] to [0, max_gray]."""
    matrix = np.asarray(weights, dtype=np.float64)
    low, high = float(matrix.min()), float(matrix.max())
    span = high - low
    levels = np.zeros(matrix.shape, dtype=np.int64) if span == 0 else \
        np.rint((matrix - low) / span * max_gray).astype(np.int64)
    rows, cols = matrix.shape
    with _open(path, "w") as f:
        f.write(f"P2\n# W scaled from [{low!r}, {high!r}]\n{cols} {rows}\n{max_gray}\n")
        for row in levels:
            f.write(" ".join(str(v) for v in row))
            f.write("\n")
    return path


# --- Phase diagrams ---

def sector_color(dicke_index: int, n_qubits: int) -> Tuple[int, int, int]:
    """
    Color ramp for sector D: t = D / N goes from blue (D = 0) through green
    to red (D = N). Points below the threshold (D = -1) are white.
    """
    if dicke_index < 0:
        return 255, 255, 255
    t = dicke_index / n_qubits if n_qubits else 0.0
    return (
        int(round(255 * t)),
        int(round(200 * (1.0 - abs(2.0 * t - 1.0)))),
        int(round(255 * (1.0 - t))),
    )


def write_phase_ppm(path: str, grid: PhaseDiagramGrid) -> str:
    """Binary pixmap (P6); the top image row is the largest w_max."""
    palette = np.array([sector_color(d, grid.n_qubits) for d in range(grid.n_qubits + 1)]
                       + [sector_color(-1, grid.n_qubits)], dtype=np.uint8)
    # index -1 selects the trailing white entry
    pixels = palette[grid.best_d[::-1]]
    rows, cols = grid.shape
    with _open(path, "wb") as f:
        f.write(f"P6\n{cols} {rows}\n255\n".encode("ascii"))
        f.write(pixels.tobytes())
    return path


class PhaseDiagramCsvWriter:
    """
    Row sink for `phase_diagram`: appends each finished row to a CSV with
    columns w_min, w_max, best_D (-1 below threshold), best_F, tie.
    Rows go to `<path>.partial`; the file only appears under `path` once the
    block exits cleanly.
    """
    COLUMNS = ["w_min", "w_max", "best_D", "best_F", "tie"]

    def __init__(self, path: str, w_min_values: np.ndarray):
        self.path = path
        self.partial_path = path + ".partial"
        self.w_min_values = np.asarray(w_min_values)
        self.rows_written = 0
        self._handle = None

    def __enter__(self) -> "PhaseDiagramCsvWriter":
        self._handle = _open(self.partial_path, "w")
        self._handle.write(",".join(self.COLUMNS) + "\n")
        return self

    def __call__(self, row: int, w_max: float, best_d: np.ndarray, best_fidelity: np.ndarray, ties: np.ndarray):
        table = pd.DataFrame({
            "w_min": self.w_min_values,
            "w_max": np.full(self.w_min_values.shape, w_max),
            "best_D": best_d,
            "best_F": best_fidelity,
            "tie": ties.astype(int),
        }, columns=self.COLUMNS)
        table.to_csv(self._handle, header=False, index=False, float_format=FLOAT_FORMAT)
        self.rows_written += 1

    def __exit__(self, exc_type, exc, tb):
        if self._handle is not None:
            self._handle.close()
            self._handle = None
        if exc_type is not None:
            if os.path.exists(self.partial_path):
                os.remove(self.partial_path)
            logger.warning(f"Discarded {self.path} after {self.rows_written} row(s): {exc_type.__name__}")
            return False
        try:
            os.replace(self.partial_path, self.path)
        except OSError as e:
            raise ArtifactIOError(f"Cannot finalize {self.path}: {e}") from e
        return False
