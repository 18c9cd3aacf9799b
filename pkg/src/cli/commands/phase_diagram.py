import argparse
import os

from src.cli.schemas import CommandResult, PhaseDiagramConfig
from src.domain.compact import phase_diagram
from src.domain.constants import PHASE_DIAGRAM_DEFAULTS
from src.domain.schemas import AxisSpec
from src.services.storage import PhaseDiagramCsvWriter, write_json, write_phase_ppm

NAME = "phase-diagram"
HELP = "Classify a (w_min, w_max) grid of compact RBMs by their best Dicke sector."
CONFIG = PhaseDiagramConfig


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--n-qubits", "-N", dest="n_qubits", type=int, help="Qubit count N.")
    parser.add_argument("--w-min-start", dest="w_min_start", type=float)
    parser.add_argument("--w-min-stop", dest="w_min_stop", type=float)
    parser.add_argument("--w-max-start", dest="w_max_start", type=float)
    parser.add_argument("--w-max-stop", dest="w_max_stop", type=float)
    parser.add_argument("--w-min-points", dest="w_min_points", type=int)
    parser.add_argument("--w-max-points", dest="w_max_points", type=int)
    parser.add_argument("--w-min-step", dest="w_min_step", type=float)
    parser.add_argument("--w-max-step", dest="w_max_step", type=float)
    parser.add_argument("--threshold", type=float, help="Sector threshold (default 0.5).")
    parser.add_argument("--pixmap", action=argparse.BooleanOptionalAction, default=None,
                        help="Also render the diagram as a PPM image.")


def axes(config: PhaseDiagramConfig):
    w_max_stop = config.w_max_stop
    if w_max_stop is None:
        w_max_stop = PHASE_DIAGRAM_DEFAULTS['W_MAX_PER_QUBIT'] * config.n_qubits
    if config.w_min_step:
        w_min_axis = AxisSpec(start=config.w_min_start, stop=config.w_min_stop, step=config.w_min_step)
    else:
        w_min_axis = AxisSpec.from_count(config.w_min_start, config.w_min_stop, config.w_min_points)
    if config.w_max_step:
        w_max_axis = AxisSpec(start=config.w_max_start, stop=w_max_stop, step=config.w_max_step)
    else:
        w_max_axis = AxisSpec.from_count(config.w_max_start, w_max_stop, config.w_max_points)
    return w_min_axis, w_max_axis


def run(config: PhaseDiagramConfig) -> CommandResult:
    w_min_axis, w_max_axis = axes(config)
    stem = os.path.join(config.output_dir, f"phase_diagram_N{config.n_qubits}")

    with PhaseDiagramCsvWriter(f"{stem}.csv", w_min_axis.values()) as writer:
        grid = phase_diagram(config.n_qubits, w_min_axis, w_max_axis, config.threshold, row_sink=writer)

    outputs = {
        "grid": writer.path,
        "header": write_json(f"{stem}_axes.json", {
            "n_qubits": config.n_qubits,
            "threshold": config.threshold,
            "w_min_axis": {**w_min_axis.model_dump(), "count": w_min_axis.count},
            "w_max_axis": {**w_max_axis.model_dump(), "count": w_max_axis.count},
            "row_order": "w_max ascending, w_min ascending within a row",
        }),
    }
    if config.pixmap:
        outputs["pixmap"] = write_phase_ppm(f"{stem}.ppm", grid)

    return CommandResult(outputs=outputs, summary={
        "shape": list(grid.shape),
        "sectors_present": grid.sectors_present(),
        "below_threshold_fraction": float((grid.best_d < 0).mean()),
        "ties": int(grid.ties.sum()),
    })
