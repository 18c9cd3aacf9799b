import argparse
import os

from src.cli.schemas import CommandResult, PathConfig
from src.domain.compact import fidelity_path, find_crossing
from src.services.storage import write_table

NAME = "path"
HELP = "Sector fidelities along a straight line in (w_min, w_max) space."
CONFIG = PathConfig


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--n-qubits", "-N", dest="n_qubits", type=int, help="Qubit count N.")
    parser.add_argument("--start", type=float, nargs=2, metavar=("W_MIN", "W_MAX"))
    parser.add_argument("--stop", type=float, nargs=2, metavar=("W_MIN", "W_MAX"))
    parser.add_argument("--dicke-indices", "-D", dest="dicke_indices", type=int, nargs="+")
    parser.add_argument("--points", type=int, help="Samples along the path (default 101).")
    parser.add_argument("--crossing", type=int, nargs=2, metavar=("D_A", "D_B"),
                        help="Locate where F_D_A = F_D_B along the path.")


def run(config: PathConfig) -> CommandResult:
    table = fidelity_path(config.n_qubits, config.start, config.stop, config.dicke_indices, config.points)
    output = write_table(os.path.join(config.output_dir, f"path_N{config.n_qubits}.csv"), table)
    summary = {
        "rows": len(table),
        "max_fidelity": {col: float(table[col].max()) for col in table.columns if col.startswith("F_")},
    }
    if config.crossing:
        crossing = find_crossing(config.n_qubits, config.start, config.stop, *config.crossing)
        summary["crossing"] = crossing._asdict() if crossing else None
    return CommandResult(outputs={"path": output}, summary=summary)
