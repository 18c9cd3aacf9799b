import argparse
import os

import pandas as pd

from src.cli.schemas import CommandResult, FidelityConfig
from src.domain.compact import sector_fidelities
from src.domain.errors import DomainError
from src.domain.rbm import fidelity_exact, partition_function
from src.domain.schemas import CompactRbm, DickeState
from src.services.storage import load_weights, write_table

NAME = "fidelity"
HELP = "Fidelity of an RBM weights file (exact enumeration) or of a compact RBM (analytic) with Dicke states."
CONFIG = FidelityConfig


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--weights", help="Weights JSON to evaluate by enumeration.")
    parser.add_argument("--n-qubits", "-N", dest="n_qubits", type=int, help="Qubit count (compact mode).")
    parser.add_argument("--dicke-index", "-D", dest="dicke_index", type=int,
                        help="Single sector to report (default: all sectors).")
    parser.add_argument("--w-min", dest="w_min", type=float, help="Compact RBM off-diagonal weight.")
    parser.add_argument("--w-max", dest="w_max", type=float, help="Compact RBM diagonal weight.")


def run(config: FidelityConfig) -> CommandResult:
    if config.weights:
        rbm, _ = load_weights(config.weights)
        n_qubits = rbm.n_visible
        if config.n_qubits is not None and config.n_qubits != n_qubits:
            raise DomainError(f"Weights have {n_qubits} visible units, not {config.n_qubits}")
        sectors = [config.dicke_index] if config.dicke_index is not None else range(n_qubits + 1)
        log_z = partition_function(rbm)
        values = {d: fidelity_exact(rbm, DickeState(n_qubits=n_qubits, dicke_index=d), log_z) for d in sectors}
        mode = "exact"
    else:
        c = CompactRbm(n_qubits=config.n_qubits, w_min=config.w_min, w_max=config.w_max)
        fidelities = sector_fidelities(c)
        if config.dicke_index is not None and not 0 <= config.dicke_index <= c.n_qubits:
            raise DomainError(f"Dicke index {config.dicke_index} outside [0, {c.n_qubits}]")
        sectors = [config.dicke_index] if config.dicke_index is not None else range(c.n_qubits + 1)
        values = {d: float(fidelities[d]) for d in sectors}
        n_qubits = c.n_qubits
        mode = "analytic"

    table = pd.DataFrame({"dicke_index": list(values), "fidelity": list(values.values())})
    output = write_table(os.path.join(config.output_dir, f"fidelity_{mode}_N{n_qubits}.csv"), table)
    best = max(values, key=values.get)
    return CommandResult(outputs={"fidelities": output}, summary={
        "mode": mode,
        "fidelities": {str(d): f for d, f in values.items()},
        "best_dicke_index": best,
        "best_fidelity": values[best],
    })
