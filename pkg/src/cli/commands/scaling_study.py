import argparse
import os

import pandas as pd

from src.cli.commands.train import add_training_arguments
from src.cli.schemas import CommandResult, ScalingStudyConfig
from src.domain.errors import DomainError
from src.domain.rbm import hidden_unit_scaling_study
from src.domain.schemas import DickeState
from src.domain.states import sample_measurements
from src.services.storage import read_samples, write_samples, write_table
from src.services.worker_pool import resolve_seed

NAME = "scaling-study"
HELP = "Best tomography fidelity as a function of the hidden-unit count."
CONFIG = ScalingStudyConfig


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--n-qubits", "-N", dest="n_qubits", type=int, help="Qubit count (default 16).")
    parser.add_argument("--dicke-index", "-D", dest="dicke_index", type=int, help="Dicke index (default 8).")
    parser.add_argument("--hidden-counts", "-M", dest="hidden_counts", type=int, nargs="+",
                        help="Hidden-unit counts to train (default 16 32 64).")
    parser.add_argument("--count", type=int, help="Measurements drawn when no sample file is given.")
    parser.add_argument("--samples", help="Existing sample file to train on.")
    add_training_arguments(parser)


def run(config: ScalingStudyConfig) -> CommandResult:
    config.seed = resolve_seed(config.seed)
    target = DickeState(n_qubits=config.n_qubits, dicke_index=config.dicke_index)
    outputs = {}
    if config.samples:
        data = read_samples(config.samples)
        if data.n_qubits != target.n_qubits:
            raise DomainError(f"Samples have {data.n_qubits} qubits, target has {target.n_qubits}")
    else:
        data = sample_measurements(target, config.count, config.seed)
        outputs["samples"] = write_samples(
            os.path.join(config.output_dir, f"scaling_samples_N{config.n_qubits}_D{config.dicke_index}.txt"), data,
        )

    results = hidden_unit_scaling_study(
        data, target, config.hidden_counts, config.training_config(), learning_rate=config.learning_rate,
    )
    table = pd.DataFrame([r.model_dump() for r in results], columns=["n_hidden", "best_fidelity", "best_epoch", "seed"])
    outputs["table"] = write_table(
        os.path.join(config.output_dir, f"scaling_N{config.n_qubits}_D{config.dicke_index}.csv"), table,
    )
    return CommandResult(outputs=outputs, summary={
        "best_fidelity": {str(r.n_hidden): r.best_fidelity for r in results},
    })
