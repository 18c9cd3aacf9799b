import argparse
import os

from src.cli.schemas import CommandResult, SampleConfig
from src.domain.schemas import DickeState
from src.domain.states import sample_measurements
from src.services.storage import write_samples
from src.services.worker_pool import resolve_seed

NAME = "sample"
HELP = "Draw projective measurements of a Dicke state into a sample file."
CONFIG = SampleConfig


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--n-qubits", "-N", dest="n_qubits", type=int, help="Qubit count N.")
    parser.add_argument("--dicke-index", "-D", dest="dicke_index", type=int, help="Dicke index D.")
    parser.add_argument("--count", type=int, help="Number of measurements (default 10000).")
    parser.add_argument("--output", help="Sample file path (default <output-dir>/samples_N<N>_D<D>.txt).")


def run(config: SampleConfig) -> CommandResult:
    config.seed = resolve_seed(config.seed)
    state = DickeState(n_qubits=config.n_qubits, dicke_index=config.dicke_index)
    samples = sample_measurements(state, config.count, config.seed)
    output = config.output or os.path.join(
        config.output_dir, f"samples_N{config.n_qubits}_D{config.dicke_index}.txt",
    )
    write_samples(output, samples)
    return CommandResult(
        outputs={"samples": output},
        summary={"count": samples.count, "source": samples.source},
    )
