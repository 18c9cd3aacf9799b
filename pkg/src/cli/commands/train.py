import argparse
import os

import pandas as pd

from src.cli.schemas import CommandResult, TrainConfig
from src.domain.errors import DomainError
from src.domain.receptive_fields import rf_score
from src.domain.rbm import train_tomography
from src.domain.schemas import DickeState
from src.services.storage import read_samples, save_weights, write_heatmap_csv, write_pgm, write_table
from src.services.worker_pool import resolve_seed

NAME = "train"
HELP = "Fit an RBM to a sample file by contrastive divergence."
CONFIG = TrainConfig


def add_training_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--cd-steps", dest="cd_steps", type=int, help="Gibbs steps per CD estimate (default 10).")
    parser.add_argument("--learning-rate", dest="learning_rate", type=float, help="Step size.")
    parser.add_argument("--epochs", type=int, help="Training epochs (default 2000).")
    parser.add_argument("--batch-size", dest="batch_size", type=int, help="Mini-batch size (default 100).")
    parser.add_argument("--checkpoint-metric", dest="checkpoint_metric", choices=["fidelity", "kl"])
    parser.add_argument("--init-scale", dest="init_scale", type=float, help="Uniform init half-width (default 0.05).")
    parser.add_argument("--log-every", dest="log_every", type=int, help="Epochs between progress lines.")


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--samples", help="Sample file to train on.")
    parser.add_argument("--n-hidden", "-M", dest="n_hidden", type=int, help="Hidden units (default N).")
    parser.add_argument("--target", type=int, nargs=2, metavar=("N", "D"),
                        help="Dicke target enabling the per-epoch fidelity trace.")
    parser.add_argument("--pgm", action=argparse.BooleanOptionalAction, default=None,
                        help="Also write the weight heatmap as a graymap.")
    add_training_arguments(parser)


def trace_table(trace) -> pd.DataFrame:
    table = pd.DataFrame(
        [record.model_dump() for record in trace.records],
        columns=["epoch", "fidelity", "kl", "nll"],
    )
    table["best"] = (table["epoch"] == trace.best_epoch).astype(int)
    return table


def run(config: TrainConfig) -> CommandResult:
    config.seed = resolve_seed(config.seed)
    data = read_samples(config.samples)
    target = None
    if config.target is not None:
        target = DickeState(n_qubits=config.target[0], dicke_index=config.target[1])
        if target.n_qubits != data.n_qubits:
            raise DomainError(f"Target has {target.n_qubits} qubits, samples have {data.n_qubits}")
    n_hidden = config.n_hidden or data.n_qubits

    rbm, trace = train_tomography(data, n_hidden, config.training_config(), target)

    stem = os.path.join(config.output_dir, f"rbm_N{data.n_qubits}_M{n_hidden}")
    outputs = {
        "weights": save_weights(f"{stem}_weights.json", rbm, {
            "seed": trace.seed,
            "config": config.training_config().model_dump(),
            "best_epoch": trace.best_epoch,
            "fidelity": trace.best_fidelity,
            "checkpoint_metric": trace.checkpoint_metric,
            "samples": config.samples,
            "target": list(config.target) if config.target else None,
        }),
        "trace": write_table(f"{stem}_trace.csv", trace_table(trace)),
        "heatmap": write_heatmap_csv(f"{stem}_heatmap.csv", rbm.weights),
    }
    if config.pgm:
        outputs["heatmap_pgm"] = write_pgm(f"{stem}_heatmap.pgm", rbm.weights)

    report = rf_score(rbm.weights)
    return CommandResult(outputs=outputs, summary={
        "n_visible": data.n_qubits,
        "n_hidden": n_hidden,
        "best_epoch": trace.best_epoch,
        "best_fidelity": trace.best_fidelity,
        "checkpoint_metric": trace.checkpoint_metric,
        "rf_score": report.global_score,
        "training": config.training_config().model_dump(),
    })
