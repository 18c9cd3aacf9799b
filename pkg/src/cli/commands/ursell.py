import argparse
import os
from typing import Dict, List

import pandas as pd

from src.cli.schemas import CommandResult, UrsellConfig
from src.domain.correlations import (
    compare_reports, correlation_histogram, correlation_histogram_from_vector,
    product_state_vector, rbm_state_vector, report_table,
)
from src.domain.schemas import CorrelationReport, DickeState
from src.services.storage import load_weights, write_json, write_table
from src.services.worker_pool import resolve_seed

NAME = "ursell"
HELP = "Ursell correlation functions (orders 1-4) of Dicke, product or RBM states."
CONFIG = UrsellConfig


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--n-qubits", "-N", dest="n_qubits", type=int, help="Qubit count (default 16).")
    parser.add_argument("--dicke-indices", "-D", dest="dicke_indices", type=int, nargs="+",
                        help="Dicke indices to evaluate (default 1 4 8).")
    parser.add_argument("--orders", type=int, nargs="+", help="Orders among 1-4 (default all).")
    parser.add_argument("--product-state", dest="product_state",
                        help="Check a product state such as 0000 instead; all values must vanish.")
    parser.add_argument("--weights", help="Evaluate the state of an RBM weights file and compare with the Dicke states.")
    parser.add_argument("--audit-tuples", dest="audit_tuples", type=int,
                        help="Random site tuples in the symmetry audit (default 10).")


def _level_summary(report: CorrelationReport) -> Dict:
    return {
        "order": report.order,
        "source": report.source,
        "levels": [level.model_dump() for level in report.levels],
        "zero_labels": report.zero_labels,
        "all_zero": report.all_zero,
        "max_abs": report.max_abs(),
        "audit": report.audit.model_dump(),
    }


def _export(config: UrsellConfig, stem: str, reports: List[CorrelationReport], outputs: Dict[str, str]):
    table = pd.concat([report_table(r) for r in reports], ignore_index=True)
    outputs[f"{stem}_csv"] = write_table(os.path.join(config.output_dir, f"ursell_{stem}.csv"), table)
    outputs[f"{stem}_json"] = write_json(
        os.path.join(config.output_dir, f"ursell_{stem}_levels.json"), [_level_summary(r) for r in reports],
    )


def run(config: UrsellConfig) -> CommandResult:
    config.seed = resolve_seed(config.seed)
    outputs: Dict[str, str] = {}
    summary: Dict[str, Dict] = {}

    if config.product_state:
        psi = product_state_vector(config.product_state)
        reports = [correlation_histogram_from_vector(psi, order) for order in config.orders]
        _export(config, "product", reports, outputs)
        summary["product"] = {str(r.order): r.all_zero for r in reports}
        return CommandResult(outputs=outputs, summary=summary)

    dicke_reports = {}
    for d in config.dicke_indices:
        state = DickeState(n_qubits=config.n_qubits, dicke_index=d)
        reports = [correlation_histogram(state, order, config.audit_tuples, config.seed) for order in config.orders]
        dicke_reports[d] = reports
        _export(config, f"N{config.n_qubits}_D{d}", reports, outputs)
        summary[state.label] = {str(r.order): {"levels": len(r.levels), "max_abs": r.max_abs(),
                                               "audit_passed": r.audit.passed} for r in reports}

    if config.weights:
        rbm, _ = load_weights(config.weights)
        psi = rbm_state_vector(rbm)
        reports = [correlation_histogram_from_vector(psi, order) for order in config.orders]
        _export(config, "rbm", reports, outputs)
        for d, dicke in dicke_reports.items():
            if dicke and dicke[0].n_qubits != psi.n_qubits:
                continue
            table = pd.concat(
                [compare_reports(a, b).assign(order=a.order) for a, b in zip(reports, dicke)], ignore_index=True,
            )
            outputs[f"compare_D{d}"] = write_table(
                os.path.join(config.output_dir, f"ursell_rbm_vs_D{d}.csv"), table,
            )
            summary[f"rbm_vs_D{d}"] = {"max_abs_deviation": float(table["abs_deviation"].max())}
    return CommandResult(outputs=outputs, summary=summary)
