import argparse
import os

from src.cli.schemas import CommandResult, RfReportConfig
from src.domain.receptive_fields import rf_score, rf_template_fit, rf_unit_table
from src.services.storage import load_weights, write_json, write_table

NAME = "rf-report"
HELP = "Score the global receptive-field structure of a weights file."
CONFIG = RfReportConfig


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--weights", help="Weights JSON to analyse.")
    parser.add_argument("--threshold", type=float, help="Score needed for a global-RF verdict (default 0.5).")
    parser.add_argument("--template-fit", dest="template_fit", action=argparse.BooleanOptionalAction,
                        default=None, help="Fit the two-parameter circulant template (square matrices).")


def run(config: RfReportConfig) -> CommandResult:
    rbm, _ = load_weights(config.weights)
    report = rf_score(rbm.weights, config.threshold)
    document = report.model_dump()
    document["verdict"] = "global RF present" if report.global_rf_present else "global RF absent"

    fit = None
    if config.template_fit and rbm.n_visible == rbm.n_hidden:
        fit = rf_template_fit(rbm.weights)
        document["template_fit"] = fit.model_dump()

    stem = os.path.join(config.output_dir, f"rf_N{rbm.n_visible}_M{rbm.n_hidden}")
    outputs = {
        "report": write_json(f"{stem}_report.json", document),
        "units": write_table(f"{stem}_units.csv", rf_unit_table(report)),
    }
    summary = {
        "global_score": report.global_score,
        "verdict": document["verdict"],
        "unmatched": report.unmatched,
    }
    if fit is not None:
        summary["template_residual"] = fit.residual
    return CommandResult(outputs=outputs, summary=summary)
