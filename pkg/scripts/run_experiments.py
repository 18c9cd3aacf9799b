"""
Runs the experiment recipes in config/experiments through the CLI.

    python scripts/run_experiments.py                      # everything except the slow runs
    python scripts/run_experiments.py phase-diagram-large  # selected experiments
    python scripts/run_experiments.py --all                # include tomography and scaling
"""
import os
import sys

# Add project root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.cli.main import main as cli_main

RECIPE_DIR = os.path.join(os.path.dirname(__file__), '..', 'config', 'experiments')

# experiment -> [(recipe file, command)], in run order
RECIPES = {
    "correlations": [("correlations.json", "ursell")],
    "tomography": [
        ("tomography.json", "sample"),
        ("tomography.json", "train"),
        ("tomography.json", "rf-report"),
    ],
    "phase-diagram": [
        ("phase_diagram_n8.json", "phase-diagram"),
        ("phase_diagram_n8.json", "path"),
    ],
    "phase-diagram-large": [
        ("phase_diagram_n32.json", "phase-diagram"),
        ("phase_diagram_n64.json", "phase-diagram"),
        ("phase_diagram_n128.json", "phase-diagram"),
    ],
    "hidden-unit-scaling": [("hidden_unit_scaling.json", "scaling-study")],
}
SLOW = {"tomography", "hidden-unit-scaling"}


def run(experiments):
    for experiment in experiments:
        for recipe, command in RECIPES[experiment]:
            path = os.path.join(RECIPE_DIR, recipe)
            print(f"--- {experiment}: {command} ({recipe}) ---")
            code = cli_main([command, "--config", path])
            if code != 0:
                print(f"❌ {experiment} {command} failed with exit code {code}")
                return code
            print(f"✅ {experiment} {command}")
    return 0


if __name__ == "__main__":
    args = sys.argv[1:]
    if "--all" in args:
        selected = list(RECIPES)
    elif args:
        unknown = [a for a in args if a not in RECIPES]
        if unknown:
            print(f"Unknown experiment(s): {unknown}. Choose from {list(RECIPES)}")
            sys.exit(2)
        selected = args
    else:
        selected = [e for e in RECIPES if e not in SLOW]
    sys.exit(run(selected))
