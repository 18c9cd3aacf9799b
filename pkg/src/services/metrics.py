from typing import Dict

from prometheus_client import Counter, Gauge, REGISTRY

# 1. Track completed contrastive-divergence epochs
training_epochs_total = Counter(
    "dicke_rbm_training_epochs_total",
    "Total number of contrastive-divergence epochs completed"
)

# 2. Track the best fidelity of the most recent training run
training_best_fidelity = Gauge(
    "dicke_rbm_training_best_fidelity",
    "Best fidelity with the target state recorded by the most recent training run"
)

# 3. Track block-Gibbs sweeps (one sweep = hidden then visible resample of a batch)
gibbs_sweeps_total = Counter(
    "dicke_rbm_gibbs_sweeps_total",
    "Total number of block-Gibbs sweeps performed"
)

# 4. Track evaluated phase-diagram mesh points
phase_diagram_points_total = Counter(
    "dicke_rbm_phase_diagram_points_total",
    "Total number of (w_min, w_max) points classified"
)

# 5. Track Pauli-string expectation values computed on state vectors
pauli_expectations_total = Counter(
    "dicke_rbm_pauli_expectations_total",
    "Total number of Pauli-string expectation values evaluated"
)


def snapshot() -> Dict[str, float]:
    """
    Current values of this package's samples, keyed by sample name.
    Recorded in command metadata.
    """
    values = {}
    for metric in REGISTRY.collect():
        if not metric.name.startswith("dicke_rbm_"):
            continue
        for sample in metric.samples:
            if sample.name.endswith("_created"):
                continue
            values[sample.name] = float(sample.value)
    return values
