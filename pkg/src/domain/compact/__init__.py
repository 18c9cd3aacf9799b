from .model import (
    log_unnormalized_weight_probability, log_weight_profile, sector_fidelities, fidelity_analytic,
    optimal_weights, from_ratio, export_explicit, pick_sector, classify_point,
)
from .phase_diagram import (
    Crossing, default_axes, row_fidelities, phase_diagram, fidelity_path, find_crossing,
    sharpening_violations, boundary_fraction,
)

__all__ = [
    'log_unnormalized_weight_probability', 'log_weight_profile', 'sector_fidelities', 'fidelity_analytic',
    'optimal_weights', 'from_ratio', 'export_explicit', 'pick_sector', 'classify_point',
    'Crossing', 'default_axes', 'row_fidelities', 'phase_diagram', 'fidelity_path', 'find_crossing',
    'sharpening_violations', 'boundary_fraction',
]
