from .vectors import dicke_state_vector, product_state_vector, rbm_state_vector
from .pauli import MomentCache, pauli_expectation
from .ursell import ursell
from .histogram import (
    projection_labels, correlation_histogram, correlation_histogram_from_vector,
    compare_reports, report_table,
)

__all__ = [
    'dicke_state_vector', 'product_state_vector', 'rbm_state_vector',
    'MomentCache', 'pauli_expectation', 'ursell',
    'projection_labels', 'correlation_histogram', 'correlation_histogram_from_vector',
    'compare_reports', 'report_table',
]
