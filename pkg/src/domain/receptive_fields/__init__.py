from .scoring import rf_score, rf_unit_table
from .template import rf_template_fit

__all__ = ['rf_score', 'rf_unit_table', 'rf_template_fit']
