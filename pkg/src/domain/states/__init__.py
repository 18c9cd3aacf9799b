from .combinatorics import log_binomial, log_binomial_row
from .bitstrings import (
    parse_bitstring, format_bitstring, as_bitstring, hamming_weight,
    index_to_bits, bits_to_index, iter_basis_chunks, iter_weight_chunks, weight_basis, enumerate_basis,
)
from .dicke import dicke_amplitude, sample_measurements, sample_state_vector

# Re-export key functions
__all__ = [
    'log_binomial', 'log_binomial_row',
    'parse_bitstring', 'format_bitstring', 'as_bitstring', 'hamming_weight',
    'index_to_bits', 'bits_to_index', 'iter_basis_chunks', 'iter_weight_chunks', 'weight_basis',
    'enumerate_basis',
    'dicke_amplitude', 'sample_measurements', 'sample_state_vector',
]
