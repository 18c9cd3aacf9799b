"""
Bitstring conventions shared by every module.

A bitstring v = (v_1, ..., v_N) is a uint8 numpy array with v_1 at index 0.
Its textual form puts v_1 leftmost ("0001" has v_4 = 1). Full-basis
enumeration treats v_1 as the most significant bit, so basis index k and the
textual form are the binary expansion of each other.
"""
import itertools
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from src.core.config import ENUMERATION_GUARD, ENUMERATION_CHUNK
from src.domain.errors import CapacityError, DomainError

BitString = np.ndarray


def parse_bitstring(text: str) -> BitString:
    """
    Parses "0101" or the sample-file form "0 1 0 1".
    """
    cleaned = "".join(text.split())
    if not cleaned or set(cleaned) - {"0", "1"}:
        raise DomainError(f"Not a bitstring: {text!r}")
    return np.fromiter((ch == "1" for ch in cleaned), dtype=np.uint8, count=len(cleaned))


def format_bitstring(bits: Sequence[int]) -> str:
    return "".join("1" if b else "0" for b in bits)


def as_bitstring(value: Union[str, Sequence[int], np.ndarray], n_qubits: Optional[int] = None) -> BitString:
    """
    Normalizes text or a 0/1 sequence into a BitString, checking its length
    against n_qubits when given.
    """
    if isinstance(value, str):
        bits = parse_bitstring(value)
    else:
        bits = np.asarray(value)
        if bits.ndim != 1 or not np.isin(bits, (0, 1)).all():
            raise DomainError(f"Bitstring must be a 1-D sequence of 0/1 values, got {value!r}")
        bits = bits.astype(np.uint8)
    if n_qubits is not None and bits.shape[0] != n_qubits:
        raise DomainError(f"Bitstring has length {bits.shape[0]}, expected {n_qubits}")
    return bits


def hamming_weight(bits: np.ndarray) -> Union[int, np.ndarray]:
    """Number of ones; row-wise for a 2-D batch."""
    bits = np.asarray(bits)
    if bits.ndim == 1:
        return int(bits.sum())
    return bits.sum(axis=-1)


def index_to_bits(indices: np.ndarray, n_qubits: int) -> np.ndarray:
    """Basis indices to a (len, N) bit array, v_1 as the most significant bit."""
    shifts = np.arange(n_qubits - 1, -1, -1, dtype=np.int64)
    return ((np.asarray(indices, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.uint8)


def bits_to_index(bits: np.ndarray) -> Union[int, np.ndarray]:
    bits = np.asarray(bits, dtype=np.int64)
    n_qubits = bits.shape[-1]
    weights = np.left_shift(1, np.arange(n_qubits - 1, -1, -1, dtype=np.int64))
    out = bits @ weights
    return int(out) if bits.ndim == 1 else out


def check_enumeration_guard(n_qubits: int, guard: Optional[int] = None):
    guard = ENUMERATION_GUARD if guard is None else guard
    if n_qubits < 1:
        raise DomainError(f"Need at least one qubit, got {n_qubits}")
    if n_qubits > guard:
        raise CapacityError(
            f"Full-basis enumeration of {n_qubits} qubits exceeds the guard of {guard}",
            n_qubits=n_qubits, guard=guard,
        )


def iter_basis_chunks(n_qubits: int, chunk_size: int = ENUMERATION_CHUNK) -> Iterator[np.ndarray]:
    """
    Streams the full basis as (chunk, N) arrays in index order.
    """
    check_enumeration_guard(n_qubits)
    total = 1 << n_qubits
    for start in range(0, total, chunk_size):
        indices = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        yield index_to_bits(indices, n_qubits)


def iter_weight_chunks(n_qubits: int, weight: int, chunk_size: int = ENUMERATION_CHUNK) -> Iterator[np.ndarray]:
    """
    Streams the C(N, w) bitstrings of Hamming weight w as (chunk, N) arrays,
    in the order of `weight_basis`.
    """
    if n_qubits < 1:
        raise DomainError(f"Need at least one qubit, got {n_qubits}")
    if not 0 <= weight <= n_qubits:
        raise DomainError(f"Weight {weight} outside [0, {n_qubits}]")
    if weight == 0:
        yield np.zeros((1, n_qubits), dtype=np.uint8)
        return
    combinations = itertools.combinations(range(n_qubits), weight)
    while True:
        positions = np.array(list(itertools.islice(combinations, chunk_size)), dtype=np.int64)
        if positions.size == 0:
            return
        bits = np.zeros((positions.shape[0], n_qubits), dtype=np.uint8)
        np.put_along_axis(bits, positions, 1, axis=1)
        yield bits


def weight_basis(n_qubits: int, weight: int) -> np.ndarray:
    """
    All C(N, w) bitstrings of Hamming weight w as a (C(N, w), N) array,
    ordered lexicographically by the positions of their ones ("1100" before "1010").
    """
    return np.concatenate(list(iter_weight_chunks(n_qubits, weight)), axis=0)


def enumerate_basis(n_qubits: int, weight_filter: Optional[int] = None) -> Iterator[BitString]:
    """
    Yields every basis bitstring exactly once.

    Without a filter: all 2^N strings in index order ("00", "01", "10", "11");
    guarded by ENUMERATION_GUARD. With a filter w: the C(N, w) strings of
    weight w in the order of `weight_basis`.
    """
    if weight_filter is None:
        for chunk in iter_basis_chunks(n_qubits):
            yield from chunk
        return

    if n_qubits < 1:
        raise DomainError(f"Need at least one qubit, got {n_qubits}")
    if not 0 <= weight_filter <= n_qubits:
        raise DomainError(f"Weight filter {weight_filter} outside [0, {n_qubits}]")
    for ones in itertools.combinations(range(n_qubits), weight_filter):
        bits = np.zeros(n_qubits, dtype=np.uint8)
        bits[list(ones)] = 1
        yield bits
