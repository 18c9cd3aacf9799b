"""
Pauli-string expectation values on real state vectors.

Convention: bit 0 is the sigma^z = +1 eigenstate. sigma^x flips the bit,
sigma^y flips it with phase +i (from 0) or -i (from 1), sigma^z gives
(-1)^bit. A string P maps |k> to phase(k) |k ^ mask>, so
<psi|P|psi> = i^{n_y} sum_k psi(k ^ mask) psi(k) (-1)^{popcount(k & yz_mask)}.
"""
import math
import threading
from typing import Dict, Tuple

import numpy as np

from src.domain.errors import DomainError
from src.domain.schemas import PauliString, StateVector
from src.services.metrics import pauli_expectations_total


def _site_bit(n_qubits: int, site: int) -> int:
    # v_1 is the most significant bit of the basis index
    return 1 << (n_qubits - site)


def _parity(values: np.ndarray) -> np.ndarray:
    parity = np.zeros(values.shape, dtype=np.int64)
    while np.any(values):
        parity ^= values & 1
        values = values >> 1
    return parity


class MomentCache:
    """
    Memoizes <psi|P|psi> for one state vector, keyed by (sites, label), so the
    sub-moments shared by many Ursell labels are evaluated once.
    """

    def __init__(self, psi: StateVector):
        self.psi = psi
        self._indices = np.arange(psi.amplitudes.shape[0], dtype=np.int64)
        self._values: Dict[Tuple[Tuple[int, ...], str], float] = {}
        self._lock = threading.Lock()

    def expectation(self, sites: Tuple[int, ...], label: str) -> float:
        key = (tuple(sites), label)
        with self._lock:
            if key in self._values:
                return self._values[key]
        value = _expectation(self.psi, PauliString.from_label(tuple(sites), label), self._indices)
        with self._lock:
            self._values[key] = value
        return value

    def __len__(self) -> int:
        return len(self._values)


def _expectation(psi: StateVector, pauli: PauliString, indices: np.ndarray) -> float:
    n = psi.n_qubits
    if pauli.sites[-1] > n:
        raise DomainError(f"Site {pauli.sites[-1]} out of range for {n} qubits")
    pauli_expectations_total.inc()

    n_y = pauli.label.count('y')
    if n_y % 2:
        return 0.0

    flip_mask = 0
    sign_mask = 0
    for site, axis in pauli.terms:
        bit = _site_bit(n, site)
        if axis in ('x', 'y'):
            flip_mask |= bit
        if axis in ('y', 'z'):
            sign_mask |= bit

    amps = psi.amplitudes
    terms = amps[indices ^ flip_mask] * amps
    if sign_mask:
        terms = np.where(_parity(indices & sign_mask) == 1, -terms, terms)
    nonzero = terms[terms != 0.0]
    # fsum keeps cancelling sums exactly zero
    value = math.fsum(nonzero.tolist())
    if (n_y // 2) % 2:
        value = -value
    return value if value != 0.0 else 0.0


def pauli_expectation(psi: StateVector, pauli: PauliString) -> float:
    """
    <psi|P|psi> for a real normalized state. Labels with an odd number of y
    factors return exactly 0.0.
    """
    return _expectation(psi, pauli, np.arange(psi.amplitudes.shape[0], dtype=np.int64))
