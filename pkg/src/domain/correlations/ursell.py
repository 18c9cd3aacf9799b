"""
Ursell (connected) correlation functions of orders 1 to 4.

With m(S) the moment of the sub-string on positions S of the site tuple:
  order 1: m(0)
  order 2: m(01) - m(0)m(1)
  order 3: m(012) - m(01)m(2) - m(02)m(1) - m(12)m(0) + 2 m(0)m(1)m(2)
  order 4: m(0123) - [4 triple x single] - [3 pair x pair]
           + 2 [6 pair x single x single] - 6 m(0)m(1)m(2)m(3)
"""
from itertools import combinations
from typing import Optional, Sequence, Tuple

from src.domain.constants import PAULI_AXES, URSELL_ORDERS
from src.domain.errors import DomainError
from src.domain.schemas import StateVector
from src.domain.correlations.pauli import MomentCache


def _validate(psi: StateVector, sites: Tuple[int, ...], label: str):
    order = len(sites)
    if order not in URSELL_ORDERS:
        raise DomainError(f"Ursell functions are defined for orders 1-4, got {order}")
    if len(label) != order:
        raise DomainError(f"Projection label '{label}' does not match {order} sites")
    if set(label) - set(PAULI_AXES):
        raise DomainError(f"Projection label '{label}' may only contain x, y, z")
    if len(set(sites)) != order:
        raise DomainError(f"Ursell sites must be distinct, got {sites}")
    if min(sites) < 1 or max(sites) > psi.n_qubits:
        raise DomainError(f"Sites {sites} out of range for {psi.n_qubits} qubits")


def ursell(psi: StateVector, sites: Sequence[int], projections: str,
           cache: Optional[MomentCache] = None) -> float:
    """
    Connected correlation Gamma^{projections}_{sites}. Site k of the tuple
    carries projection k of the label; tuples need not be sorted.
    """
    sites = tuple(int(s) for s in sites)
    _validate(psi, sites, projections)
    if projections.count('y') % 2:
        return 0.0
    cache = cache if cache is not None and cache.psi is psi else MomentCache(psi)

    def m(*positions: int) -> float:
        return cache.expectation(tuple(sites[p] for p in positions), "".join(projections[p] for p in positions))

    order = len(sites)
    if order == 1:
        value = m(0)
    elif order == 2:
        value = m(0, 1) - m(0) * m(1)
    elif order == 3:
        value = (m(0, 1, 2)
                 - m(0, 1) * m(2) - m(0, 2) * m(1) - m(1, 2) * m(0)
                 + 2.0 * m(0) * m(1) * m(2))
    else:
        everything = (0, 1, 2, 3)
        triples = sum(m(*t) * m(*(set(everything) - set(t))) for t in combinations(everything, 3))
        pair_pairs = m(0, 1) * m(2, 3) + m(0, 2) * m(1, 3) + m(0, 3) * m(1, 2)
        pair_singles = 0.0
        for pair in combinations(everything, 2):
            rest = [p for p in everything if p not in pair]
            pair_singles += m(*pair) * m(rest[0]) * m(rest[1])
        value = (m(0, 1, 2, 3) - triples - pair_pairs
                 + 2.0 * pair_singles
                 - 6.0 * m(0) * m(1) * m(2) * m(3))
    return value if value != 0.0 else 0.0
