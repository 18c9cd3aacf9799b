import itertools
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.domain.constants import PAULI_AXES, SYMMETRY_AUDIT_TUPLES, TOLERANCES, URSELL_ORDERS
from src.domain.errors import DomainError
from src.domain.schemas import (
    CorrelationEntry, CorrelationLevel, CorrelationReport, DickeState, StateVector, SymmetryAudit,
)
from src.domain.correlations.pauli import MomentCache
from src.domain.correlations.ursell import ursell
from src.domain.correlations.vectors import dicke_state_vector
from src.services.worker_pool import pool
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

# Audit deviations above this fail the site-exchange check
AUDIT_TOLERANCE = 1e-10


def projection_labels(order: int) -> List[str]:
    """All 3^order labels in lexicographic order ("xx", "xy", ..., "zz")."""
    return ["".join(p) for p in itertools.product(PAULI_AXES, repeat=order)]


def _check_order(order: int, n_qubits: int):
    if order not in URSELL_ORDERS:
        raise DomainError(f"Correlation order must be one of {URSELL_ORDERS}, got {order}")
    if order > n_qubits:
        raise DomainError(f"Order {order} needs {order} distinct sites, state has {n_qubits}")


def _merge_levels(entries: List[CorrelationEntry]) -> List[CorrelationLevel]:
    """Groups values closer than LEVEL_MERGE, ascending."""
    levels: List[CorrelationLevel] = []
    for entry in sorted(entries, key=lambda e: e.value):
        if levels and abs(entry.value - levels[-1].value) < TOLERANCES['LEVEL_MERGE']:
            levels[-1].multiplicity += 1
            levels[-1].labels.append(entry.label)
        else:
            levels.append(CorrelationLevel(value=entry.value, multiplicity=1, labels=[entry.label]))
    return levels


def _build_report(psi: StateVector, order: int, sites: Tuple[int, ...], cache: MomentCache) -> CorrelationReport:
    labels = projection_labels(order)
    values = pool.map_ordered(lambda label: ursell(psi, sites, label, cache), labels)
    entries = [CorrelationEntry(label=label, sites=sites, value=value) for label, value in zip(labels, values)]
    zero_labels = [e.label for e in entries if abs(e.value) <= TOLERANCES['ZERO']]
    return CorrelationReport(
        order=order,
        n_qubits=psi.n_qubits,
        source=psi.source,
        entries=entries,
        levels=_merge_levels(entries),
        zero_labels=zero_labels,
        all_zero=len(zero_labels) == len(entries),
    )


def _symmetry_audit(psi: StateVector, report: CorrelationReport, tuples: int, seed: int,
                    cache: MomentCache) -> SymmetryAudit:
    """
    Re-evaluates every label on random ordered site tuples. For a
    permutation-symmetric state each value must equal the representative one.
    """
    rng = np.random.default_rng(seed)
    site_tuples = [
        tuple(int(s) + 1 for s in rng.choice(psi.n_qubits, size=report.order, replace=False))
        for _ in range(tuples)
    ]
    reference = {e.label: e.value for e in report.entries}

    def deviation(sites: Tuple[int, ...]) -> float:
        return max(abs(ursell(psi, sites, label, cache) - value) for label, value in reference.items())

    deviations = pool.map_ordered(deviation, site_tuples)
    max_deviation = max(deviations, default=0.0)
    return SymmetryAudit(
        tuples_checked=len(site_tuples),
        max_deviation=max_deviation,
        passed=max_deviation <= AUDIT_TOLERANCE,
        site_tuples=site_tuples,
    )


def correlation_histogram(state: DickeState, order: int, audit_tuples: int = SYMMETRY_AUDIT_TUPLES,
                          seed: int = 0) -> CorrelationReport:
    """
    Ursell functions of one order for every projection label of a Dicke
    state, evaluated on sites (1, ..., order) and cross-checked on
    `audit_tuples` random site tuples.
    """
    _check_order(order, state.n_qubits)
    psi = dicke_state_vector(state)
    cache = MomentCache(psi)
    report = _build_report(psi, order, tuple(range(1, order + 1)), cache)
    report.audit = _symmetry_audit(psi, report, audit_tuples, seed, cache)
    if not report.audit.passed:
        logger.warning(
            f"Site-exchange audit failed for {state.label}, order {order}: "
            f"max deviation {report.audit.max_deviation:.3e}"
        )
    logger.info(
        f"{state.label} order {order}: {len(report.levels)} level(s), "
        f"{len(report.zero_labels)}/{len(report.entries)} zero label(s)"
    )
    return report


def correlation_histogram_from_vector(psi: StateVector, order: int,
                                      sites: Optional[Sequence[int]] = None) -> CorrelationReport:
    """
    Same report for an arbitrary state vector (product states, RBM states).
    No symmetry is assumed, so no audit is run.
    """
    _check_order(order, psi.n_qubits)
    sites = tuple(sites) if sites is not None else tuple(range(1, order + 1))
    if len(sites) != order:
        raise DomainError(f"Expected {order} sites, got {sites}")
    return _build_report(psi, order, sites, MomentCache(psi))


def compare_reports(first: CorrelationReport, second: CorrelationReport) -> pd.DataFrame:
    """Per-label values of two same-order reports and their absolute deviation."""
    if first.order != second.order:
        raise DomainError(f"Cannot compare order {first.order} with order {second.order}")
    left = pd.DataFrame([{"label": e.label, "first": e.value} for e in first.entries])
    right = pd.DataFrame([{"label": e.label, "second": e.value} for e in second.entries])
    table = left.merge(right, on="label", how="outer")
    table["abs_deviation"] = (table["first"] - table["second"]).abs()
    return table


def report_table(report: CorrelationReport) -> pd.DataFrame:
    """Rows of (order, label, sites, value) for CSV export."""
    return pd.DataFrame([
        {"order": report.order, "label": e.label,
         "sites": "-".join(str(s) for s in e.sites), "value": e.value}
        for e in report.entries
    ], columns=["order", "label", "sites", "value"])
