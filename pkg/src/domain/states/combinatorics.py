import numpy as np
from scipy.special import gammaln

from src.domain.errors import DomainError


def log_binomial(n: int, k: int) -> float:
    """
    ln C(n, k) through log-gamma, never forming C(n, k) itself.
    Absolute error stays below 1e-10 for n <= 1024.
    """
    if n < 0 or k < 0:
        raise DomainError(f"log_binomial needs non-negative arguments, got ({n}, {k})")
    if k > n:
        raise DomainError(f"log_binomial needs k <= n, got ({n}, {k})")
    if k == 0 or k == n:
        return 0.0
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def log_binomial_row(n: int) -> np.ndarray:
    """
    ln C(n, k) for k = 0..n as one array (the sector multiplicities of an n-qubit register).
    """
    if n < 0:
        raise DomainError(f"log_binomial_row needs n >= 0, got {n}")
    k = np.arange(n + 1)
    row = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    row[0] = 0.0
    row[-1] = 0.0
    return row
