import numpy as np

from src.domain.errors import DomainError
from src.domain.schemas import TemplateFit
from src.domain.receptive_fields.scoring import as_weight_matrix, rf_score


def rf_template_fit(weights) -> TemplateFit:
    """
    Least-squares fit of W to the circulant template under the matching
    found by `rf_score`: matched entries share w_max, all other entries of
    the matched columns share w_min. With a fixed assignment the optimum is
    the two group means. Collided columns are left out and the fit is flagged partial.
    """
    matrix = as_weight_matrix(weights)
    if matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"Template fit needs a square matrix, got shape {matrix.shape}")

    report = rf_score(matrix)
    columns = [j for j, i in enumerate(report.permutation) if i is not None]
    rows = [report.permutation[j] for j in columns]

    used = matrix[:, columns]
    dominant_mask = np.zeros(used.shape, dtype=bool)
    dominant_mask[rows, np.arange(len(columns))] = True

    w_max_est = float(used[dominant_mask].mean())
    w_min_est = float(used[~dominant_mask].mean())
    template = np.where(dominant_mask, w_max_est, w_min_est)
    residual = float(np.sqrt(np.mean((used - template) ** 2)))
    return TemplateFit(
        w_max_est=w_max_est,
        w_min_est=w_min_est,
        permutation=report.permutation,
        residual=residual,
        partial=not report.matching_complete,
    )
