"""
Log-log regression of discrepancy against N
"""

from typing import Any, Dict, Sequence, Tuple

import numpy as np
from scipy import stats

from src.errors import FitError


def fit_loglog(rows: Sequence[Tuple[float, float]], confidence: float = 0.95) -> Dict[str, Any]:
    """OLS of log value on log N with a two-sided t interval for the slope"""
    data = np.asarray(rows, dtype=float).reshape(-1, 2)
    if len(data) < 3:
        raise FitError(f"fit_loglog needs at least 3 rows, got {len(data)}")
    if np.any(data <= 0.0) or not np.all(np.isfinite(data)):
        raise FitError("fit_loglog needs finite positive N and values")
    x, y = np.log(data[:, 0]), np.log(data[:, 1])
    if np.ptp(x) == 0.0:
        raise FitError("fit_loglog needs at least two distinct N")

    fit = stats.linregress(x, y)
    half = float(stats.t.ppf(0.5 + confidence / 2.0, len(data) - 2) * fit.stderr)
    return {
        "slope": float(fit.slope),
        "intercept": float(fit.intercept),
        "r2": float(fit.rvalue ** 2),
        "stderr": float(fit.stderr),
        "ci": [float(fit.slope) - half, float(fit.slope) + half],
        "rows": len(data),
    }
