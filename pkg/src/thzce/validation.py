"""Input validation helpers for the estimator API."""

from __future__ import annotations

import numpy as np


def as_complex_matrix(arr, name: str, n_cols: int | None = None) -> np.ndarray:
    """Coerce to a 2-D complex128 array; a single vector becomes one row."""
    out = np.asarray(arr, dtype=np.complex128)
    if out.ndim == 1:
        out = out[np.newaxis, :]
    if out.ndim != 2:
        raise ValueError(f"{name} must be a vector or a 2-D array, got ndim={out.ndim}")
    if n_cols is not None and out.shape[1] != n_cols:
        raise ValueError(f"{name} has {out.shape[1]} columns, expected {n_cols}")
    if not np.all(np.isfinite(out.view(np.float64))):
        raise ValueError(f"{name} contains non-finite values")
    return out


def check_paired(y: np.ndarray, h: np.ndarray) -> None:
    if y.shape[0] != h.shape[0]:
        raise ValueError(
            f"observations ({y.shape[0]}) and channels ({h.shape[0]}) "
            "must have the same number of rows"
        )
    if y.shape[0] == 0:
        raise ValueError("need at least one sample")
