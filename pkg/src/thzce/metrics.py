"""Normalized mean square error in dB."""

from __future__ import annotations

import math

import numpy as np

#: value returned when the estimate matches the truth exactly
NMSE_EXACT = float("-inf")


def nmse_db(truth: np.ndarray, estimates: np.ndarray) -> float:
    """10*log10 of total squared estimation error over total channel power.

    ``truth`` and ``estimates`` are matching sets of channel vectors, either a
    single vector or stacked rows.  Aggregating errors and reference power over
    the whole set weights every realization by its actual power, which keeps
    the unitary-pilot LS estimator pinned at -SNR dB regardless of how much
    individual channel norms fluctuate.

    Returns ``-inf`` for an exact estimate; raises ``ValueError`` for an
    all-zero truth set (the ratio is undefined) instead of returning NaN.
    """
    truth = np.atleast_2d(np.asarray(truth, dtype=np.complex128))
    estimates = np.atleast_2d(np.asarray(estimates, dtype=np.complex128))
    if truth.shape != estimates.shape:
        raise ValueError(
            f"truth {truth.shape} and estimates {estimates.shape} must match"
        )
    power = float(np.sum(np.abs(truth) ** 2))
    if power == 0.0:
        raise ValueError("NMSE is undefined for an all-zero truth set")
    err = float(np.sum(np.abs(truth - estimates) ** 2))
    if err == 0.0:
        return NMSE_EXACT
    return 10.0 * math.log10(err / power)
