"""Deterministic random-stream derivation.

Every stochastic quantity in the simulator is drawn from a generator keyed
by ``(seed, stream, ...)``.  Sample ``i`` of a dataset always sees the same
three independent substreams (channel, phase noise, AWGN) no matter in which
order samples are produced or how many workers produce them.  Unit-variance
draws are scaled by the requested standard deviation afterwards, so datasets
that differ only in SNR or phase-noise variance share the same underlying
randomness (common random numbers across sweep cells).
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# top-level streams
STREAM_PILOT = 0
STREAM_SAMPLE = 1
STREAM_TRAIN_INIT = 2
STREAM_TRAIN_SHUFFLE = 3

# per-sample purposes
CHANNEL = 0
PHASE_NOISE = 1
NOISE = 2


def derive(seed: int, *key: int) -> np.random.Generator:
    """Generator keyed by ``seed`` plus an arbitrary integer key path."""
    return np.random.default_rng([seed & _MASK64, *key])


def pilot_rng(seed: int) -> np.random.Generator:
    return derive(seed, STREAM_PILOT)


def sample_rng(seed: int, index: int, purpose: int) -> np.random.Generator:
    """Substream for one dataset sample and one purpose (channel/PN/noise)."""
    return derive(seed, STREAM_SAMPLE, index, purpose)


def crandn(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Circularly-symmetric complex Gaussian draws with unit variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
