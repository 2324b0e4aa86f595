"""End-to-end synthesis of pilot observations and their real-valued features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .channel import draw_channel
from .config import ScenarioConfig
from .impairments import NoiseSpec, PhaseNoiseTrajectory, apply_impairments, draw_pn_trajectory
from .pilots import PilotMatrix


@dataclass(frozen=True)
class ObservationSample:
    """One (received signal, feature vector, true channel) triple."""

    received: np.ndarray  # (M,) complex128
    features: np.ndarray  # (2M,) float64, [Re(y), Im(y)]
    truth: np.ndarray     # (N,) complex128
    snr_db: float
    pn_vars: tuple[float, float]


def preprocess(y: np.ndarray) -> np.ndarray:
    """Split a complex observation into concatenated real and imaginary parts.

    Works on a single vector or on a batch (last axis is the pilot axis), so a
    set of S observations in C^(S x M) maps to features in R^(S x 2M).
    """
    y = np.asarray(y, dtype=np.complex128)
    return np.concatenate([y.real, y.imag], axis=-1)


def inverse_preprocess(x: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`preprocess`."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] % 2 != 0:
        raise ValueError("feature length must be even")
    half = x.shape[-1] // 2
    return x[..., :half] + 1j * x[..., half:]


def synthesize_observation(
    channel: np.ndarray,
    pilots: PilotMatrix,
    pn: PhaseNoiseTrajectory,
    noise: NoiseSpec,
    rng: np.random.Generator,
) -> ObservationSample:
    """Transmit the pilots through one channel draw and apply impairments."""
    channel = np.asarray(channel, dtype=np.complex128)
    if channel.shape != (pilots.num_antennas,):
        raise ValueError(
            f"channel length {channel.shape} does not match pilot rows "
            f"({pilots.num_antennas})"
        )
    clean = channel @ pilots.phi
    y = apply_impairments(clean, pn, noise, rng)
    return ObservationSample(
        received=y,
        features=preprocess(y),
        truth=channel,
        snr_db=float(noise.snr_db),
        pn_vars=(pn.var_tx, pn.var_rx),
    )


def generate_sample(
    cfg: ScenarioConfig, snr_db: float, pilots: PilotMatrix, index: int
) -> ObservationSample:
    """Generate dataset sample ``index`` from its own substreams.

    Channel, phase noise and AWGN each use an independent stream keyed by
    (cfg.seed, index), so samples can be produced in any order (or in
    parallel) with identical results.
    """
    channel_rng = rngmod.sample_rng(cfg.seed, index, rngmod.CHANNEL)
    pn_rng = rngmod.sample_rng(cfg.seed, index, rngmod.PHASE_NOISE)
    noise_rng = rngmod.sample_rng(cfg.seed, index, rngmod.NOISE)

    realization = draw_channel(cfg, channel_rng)
    pn = draw_pn_trajectory(cfg.pn_var_tx, cfg.pn_var_rx, cfg.num_pilots, pn_rng)
    noise = NoiseSpec(snr_db=snr_db)
    return synthesize_observation(realization.channel, pilots, pn, noise, noise_rng)
