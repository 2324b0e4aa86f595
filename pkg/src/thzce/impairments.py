"""Oscillator phase noise and AWGN applied to pilot observations.

Phase noise at each side is a Wiener random walk over the pilot index: the
walk starts at zero and adds one independent Gaussian increment per pilot
symbol.  The received sequence is the clean sequence rotated by the combined
Tx/Rx phasor plus circular complex Gaussian noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import crandn


@dataclass(frozen=True)
class PhaseNoiseTrajectory:
    """Per-pilot phase-noise samples for the transmit and receive oscillators."""

    theta_tx: np.ndarray  # (M,) rad
    theta_rx: np.ndarray  # (M,) rad
    var_tx: float
    var_rx: float


@dataclass(frozen=True)
class NoiseSpec:
    """AWGN level; the linear noise power is 10**(-snr_db/10)."""

    snr_db: float
    noise_var: float = None  # type: ignore[assignment]  # derived, see __post_init__

    def __post_init__(self) -> None:
        object.__setattr__(self, "noise_var", 10.0 ** (-self.snr_db / 10.0))


def draw_pn_trajectory(
    var_tx: float, var_rx: float, num_pilots: int, rng: np.random.Generator
) -> PhaseNoiseTrajectory:
    """Draw Wiener phase-noise walks of length ``num_pilots`` for both sides.

    Unit-variance increments are drawn first and scaled by the requested
    standard deviation, so trajectories at different variances but the same
    seed are scaled copies of each other.
    """
    if num_pilots < 1:
        raise ValueError("num_pilots must be >= 1")
    if var_tx < 0 or var_rx < 0:
        raise ValueError("phase-noise variances must be non-negative")
    inc_tx = rng.standard_normal(num_pilots) * np.sqrt(var_tx)
    inc_rx = rng.standard_normal(num_pilots) * np.sqrt(var_rx)
    return PhaseNoiseTrajectory(
        theta_tx=np.cumsum(inc_tx),
        theta_rx=np.cumsum(inc_rx),
        var_tx=float(var_tx),
        var_rx=float(var_rx),
    )


def apply_impairments(
    clean: np.ndarray,
    pn: PhaseNoiseTrajectory,
    noise: NoiseSpec,
    rng: np.random.Generator,
) -> np.ndarray:
    """Rotate each pilot symbol by its phase-noise phasor and add AWGN.

    y[m] = exp(j*(theta_tx[m] - theta_rx[m])) * clean[m] + w[m], with w
    circular complex Gaussian of variance ``noise.noise_var``.
    """
    clean = np.asarray(clean, dtype=np.complex128)
    if clean.shape != pn.theta_tx.shape or clean.shape != pn.theta_rx.shape:
        raise ValueError(
            f"length mismatch: clean {clean.shape}, phase noise {pn.theta_tx.shape}"
        )
    phasor = np.exp(1j * (pn.theta_tx - pn.theta_rx))
    w = crandn(rng, *clean.shape) * np.sqrt(noise.noise_var)
    return phasor * clean + w
