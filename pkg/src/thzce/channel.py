"""Hybrid far/near-field channel model for a half-wavelength ULA.

A channel realization is a normalized superposition of plane-wave (far-field)
and spherical-wavefront (near-field) path components.  The two regimes are
separated by the Rayleigh distance ``2*D**2/wavelength`` of the array: near
paths are drawn strictly inside it, far paths carry no distance at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig
from .errors import ConfigurationError
from .rng import crandn

# a scatterer closer than this to any element is treated as a degenerate geometry
_MIN_ELEMENT_DISTANCE = 1e-9

# keeps drawn near-field distances strictly below the Rayleigh distance
_NEAR_FIELD_MARGIN = 1e-6


@dataclass(frozen=True)
class FarPath:
    """One plane-wave path: complex gain and angle of arrival (rad)."""

    gain: complex
    angle: float


@dataclass(frozen=True)
class NearPath:
    """One spherical-wavefront path: gain, angle (rad) and scatterer distance (m)."""

    gain: complex
    angle: float
    distance: float


@dataclass(frozen=True)
class ChannelRealization:
    """A drawn hybrid channel plus the path parameters that produced it."""

    far_paths: tuple[FarPath, ...]
    near_paths: tuple[NearPath, ...]
    channel: np.ndarray  # (N,) complex128
    rayleigh_distance: float


def element_offsets(num_antennas: int) -> np.ndarray:
    """Signed element positions in units of the spacing, centered on the array."""
    return np.arange(num_antennas, dtype=np.float64) - (num_antennas - 1) / 2.0


def far_steering(angle: float, num_antennas: int) -> np.ndarray:
    """Unit-norm plane-wave steering vector of an N-element ULA."""
    if num_antennas < 1:
        raise ConfigurationError("num_antennas must be >= 1")
    k = np.arange(num_antennas, dtype=np.float64)
    return np.exp(1j * np.pi * k * np.sin(angle)) / np.sqrt(num_antennas)


def near_element_distances(
    distance: float, angle: float, num_antennas: int, spacing: float
) -> np.ndarray:
    """Distance from each array element to a scatterer at (distance, angle)."""
    if distance <= 0:
        raise ConfigurationError("scatterer distance must be positive")
    psi = element_offsets(num_antennas)
    d2 = distance**2 + (psi * spacing) ** 2 - 2.0 * distance * psi * spacing * np.sin(angle)
    xi = np.sqrt(np.maximum(d2, 0.0))
    if np.any(xi <= _MIN_ELEMENT_DISTANCE):
        raise ConfigurationError(
            f"scatterer at {distance} m, {angle} rad collapses onto the array "
            f"(element distance <= {_MIN_ELEMENT_DISTANCE} m)"
        )
    return xi


def near_steering(
    distance: float,
    angle: float,
    num_antennas: int,
    spacing: float,
    carrier_freq: float,
    light_speed: float,
) -> np.ndarray:
    """Unit-norm spherical-wavefront steering vector.

    Each element carries the amplitude ratio distance/xi_k and the propagation
    delay phase of the extra path length xi_k - distance.  The delay (-j) sign
    is what makes this reduce elementwise to ``far_steering`` (up to a global
    phase) as distance grows far beyond the array aperture.
    """
    xi = near_element_distances(distance, angle, num_antennas, spacing)
    phase = -2.0 * np.pi * carrier_freq / light_speed * (xi - distance)
    raw = (distance / xi) * np.exp(1j * phase)
    return raw / np.linalg.norm(raw)


def rayleigh_distance(
    num_antennas: int, spacing: float, carrier_freq: float, light_speed: float
) -> float:
    """Near/far boundary 2*D**2/wavelength with aperture D = (N-1)*spacing."""
    if num_antennas < 2:
        raise ConfigurationError("num_antennas must be >= 2")
    aperture = (num_antennas - 1) * spacing
    wavelength = light_speed / carrier_freq
    return 2.0 * aperture**2 / wavelength


def near_distance_bounds(cfg: ScenarioConfig) -> tuple[float, float, bool]:
    """Sampling window for near-path distances, kept inside the Rayleigh region.

    Returns (low, high, overridden).  When the configured minimum distance
    already lies beyond the Rayleigh distance (small arrays), the window falls
    back to [0.1*omega, omega) so the near-field regime stays non-empty; the
    dataset manifest records that override.
    """
    omega = rayleigh_distance(
        cfg.num_antennas, cfg.antenna_spacing, cfg.carrier_freq, cfg.light_speed
    )
    high = min(cfg.distance_max, omega * (1.0 - _NEAR_FIELD_MARGIN))
    low = cfg.distance_min
    overridden = False
    if low >= high:
        low = 0.1 * omega
        high = omega * (1.0 - _NEAR_FIELD_MARGIN)
        overridden = True
    if low >= high or low <= cfg.aperture / 2.0:
        raise ConfigurationError(
            f"near-field distance window [{low}, {high}) m is degenerate for "
            f"aperture {cfg.aperture} m"
        )
    return low, high, overridden


def rebuild_channel(
    far_paths: tuple[FarPath, ...] | list[FarPath],
    near_paths: tuple[NearPath, ...] | list[NearPath],
    cfg: ScenarioConfig,
) -> np.ndarray:
    """Re-evaluate the normalized channel vector from stored path parameters."""
    n = cfg.num_antennas
    total = len(far_paths) + len(near_paths)
    if total == 0:
        raise ConfigurationError("channel needs at least one path")
    acc = np.zeros(n, dtype=np.complex128)
    for p in far_paths:
        acc += p.gain * far_steering(p.angle, n)
    for p in near_paths:
        acc += p.gain * near_steering(
            p.distance, p.angle, n, cfg.antenna_spacing, cfg.carrier_freq, cfg.light_speed
        )
    return np.sqrt(n / total) * acc


def draw_channel(cfg: ScenarioConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw one hybrid channel realization.

    Path gains are unit-variance circular complex Gaussians, angles are
    uniform on [-pi/2, pi/2], near-path distances are uniform over the window
    from :func:`near_distance_bounds`.  gamma=1 yields a pure far-field
    channel, gamma=0 a pure near-field one.
    """
    num_far, num_near = cfg.path_split()

    far_gains = crandn(rng, num_far)
    far_angles = rng.uniform(-np.pi / 2, np.pi / 2, size=num_far)
    far_paths = tuple(
        FarPath(gain=complex(g), angle=float(a)) for g, a in zip(far_gains, far_angles)
    )

    near_paths: tuple[NearPath, ...] = ()
    if num_near > 0:
        low, high, _ = near_distance_bounds(cfg)
        near_gains = crandn(rng, num_near)
        near_angles = rng.uniform(-np.pi / 2, np.pi / 2, size=num_near)
        near_dists = rng.uniform(low, high, size=num_near)
        near_paths = tuple(
            NearPath(gain=complex(g), angle=float(a), distance=float(r))
            for g, a, r in zip(near_gains, near_angles, near_dists)
        )

    omega = rayleigh_distance(
        cfg.num_antennas, cfg.antenna_spacing, cfg.carrier_freq, cfg.light_speed
    )
    channel = rebuild_channel(far_paths, near_paths, cfg)
    return ChannelRealization(
        far_paths=far_paths,
        near_paths=near_paths,
        channel=channel,
        rayleigh_distance=omega,
    )
