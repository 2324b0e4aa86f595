"""Scenario and training configuration.

``ScenarioConfig`` defaults follow the standard sub-THz downlink setup this
package simulates: a 64-element half-wavelength ULA at 100 GHz, 4 propagation
paths with an even far/near split, scatterers between 10 m and 80 m, and an
SNR grid of 0..20 dB in 5 dB steps.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, fields, replace

from .errors import ConfigurationError

SPEED_OF_LIGHT = 3.0e8

PILOT_KINDS = ("unitary-dft", "random-qpsk")


@dataclass(frozen=True)
class ScenarioConfig:
    """Physical and experimental parameters of one simulation scenario."""

    num_antennas: int = 64
    num_pilots: int = 64
    total_paths: int = 4
    gamma: float = 0.5
    carrier_freq: float = 1.0e11
    light_speed: float = SPEED_OF_LIGHT
    antenna_spacing: float = 0.0015
    distance_min: float = 10.0
    distance_max: float = 80.0
    pn_var_tx: float = 0.1
    pn_var_rx: float = 0.2
    snr_grid: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0)
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "snr_grid", tuple(float(s) for s in self.snr_grid))
        if self.num_antennas < 2:
            raise ConfigurationError("num_antennas must be >= 2")
        if self.num_pilots < 1:
            raise ConfigurationError("num_pilots must be >= 1")
        if self.total_paths < 1:
            raise ConfigurationError("total_paths must be >= 1")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigurationError("gamma must lie in [0, 1]")
        if self.carrier_freq <= 0 or self.light_speed <= 0:
            raise ConfigurationError("carrier_freq and light_speed must be positive")
        if self.antenna_spacing <= 0:
            raise ConfigurationError("antenna_spacing must be positive")
        if self.distance_min <= self.aperture:
            raise ConfigurationError(
                f"distance_min ({self.distance_min} m) must exceed the array "
                f"aperture ({self.aperture} m)"
            )
        if self.distance_max <= self.distance_min:
            raise ConfigurationError("distance_max must exceed distance_min")
        if self.pn_var_tx < 0 or self.pn_var_rx < 0:
            raise ConfigurationError("phase-noise variances must be non-negative")
        if not self.snr_grid:
            raise ConfigurationError("snr_grid must not be empty")
        if not isinstance(self.seed, int):
            raise ConfigurationError("seed must be an integer")

    @property
    def wavelength(self) -> float:
        return self.light_speed / self.carrier_freq

    @property
    def aperture(self) -> float:
        """End-to-end element span of the ULA."""
        return (self.num_antennas - 1) * self.antenna_spacing

    def path_split(self) -> tuple[int, int]:
        """(far, near) path counts; gamma*L rounded half up when fractional."""
        num_far = math.floor(self.gamma * self.total_paths + 0.5)
        num_near = self.total_paths - num_far
        if num_far < 0 or num_near < 0:
            raise ConfigurationError("path split produced a negative count")
        return num_far, num_near

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown scenario fields: {sorted(unknown)}")
        return cls(**data)

    def with_pn(self, variance: float) -> "ScenarioConfig":
        """Copy with both phase-noise variances set to ``variance``."""
        return replace(self, pn_var_tx=variance, pn_var_rx=variance)


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer and loop settings for the learned estimators (MSE loss)."""

    learning_rate: float = 0.001
    batch_size: int = 16
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    max_epochs: int = 100
    patience: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.learning_rate < 0:
            raise ConfigurationError("learning_rate must be non-negative")
        if self.batch_size < 1:
            raise ConfigurationError("batch_size must be >= 1")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ConfigurationError("beta1/beta2 must lie in [0, 1)")
        if self.epsilon <= 0:
            raise ConfigurationError("epsilon must be positive")
        if self.max_epochs < 1:
            raise ConfigurationError("max_epochs must be >= 1")
        if self.patience < 0:
            raise ConfigurationError("patience must be >= 0")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown training fields: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class Profile:
    """Named experiment scale: antenna sizes, dataset size, model width."""

    name: str
    antenna_grid: tuple[int, ...]
    num_samples: int
    hidden_units: int | None  # None: match the antenna count
    pn_var: float

    def scenario(self, num_antennas: int | None = None, seed: int = 0) -> ScenarioConfig:
        n = int(num_antennas if num_antennas is not None else self.antenna_grid[0])
        return ScenarioConfig(
            num_antennas=n,
            num_pilots=n,
            pn_var_tx=self.pn_var,
            pn_var_rx=self.pn_var,
            seed=seed,
        )


# Desk scale keeps every experiment a laptop-friendly smoke run; paper scale
# is the full-size setup (6000 samples, model width = N, up to 128 antennas).
DESK_PROFILE = Profile("desk", antenna_grid=(16, 64), num_samples=2000,
                       hidden_units=16, pn_var=2e-4)
PAPER_PROFILE = Profile("paper", antenna_grid=(64, 128), num_samples=6000,
                        hidden_units=None, pn_var=2e-6)

_PROFILES = {p.name: p for p in (DESK_PROFILE, PAPER_PROFILE)}


def get_profile(name: str) -> Profile:
    try:
        return _PROFILES[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown profile {name!r}; choose from {sorted(_PROFILES)}"
        ) from None


def canonical_json(data: dict) -> str:
    """Stable key-sorted JSON used in manifests and hashes."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(data: dict) -> str:
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()
