"""Pilot matrix design.

Two kinds are supported:

* ``unitary-dft``: rows of the square DFT matrix scaled so Phi @ Phi^H = I.
  Unit total transmit power per pilot symbol; with M = N this makes the LS
  estimator an exact inverse and pins its NMSE at -SNR dB.
* ``random-qpsk``: i.i.d. entries from {+-1 +-1j}/sqrt(2) (unit modulus per
  element), for robustness experiments with non-orthogonal pilots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import PILOT_KINDS
from .errors import ConfigurationError


@dataclass(frozen=True)
class PilotMatrix:
    """Known training matrix of shape (num_antennas, num_pilots)."""

    phi: np.ndarray
    kind: str

    @property
    def num_antennas(self) -> int:
        return self.phi.shape[0]

    @property
    def num_pilots(self) -> int:
        return self.phi.shape[1]


def make_pilots(
    num_antennas: int,
    num_pilots: int,
    kind: str = "unitary-dft",
    rng: np.random.Generator | None = None,
) -> PilotMatrix:
    if num_antennas < 1 or num_pilots < 1:
        raise ConfigurationError("pilot matrix dimensions must be >= 1")
    if kind == "unitary-dft":
        if num_pilots != num_antennas:
            raise ConfigurationError(
                f"unitary-dft pilots require num_pilots == num_antennas "
                f"(got {num_pilots} != {num_antennas})"
            )
        k = np.arange(num_antennas)
        phi = np.exp(-2j * np.pi * np.outer(k, k) / num_antennas) / np.sqrt(num_antennas)
    elif kind == "random-qpsk":
        if rng is None:
            raise ConfigurationError("random-qpsk pilots need a random generator")
        re = 2 * rng.integers(0, 2, size=(num_antennas, num_pilots)) - 1
        im = 2 * rng.integers(0, 2, size=(num_antennas, num_pilots)) - 1
        phi = (re + 1j * im) / np.sqrt(2.0)
    else:
        raise ConfigurationError(f"unknown pilot kind {kind!r}; choose from {PILOT_KINDS}")
    return PilotMatrix(phi=phi.astype(np.complex128), kind=kind)
