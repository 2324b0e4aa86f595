"""Dataset assembly, train/test split, and serialization.

Binary format (little-endian), magic ``THZD``, version 1:

    "THZD" | u16 version | u32 len + manifest (canonical JSON, UTF-8)
    | u64 S | u64 N | u64 M
    | per sample: y as M complex128 (2M f64), h as N complex128 (2N f64)
    | u32 CRC-32 of everything above

The manifest alone regenerates the dataset bit-identically.  A CSV export is
provided for external tooling.
"""

from __future__ import annotations

import csv
import functools
import json
import math
from dataclasses import dataclass

import numpy as np

from ._binio import Writer, open_payload
from .config import ScenarioConfig, canonical_json
from .errors import ConfigurationError, FormatError
from .observation import ObservationSample, generate_sample, preprocess
from .pilots import PilotMatrix, make_pilots
from .rng import pilot_rng

MAGIC = b"THZD"
FORMAT_VERSION = 1

DEFAULT_TRAIN_FRACTION = 0.8


@dataclass(frozen=True)
class Dataset:
    """Ordered pilot observations with the manifest that regenerates them."""

    y: np.ndarray  # (S, M) complex128
    h: np.ndarray  # (S, N) complex128
    manifest: dict
    split_index: int

    def __post_init__(self) -> None:
        if self.y.ndim != 2 or self.h.ndim != 2 or self.y.shape[0] != self.h.shape[0]:
            raise ConfigurationError("y and h must be 2-D with matching sample counts")
        if not 0 <= self.split_index <= self.y.shape[0]:
            raise ConfigurationError("split_index out of range")

    @property
    def num_samples(self) -> int:
        return self.y.shape[0]

    @property
    def num_pilots(self) -> int:
        return self.y.shape[1]

    @property
    def num_antennas(self) -> int:
        return self.h.shape[1]

    @property
    def snr_db(self) -> float:
        return float(self.manifest["snr_db"])

    @property
    def pn_vars(self) -> tuple[float, float]:
        sc = self.manifest["scenario"]
        return float(sc["pn_var_tx"]), float(sc["pn_var_rx"])

    @property
    def scenario(self) -> ScenarioConfig:
        sc = dict(self.manifest["scenario"])
        sc["snr_grid"] = tuple(sc["snr_grid"])
        return ScenarioConfig.from_dict(sc)

    @functools.cached_property
    def features(self) -> np.ndarray:
        """(S, 2M) real features, recomputed losslessly from y."""
        return preprocess(self.y)

    @functools.cached_property
    def pilots(self) -> PilotMatrix:
        """Pilot matrix rebuilt deterministically from the manifest."""
        return make_pilots(
            self.num_antennas,
            self.num_pilots,
            self.manifest["pilot_kind"],
            pilot_rng(self.manifest["seed"]),
        )

    @property
    def samples(self) -> list[ObservationSample]:
        pn = self.pn_vars
        return [
            ObservationSample(
                received=self.y[i],
                features=self.features[i],
                truth=self.h[i],
                snr_db=self.snr_db,
                pn_vars=pn,
            )
            for i in range(self.num_samples)
        ]

    def train_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self.y[: self.split_index], self.h[: self.split_index]

    def test_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self.y[self.split_index:], self.h[self.split_index:]


def generate_dataset(
    cfg: ScenarioConfig,
    num_samples: int,
    snr_db: float,
    pilot_kind: str = "unitary-dft",
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
) -> Dataset:
    """Draw ``num_samples`` independent observations at one SNR setting."""
    if num_samples < 1:
        raise ConfigurationError("num_samples must be >= 1")
    if not 0.0 < train_fraction <= 1.0:
        raise ConfigurationError("train_fraction must lie in (0, 1]")

    pilots = make_pilots(cfg.num_antennas, cfg.num_pilots, pilot_kind, pilot_rng(cfg.seed))
    y = np.empty((num_samples, cfg.num_pilots), dtype=np.complex128)
    h = np.empty((num_samples, cfg.num_antennas), dtype=np.complex128)
    for i in range(num_samples):
        sample = generate_sample(cfg, snr_db, pilots, i)
        y[i] = sample.received
        h[i] = sample.truth

    split_index = math.floor(train_fraction * num_samples)
    num_far, num_near = cfg.path_split()
    override = False
    bounds: list[float] | None = None
    if num_near > 0:
        from .channel import near_distance_bounds

        low, high, override = near_distance_bounds(cfg)
        bounds = [low, high]  # JSON-canonical so the manifest round-trips exactly
    manifest = {
        "format_version": FORMAT_VERSION,
        "scenario": _jsonable(cfg.to_dict()),
        "seed": cfg.seed,
        "num_samples": num_samples,
        "snr_db": float(snr_db),
        "pilot_kind": pilot_kind,
        "train_fraction": float(train_fraction),
        "split_index": split_index,
        "num_far_paths": num_far,
        "num_near_paths": num_near,
        "near_distance_override": override,
        "near_distance_bounds": bounds,
    }
    return Dataset(y=y, h=h, manifest=manifest, split_index=split_index)


def _jsonable(data: dict) -> dict:
    out = {}
    for key, value in data.items():
        if isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def save_dataset(ds: Dataset, path) -> None:
    w = Writer()
    w.raw(MAGIC)
    w.u16(FORMAT_VERSION)
    w.text(canonical_json(ds.manifest))
    w.u64(ds.num_samples)
    w.u64(ds.num_antennas)
    w.u64(ds.num_pilots)
    for i in range(ds.num_samples):
        w.c128_array(ds.y[i])
        w.c128_array(ds.h[i])
    with open(path, "wb") as fh:
        fh.write(w.finish())


def load_dataset(path) -> Dataset:
    with open(path, "rb") as fh:
        data = fh.read()
    r = open_payload(data, MAGIC)
    version = r.u16()
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported dataset version {version} (expected {FORMAT_VERSION})")
    manifest = json.loads(r.text())
    num_samples = r.u64()
    num_antennas = r.u64()
    num_pilots = r.u64()
    y = np.empty((num_samples, num_pilots), dtype=np.complex128)
    h = np.empty((num_samples, num_antennas), dtype=np.complex128)
    for i in range(num_samples):
        y[i] = r.c128_array(num_pilots)
        h[i] = r.c128_array(num_antennas)
    if not r.at_end():
        raise FormatError("trailing bytes after the declared samples")
    return Dataset(y=y, h=h, manifest=manifest, split_index=int(manifest["split_index"]))


def export_csv(ds: Dataset, path) -> None:
    """One row per sample: re_y_1..re_y_M, im_y_1..im_y_M, re_h_1..re_h_N, im_h_1..im_h_N."""
    m, n = ds.num_pilots, ds.num_antennas
    header = (
        [f"re_y_{j + 1}" for j in range(m)]
        + [f"im_y_{j + 1}" for j in range(m)]
        + [f"re_h_{j + 1}" for j in range(n)]
        + [f"im_h_{j + 1}" for j in range(n)]
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(ds.num_samples):
            row = np.concatenate(
                [ds.y[i].real, ds.y[i].imag, ds.h[i].real, ds.h[i].imag]
            )
            writer.writerow([repr(float(v)) for v in row])
