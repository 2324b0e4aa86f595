"""Sweep orchestration and NMSE report emission.

A sweep cell is one (estimator, scenario, SNR, phase-noise) combination:
generate the dataset, fit the estimator on the training split, score the
test split with :func:`thzce.metrics.nmse_db`.  Failures are recorded per
cell and the sweep continues.  Reports are written as CSV with a fixed
column set and a stable row order, so reruns with the same configuration
and seed are byte-identical.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass

from . import __version__
from .config import ScenarioConfig, TrainConfig, config_hash
from .dataset import Dataset, generate_dataset
from .errors import ConfigurationError
from .estimators import LeastSquaresEstimator, LmmseEstimator, NeuralChannelEstimator
from .metrics import nmse_db

logger = logging.getLogger(__name__)

ESTIMATOR_NAMES = ("ls", "mmse", "dnn", "lstm", "bilstm-gru")

DEFAULT_PN_GRID = (2e-6, 2e-5, 2e-4)

CSV_COLUMNS = (
    "estimator",
    "n_antennas",
    "m_pilots",
    "snr_db",
    "pn_var_tx",
    "pn_var_rx",
    "nmse_db",
    "trials",
)


@dataclass(frozen=True)
class EvalRow:
    estimator: str
    n_antennas: int
    m_pilots: int
    snr_db: float
    pn_var_tx: float
    pn_var_rx: float
    nmse_db: float
    trials: int


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[EvalRow, ...]
    manifest: dict
    errors: tuple[str, ...] = ()

    def sorted_rows(self) -> list[EvalRow]:
        return sorted(
            self.rows,
            key=lambda r: (
                r.estimator,
                r.n_antennas,
                r.m_pilots,
                r.snr_db,
                r.pn_var_tx,
                r.pn_var_rx,
            ),
        )


def make_estimator(
    name: str,
    dataset: Dataset,
    hidden_units: int | None = None,
    train_cfg: TrainConfig | None = None,
):
    """Build an unfitted estimator for one sweep cell."""
    if name == "ls":
        return LeastSquaresEstimator(pilots=dataset.pilots)
    if name == "mmse":
        return LmmseEstimator()
    if name in ("dnn", "lstm", "bilstm-gru"):
        cfg = train_cfg if train_cfg is not None else TrainConfig()
        return NeuralChannelEstimator(
            arch=name,
            pilots=dataset.pilots,
            hidden_units=hidden_units,
            learning_rate=cfg.learning_rate,
            batch_size=cfg.batch_size,
            max_epochs=cfg.max_epochs,
            patience=cfg.patience,
            seed=cfg.seed,
        )
    raise ConfigurationError(
        f"unknown estimator {name!r}; choose from {ESTIMATOR_NAMES}"
    )


def evaluate_on_dataset(estimator, dataset: Dataset) -> float:
    """Fit on the training split, return the NMSE (dB) on the test split."""
    y_train, h_train = dataset.train_arrays()
    y_test, h_test = dataset.test_arrays()
    if len(y_test) == 0:
        raise ConfigurationError("dataset has an empty test split")
    estimator.fit(y_train, h_train)
    return nmse_db(h_test, estimator.predict(y_test))


def _sweep(
    cfg: ScenarioConfig,
    estimator_names: list[str] | tuple[str, ...],
    cells: list[tuple[float | None, float]],  # (pn_var or None to keep cfg's, snr_db)
    num_samples: int,
    pilot_kind: str,
    hidden_units: int | None,
    train_cfg: TrainConfig | None,
    sweep_kind: str,
) -> EvalReport:
    for name in estimator_names:
        if name not in ESTIMATOR_NAMES:
            raise ConfigurationError(
                f"unknown estimator {name!r}; choose from {ESTIMATOR_NAMES}"
            )
    rows: list[EvalRow] = []
    errors: list[str] = []
    for pn_var, snr in cells:
        cell_cfg = cfg if pn_var is None else cfg.with_pn(pn_var)
        dataset = generate_dataset(cell_cfg, num_samples, snr, pilot_kind)
        trials = dataset.num_samples - dataset.split_index
        for name in estimator_names:
            try:
                estimator = make_estimator(name, dataset, hidden_units, train_cfg)
                value = evaluate_on_dataset(estimator, dataset)
            except Exception as exc:  # noqa: BLE001 - per-cell isolation
                message = (
                    f"{name} @ snr={snr} dB, pn=({cell_cfg.pn_var_tx}, "
                    f"{cell_cfg.pn_var_rx}): {exc}"
                )
                logger.warning("sweep cell failed: %s", message)
                errors.append(message)
                value = float("nan")
            rows.append(
                EvalRow(
                    estimator=name,
                    n_antennas=cell_cfg.num_antennas,
                    m_pilots=cell_cfg.num_pilots,
                    snr_db=float(snr),
                    pn_var_tx=cell_cfg.pn_var_tx,
                    pn_var_rx=cell_cfg.pn_var_rx,
                    nmse_db=value,
                    trials=trials,
                )
            )
    manifest = {
        "sweep": sweep_kind,
        "config_hash": config_hash(
            {
                "scenario": _jsonable_scenario(cfg),
                "estimators": list(estimator_names),
                "cells": [[pn, snr] for pn, snr in cells],
                "num_samples": num_samples,
                "pilot_kind": pilot_kind,
                "hidden_units": hidden_units,
                "train": train_cfg.to_dict() if train_cfg else None,
            }
        ),
        "seed": cfg.seed,
        "code_version": __version__,
    }
    return EvalReport(rows=tuple(rows), manifest=manifest, errors=tuple(errors))


def _jsonable_scenario(cfg: ScenarioConfig) -> dict:
    data = cfg.to_dict()
    data["snr_grid"] = list(data["snr_grid"])
    return data


def run_snr_sweep(
    cfg: ScenarioConfig,
    estimator_names,
    snr_grid=None,
    *,
    num_samples: int = 2000,
    pilot_kind: str = "unitary-dft",
    hidden_units: int | None = None,
    train_cfg: TrainConfig | None = None,
) -> EvalReport:
    """NMSE of each estimator at every SNR point of the grid."""
    grid = tuple(snr_grid) if snr_grid is not None else cfg.snr_grid
    cells = [(None, float(snr)) for snr in grid]
    return _sweep(
        cfg, estimator_names, cells, num_samples, pilot_kind, hidden_units,
        train_cfg, "snr",
    )


def run_pn_sweep(
    cfg: ScenarioConfig,
    estimator_names,
    pn_grid=None,
    snr_grid=None,
    *,
    num_samples: int = 2000,
    pilot_kind: str = "unitary-dft",
    hidden_units: int | None = None,
    train_cfg: TrainConfig | None = None,
) -> EvalReport:
    """NMSE over the phase-noise grid (both oscillators) at each SNR point."""
    pn_values = tuple(pn_grid) if pn_grid is not None else DEFAULT_PN_GRID
    snrs = tuple(snr_grid) if snr_grid is not None else cfg.snr_grid
    cells = [(float(pn), float(snr)) for pn in pn_values for snr in snrs]
    return _sweep(
        cfg, estimator_names, cells, num_samples, pilot_kind, hidden_units,
        train_cfg, "pn",
    )


def merge_reports(reports: list[EvalReport]) -> EvalReport:
    if not reports:
        raise ConfigurationError("no reports to merge")
    rows = tuple(r for rep in reports for r in rep.rows)
    errors = tuple(e for rep in reports for e in rep.errors)
    manifest = {
        "sweep": "merged",
        "config_hash": config_hash({"parts": [rep.manifest for rep in reports]}),
        "seed": reports[0].manifest.get("seed"),
        "code_version": __version__,
    }
    return EvalReport(rows=rows, manifest=manifest, errors=errors)


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(report: EvalReport, path, fmt: str = "csv") -> None:
    """Write the report; CSV columns and row order are fixed."""
    if not report.rows:
        raise ConfigurationError("refusing to write an empty report")
    rows = report.sorted_rows()
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in rows:
                writer.writerow(
                    [_format_value(getattr(row, col)) for col in CSV_COLUMNS]
                )
    elif fmt == "pretty-table":
        with open(path, "w") as fh:
            fh.write(format_table(report))
    else:
        raise ConfigurationError(f"unknown report format {fmt!r}")


def format_table(report: EvalReport) -> str:
    rows = report.sorted_rows()
    cells = [list(CSV_COLUMNS)]
    for row in rows:
        cells.append([_format_value(getattr(row, col)) for col in CSV_COLUMNS])
    widths = [max(len(line[i]) for line in cells) for i in range(len(CSV_COLUMNS))]
    lines = []
    for i, line in enumerate(cells):
        lines.append("  ".join(val.rjust(w) for val, w in zip(line, widths)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def read_report(path) -> EvalReport:
    """Parse a CSV report back into an :class:`EvalReport`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(CSV_COLUMNS):
            raise ConfigurationError(
                f"unexpected report header {header}; expected {list(CSV_COLUMNS)}"
            )
        rows = []
        for record in reader:
            values = dict(zip(CSV_COLUMNS, record))
            rows.append(
                EvalRow(
                    estimator=values["estimator"],
                    n_antennas=int(values["n_antennas"]),
                    m_pilots=int(values["m_pilots"]),
                    snr_db=float(values["snr_db"]),
                    pn_var_tx=float(values["pn_var_tx"]),
                    pn_var_rx=float(values["pn_var_rx"]),
                    nmse_db=float(values["nmse_db"]),
                    trials=int(values["trials"]),
                )
            )
    return EvalReport(rows=tuple(rows), manifest={"source": str(path)})
