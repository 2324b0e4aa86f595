"""Command-line interface.

Subcommands: generate, train, evaluate, sweep-snr, sweep-pn, report.  All of
them accept ``--config`` (a ``key = value`` file mirroring ScenarioConfig and
TrainConfig fields plus num_samples / pilot_kind / hidden_units), ``--seed``,
``--out``, ``--profile desk|paper`` and ``--estimators``.  On failure a single
machine-readable JSON line is printed to stderr and the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass

from .config import (
    Profile,
    ScenarioConfig,
    TrainConfig,
    canonical_json,
    get_profile,
)
from .dataset import export_csv, generate_dataset, load_dataset, save_dataset
from .errors import ConfigurationError, ThzceError
from .estimators import NeuralChannelEstimator
from .evaluation import (
    DEFAULT_PN_GRID,
    ESTIMATOR_NAMES,
    EvalReport,
    EvalRow,
    emit_report,
    evaluate_on_dataset,
    format_table,
    make_estimator,
    merge_reports,
    read_report,
    run_pn_sweep,
    run_snr_sweep,
)
from .metrics import nmse_db

_SCENARIO_KEYS = {f.name for f in dataclasses.fields(ScenarioConfig)}
_TRAIN_KEYS = {f.name for f in dataclasses.fields(TrainConfig)}
_EXTRA_KEYS = {"num_samples", "pilot_kind", "hidden_units"}


def parse_config_file(path) -> dict:
    """Parse a ``key = value`` configuration file (``#`` starts a comment)."""
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
            key, _, text = line.partition("=")
            values[key.strip()] = _parse_value(text.strip())
    unknown = set(values) - _SCENARIO_KEYS - _TRAIN_KEYS - _EXTRA_KEYS
    if unknown:
        raise ConfigurationError(f"{path}: unknown configuration keys {sorted(unknown)}")
    return values


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if "," in text:
            return [_parse_value(part.strip()) for part in text.split(",")]
        return text


@dataclass
class Settings:
    """Resolved configuration: profile < config file < explicit flags."""

    profile: Profile | None
    file_values: dict
    seed: int | None

    def scenario(self, num_antennas: int | None = None) -> ScenarioConfig:
        kwargs: dict = {}
        if self.profile is not None:
            base = self.profile.scenario(num_antennas)
            kwargs.update(
                num_antennas=base.num_antennas,
                num_pilots=base.num_pilots,
                pn_var_tx=base.pn_var_tx,
                pn_var_rx=base.pn_var_rx,
            )
        file_scenario = {k: v for k, v in self.file_values.items() if k in _SCENARIO_KEYS}
        if "snr_grid" in file_scenario:
            grid = file_scenario["snr_grid"]
            file_scenario["snr_grid"] = tuple(grid) if isinstance(grid, list) else (grid,)
        if "num_antennas" in file_scenario and "num_pilots" not in file_scenario:
            file_scenario["num_pilots"] = file_scenario["num_antennas"]
        kwargs.update(file_scenario)
        if num_antennas is not None:
            kwargs["num_antennas"] = num_antennas
            if "num_pilots" not in self.file_values:
                kwargs["num_pilots"] = num_antennas
        if self.seed is not None:
            kwargs["seed"] = self.seed
        return ScenarioConfig(**kwargs)

    def train_config(self) -> TrainConfig:
        kwargs = {k: v for k, v in self.file_values.items() if k in _TRAIN_KEYS}
        if self.seed is not None:
            kwargs["seed"] = self.seed
        return TrainConfig(**kwargs)

    def num_samples(self, flag: int | None) -> int:
        if flag is not None:
            return flag
        if "num_samples" in self.file_values:
            return int(self.file_values["num_samples"])
        if self.profile is not None:
            return self.profile.num_samples
        return 2000

    def pilot_kind(self, flag: str | None) -> str:
        if flag is not None:
            return flag
        return self.file_values.get("pilot_kind", "unitary-dft")

    def hidden_units(self) -> int | None:
        if "hidden_units" in self.file_values:
            return int(self.file_values["hidden_units"])
        if self.profile is not None:
            return self.profile.hidden_units
        return None

    def antenna_grid(self) -> tuple[int, ...]:
        if "num_antennas" in self.file_values:
            return (int(self.file_values["num_antennas"]),)
        if self.profile is not None:
            return self.profile.antenna_grid
        return (ScenarioConfig().num_antennas,)


def _settings(args) -> Settings:
    profile = get_profile(args.profile) if args.profile else None
    file_values = parse_config_file(args.config) if args.config else {}
    return Settings(profile=profile, file_values=file_values, seed=args.seed)


def _estimator_list(args, default: str) -> list[str]:
    text = args.estimators if args.estimators else default
    names = [part.strip() for part in text.split(",") if part.strip()]
    for name in names:
        if name not in ESTIMATOR_NAMES:
            raise ConfigurationError(
                f"unknown estimator {name!r}; choose from {ESTIMATOR_NAMES}"
            )
    return names


def _require_out(args) -> str:
    if not args.out:
        raise ConfigurationError("this command needs --out")
    return args.out


def _cmd_generate(args) -> int:
    settings = _settings(args)
    out = _require_out(args)
    cfg = settings.scenario()
    num_samples = settings.num_samples(args.num_samples)
    ds = generate_dataset(cfg, num_samples, args.snr_db, settings.pilot_kind(args.pilot_kind))
    save_dataset(ds, out)
    if args.csv_out:
        export_csv(ds, args.csv_out)
    print(
        f"wrote {out}: {ds.num_samples} samples, N={ds.num_antennas}, "
        f"M={ds.num_pilots}, SNR={ds.snr_db} dB, split={ds.split_index}"
    )
    return 0


def _cmd_train(args) -> int:
    settings = _settings(args)
    out = _require_out(args)
    names = _estimator_list(args, default="bilstm-gru")
    if len(names) != 1 or names[0] in ("ls", "mmse"):
        raise ConfigurationError("train expects exactly one neural estimator (dnn, lstm or bilstm-gru)")
    ds = load_dataset(args.data)
    train_cfg = settings.train_config()
    estimator = make_estimator(names[0], ds, settings.hidden_units(), train_cfg)
    y_train, h_train = ds.train_arrays()
    estimator.fit(y_train, h_train)
    estimator.save(out)
    y_test, h_test = ds.test_arrays()
    test_nmse = nmse_db(h_test, estimator.predict(y_test)) if len(y_test) else float("nan")
    hist = estimator.history_
    print(
        f"wrote {out}: arch={names[0]}, best epoch {hist['best_epoch']}, "
        f"val MSE {hist['best_val_loss']:.6g}, test NMSE {test_nmse:.3f} dB"
    )
    return 0


def _cmd_evaluate(args) -> int:
    settings = _settings(args)
    ds = load_dataset(args.data)
    rows: list[EvalRow] = []
    trials = ds.num_samples - ds.split_index
    pn_tx, pn_rx = ds.pn_vars

    def add_row(name: str, value: float) -> None:
        rows.append(
            EvalRow(
                estimator=name,
                n_antennas=ds.num_antennas,
                m_pilots=ds.num_pilots,
                snr_db=ds.snr_db,
                pn_var_tx=pn_tx,
                pn_var_rx=pn_rx,
                nmse_db=value,
                trials=trials,
            )
        )

    if args.model:
        estimator = NeuralChannelEstimator.from_checkpoint(args.model, pilots=ds.pilots)
        y_test, h_test = ds.test_arrays()
        add_row(estimator.spec_.arch, nmse_db(h_test, estimator.predict(y_test)))
    if args.estimators:
        for name in _estimator_list(args, default=""):
            if name not in ("ls", "mmse"):
                raise ConfigurationError(
                    "evaluate runs classical estimators by name; pass neural models "
                    "via --model"
                )
            estimator = make_estimator(name, ds)
            add_row(name, evaluate_on_dataset(estimator, ds))
    if not rows:
        raise ConfigurationError("nothing to evaluate: pass --model and/or --estimators")
    report = EvalReport(rows=tuple(rows), manifest={"dataset": str(args.data)})
    if args.out:
        emit_report(report, args.out, fmt="csv")
        print(f"wrote {args.out}")
    else:
        print(format_table(report), end="")
    return 0


def _run_sweep(args, kind: str) -> int:
    settings = _settings(args)
    out = _require_out(args)
    names = _estimator_list(args, default="ls,mmse")
    train_cfg = settings.train_config()
    hidden = settings.hidden_units()
    num_samples = settings.num_samples(args.num_samples)
    snr_grid = tuple(args.snr_db) if args.snr_db else None
    reports = []
    for n in settings.antenna_grid():
        cfg = settings.scenario(num_antennas=n)
        if kind == "snr":
            reports.append(
                run_snr_sweep(
                    cfg, names, snr_grid, num_samples=num_samples,
                    pilot_kind=settings.pilot_kind(args.pilot_kind),
                    hidden_units=hidden, train_cfg=train_cfg,
                )
            )
        else:
            pn_grid = tuple(args.pn_grid) if args.pn_grid else DEFAULT_PN_GRID
            reports.append(
                run_pn_sweep(
                    cfg, names, pn_grid, snr_grid, num_samples=num_samples,
                    pilot_kind=settings.pilot_kind(args.pilot_kind),
                    hidden_units=hidden, train_cfg=train_cfg,
                )
            )
    report = reports[0] if len(reports) == 1 else merge_reports(reports)
    emit_report(report, out, fmt="csv")
    with open(f"{out}.manifest.json", "w") as fh:
        fh.write(canonical_json(report.manifest) + "\n")
    if report.errors:
        for message in report.errors:
            print(f"cell failed: {message}", file=sys.stderr)
    print(f"wrote {out} ({len(report.rows)} rows)")
    return 0


def _cmd_report(args) -> int:
    report = read_report(args.input)
    if args.format == "csv":
        out = _require_out(args)
        emit_report(report, out, fmt="csv")
        print(f"wrote {out}")
    else:
        text = format_table(report)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
            print(f"wrote {args.out}")
        else:
            print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--seed", type=int, help="override every seed")
    common.add_argument("--out", help="output path")
    common.add_argument("--profile", choices=["desk", "paper"], help="experiment scale preset")
    common.add_argument(
        "--estimators",
        help=f"comma-separated estimator names ({','.join(ESTIMATOR_NAMES)})",
    )

    parser = argparse.ArgumentParser(
        prog="thzce",
        description="Hybrid-field THz massive-MIMO channel estimation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="generate a pilot-observation dataset")
    p.add_argument("--snr-db", type=float, default=10.0)
    p.add_argument("--num-samples", type=int)
    p.add_argument("--pilot-kind", choices=["unitary-dft", "random-qpsk"])
    p.add_argument("--csv-out", help="also export the dataset as CSV")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("train", parents=[common], help="train a neural estimator on a dataset")
    p.add_argument("--data", required=True, help="dataset file from 'generate'")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", parents=[common], help="NMSE of estimators on one dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--model", help="checkpoint file from 'train'")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep-snr", parents=[common], help="NMSE vs SNR sweep")
    p.add_argument("--num-samples", type=int)
    p.add_argument("--pilot-kind", choices=["unitary-dft", "random-qpsk"])
    p.add_argument("--snr-db", type=float, nargs="+", help="override the SNR grid")
    p.set_defaults(func=lambda a: _run_sweep(a, "snr"))

    p = sub.add_parser("sweep-pn", parents=[common], help="NMSE vs phase-noise sweep")
    p.add_argument("--num-samples", type=int)
    p.add_argument("--pilot-kind", choices=["unitary-dft", "random-qpsk"])
    p.add_argument("--snr-db", type=float, nargs="+", help="override the SNR grid")
    p.add_argument("--pn-grid", type=float, nargs="+", help="phase-noise variances")
    p.set_defaults(func=lambda a: _run_sweep(a, "pn"))

    p = sub.add_parser("report", parents=[common], help="render a sweep CSV")
    p.add_argument("input", help="CSV report file")
    p.add_argument("--format", choices=["pretty-table", "csv"], default="pretty-table")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ThzceError, OSError, ValueError) as exc:
        print(
            json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
