"""Command line entry points: train, evaluate, trace, verify.

Outputs are written into the --out directory as CSV files with header
rows plus a key = value summary, and (unless disabled in the config)
PNG figures rendered alongside.  All commands are deterministic for a
fixed config and seed.  Exit codes: 0 success, 1 verification failure,
2 invalid input or config, 3 optimizer made no progress.

Set ADIALEARN_LOG=DEBUG (or INFO, WARNING, ...) to control logging.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, load_config, override
from .evolver import Schedule
from .invariants import run_checks
from .learning import (
    TrainConfig,
    batch_predict_ideal,
    predict_adiabatic,
    train,
)
from .tasks import (
    BOUNDARY_RADIUS_CASE2,
    CASE1_REFERENCE_WEIGHTS,
    CASE2_REFERENCE_WEIGHTS,
    case1_model,
    case2_model,
    gen_case1,
    gen_case2,
)

log = logging.getLogger("adialearn")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_summary(path: Path, pairs) -> None:
    with open(path, "w") as fh:
        for key, value in pairs:
            fh.write(f"{key} = {_fmt(value)}\n")


def _save_weights(path: Path, weights: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "value"])
        for i, v in enumerate(weights):
            writer.writerow([i, repr(float(v))])


def _load_weights(path) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["index", "value"]:
                raise ValueError(f"{path}: expected header 'index,value'")
            values = [float(row[1]) for row in reader if row]
    except OSError as exc:
        raise ValueError(f"cannot read weights {path}: {exc}") from exc
    if not values:
        raise ValueError(f"{path}: no weight rows")
    return np.asarray(values)


def _model_for(cfg: ExperimentConfig):
    if cfg.task == "case1":
        return case1_model(cfg.units)
    return case2_model(cfg.units)


def _reference_weights(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.task == "case1":
        return np.asarray(CASE1_REFERENCE_WEIGHTS)
    return np.asarray(CASE2_REFERENCE_WEIGHTS)


def _train_data(cfg: ExperimentConfig):
    if cfg.task == "case1":
        return gen_case1(cfg.train_size, cfg.train_mode, cfg.train_seed)
    return gen_case2(cfg.train_size, cfg.train_seed)


def _test_data(cfg: ExperimentConfig):
    if cfg.task == "case1":
        return gen_case1(cfg.test_size, cfg.test_mode, cfg.test_seed)
    return gen_case2(cfg.test_size, cfg.test_seed)


def _boundary_distances(task: str, feats: np.ndarray) -> np.ndarray:
    if task == "case1":
        return np.abs(np.abs(feats[:, 0]) - 1.0 / 3.0)
    return np.abs(np.hypot(feats[:, 0], feats[:, 1]) - BOUNDARY_RADIUS_CASE2)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_train(args) -> int:
    cfg = override(load_config(args.config), g=args.g, dtheta=args.dtheta,
                   seed=args.seed)
    out = _outdir(args)
    model = _model_for(cfg)
    dataset = _train_data(cfg)
    initial = cfg.initial if args.weights is None else _load_weights(args.weights)
    tconf = TrainConfig(initial=initial, budget=cfg.budget,
                        tolerance=cfg.tolerance, seed=cfg.seed,
                        restarts=cfg.restarts, rhobeg=cfg.rhobeg,
                        method=cfg.method)
    log.info("training %s on %d samples, budget %d", cfg.task, len(dataset),
             cfg.budget)
    weights, report = train(model, dataset, tconf)

    dataset.write_csv(out / "train_data.csv")
    _save_weights(out / "weights.csv", weights)
    with open(out / "history.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["evaluation", "loss"])
        for i, value in enumerate(report.history, start=1):
            writer.writerow([i, repr(float(value))])
    _write_summary(out / "summary.txt", [
        ("command", "train"),
        ("task", cfg.task),
        ("units", cfg.units),
        ("samples", len(dataset)),
        ("method", report.method),
        ("evaluations", report.evaluations),
        ("initial_loss", report.initial_loss),
        ("final_loss", report.final_loss),
        ("train_accuracy", report.accuracy),
        ("improved", report.improved),
    ])
    if cfg.figures:
        from .figures import fig_training
        fig_training(report.history, out / "training_loss.png")
    if not report.improved:
        print("training made no progress; see summary.txt", file=sys.stderr)
        return 3
    print(f"final loss {report.final_loss:.6g}, "
          f"training accuracy {report.accuracy:.3f}, "
          f"outputs in {out}")
    return 0


def cmd_evaluate(args) -> int:
    cfg = override(load_config(args.config), g=args.g, dtheta=args.dtheta,
                   test_seed=args.seed)
    out = _outdir(args)
    model = _model_for(cfg)
    weights = (_reference_weights(cfg) if args.weights is None
               else _load_weights(args.weights))
    if weights.shape != (model.parameter_count,):
        raise ValueError(
            f"weights have length {weights.shape[0]}, model has "
            f"{model.parameter_count} parameters")
    dataset = _test_data(cfg)
    feats = dataset.features
    log.info("evaluating %s on %d samples with %s predictor", cfg.task,
             len(dataset), cfg.predictor)

    ideal_vals = batch_predict_ideal(model, feats, weights)
    adia_vals = None
    if cfg.predictor == "adiabatic":
        schedule = Schedule(g=cfg.g, dtheta=cfg.dtheta)
        adia_vals = np.array([
            predict_adiabatic(model, row, weights, schedule, stride=0)[0]
            for row in feats
        ])
    readouts = ideal_vals if adia_vals is None else adia_vals
    assigned = (readouts > 0.0).astype(np.int64)
    correct = assigned == dataset.labels
    acc = float(np.mean(correct))
    dists = _boundary_distances(cfg.task, feats)
    miss = ~correct

    dataset.write_csv(out / "test_data.csv")
    ncol = feats.shape[1]
    with open(out / "predictions.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        header = [f"x{i + 1}" for i in range(ncol)] + ["label", "readout_ideal"]
        if adia_vals is not None:
            header.append("readout_adiabatic")
        header += ["predicted", "correct"]
        writer.writerow(header)
        for i in range(len(dataset)):
            row = [repr(float(v)) for v in feats[i]]
            row += [int(dataset.labels[i]), repr(float(ideal_vals[i]))]
            if adia_vals is not None:
                row.append(repr(float(adia_vals[i])))
            row += [int(assigned[i]), int(correct[i])]
            writer.writerow(row)

    pairs = [
        ("command", "evaluate"),
        ("task", cfg.task),
        ("predictor", cfg.predictor),
        ("g", cfg.g),
        ("dtheta", cfg.dtheta),
        ("n_test", len(dataset)),
        ("accuracy", acc),
        ("n_misclassified", int(miss.sum())),
    ]
    if miss.any():
        pairs += [
            ("max_boundary_distance", float(dists[miss].max())),
            ("mean_boundary_distance", float(dists[miss].mean())),
            ("frac_within_0.1", float(np.mean(dists[miss] <= 0.1))),
        ]
    _write_summary(out / "summary.txt", pairs)
    if cfg.figures:
        from .figures import fig_predictions
        fig_predictions(dataset, readouts, assigned, out / "predictions.png")
    print(f"accuracy {acc:.3f} on {len(dataset)} samples "
          f"({int(miss.sum())} misclassified), outputs in {out}")
    return 0


def cmd_trace(args) -> int:
    cfg = override(load_config(args.config), g=args.g, dtheta=args.dtheta)
    out = _outdir(args)
    model = _model_for(cfg)
    weights = (_reference_weights(cfg) if args.weights is None
               else _load_weights(args.weights))
    if weights.shape != (model.parameter_count,):
        raise ValueError(
            f"weights have length {weights.shape[0]}, model has "
            f"{model.parameter_count} parameters")
    if args.x is None:
        x = np.zeros(model.input_dim)
    else:
        try:
            x = np.array([float(v) for v in args.x.split(",")])
        except ValueError as exc:
            raise ValueError(f"bad --x value {args.x!r}: {exc}") from exc
    if x.shape[0] != model.input_dim:
        raise ValueError(
            f"--x has {x.shape[0]} features, model reads {model.input_dim}")
    schedule = Schedule(g=cfg.g, dtheta=cfg.dtheta)
    log.info("tracing %s at x=%s with g=%g", cfg.task, x, cfg.g)
    value, trace = predict_adiabatic(model, x, weights, schedule,
                                     stride=cfg.stride)

    d = trace.coords.shape[1]
    with open(out / "trace.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "fidelity", "expectation"]
                        + [f"n{i + 1}" for i in range(d)])
        for i in range(len(trace)):
            writer.writerow([repr(float(trace.times[i])),
                             repr(float(trace.fidelities[i])),
                             repr(float(trace.expectations[i]))]
                            + [repr(float(v)) for v in trace.coords[i]])
    _write_summary(out / "summary.txt", [
        ("command", "trace"),
        ("task", cfg.task),
        ("x", "|".join(repr(float(v)) for v in x)),
        ("g", cfg.g),
        ("dtheta", cfg.dtheta),
        ("samples", len(trace)),
        ("duration", trace.duration),
        ("min_fidelity", trace.min_fidelity),
        ("final_expectation", value),
        ("predicted", int(value > 0.0)),
    ])
    if cfg.figures:
        from .figures import fig_trace
        fig_trace(trace, out / "trace.png")
    print(f"min fidelity {trace.min_fidelity:.6f} over duration "
          f"{trace.duration:.4g}, outputs in {out}")
    return 0


def cmd_verify(args) -> int:
    out = _outdir(args)
    results, ok = run_checks(dim=args.dim, trials=args.trials,
                             seed=0 if args.seed is None else args.seed)
    with open(out / "verify.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "residual", "tolerance", "passed"])
        for r in results:
            writer.writerow([r.name, repr(r.residual), repr(r.tolerance),
                             int(r.passed)])
    for r in results:
        state = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<28s} residual={r.residual:.3e} "
              f"tolerance={r.tolerance:.0e} {state}")
    if not ok:
        print("verification failed", file=sys.stderr)
        return 1
    print(f"all {len(results)} checks passed (dim={args.dim}, "
          f"trials={args.trials})")
    return 0


def _add_common(parser, weights=True):
    parser.add_argument("--config", help="INI experiment file")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--seed", type=int, help="seed override")
    if weights:
        parser.add_argument("--g", type=float, help="adiabatic slowness override")
        parser.add_argument("--dtheta", type=float, help="sub-step width override")
        parser.add_argument("--weights", help="CSV weight file (index,value)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adialearn",
        description="Adiabatic evolution of rotated Hamiltonians and the "
                    "variational classifiers built on it.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit weights on a generated training set")
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score weights on a generated test set")
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("trace", help="record one adiabatic run in detail")
    _add_common(p)
    p.add_argument("--x", help="comma-separated input features (default zeros)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="run the algebraic self-checks")
    _add_common(p, weights=False)
    p.add_argument("--dim", type=int, default=2, help="Hilbert space dimension")
    p.add_argument("--trials", type=int, default=100,
                   help="random trials per check")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("ADIALEARN_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
