# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 20:40
# @description: the subcommands, each a thin shell over library calls
import argparse
import os
import re
import sys
import traceback
from pathlib import Path
from typing import Callable, Dict, List, Optional

import torch

from cli.artifacts import OutputDirectory
from cli.parser import UsageError, build_parser, parse_counts
from nn.DenseHead import DenseHead, ModelParams
from resources.setup import NUM_THREADS_ENV, RESULTS_DIR
from utils.config import load_config
from utils.data import (
    MultiLabelDataset, SyntheticSpec, class_weights, generate, load_dataset, prevalence_stats, save_dataset,
    stratified_split,
)
from utils.errors import ConfigurationError, FairnessError, VerificationError
from utils.losses import LossConfig
from utils.metrics import MetricsReport, build_report
from utils.theory import eo_ap_scan, fpned_ap_consistency, table2_scenario, verify_table2
from utils.trainer import (
    ExperimentConfig, SweepConfig, TrainJobConfig, Trainer, compare_losses, evaluate, lambda_sweep, train,
)

__all__ = ["run"]

EXIT_OK, EXIT_INVALID, EXIT_FAILURE = 0, 1, 2


def _out(args: argparse.Namespace) -> OutputDirectory:
    return OutputDirectory(args.out or Path(RESULTS_DIR) / args.command, force=args.force)


def _say(text: str):
    sys.stdout.write(text + "\n")
    sys.stdout.flush()


def _print_report(title: str, report: MetricsReport):
    _say(f"{title}: {report.format_summary()}")
    _say(f"  hamming={report.hamming:.4f} macro P/R/F1={report.macro_precision:.4f}/{report.macro_recall:.4f}/"
         f"{report.macro_f1:.4f}")


def _split(job) -> tuple:
    d = job.resolve()
    split = stratified_split(d, job.test_fraction, job.split_seed)
    return d, split


def gen_data(args: argparse.Namespace, argv: List[str]) -> int:
    spec = load_config(SyntheticSpec, args.config)
    d = generate(spec)
    out = _out(args)
    name = f"dataset.{args.format}"
    temp = out.path / f".{name}.partial"
    save_dataset(d, temp, fmt=args.format)
    out.write_bytes(name, temp.read_bytes())
    temp.unlink()
    out.write_json("prevalence.json", prevalence_stats(d).to_dict())
    out.finish(args.command, argv, spec, spec.seed)
    _say(f"generated {len(d)} samples, {d.feature_dim} features, groups {d.group_names}")
    _say(f"  positives per group: {dict(zip(d.group_names, d.positive_counts()))}")
    return EXIT_OK


def train_command(args: argparse.Namespace, argv: List[str]) -> int:
    job = load_config(TrainJobConfig, args.config)
    d, split = _split(job)
    d_train, d_test = d.subset(split.train), d.subset(split.test)
    params, trace = train(d_train, job.run, d_eval=d_test, verbose=args.verbose)
    report = evaluate(params, d_test, job.run.threshold)

    out = _out(args)
    out.write_tensor_dict("params.pt", params.state_dict())
    out.write_json("metrics.json", report.to_dict())
    out.write_text("heatmap.csv", report.heatmap_csv())
    out.write_json("trace.json", trace.to_dict())
    out.write_json("split.json", split.to_dict())
    out.finish(args.command, argv, job, job.run.seed)
    _print_report(job.run.display_label, report)
    _say(f"  epochs run {trace.epochs_run}, converged at {trace.converged_epoch}")
    return EXIT_OK


def _load_params(path: str) -> ModelParams:
    try:
        state = torch.load(path)
    except FileNotFoundError:
        raise ConfigurationError(f"the file {path} does not exist")
    except (IOError, RuntimeError) as e:
        raise ConfigurationError(f"cannot read parameters from {path}: {e}")
    return ModelParams.from_state_dict(state)


def eval_command(args: argparse.Namespace, argv: List[str]) -> int:
    params = _load_params(args.params)
    config = None
    threshold = 0.5
    if args.config:
        job = load_config(TrainJobConfig, args.config)
        d, split = _split(job)
        d_test: MultiLabelDataset = d.subset(split.test)
        config, threshold = job, job.run.threshold
    else:
        d_test = load_dataset(args.dataset)
    if args.threshold is not None:
        threshold = args.threshold

    model = DenseHead(params.layer_sizes, LossConfig(), params=params)
    probabilities = Trainer(max_epoch=1, steps_per_epoch=1, verbose=False).predict(model, d_test)
    report = build_report(d_test.labels, probabilities, d_test.group_names, threshold)

    out = _out(args)
    out.write_json("metrics.json", report.to_dict())
    out.write_text("heatmap.csv", report.heatmap_csv())
    out.finish(args.command, argv, config)
    _print_report("eval", report)
    return EXIT_OK


def _percent(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{100 * value:.2f}"


def _file_label(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label).strip("_")


def compare_command(args: argparse.Namespace, argv: List[str]) -> int:
    cfg = load_config(ExperimentConfig, args.config)
    d, split = _split(cfg)
    report = compare_losses(d, split, cfg.runs, cfg.n_seeds, jobs=args.jobs)

    out = _out(args)
    out.write_text("comparison.json", report.to_json() + "\n")
    for label, text in report.heatmaps().items():
        out.write_text(f"heatmap_{_file_label(label)}.csv", text)
    out.finish(args.command, argv, cfg, cfg.split_seed)
    for s in report.summaries:
        _say(f"{s.label}: Avg BA {_percent(s.mean_avg_ba)} ± {_percent(s.std_avg_ba)} | "
             f"Max Diff {_percent(s.mean_max_diff)} ± {_percent(s.std_max_diff)} | "
             f"#Best BA {s.best_ba_count}")
    return EXIT_OK


def sweep_command(args: argparse.Namespace, argv: List[str]) -> int:
    cfg = load_config(SweepConfig, args.config)
    d, split = _split(cfg)
    report = lambda_sweep(d, split, cfg.base, cfg.lambdas, cfg.n_seeds, jobs=args.jobs)

    out = _out(args)
    out.write_text("sweep.json", report.to_json() + "\n")
    out.write_text("sweep.csv", report.to_csv())
    out.finish(args.command, argv, cfg, cfg.split_seed)
    for row in report.rows:
        _say(f"lambda={row.lam:g}: Avg BA {_percent(row.summary.mean_avg_ba)} | "
             f"Max Diff {_percent(row.summary.mean_max_diff)}")
    best = "n/a" if report.best_lambda is None else f"{report.best_lambda:g}"
    _say(f"best lambda: {best}")
    return EXIT_OK


def verify_command(args: argparse.Namespace, argv: List[str]) -> int:
    if args.table2:
        out = _out(args)
        scenario = table2_scenario()
        out.write_text("table2.csv", scenario.to_csv())
        try:
            verify_table2(scenario)
        finally:
            out.finish(args.command, argv)
        _say(scenario.to_csv().rstrip("\n"))
        _say("PASS")
        return EXIT_OK

    if args.counts is None:
        raise ConfigurationError("--theorem needs --counts P_A,N_A,P_B,N_B")
    a, b = parse_counts(args.counts)
    out = _out(args)
    settings = {"theorem": args.theorem, "counts": [*a, *b]}
    if args.theorem == 1:
        scan = eo_ap_scan(a, b, args.resolution, args.epsilon, args.exclude_random_line)
        result = scan.to_dict()
        passed = scan.consistent
        settings.update(resolution=args.resolution, epsilon=args.epsilon,
                        exclude_random_line=args.exclude_random_line)
        _say(f"theorem 1: {scan.classification.value} ({scan.n_feasible} of {args.resolution ** 2} grid points)")
    else:
        consistent = fpned_ap_consistency(a, b)
        result = {"a": {"P": a[0], "N": a[1]}, "b": {"P": b[0], "N": b[1]}, "consistent": consistent,
                  "verdict": "pass"}
        passed = True
        _say(f"theorem 2: consistent={str(consistent).lower()}")

    out.write_json(f"theorem{args.theorem}.json", result)
    out.finish(args.command, argv, settings)
    if not passed:
        raise VerificationError(f"the scan classified {result['classification']}, which contradicts the exact "
                                f"base-rate test")
    return EXIT_OK


def stats_command(args: argparse.Namespace, argv: List[str]) -> int:
    config: Optional[SyntheticSpec] = None
    if args.config:
        config = load_config(SyntheticSpec, args.config)
        d = generate(config)
    else:
        d = load_dataset(args.dataset)
    prevalence = prevalence_stats(d)
    weights = class_weights(d)

    out = _out(args)
    out.write_json("prevalence.json", {
        **prevalence.to_dict(),
        "class_weights": {name: {"pos": p, "neg": n} for name, (p, n) in zip(d.group_names, weights.as_pairs())},
        "undefined_weights": list(weights.undefined),
    })
    out.finish(args.command, argv, config)
    for name, count in zip(prevalence.group_names, prevalence.group_counts):
        _say(f"{name}: {count} positives ({100 * count / prevalence.n_samples:.2f}%)")
    _say(f"positives per row: {prevalence.histogram}")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, List[str]], int]] = {
    "gen-data": gen_data,
    "train": train_command,
    "eval": eval_command,
    "compare": compare_command,
    "sweep": sweep_command,
    "verify": verify_command,
    "stats": stats_command,
}


def _configure_threads():
    value = os.environ.get(NUM_THREADS_ENV)
    if value is None:
        return
    try:
        threads = int(value)
    except ValueError:
        raise ConfigurationError(f"{NUM_THREADS_ENV} must be a positive integer, got {value!r}")
    if threads < 1:
        raise ConfigurationError(f"{NUM_THREADS_ENV} must be a positive integer, got {value!r}")
    torch.set_num_threads(threads)


def run(argv: Optional[List[str]] = None) -> int:
    r"""
    :return:   0 on success, 1 on invalid input or configuration, 2 on a runtime failure
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError:
        return EXIT_INVALID
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    try:
        _configure_threads()
        return COMMANDS[args.command](args, argv)
    except VerificationError as e:
        sys.stderr.write(f"\nverification failed: {e}\n")
        return EXIT_FAILURE
    except FairnessError as e:
        sys.stderr.write(f"\n{type(e).__name__}: {e}\n")
        return EXIT_INVALID
    except Exception:
        sys.stderr.write("\n" + traceback.format_exc())
        return EXIT_FAILURE
