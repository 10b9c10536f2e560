# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 19:10
# @description: multi-seed loss comparisons and lambda sweeps on a fixed train/test split
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import torch
from pydantic import BaseModel, ConfigDict, Field, field_validator

from nn.DenseHead import forward
from utils.data import MultiLabelDataset, SplitIndices, SyntheticSpec, generate, load_dataset
from utils.errors import ConfigurationError
from utils.losses import LossKind, group_errors, pairwise_penalty
from utils.metrics import MetricsReport, matrix_csv
from utils.trainer.config import TrainConfig
from utils.trainer.trainer import TrainTrace, evaluate, train
from utils.types import DTYPE

__all__ = [
    "DatasetSource",
    "TrainJobConfig",
    "ExperimentConfig",
    "SweepConfig",
    "RunResult",
    "LossSummary",
    "ComparisonReport",
    "SweepRow",
    "SweepReport",
    "run_once",
    "compare_losses",
    "lambda_sweep",
]


class DatasetSource(BaseModel):
    r"""
    Where an experiment's data comes from: a dataset file, or a synthetic spec generated on the fly.
    ``groups`` restricts the run to a subset of label columns, e.g. a two-group classifier.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    dataset: Union[SyntheticSpec, str]
    groups: Optional[List[str]] = None
    test_fraction: float = Field(default=0.2, gt=0.0, lt=1.0)
    split_seed: int = 0

    def resolve(self) -> MultiLabelDataset:
        d = generate(self.dataset) if isinstance(self.dataset, SyntheticSpec) else load_dataset(self.dataset)
        return d.select_groups(self.groups) if self.groups else d


class TrainJobConfig(DatasetSource):
    run: TrainConfig = Field(default_factory=TrainConfig)


class ExperimentConfig(DatasetSource):
    runs: List[TrainConfig] = Field(min_length=2)
    n_seeds: int = Field(default=5, ge=2)


class SweepConfig(DatasetSource):
    base: TrainConfig
    lambdas: List[float] = Field(min_length=1)
    n_seeds: int = Field(default=5, ge=1)

    @field_validator("lambdas")
    @classmethod
    def _non_negative(cls, value: List[float]) -> List[float]:
        for lam in value:
            if not (math.isfinite(lam) and lam >= 0.0):
                raise ValueError(f"lambdas must be finite and non-negative, got {lam}")
        return value


@dataclass
class RunResult(object):
    label: str
    seed: int
    report: MetricsReport
    trace: TrainTrace
    test_penalty: float

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "seed": self.seed,
            "epochs_run": self.trace.epochs_run,
            "converged_epoch": self.trace.converged_epoch,
            "stopped_early": self.trace.stopped_early,
            "test_pairwise_penalty": self.test_penalty,
            "metrics": self.report.to_dict(),
        }


def run_once(d_train: MultiLabelDataset, d_test: MultiLabelDataset, cfg: TrainConfig,
             label: Optional[str] = None) -> RunResult:
    r"""
    Train on ``d_train`` and score on ``d_test``. ``test_penalty`` is the pairwise penalty of the test-set
    group errors under the class weights the run trained with.
    """
    params, trace = train(d_train, cfg)
    probabilities = forward(params, d_test.features)
    penalty = pairwise_penalty(group_errors(d_test.labels, probabilities, trace.loss.weights(d_test.n_groups)))
    return RunResult(label or cfg.display_label, cfg.seed, evaluate(params, d_test, cfg.threshold), trace,
                     float(penalty))


def _mean(values: Sequence[float]) -> Optional[float]:
    return sum(values) / len(values) if values else None


def _std(values: Sequence[float]) -> Optional[float]:
    # sample standard deviation
    if len(values) < 2:
        return None
    return float(torch.tensor(values, dtype=DTYPE).std())


@dataclass
class LossSummary(object):
    label: str
    runs: List[RunResult]
    best_ba_count: int = 0

    def _collect(self, name: str) -> List[float]:
        values = [getattr(run.report, name) for run in self.runs]
        return [v for v in values if v is not None]

    @property
    def mean_avg_ba(self) -> Optional[float]:
        return _mean(self._collect("avg_ba"))

    @property
    def std_avg_ba(self) -> Optional[float]:
        return _std(self._collect("avg_ba"))

    @property
    def mean_max_diff(self) -> Optional[float]:
        return _mean(self._collect("max_diff"))

    @property
    def std_max_diff(self) -> Optional[float]:
        return _std(self._collect("max_diff"))

    @property
    def mean_per_group_ba(self) -> List[Optional[float]]:
        columns = zip(*(run.report.per_group_ba for run in self.runs))
        return [_mean([v for v in column if v is not None]) for column in columns]

    @property
    def mean_ba_diff_matrix(self) -> List[List[Optional[float]]]:
        matrices = [run.report.ba_diff_matrix for run in self.runs]
        size = len(matrices[0])
        return [[_mean([m[i][j] for m in matrices if m[i][j] is not None]) for j in range(size)]
                for i in range(size)]

    def to_dict(self, group_names: Sequence[str]) -> dict:
        return {
            "label": self.label,
            "n_runs": len(self.runs),
            "seeds": [run.seed for run in self.runs],
            "mean_avg_ba": self.mean_avg_ba,
            "std_avg_ba": self.std_avg_ba,
            "mean_max_diff": self.mean_max_diff,
            "std_max_diff": self.std_max_diff,
            "mean_per_group_ba": dict(zip(group_names, self.mean_per_group_ba)),
            "best_ba_count": self.best_ba_count,
            "mean_hamming_loss": _mean(self._collect("hamming")),
            "mean_macro_precision": _mean(self._collect("macro_precision")),
            "mean_macro_recall": _mean(self._collect("macro_recall")),
            "mean_macro_f1": _mean(self._collect("macro_f1")),
            "mean_epochs_to_convergence": _mean([run.trace.converged_epoch for run in self.runs]),
            "mean_test_pairwise_penalty": _mean([run.test_penalty for run in self.runs]),
        }


@dataclass
class ComparisonReport(object):
    group_names: List[str]
    summaries: List[LossSummary]
    n_seeds: int
    n_train: int
    n_test: int

    def summary(self, label: str) -> LossSummary:
        for s in self.summaries:
            if s.label == label:
                return s
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "groups": list(self.group_names),
            "n_seeds": self.n_seeds,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "losses": [s.to_dict(self.group_names) for s in self.summaries],
            "runs": [run.to_dict() for s in self.summaries for run in s.runs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def heatmaps(self) -> Dict[str, str]:
        """Mean BA-difference matrix of every loss as CSV, keyed by loss label."""
        return {s.label: matrix_csv(self.group_names, s.mean_ba_diff_matrix) for s in self.summaries}


def _tally_best(summaries: List[LossSummary]):
    # a group's point goes to every loss tied for its highest mean BA
    per_loss = [s.mean_per_group_ba for s in summaries]
    for g in range(len(per_loss[0])):
        values = [row[g] for row in per_loss if row[g] is not None]
        if not values:
            continue
        best = max(values)
        for s, row in zip(summaries, per_loss):
            if row[g] is not None and row[g] == best:
                s.best_ba_count += 1


def _unique_labels(configs: Sequence[TrainConfig]) -> List[str]:
    labels, seen = [], {}
    for cfg in configs:
        label = cfg.display_label
        seen[label] = seen.get(label, 0) + 1
        labels.append(label if seen[label] == 1 else f"{label}#{seen[label]}")
    return labels


def _run_all(d: MultiLabelDataset, split: SplitIndices, configs: Sequence[TrainConfig], labels: Sequence[str],
             n_seeds: int, jobs: int) -> List[List[RunResult]]:
    if jobs < 1:
        raise ConfigurationError(f"jobs must be at least 1, got {jobs}")
    d_train, d_test = d.subset(split.train), d.subset(split.test)
    tasks = [(cfg.with_seed(cfg.seed + k), label) for cfg, label in zip(configs, labels) for k in range(n_seeds)]
    # runs are independent, each owns its generators, so the pool size does not change any number
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(lambda task: run_once(d_train, d_test, task[0], task[1]), tasks))
    return [results[i * n_seeds:(i + 1) * n_seeds] for i in range(len(configs))]


def compare_losses(d: MultiLabelDataset, split: SplitIndices, configs: Sequence[TrainConfig], n_seeds: int,
                   jobs: int = 1) -> ComparisonReport:
    r"""
    Train every config with seeds ``cfg.seed, cfg.seed + 1, ...`` on the same split.

    :param d:         the full dataset
    :param split:     fixed for all runs; only the training seed varies
    :param configs:   at least two run configurations
    :param n_seeds:   runs per config, at least two
    :param jobs:      runs trained concurrently
    """
    if len(configs) < 2:
        raise ConfigurationError(f"a comparison needs at least two configs, got {len(configs)}")
    if n_seeds < 2:
        raise ConfigurationError(f"a comparison needs at least two seeds, got {n_seeds}")
    labels = _unique_labels(configs)
    grouped = _run_all(d, split, configs, labels, n_seeds, jobs)
    summaries = [LossSummary(label, runs) for label, runs in zip(labels, grouped)]
    _tally_best(summaries)
    return ComparisonReport(list(d.group_names), summaries, n_seeds, split.train.numel(), split.test.numel())


@dataclass
class SweepRow(object):
    lam: float
    summary: LossSummary

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "mean_avg_ba": self.summary.mean_avg_ba,
            "std_avg_ba": self.summary.std_avg_ba,
            "mean_max_diff": self.summary.mean_max_diff,
            "std_max_diff": self.summary.std_max_diff,
            "mean_test_pairwise_penalty": _mean([run.test_penalty for run in self.summary.runs]),
            "seeds": [run.seed for run in self.summary.runs],
        }


@dataclass
class SweepReport(object):
    kind: LossKind
    rows: List[SweepRow] = field(default_factory=list)

    @property
    def best_lambda(self) -> Optional[float]:
        """The lambda with the smallest mean Max Diff, the smallest lambda on ties."""
        candidates = [row for row in self.rows if row.summary.mean_max_diff is not None]
        if not candidates:
            return None
        return min(candidates, key=lambda row: (row.summary.mean_max_diff, row.lam)).lam

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "best_lambda": self.best_lambda,
            "rows": [row.to_dict() for row in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        lines = ["lambda,mean_avg_ba,mean_max_diff"]
        for row in self.rows:
            lines.append(f"{row.lam!r},{row.summary.mean_avg_ba!r},{row.summary.mean_max_diff!r}")
        return "\n".join(lines) + "\n"


def lambda_sweep(d: MultiLabelDataset, split: SplitIndices, base_cfg: TrainConfig, lambdas: Sequence[float],
                 n_seeds: int, jobs: int = 1) -> SweepReport:
    r"""
    Train ``base_cfg`` once per lambda and seed; rows come out in increasing lambda.
    Every lambda uses the same seeds, so a row can be paired run by run with another.
    """
    if not lambdas:
        raise ConfigurationError("a sweep needs at least one lambda")
    if any(not (math.isfinite(lam) and lam >= 0.0) for lam in lambdas):
        raise ConfigurationError(f"lambdas must be finite and non-negative, got {list(lambdas)}")
    if base_cfg.loss.kind is LossKind.OE:
        raise ConfigurationError("the sweep's base config must use a loss with a fairness term, not OE")
    if n_seeds < 1:
        raise ConfigurationError(f"n_seeds must be at least 1, got {n_seeds}")

    ordered = sorted(set(float(lam) for lam in lambdas))
    configs = [base_cfg.with_lambda(lam) for lam in ordered]
    grouped = _run_all(d, split, configs, [cfg.display_label for cfg in configs], n_seeds, jobs)
    rows = [SweepRow(lam, LossSummary(cfg.display_label, runs)) for lam, cfg, runs in zip(ordered, configs, grouped)]
    return SweepReport(base_cfg.loss.kind, rows)
