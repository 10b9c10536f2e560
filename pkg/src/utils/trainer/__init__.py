# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 17:20
# @description:
from .config import TrainConfig
from .early_stopping import EarlyStopping
from .experiments import (
    DatasetSource, TrainJobConfig, ExperimentConfig, SweepConfig, RunResult, LossSummary, ComparisonReport,
    SweepRow, SweepReport, run_once, compare_losses, lambda_sweep,
)
from .module_helpers import is_overridden
from .trainer import Trainer, TrainTrace, train, evaluate, evaluate_loss

__all__ = [
    "Trainer",
    "TrainTrace",
    "TrainConfig",
    "EarlyStopping",
    "DatasetSource",
    "TrainJobConfig",
    "ExperimentConfig",
    "SweepConfig",
    "RunResult",
    "LossSummary",
    "ComparisonReport",
    "SweepRow",
    "SweepReport",
    "is_overridden",
    "train",
    "evaluate",
    "evaluate_loss",
    "run_once",
    "compare_losses",
    "lambda_sweep",
]
