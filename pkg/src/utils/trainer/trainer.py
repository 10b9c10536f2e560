# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 18:00
# @description: the mini-batch training and evaluation process of the classification head
import sys
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import torch
from torch import Tensor
from torch.utils.data import BatchSampler, DataLoader, RandomSampler, SequentialSampler

from nn import EnhancedModule
from nn.DenseHead import DenseHead, ModelParams, forward
from utils.data import MultiLabelDataset, class_weights
from utils.errors import ConfigurationError, DegenerateGroupError, NumericInputError
from utils.losses import LossConfig, loss_value
from utils.metrics import MetricsReport, build_report
from utils.trainer.config import TrainConfig
from utils.trainer.early_stopping import EarlyStopping
from utils.trainer.module_helpers import is_overridden
from utils.trainer.progress_bar import progress_bar

__all__ = ["Trainer", "TrainTrace", "train", "evaluate", "evaluate_loss"]

# dropout seeds of consecutive steps are seed * STEP_SEED_STRIDE + step
STEP_SEED_STRIDE = 100003


@dataclass
class TrainTrace(object):
    r"""
    :param epoch_losses:      mean training loss of every epoch
    :param monitored_losses:  the loss early stopping saw, equal to ``epoch_losses`` unless monitoring an eval set
    :param reports:           evaluation report after every epoch
    :param converged_epoch:   1-based epoch with the best monitored loss
    :param loss:              the objective actually optimized, class weights included
    """
    epoch_losses: List[float] = field(default_factory=list)
    monitored_losses: List[float] = field(default_factory=list)
    reports: List[MetricsReport] = field(default_factory=list)
    epochs_run: int = 0
    stopped_early: bool = False
    converged_epoch: int = 0
    loss: Optional[LossConfig] = None

    def to_dict(self) -> dict:
        return {
            "loss": None if self.loss is None else self.loss.model_dump(mode="json", by_alias=True),
            "epochs_run": self.epochs_run,
            "stopped_early": self.stopped_early,
            "converged_epoch": self.converged_epoch,
            "epoch_losses": list(self.epoch_losses),
            "monitored_losses": list(self.monitored_losses),
            "epoch_avg_ba": [r.avg_ba for r in self.reports],
            "epoch_max_diff": [r.max_diff for r in self.reports],
        }


def _cycle(loader: DataLoader) -> Iterator[Tuple[Tensor, Tensor]]:
    # every pass over the loader draws a fresh permutation from the sampler's generator
    while True:
        for batch in loader:
            yield batch


class Trainer(object):

    def __init__(
            self, *,
            max_epoch: int,
            steps_per_epoch: int,
            batch_size: int = 64,
            early_stopping: Optional[EarlyStopping] = None,
            monitor: str = "train_loss",
            threshold: float = 0.5,
            seed: int = 2022,
            verbose: bool = True
    ):
        if max_epoch < 1 or steps_per_epoch < 1:
            raise ConfigurationError("max_epoch and steps_per_epoch must be at least 1")
        if monitor not in ("train_loss", "eval_loss"):
            raise ConfigurationError(f"monitor must be 'train_loss' or 'eval_loss', got {monitor!r}")
        self.max_epoch = max_epoch
        self.steps_per_epoch = steps_per_epoch
        self.batch_size = batch_size
        self.early_stopping = early_stopping
        self.monitor = monitor
        self.threshold = threshold
        self.seed = seed
        self.verbose = verbose

    def _write(self, text: str):
        if self.verbose:
            sys.stdout.write(text)
            sys.stdout.flush()

    def _train_loader(self, train_set: MultiLabelDataset) -> DataLoader:
        # the sampler yields whole index lists, so the dataset is indexed once per batch
        sampler = RandomSampler(train_set, generator=torch.Generator().manual_seed(self.seed))
        batches = BatchSampler(sampler, batch_size=self.batch_size, drop_last=len(train_set) >= self.batch_size)
        return DataLoader(train_set, batch_size=None, sampler=batches)

    def fit(
            self,
            model: EnhancedModule,
            train_set: MultiLabelDataset,
            eval_set: Optional[MultiLabelDataset] = None
    ) -> TrainTrace:
        if self.monitor == "eval_loss" and eval_set is None:
            raise ConfigurationError("monitoring eval_loss needs an evaluation set")
        eval_set = eval_set if eval_set is not None else train_set

        model.optimizer = model.configure_optimizer()
        trace = TrainTrace(loss=getattr(model, "loss_config", None))
        batches = _cycle(self._train_loader(train_set))
        global_step = 0

        for epoch in range(1, self.max_epoch + 1):

            # training loop
            model.train()
            step_losses = []

            for step in range(1, self.steps_per_epoch + 1):
                inputs, labels = next(batches)
                global_step += 1

                training_outs = model.training_step(inputs, labels, self.seed * STEP_SEED_STRIDE + global_step)
                if is_overridden("training_step_end", model):
                    training_outs = model.training_step_end(training_outs)
                if training_outs is None:
                    continue
                if not isinstance(training_outs, dict) or "loss" not in training_outs or "grads" not in training_outs:
                    raise TypeError(f"\nthe training_outputs [{training_outs}] must be a dictionary with the keys "
                                    f"'loss' and 'grads'.\n")

                grads = training_outs["grads"]
                if not grads.is_finite():
                    raise NumericInputError(f"non-finite gradient at epoch {epoch}, step {step}")
                model.optimizer_step(grads)
                step_losses.append(float(training_outs["loss"]))

                self._write(f"\r\33[36mEpoch {epoch:06d} {progress_bar(step, self.steps_per_epoch)}\33[0m")

            epoch_loss = sum(step_losses) / len(step_losses) if step_losses else float("nan")
            trace.epoch_losses.append(epoch_loss)

            # validation loop
            model.eval()
            report = build_report(eval_set.labels, self.predict(model, eval_set), eval_set.group_names,
                                  self.threshold)
            trace.reports.append(report)
            monitored = epoch_loss
            if self.monitor == "eval_loss":
                monitored = float(model.validation_step(eval_set.features, eval_set.labels))
            trace.monitored_losses.append(monitored)
            trace.epochs_run = epoch

            self._write(
                f"\r\33[36mEpoch {epoch:06d} {progress_bar(self.steps_per_epoch, self.steps_per_epoch)} "
                f"loss={epoch_loss:.6f} {report.format_summary()}\33[0m\n"
            )

            if self.early_stopping is not None:
                stop = self.early_stopping.update(monitored)
                trace.converged_epoch = self.early_stopping.best_epoch
                if stop:
                    trace.stopped_early = True
                    break
            else:
                trace.converged_epoch = epoch

        return trace

    def predict(
            self,
            model: EnhancedModule,
            test_set: MultiLabelDataset,
            batch_size: Optional[int] = None
    ) -> Tensor:
        model.eval()
        batch_size = batch_size or len(test_set)
        loader = DataLoader(test_set, batch_size=None,
                            sampler=BatchSampler(SequentialSampler(test_set), batch_size=batch_size, drop_last=False))

        # test loop
        total_outputs = []
        total = len(loader)
        for batch_index, (inputs, _) in enumerate(loader):
            total_outputs.append(model.predict_step(inputs))
            if total > 1:
                self._write(f"\r\33[94m正在处理 {progress_bar(batch_index + 1, total)}\33[0m")
        if total > 1:
            self._write(f"\r\33[94m处理完毕 {progress_bar(total, total)}\33[0m\n")

        return torch.cat(total_outputs, dim=0)


def train(d_train: MultiLabelDataset, cfg: TrainConfig, d_eval: Optional[MultiLabelDataset] = None,
          verbose: bool = False) -> Tuple[ModelParams, TrainTrace]:
    r"""
    Train a fresh head on ``d_train``.

    Class weights missing from ``cfg.loss`` are derived from ``d_train``. A group without positives or
    without negatives is refused unless ``cfg.allow_degenerate_groups`` is set.

    :param d_train:   the training split
    :param cfg:       the run configuration
    :param d_eval:    evaluated after every epoch, the training split when omitted
    :param verbose:   draw the progress bar on stdout
    :return:          (final parameters, trace)
    """
    weights = class_weights(d_train)
    if weights.undefined and not cfg.allow_degenerate_groups:
        raise DegenerateGroupError(weights.undefined)
    loss_config = cfg.loss if cfg.loss.class_weights is not None else cfg.loss.with_weights(weights)

    model = DenseHead([d_train.feature_dim, *cfg.hidden_sizes, d_train.n_groups], loss_config, seed=cfg.seed,
                      dropout_rate=cfg.dropout_rate, learning_rate=cfg.learning_rate)
    trainer = Trainer(
        max_epoch=cfg.epochs_max,
        steps_per_epoch=cfg.steps_per_epoch,
        batch_size=cfg.batch_size,
        early_stopping=EarlyStopping(cfg.early_stop_min_delta, cfg.early_stop_patience),
        monitor=cfg.monitor,
        threshold=cfg.threshold,
        seed=cfg.seed,
        verbose=verbose,
    )
    trace = trainer.fit(model, d_train, d_eval)
    return model.params, trace


def evaluate(params: ModelParams, d_test: MultiLabelDataset, threshold: float = 0.5) -> MetricsReport:
    return build_report(d_test.labels, forward(params, d_test.features), d_test.group_names, threshold)


def evaluate_loss(params: ModelParams, d: MultiLabelDataset, loss_config: LossConfig) -> float:
    """The loss of ``params`` on a whole dataset, without dropout."""
    return float(loss_value(loss_config, d.labels, forward(params, d.features)))
