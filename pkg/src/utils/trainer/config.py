# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 17:40
# @description: the JSON-facing configuration of one training run
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from utils.losses import LossConfig

__all__ = ["TrainConfig"]


class TrainConfig(BaseModel):
    r"""
    ``hidden_sizes`` defaults to a desk-scale head; ``resources.setup.FULL_HIDDEN_SIZES`` holds the
    full-width one. ``monitor`` chooses the loss early stopping watches: the mean training loss of
    the epoch, or the loss on the evaluation set handed to :func:`train`.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    loss: LossConfig = Field(default_factory=LossConfig)
    hidden_sizes: Tuple[int, ...] = (64, 32, 16)
    dropout_rate: float = Field(default=0.1, ge=0.0, lt=1.0)
    epochs_max: int = Field(default=50, ge=1)
    steps_per_epoch: int = Field(default=100, ge=1)
    batch_size: int = Field(default=64, ge=2)
    learning_rate: float = Field(default=0.001, gt=0.0)
    early_stop_min_delta: float = Field(default=1e-4, gt=0.0)
    early_stop_patience: int = Field(default=5, ge=1)
    monitor: Literal["train_loss", "eval_loss"] = "train_loss"
    threshold: float = Field(default=0.5, gt=0.0, lt=1.0)
    seed: int = 0
    allow_degenerate_groups: bool = False
    label: Optional[str] = None

    @field_validator("hidden_sizes")
    @classmethod
    def _positive_widths(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(width < 1 for width in value):
            raise ValueError(f"hidden layer widths must be positive, got {value}")
        return value

    @property
    def display_label(self) -> str:
        return self.label if self.label else self.loss.label

    def with_seed(self, seed: int) -> "TrainConfig":
        return self.model_copy(update={"seed": seed})

    def with_lambda(self, lam: float) -> "TrainConfig":
        loss = self.loss.model_copy(update={"lam": lam})
        return self.model_copy(update={"loss": loss, "label": None})
