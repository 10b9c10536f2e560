# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 10:05
# @description: training objectives (OE, GAP, GAP_multi, SOO, CLA) and their derivatives w.r.t. predictions
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import torch
from pydantic import BaseModel, ConfigDict, Field, field_validator
from torch import Tensor

from utils.errors import ConfigurationError, EmptyInputError, ShapeError
from utils.types import DTYPE

__all__ = [
    "PROBABILITY_EPSILON",
    "LossKind",
    "LossConfig",
    "ClassWeights",
    "GroupErrorVector",
    "clamp_probabilities",
    "cell_errors",
    "wbce",
    "group_errors",
    "partitioned_group_errors",
    "overall_loss",
    "group_pairs",
    "pairwise_penalty",
    "pairwise_penalty_grad",
    "mean_deviation",
    "mean_deviation_grad",
    "gap_multi_loss",
    "gap_binary_loss",
    "soo_loss",
    "cla_loss",
    "loss_value",
    "loss_gradient",
]

PROBABILITY_EPSILON = 1e-7

# err_grp[g] for g = 0..G-1
GroupErrorVector = Tensor


class LossKind(str, Enum):
    OE = "OE"
    GAP_MULTI = "GAP_MULTI"
    GAP_BINARY = "GAP_BINARY"
    CLA = "CLA"
    SOO = "SOO"


@dataclass(frozen=True)
class ClassWeights(object):
    r"""
    Per-group weights of the positive and the negative label.

    :param pos:         w_pos[g], shape (G,)
    :param neg:         w_neg[g], shape (G,)
    :param undefined:   names of the groups whose weights could not be derived from the data
    """
    pos: Tensor
    neg: Tensor
    undefined: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.pos.shape != self.neg.shape or self.pos.ndim != 1:
            raise ShapeError(f"class weights need two vectors of equal length, got {tuple(self.pos.shape)} "
                             f"and {tuple(self.neg.shape)}")

    def __len__(self) -> int:
        return self.pos.shape[0]

    @classmethod
    def ones(cls, n_groups: int) -> "ClassWeights":
        return cls(torch.ones(n_groups, dtype=DTYPE), torch.ones(n_groups, dtype=DTYPE))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "ClassWeights":
        pos = torch.tensor([float(p[0]) for p in pairs], dtype=DTYPE)
        neg = torch.tensor([float(p[1]) for p in pairs], dtype=DTYPE)
        return cls(pos, neg)

    def as_pairs(self) -> List[Tuple[float, float]]:
        return [(float(p), float(n)) for p, n in zip(self.pos, self.neg)]


class LossConfig(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    kind: LossKind = LossKind.OE
    # ignored when kind is OE
    lam: float = Field(default=1.0, alias="lambda", ge=0.0)
    class_weights: Optional[List[Tuple[float, float]]] = None

    @field_validator("lam")
    @classmethod
    def _finite_lambda(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("lambda must be finite")
        return value

    @field_validator("class_weights")
    @classmethod
    def _positive_weights(cls, value):
        if value is None:
            return value
        if len(value) == 0:
            raise ValueError("class_weights must have one (w_pos, w_neg) pair per group")
        for pos, neg in value:
            if not (math.isfinite(pos) and math.isfinite(neg) and pos > 0 and neg > 0):
                raise ValueError(f"class weights must be positive and finite, got ({pos}, {neg})")
        return value

    def weights(self, n_groups: int) -> ClassWeights:
        if self.class_weights is None:
            return ClassWeights.ones(n_groups)
        if len(self.class_weights) != n_groups:
            raise ConfigurationError(f"class_weights has {len(self.class_weights)} entries for {n_groups} groups")
        return ClassWeights.from_pairs(self.class_weights)

    def with_weights(self, weights: ClassWeights) -> "LossConfig":
        return self.model_copy(update={"class_weights": weights.as_pairs()})

    @property
    def label(self) -> str:
        if self.kind is LossKind.OE:
            return self.kind.value
        return f"{self.kind.value}(lambda={self.lam:g})"


def clamp_probabilities(y_pred: Tensor) -> Tensor:
    return y_pred.clamp(PROBABILITY_EPSILON, 1.0 - PROBABILITY_EPSILON)


def _check_matrices(y_true: Tensor, y_pred: Tensor, weights: ClassWeights):
    if y_true.shape != y_pred.shape:
        raise ShapeError(f"targets {tuple(y_true.shape)} and predictions {tuple(y_pred.shape)} differ in shape")
    if y_true.ndim != 2:
        raise ShapeError(f"expected N x G matrices, got {y_true.ndim} dimension(s)")
    if y_true.numel() == 0:
        raise EmptyInputError("cannot compute a loss over an empty batch")
    if len(weights) != y_true.shape[1]:
        raise ShapeError(f"{len(weights)} class-weight pairs for {y_true.shape[1]} groups")


def cell_errors(y_true: Tensor, y_pred: Tensor, weights: ClassWeights) -> Tensor:
    r"""
    Weighted cross entropy of every (sample, group) cell.

    :param y_true:    N x G binary targets
    :param y_pred:    N x G probabilities, clamped before the log
    :param weights:   per-group class weights
    :return:          N x G non-negative errors
    """
    p = clamp_probabilities(y_pred)
    return -(weights.pos * y_true * torch.log(p) + weights.neg * (1.0 - y_true) * torch.log(1.0 - p))


def _cell_error_grad(y_true: Tensor, y_pred: Tensor, weights: ClassWeights) -> Tensor:
    p = clamp_probabilities(y_pred)
    return -weights.pos * y_true / p + weights.neg * (1.0 - y_true) / (1.0 - p)


def wbce(y_true: Tensor, y_pred: Tensor, w_pos: float = 1.0, w_neg: float = 1.0) -> Tensor:
    y_true = torch.as_tensor(y_true, dtype=DTYPE)
    y_pred = torch.as_tensor(y_pred, dtype=DTYPE)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ShapeError(f"wbce needs two vectors of equal length, got {tuple(y_true.shape)} "
                         f"and {tuple(y_pred.shape)}")
    if y_true.numel() == 0:
        raise EmptyInputError("wbce over an empty vector")
    p = clamp_probabilities(y_pred)
    return (-(w_pos * y_true * torch.log(p) + w_neg * (1.0 - y_true) * torch.log(1.0 - p))).mean()


def group_errors(y_true: Tensor, y_pred: Tensor, weights: ClassWeights) -> GroupErrorVector:
    """err_grp[g]: wBCE over output column g across all N samples."""
    _check_matrices(y_true, y_pred, weights)
    return cell_errors(y_true, y_pred, weights).mean(dim=0)


def partitioned_group_errors(y_label: Tensor, y_group: Tensor, y_pred: Tensor,
                             weights: ClassWeights) -> GroupErrorVector:
    r"""
    Group errors of the binary setting, where one label column is shared by all samples and a
    demographic column assigns every sample to exactly one group.

    :param y_label:   N binary labels
    :param y_group:   N integer group indices in [0, G)
    :param y_pred:    N probabilities of the single output
    :param weights:   class weights of the G groups
    :return:          err_grp[g] = wBCE over the samples of group g, 0 for a group without samples
    """
    if not (y_label.shape == y_pred.shape == y_group.shape) or y_label.ndim != 1:
        raise ShapeError("labels, group indices and predictions must be vectors of equal length")
    if y_label.numel() == 0:
        raise EmptyInputError("cannot compute group errors over an empty batch")
    n_groups = len(weights)
    if int(y_group.min()) < 0 or int(y_group.max()) >= n_groups:
        raise ShapeError(f"group indices must lie in [0, {n_groups})")

    errs = []
    for g in range(n_groups):
        members = y_group == g
        if not bool(members.any()):
            errs.append(torch.zeros((), dtype=DTYPE))
            continue
        errs.append(wbce(y_label[members], y_pred[members], float(weights.pos[g]), float(weights.neg[g])))
    return torch.stack(errs)


def overall_loss(y_true: Tensor, y_pred: Tensor, weights: ClassWeights) -> Tensor:
    return group_errors(y_true, y_pred, weights).sum()


def group_pairs(n_groups: int) -> Tuple[Tensor, Tensor]:
    """The G(G-1)/2 unordered pairs (i, j), i < j, in row-major order."""
    pairs = torch.triu_indices(n_groups, n_groups, offset=1)
    return pairs[0], pairs[1]


def pairwise_penalty(errs: GroupErrorVector) -> Tensor:
    # every pair is independent; the fixed pair order keeps the sum reproducible
    i, j = group_pairs(errs.shape[0])
    return ((errs[i] - errs[j]) ** 2).sum()


def pairwise_penalty_grad(errs: GroupErrorVector) -> Tensor:
    shifted = errs - errs[0]
    return 2.0 * (errs.shape[0] * shifted - shifted.sum())


def _centred(errs: GroupErrorVector) -> Tensor:
    # measured from the first group, like pairwise_penalty_grad, so equal errors centre to exact zeros
    shifted = errs - errs[0]
    return shifted - shifted.mean()


def mean_deviation(errs: GroupErrorVector) -> Tensor:
    return _centred(errs).abs().sum()


def mean_deviation_grad(errs: GroupErrorVector) -> Tensor:
    signs = torch.sign(_centred(errs))
    return signs - signs.mean()


def gap_multi_loss(y_true: Tensor, y_pred: Tensor, weights: ClassWeights, lam: float) -> Tensor:
    errs = group_errors(y_true, y_pred, weights)
    return errs.sum() + lam * pairwise_penalty(errs)


def gap_binary_loss(y_true: Tensor, y_pred: Tensor, weights: ClassWeights, lam: float) -> Tensor:
    if y_true.ndim != 2 or y_true.shape[1] != 2:
        raise ConfigurationError("the binary GAP loss is defined for exactly two groups")
    errs = group_errors(y_true, y_pred, weights)
    return errs.sum() + lam * (errs[1] - errs[0]) ** 2


def soo_loss(y_true: Tensor, y_pred: Tensor, weights: ClassWeights, lam: float) -> Tensor:
    errs = group_errors(y_true, y_pred, weights)
    return errs.sum() + lam * mean_deviation(errs)


def _cla_label_terms(errors: Tensor, y_true: Tensor):
    # yields (label mask, n_label, present groups, n per group, group errors - pooled error) per label
    for label in (0.0, 1.0):
        mask = (y_true == label).to(DTYPE)
        n_label = mask.sum()
        if n_label == 0:
            continue
        pooled = (errors * mask).sum() / n_label
        n_cell = mask.sum(dim=0)
        present = n_cell > 0
        per_group = (errors * mask).sum(dim=0) / n_cell.clamp(min=1.0)
        gaps = torch.where(present, per_group - pooled, torch.zeros_like(per_group))
        yield mask, n_label, n_cell, gaps


def cla_loss(y_true: Tensor, y_pred: Tensor, weights: ClassWeights, lam: float) -> Tensor:
    r"""
    pooled wBCE + lam * sum_y sum_g |wBCE(y, g) - wBCE(y)|

    The pooled term is the mean over all N x G cells. A (label, group) cell without samples adds 0.
    """
    _check_matrices(y_true, y_pred, weights)
    errors = cell_errors(y_true, y_pred, weights)
    regulariser = torch.zeros((), dtype=DTYPE)
    for _, _, _, gaps in _cla_label_terms(errors, y_true):
        regulariser = regulariser + gaps.abs().sum()
    return errors.mean() + lam * regulariser


def loss_value(config: LossConfig, y_true: Tensor, y_pred: Tensor) -> Tensor:
    weights = config.weights(y_true.shape[-1])
    if config.kind is LossKind.OE:
        return overall_loss(y_true, y_pred, weights)
    if config.kind is LossKind.GAP_MULTI:
        return gap_multi_loss(y_true, y_pred, weights, config.lam)
    if config.kind is LossKind.GAP_BINARY:
        return gap_binary_loss(y_true, y_pred, weights, config.lam)
    if config.kind is LossKind.SOO:
        return soo_loss(y_true, y_pred, weights, config.lam)
    if config.kind is LossKind.CLA:
        return cla_loss(y_true, y_pred, weights, config.lam)
    raise ConfigurationError(f"unknown loss kind {config.kind}")


def loss_gradient(config: LossConfig, y_true: Tensor, y_pred: Tensor) -> Tensor:
    r"""
    Analytic derivative of :func:`loss_value` w.r.t. the (clamped) predictions.

    :return:   N x G matrix dL/dp
    """
    weights = config.weights(y_true.shape[-1])
    _check_matrices(y_true, y_pred, weights)
    n_samples, n_groups = y_true.shape
    d_cell = _cell_error_grad(y_true, y_pred, weights)

    if config.kind is LossKind.CLA:
        errors = cell_errors(y_true, y_pred, weights)
        d_errors = torch.full_like(errors, 1.0 / (n_samples * n_groups))
        for mask, n_label, n_cell, gaps in _cla_label_terms(errors, y_true):
            signs = torch.sign(gaps)
            coef = signs / n_cell.clamp(min=1.0) - signs.sum() / n_label
            d_errors = d_errors + config.lam * mask * coef
        return d_errors * d_cell

    errs = group_errors(y_true, y_pred, weights)
    if config.kind is LossKind.OE:
        d_errs = torch.ones_like(errs)
    elif config.kind is LossKind.GAP_MULTI:
        d_errs = 1.0 + config.lam * pairwise_penalty_grad(errs)
    elif config.kind is LossKind.GAP_BINARY:
        if n_groups != 2:
            raise ConfigurationError("the binary GAP loss is defined for exactly two groups")
        d_errs = 1.0 + config.lam * 2.0 * (errs - errs.flip(0))
    elif config.kind is LossKind.SOO:
        d_errs = 1.0 + config.lam * mean_deviation_grad(errs)
    else:
        raise ConfigurationError(f"unknown loss kind {config.kind}")
    return d_errs / n_samples * d_cell
