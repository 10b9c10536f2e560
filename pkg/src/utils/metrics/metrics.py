# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 13:05
# @description: thresholded evaluation of a multi-label classifier, one binary task per group
import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import torch
from sklearn.metrics import hamming_loss as sklearn_hamming_loss
from sklearn.metrics import multilabel_confusion_matrix, precision_recall_fscore_support
from torch import Tensor

from utils.errors import ConfigurationError, EmptyInputError, NumericInputError, ShapeError, UndefinedMetricError
from utils.types import DTYPE, FloatSequence

__all__ = [
    "GroupConfusion",
    "MetricsReport",
    "confusion",
    "group_confusions",
    "balanced_accuracy",
    "avg_ba",
    "max_diff",
    "hamming_loss",
    "macro_prf",
    "ba_diff_matrix",
    "matrix_csv",
    "build_report",
]


@dataclass(frozen=True)
class GroupConfusion(object):
    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self):
        for name in ("tp", "fn", "fp", "tn"):
            if getattr(self, name) < 0:
                raise NumericInputError(f"confusion count {name} is negative")

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn

    @property
    def tpr(self) -> float:
        return self.tp / self.positives if self.positives else 0.0

    @property
    def fpr(self) -> float:
        return self.fp / self.negatives if self.negatives else 0.0

    @property
    def accuracy(self) -> float:
        total = self.positives + self.negatives
        return (self.tp + self.tn) / total if total else 0.0

    def to_dict(self) -> Dict[str, int]:
        return {"tp": self.tp, "fn": self.fn, "fp": self.fp, "tn": self.tn}


def _check_threshold(threshold: float):
    if not 0.0 < threshold < 1.0:
        raise ConfigurationError(f"threshold must lie in (0, 1), got {threshold}")


def _binarise(y_true: Tensor, y_pred_prob: Tensor, threshold: float, ndim: int) -> Tuple[np.ndarray, np.ndarray]:
    r"""
    Labels and thresholded predictions as 0/1 integer arrays. A probability equal to the threshold counts as a
    positive prediction.
    """
    _check_threshold(threshold)
    y_true, y_pred_prob = torch.as_tensor(y_true), torch.as_tensor(y_pred_prob)
    if y_true.ndim != ndim or y_true.shape != y_pred_prob.shape:
        kind = "vectors of equal length" if ndim == 1 else "matrices of equal shape"
        raise ShapeError(f"labels {tuple(y_true.shape)} and probabilities {tuple(y_pred_prob.shape)} must be {kind}")
    if y_true.numel() == 0:
        raise EmptyInputError("cannot evaluate an empty prediction matrix")
    truth = (y_true >= 0.5).to(torch.int64).cpu().numpy()
    predicted = (y_pred_prob >= threshold).to(torch.int64).cpu().numpy()
    return truth, predicted


def _per_column(truth: np.ndarray, predicted: np.ndarray) -> dict:
    # a single column reads as a binary target to sklearn, so it goes in as a vector scored on label 1
    if truth.shape[1] == 1:
        return {"y_true": truth[:, 0], "y_pred": predicted[:, 0], "labels": [1]}
    return {"y_true": truth, "y_pred": predicted}


def _from_sklearn(matrix: np.ndarray) -> GroupConfusion:
    (tn, fp), (fn, tp) = matrix.tolist()
    return GroupConfusion(tp=tp, fn=fn, fp=fp, tn=tn)


def confusion(y_true: Tensor, y_pred_prob: Tensor, threshold: float = 0.5) -> GroupConfusion:
    r"""
    :param y_true:        binary vector
    :param y_pred_prob:   probabilities, a value equal to the threshold counts as a positive prediction
    :param threshold:     in (0, 1)
    """
    truth, predicted = _binarise(y_true, y_pred_prob, threshold, ndim=1)
    return _from_sklearn(multilabel_confusion_matrix(truth, predicted, labels=[1])[0])


def group_confusions(y_true: Tensor, y_pred_prob: Tensor, threshold: float = 0.5) -> List[GroupConfusion]:
    """One confusion matrix per column of N x G labels and probabilities."""
    truth, predicted = _binarise(y_true, y_pred_prob, threshold, ndim=2)
    return [_from_sklearn(m) for m in multilabel_confusion_matrix(**_per_column(truth, predicted))]


def balanced_accuracy(c: GroupConfusion) -> float:
    if c.positives == 0:
        raise UndefinedMetricError("positives")
    if c.negatives == 0:
        raise UndefinedMetricError("negatives")
    return (c.tp / c.positives + c.tn / c.negatives) / 2.0


def _as_vector(bas: FloatSequence) -> Tensor:
    bas = torch.as_tensor(bas, dtype=DTYPE).reshape(-1)
    if bas.numel() == 0:
        raise EmptyInputError("no balanced accuracies to aggregate")
    return bas


def avg_ba(bas: FloatSequence) -> float:
    return float(_as_vector(bas).mean())


def max_diff(bas: FloatSequence) -> float:
    bas = _as_vector(bas)
    return float(bas.max() - bas.min())


def ba_diff_matrix(bas: FloatSequence) -> Tensor:
    bas = _as_vector(bas)
    return (bas.unsqueeze(1) - bas.unsqueeze(0)).abs()


def hamming_loss(y_true: Tensor, y_pred_prob: Tensor, threshold: float = 0.5) -> float:
    """Fraction of the N x G label cells whose thresholded prediction disagrees with the truth."""
    y_true = torch.as_tensor(y_true)
    truth, predicted = _binarise(y_true, y_pred_prob, threshold, ndim=1 if y_true.ndim == 1 else 2)
    if truth.ndim == 2 and truth.shape[1] == 1:
        truth, predicted = truth[:, 0], predicted[:, 0]
    return float(sklearn_hamming_loss(truth, predicted))


def _expand(c: GroupConfusion) -> Tuple[np.ndarray, np.ndarray]:
    # the label and prediction vectors a confusion matrix was counted from, up to row order
    if c.positives + c.negatives == 0:
        raise EmptyInputError("confusion matrix without samples")
    counts = [c.tp, c.fn, c.fp, c.tn]
    return np.repeat([1, 1, 0, 0], counts), np.repeat([1, 0, 1, 0], counts)


def macro_prf(confusions: Sequence[GroupConfusion]) -> Tuple[float, float, float]:
    r"""
    Unweighted mean over the groups of precision, recall and F1. A zero denominator scores 0.
    """
    if len(confusions) == 0:
        raise EmptyInputError("macro precision/recall/F1 of zero groups")
    scores = [precision_recall_fscore_support(*_expand(c), labels=[1], average=None, zero_division=0)[:3]
              for c in confusions]
    precision, recall, f1 = (float(np.mean(np.concatenate(column))) for column in zip(*scores))
    return precision, recall, f1


def matrix_csv(group_names: Sequence[str], matrix: Sequence[Sequence[Optional[float]]]) -> str:
    """Groups as header row and first column, empty cells for undefined entries."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([""] + list(group_names))
    for name, row in zip(group_names, matrix):
        writer.writerow([name] + ["" if v is None else repr(float(v)) for v in row])
    return buffer.getvalue()


@dataclass
class MetricsReport(object):
    r"""
    Balanced accuracies are stored in [0, 1]; :meth:`summary_rows` scales them by 100 for display.
    Groups whose BA is undefined have ``None`` in ``per_group_ba`` and in their ``ba_diff_matrix``
    row and column, and are left out of ``avg_ba`` and ``max_diff``.
    """
    group_names: List[str]
    confusions: List[GroupConfusion]
    per_group_ba: List[Optional[float]]
    avg_ba: Optional[float]
    max_diff: Optional[float]
    hamming: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    ba_diff_matrix: List[List[Optional[float]]]
    threshold: float = 0.5
    undefined: Dict[str, str] = field(default_factory=dict)

    @property
    def defined_bas(self) -> List[float]:
        return [ba for ba in self.per_group_ba if ba is not None]

    def to_dict(self) -> dict:
        return {
            "groups": list(self.group_names),
            "threshold": self.threshold,
            "per_group_ba": dict(zip(self.group_names, self.per_group_ba)),
            "undefined_groups": dict(self.undefined),
            "avg_ba": self.avg_ba,
            "max_diff": self.max_diff,
            "hamming_loss": self.hamming,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "ba_diff_matrix": [list(row) for row in self.ba_diff_matrix],
            "confusion": {name: c.to_dict() for name, c in zip(self.group_names, self.confusions)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def heatmap_csv(self) -> str:
        return matrix_csv(self.group_names, self.ba_diff_matrix)

    def summary_rows(self) -> List[Tuple[str, Optional[float]]]:
        def percent(v: Optional[float]) -> Optional[float]:
            return None if v is None else 100.0 * v

        rows = [(name, percent(ba)) for name, ba in zip(self.group_names, self.per_group_ba)]
        rows.append(("Max Diff", percent(self.max_diff)))
        rows.append(("Avg BA", percent(self.avg_ba)))
        return rows

    def format_summary(self) -> str:
        return " | ".join(f"{name} {'n/a' if v is None else f'{v:.2f}'}" for name, v in self.summary_rows())


def build_report(y_true: Tensor, y_pred_prob: Tensor, group_names: Optional[Sequence[str]] = None,
                 threshold: float = 0.5) -> MetricsReport:
    r"""
    Evaluate N x G probabilities against N x G binary labels.

    Groups without positives or without negatives are flagged in ``undefined`` with a RuntimeWarning.
    """
    confusions = group_confusions(y_true, y_pred_prob, threshold)
    n_groups = len(confusions)
    if n_groups == 0 or torch.as_tensor(y_true).shape[0] == 0:
        raise EmptyInputError("cannot evaluate an empty prediction matrix")
    group_names = list(group_names) if group_names is not None else [f"group_{g}" for g in range(n_groups)]
    if len(group_names) != n_groups:
        raise ShapeError(f"{len(group_names)} group names for {n_groups} groups")

    per_group_ba: List[Optional[float]] = []
    undefined: Dict[str, str] = {}
    for name, c in zip(group_names, confusions):
        try:
            per_group_ba.append(balanced_accuracy(c))
        except UndefinedMetricError as e:
            per_group_ba.append(None)
            undefined[name] = e.side
    if undefined:
        warnings.warn(f"balanced accuracy undefined for {', '.join(f'{k} (no {v})' for k, v in undefined.items())};"
                      f" excluded from Avg BA and Max Diff", RuntimeWarning)

    defined = [ba for ba in per_group_ba if ba is not None]
    matrix: List[List[Optional[float]]] = [[None] * n_groups for _ in range(n_groups)]
    if defined:
        diffs = ba_diff_matrix(defined).tolist()
        index = [g for g, ba in enumerate(per_group_ba) if ba is not None]
        for a, i in enumerate(index):
            for b, j in enumerate(index):
                matrix[i][j] = diffs[a][b]

    precision, recall, f1 = macro_prf(confusions)
    return MetricsReport(
        group_names=group_names,
        confusions=confusions,
        per_group_ba=per_group_ba,
        avg_ba=avg_ba(defined) if defined else None,
        max_diff=max_diff(defined) if defined else None,
        hamming=hamming_loss(y_true, y_pred_prob, threshold),
        macro_precision=precision,
        macro_recall=recall,
        macro_f1=f1,
        ba_diff_matrix=matrix,
        threshold=threshold,
        undefined=undefined,
    )
