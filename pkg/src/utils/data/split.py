# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 16:30
# @description: stratified train/test split over label combinations
import warnings
from dataclasses import dataclass

import numpy as np
import torch
from sklearn.model_selection import train_test_split
from torch import Tensor

from utils.errors import ConfigurationError, ShapeError
from .MultiLabelDataset import MultiLabelDataset

__all__ = ["SplitIndices", "stratified_split"]


@dataclass(frozen=True)
class SplitIndices(object):
    r"""
    :param train:   sorted indices of the training rows
    :param test:    sorted indices of the test rows, disjoint from ``train``
    """
    train: Tensor
    test: Tensor

    def __post_init__(self):
        n = self.train.numel() + self.test.numel()
        covered = torch.cat([self.train, self.test]).sort().values
        if not torch.equal(covered, torch.arange(n)):
            raise ShapeError("train and test indices must partition 0..N-1")

    def to_dict(self) -> dict:
        return {"train": self.train.tolist(), "test": self.test.tolist()}


def _labelset_strata(labels: np.ndarray) -> np.ndarray:
    # one stratum per distinct label row, singletons pooled into one rare stratum
    codes = labels.astype(np.int64) @ (1 << np.arange(labels.shape[1], dtype=np.int64))
    values, counts = np.unique(codes, return_counts=True)
    rare = np.isin(codes, values[counts < 2])
    codes[rare] = -1
    if rare.sum() == 1:
        codes[rare] = values[counts.argmax()]
    return codes


def _rarest_group_strata(labels: np.ndarray) -> np.ndarray:
    positives = labels.sum(axis=0)
    candidates = np.where(positives >= 2, positives, np.inf)
    return labels[:, int(candidates.argmin())].astype(np.int64)


def stratified_split(d: MultiLabelDataset, test_fraction: float, seed: int) -> SplitIndices:
    r"""
    Split so that every group's positive rate is about the same in both parts.

    Stratifies on the full label combination of each row. When scikit-learn cannot honour that
    stratification (too few rows per combination for the requested sizes), falls back to the
    positive column of the rarest group and finally to a plain shuffled split, warning each time.

    :param d:               dataset to split
    :param test_fraction:   in (0, 1); the test part gets ceil(N * test_fraction) rows
    :param seed:            random_state of the shuffle
    """
    if not 0.0 < test_fraction < 1.0:
        raise ConfigurationError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    n = len(d)
    if n < 2:
        raise ConfigurationError(f"cannot split {n} sample(s)")
    labels = d.labels.numpy()

    for name, positives in zip(d.group_names, labels.sum(axis=0)):
        if positives < 2:
            warnings.warn(f"group {name} has {int(positives)} positive sample(s), it cannot appear in both the "
                          f"train and the test split", RuntimeWarning)

    indices = np.arange(n)
    attempts = [("label combinations", _labelset_strata(labels)),
                ("the rarest group", _rarest_group_strata(labels)),
                ("nothing", None)]
    for description, strata in attempts:
        try:
            train, test = train_test_split(indices, test_size=test_fraction, random_state=seed, shuffle=True,
                                           stratify=strata)
            break
        except ValueError as e:
            warnings.warn(f"stratification on {description} failed ({e}), falling back", RuntimeWarning)
    else:
        raise ConfigurationError(f"cannot split {n} samples with test_fraction={test_fraction}")

    return SplitIndices(torch.as_tensor(np.sort(train), dtype=torch.long),
                        torch.as_tensor(np.sort(test), dtype=torch.long))
