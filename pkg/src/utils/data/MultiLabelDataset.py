# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 15:10
# @description: feature matrix with one binary target column per demographic group
from typing import List, Optional, Sequence, Tuple, Union

import torch
from torch import Tensor
from torch.utils.data import Dataset

from utils.errors import ConfigurationError, EmptyInputError, NumericInputError, ShapeError
from utils.types import DTYPE

__all__ = ["MultiLabelDataset"]

Index = Union[int, slice, Sequence[int], Tensor]


class MultiLabelDataset(Dataset):

    def __init__(self, features: Tensor, labels: Tensor, group_names: Optional[Sequence[str]] = None):
        r"""
        样本可以同时属于零个、一个或多个组

        :param features:      N x F，有限实数
        :param labels:        N x G，取值 0/1
        :param group_names:   G 个互不相同的非空组名，缺省为 group_0 ... group_{G-1}
        """
        features = torch.as_tensor(features, dtype=DTYPE)
        labels = torch.as_tensor(labels, dtype=DTYPE)
        if features.ndim != 2 or labels.ndim != 2:
            raise ShapeError(f"features and labels must be matrices, got {features.ndim}-d and {labels.ndim}-d")
        if features.shape[0] != labels.shape[0]:
            raise ShapeError(f"{features.shape[0]} feature rows but {labels.shape[0]} label rows")
        if features.shape[0] == 0 or features.shape[1] == 0 or labels.shape[1] == 0:
            raise EmptyInputError(f"a dataset needs N, F, G >= 1, got features {tuple(features.shape)} and labels "
                                  f"{tuple(labels.shape)}")
        if not bool(torch.isfinite(features).all()):
            raise NumericInputError("features contain NaN or infinite values")
        if not bool(((labels == 0) | (labels == 1)).all()):
            raise NumericInputError("labels must be 0 or 1")

        if group_names is None:
            group_names = [f"group_{g}" for g in range(labels.shape[1])]
        group_names = [str(name) for name in group_names]
        if len(group_names) != labels.shape[1]:
            raise ShapeError(f"{len(group_names)} group names for {labels.shape[1]} label columns")
        if any(not name for name in group_names) or len(set(group_names)) != len(group_names):
            raise ConfigurationError(f"group names must be unique and non-empty, got {group_names}")

        self.features = features
        self.labels = labels
        self.group_names = group_names

    def __getitem__(self, index: Index) -> Tuple[Tensor, Tensor]:
        return self.features[index], self.labels[index]

    def __len__(self):
        return self.features.shape[0]

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    @property
    def n_groups(self) -> int:
        return self.labels.shape[1]

    def positive_counts(self) -> List[int]:
        return [int(c) for c in self.labels.sum(dim=0)]

    def subset(self, indices: Union[Sequence[int], Tensor]) -> "MultiLabelDataset":
        indices = torch.as_tensor(indices, dtype=torch.long)
        return MultiLabelDataset(self.features[indices], self.labels[indices], self.group_names)

    def select_groups(self, names: Sequence[str]) -> "MultiLabelDataset":
        """Keep only the label columns of ``names``, in that order; every sample stays."""
        unknown = [name for name in names if name not in self.group_names]
        if unknown:
            raise ConfigurationError(f"unknown group(s) {unknown}, the dataset has {self.group_names}")
        columns = [self.group_names.index(name) for name in names]
        return MultiLabelDataset(self.features, self.labels[:, columns], list(names))

    def equals(self, other: "MultiLabelDataset") -> bool:
        return (self.group_names == other.group_names and torch.equal(self.features, other.features)
                and torch.equal(self.labels, other.labels))
