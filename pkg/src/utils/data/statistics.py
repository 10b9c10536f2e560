# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 16:55
# @description: class weights and prevalence counts of a labelled dataset
import warnings
from dataclasses import dataclass
from typing import Dict, List

import torch

from utils.losses import ClassWeights
from utils.types import DTYPE
from .MultiLabelDataset import MultiLabelDataset

__all__ = ["PrevalenceReport", "class_weights", "prevalence_stats"]


def class_weights(d: MultiLabelDataset) -> ClassWeights:
    r"""
    w_pos[g] = N / (2 n_pos[g]),  w_neg[g] = N / (2 n_neg[g])

    so that both labels of a group carry the same total weight. A group without positives or without
    negatives gets weight 1 on both sides and is listed in ``undefined``.
    """
    n = float(len(d))
    n_pos = d.labels.sum(dim=0)
    n_neg = n - n_pos
    degenerate = (n_pos == 0) | (n_neg == 0)
    pos = torch.where(degenerate, torch.ones_like(n_pos), n / (2.0 * n_pos.clamp(min=1.0)))
    neg = torch.where(degenerate, torch.ones_like(n_neg), n / (2.0 * n_neg.clamp(min=1.0)))

    undefined = tuple(name for name, flag in zip(d.group_names, degenerate.tolist()) if flag)
    if undefined:
        warnings.warn(f"class weights undefined for group(s) {', '.join(undefined)}: no positive or no negative "
                      f"sample", RuntimeWarning)
    return ClassWeights(pos.to(DTYPE), neg.to(DTYPE), undefined)


@dataclass
class PrevalenceReport(object):
    r"""
    :param group_counts:   positives per group
    :param histogram:      histogram[k] is the number of rows with exactly k positive groups, k = 0..G
    """
    group_names: List[str]
    group_counts: List[int]
    histogram: List[int]
    n_samples: int

    def to_dict(self) -> Dict:
        return {
            "n_samples": self.n_samples,
            "group_counts": dict(zip(self.group_names, self.group_counts)),
            "positives_per_row": {str(k): c for k, c in enumerate(self.histogram)},
        }


def prevalence_stats(d: MultiLabelDataset) -> PrevalenceReport:
    per_row = d.labels.sum(dim=1).to(torch.long)
    histogram = torch.bincount(per_row, minlength=d.n_groups + 1)
    return PrevalenceReport(list(d.group_names), d.positive_counts(), [int(c) for c in histogram], len(d))
