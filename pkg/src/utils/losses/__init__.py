# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 10:05
# @description:
from .losses import (
    PROBABILITY_EPSILON, LossKind, LossConfig, ClassWeights, GroupErrorVector, clamp_probabilities, cell_errors,
    wbce, group_errors, partitioned_group_errors, overall_loss, group_pairs, pairwise_penalty,
    pairwise_penalty_grad, mean_deviation, mean_deviation_grad, gap_multi_loss, gap_binary_loss, soo_loss,
    cla_loss, loss_value, loss_gradient,
)

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
