# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 13:05
# @description:
from .metrics import (
    GroupConfusion, MetricsReport, confusion, group_confusions, balanced_accuracy, avg_ba, max_diff, hamming_loss,
    macro_prf, ba_diff_matrix, matrix_csv, build_report,
)

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
