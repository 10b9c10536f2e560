# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 11:02
# @description:
from .functional import (
    ModelParams, GradientBundle, init_params, forward, backward, finite_diff_grad, central_difference,
    max_relative_error,
)
from .DenseHead import DenseHead

__all__ = [
    "DenseHead",
    "ModelParams",
    "GradientBundle",
    "init_params",
    "forward",
    "backward",
    "finite_diff_grad",
    "central_difference",
    "max_relative_error",
]
