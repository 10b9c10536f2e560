# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 9:10
# @description:
from .errors import (
    FairnessError, ConfigurationError, ShapeError, NumericInputError, EmptyInputError, IngestionError,
    UndefinedMetricError, DegenerateGroupError, VerificationError,
)

__all__ = [
    "FairnessError",
    "ConfigurationError",
    "ShapeError",
    "NumericInputError",
    "EmptyInputError",
    "IngestionError",
    "UndefinedMetricError",
    "DegenerateGroupError",
    "VerificationError",
]
