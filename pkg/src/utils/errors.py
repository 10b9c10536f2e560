# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 9:12
# @description: the exceptions raised across the library, the CLI maps them to exit codes
from typing import Optional, Sequence

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


class FairnessError(Exception):
    pass


class ConfigurationError(FairnessError, ValueError):
    pass


class ShapeError(FairnessError, ValueError):
    pass


class NumericInputError(FairnessError, ValueError):
    pass


class EmptyInputError(FairnessError, ValueError):
    pass


class IngestionError(FairnessError, ValueError):

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column!r}")
        if location:
            message = f"{message} (at {', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class UndefinedMetricError(FairnessError, ArithmeticError):

    def __init__(self, side: str):
        super().__init__(f"balanced accuracy is undefined: the group has no {side}")
        # "positives" or "negatives"
        self.side = side


class DegenerateGroupError(FairnessError, ValueError):

    def __init__(self, groups: Sequence[str]):
        super().__init__(
            f"class weights are undefined for group(s) {', '.join(groups)}: each group needs at least one "
            f"positive and one negative sample (set allow_degenerate_groups to train anyway)"
        )
        self.groups = tuple(groups)


class VerificationError(FairnessError, AssertionError):
    pass
