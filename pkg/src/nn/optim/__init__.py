# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 11:40
# @description:
from .AdaMax import AdaMax, OptimizerState, adamax_step

__all__ = [
    "AdaMax",
    "OptimizerState",
    "adamax_step",
]
