# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 15:10
# @description:
from .MultiLabelDataset import MultiLabelDataset
from .split import SplitIndices, stratified_split
from .statistics import PrevalenceReport, class_weights, prevalence_stats
from .storage import LABEL_PREFIX, load_dataset, save_dataset
from .synthetic import SyntheticSpec, generate

__all__ = [
    "MultiLabelDataset",
    "SyntheticSpec",
    "SplitIndices",
    "PrevalenceReport",
    "LABEL_PREFIX",
    "generate",
    "load_dataset",
    "save_dataset",
    "stratified_split",
    "class_weights",
    "prevalence_stats",
]
