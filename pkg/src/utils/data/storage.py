# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 15:40
# @description: CSV and npz persistence of MultiLabelDataset
import csv
import math
from pathlib import Path
from typing import List, Optional

import numpy as np
import torch

from utils.errors import FairnessError, IngestionError
from utils.types import DTYPE, PathLike
from .MultiLabelDataset import MultiLabelDataset

__all__ = ["save_dataset", "load_dataset", "LABEL_PREFIX"]

LABEL_PREFIX = "g:"


def _infer_format(path: Path, fmt: Optional[str]) -> str:
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    if fmt not in ("csv", "npz"):
        raise IngestionError(f"unsupported dataset format {fmt!r}, expected 'csv' or 'npz'")
    return fmt


def save_dataset(d: MultiLabelDataset, path: PathLike, fmt: Optional[str] = None) -> Path:
    r"""
    CSV header: ``f0,...,f{F-1},g:<name0>,...``; features written with ``repr`` so that loading is bit-exact.
    """
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if fmt == "npz":
        with path.open("wb") as f:
            np.savez(f, features=d.features.numpy(), labels=d.labels.numpy().astype(np.int8),
                     group_names=np.array(d.group_names, dtype=str))
        return path

    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow([f"f{j}" for j in range(d.feature_dim)] + [LABEL_PREFIX + name for name in d.group_names])
        for x, y in zip(d.features.tolist(), d.labels.tolist()):
            writer.writerow([repr(v) for v in x] + [str(int(v)) for v in y])
    return path


def _parse_header(header: List[str]):
    first_label = next((j for j, name in enumerate(header) if name.startswith(LABEL_PREFIX)), len(header))
    features, labels = header[:first_label], header[first_label:]
    for j, name in enumerate(features):
        if name != f"f{j}":
            raise IngestionError(f"feature columns must be named f0, f1, ... before the label columns, got {name!r}",
                                 row=0, column=name)
    for name in labels:
        if not name.startswith(LABEL_PREFIX) or len(name) == len(LABEL_PREFIX):
            raise IngestionError("label columns must be named 'g:<group name>'", row=0, column=name)
    if not features:
        raise IngestionError("the header declares no feature column", row=0)
    if not labels:
        raise IngestionError("the header declares no group-label column", row=0)
    return len(features), [name[len(LABEL_PREFIX):] for name in labels]


def _load_csv(path: Path) -> MultiLabelDataset:
    r"""
    Rows are numbered from 1 after the header, the header itself is row 0.
    """
    with path.open("r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestionError(f"{path} is empty")
        n_features, group_names = _parse_header(header)
        columns = header

        features, labels = [], []
        for row, cells in enumerate(reader, start=1):
            if len(cells) != len(columns):
                raise IngestionError(f"expected {len(columns)} cells, found {len(cells)}", row=row)
            x = []
            for column, cell in zip(columns[:n_features], cells[:n_features]):
                try:
                    value = float(cell)
                except ValueError:
                    raise IngestionError(f"cannot parse {cell!r} as a number", row=row, column=column)
                if not math.isfinite(value):
                    raise IngestionError(f"non-finite feature {cell!r}", row=row, column=column)
                x.append(value)
            y = []
            for column, cell in zip(columns[n_features:], cells[n_features:]):
                if cell.strip() not in ("0", "1"):
                    raise IngestionError(f"label must be 0 or 1, found {cell!r}", row=row, column=column)
                y.append(float(cell))
            features.append(x)
            labels.append(y)

    if not features:
        raise IngestionError(f"{path} has a header but no data rows")
    try:
        return MultiLabelDataset(torch.tensor(features, dtype=DTYPE), torch.tensor(labels, dtype=DTYPE),
                                 group_names)
    except FairnessError as e:
        raise IngestionError(str(e))


def _load_npz(path: Path) -> MultiLabelDataset:
    try:
        with np.load(path, allow_pickle=False) as archive:
            features = torch.from_numpy(np.array(archive["features"], dtype=np.float64))
            labels = torch.from_numpy(np.array(archive["labels"], dtype=np.float64))
            group_names = [str(name) for name in archive["group_names"]]
    except KeyError as e:
        raise IngestionError(f"{path} misses the array {e}")
    except ValueError as e:
        raise IngestionError(f"{path} is not a dataset archive: {e}")
    try:
        return MultiLabelDataset(features, labels, group_names)
    except FairnessError as e:
        raise IngestionError(str(e))


def load_dataset(path: PathLike, fmt: Optional[str] = None) -> MultiLabelDataset:
    r"""
    :param path:   dataset file
    :param fmt:    'csv' or 'npz', inferred from the suffix when omitted
    :raise IngestionError: on any parse or validation failure, with the row and column when known
    """
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if not path.is_file():
        raise IngestionError(f"dataset file {path} does not exist")
    return _load_csv(path) if fmt == "csv" else _load_npz(path)
