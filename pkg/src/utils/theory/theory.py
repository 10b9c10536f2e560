# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 14:20
# @description: accuracy parity against equalized odds and error-rate disparity, for two groups
import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import torch
from torch import Tensor

from utils.errors import ConfigurationError, EmptyInputError, NumericInputError, ShapeError, VerificationError
from utils.types import DTYPE, FloatSequence

__all__ = [
    "GroupRates",
    "ScanClass",
    "FeasibilityScan",
    "Table2Row",
    "Table2Report",
    "REPORTED_ROWS",
    "acc_from_rates",
    "eo_ap_scan",
    "fpned",
    "fpned_ap_consistency",
    "table2_scenario",
    "verify_table2",
]

Counts = Tuple[int, int]


def _check_counts(*pairs: Counts):
    for pair in pairs:
        if len(pair) != 2 or any(int(c) != c or c < 1 for c in pair):
            raise ConfigurationError(f"group counts must be two positive integers (P, N), got {pair}")


@dataclass(frozen=True)
class GroupRates(object):
    r"""
    :param P:     number of positive examples of the group
    :param N:     number of negative examples of the group
    :param tpr:   true positive rate in [0, 1]
    :param fpr:   false positive rate in [0, 1]
    """
    P: int
    N: int
    tpr: float
    fpr: float

    def __post_init__(self):
        _check_counts((self.P, self.N))
        if not (0.0 <= self.tpr <= 1.0 and 0.0 <= self.fpr <= 1.0):
            raise NumericInputError(f"rates must lie in [0, 1], got tpr={self.tpr}, fpr={self.fpr}")

    @property
    def base_rate(self) -> float:
        return self.P / self.N


def acc_from_rates(r: GroupRates) -> float:
    return (r.tpr * r.P + r.N * (1.0 - r.fpr)) / (r.P + r.N)


class ScanClass(str, Enum):
    ALL_FEASIBLE = "ALL_FEASIBLE"
    ONLY_RANDOM_LINE = "ONLY_RANDOM_LINE"
    EMPTY = "EMPTY"
    # off-line points survive without the whole grid being feasible
    PARTIAL = "PARTIAL"


@dataclass
class FeasibilityScan(object):
    r"""
    Result of :func:`eo_ap_scan`. ``feasible`` is the R x R mask over (tpr index, fpr index).
    """
    a: Counts
    b: Counts
    grid_resolution: int
    epsilon: float
    exclude_random_line: bool
    feasible: Tensor
    classification: ScanClass
    witnesses: List[Tuple[float, float]] = field(default_factory=list)
    tolerance: Optional[float] = None

    @property
    def grid(self) -> Tensor:
        return torch.linspace(0.0, 1.0, self.grid_resolution, dtype=DTYPE)

    @property
    def n_feasible(self) -> int:
        return int(self.feasible.sum())

    @property
    def feasible_points(self) -> List[Tuple[float, float]]:
        grid = self.grid
        return [(float(grid[i]), float(grid[j])) for i, j in self.feasible.nonzero().tolist()]

    @property
    def equal_base_rates(self) -> bool:
        return fpned_ap_consistency(self.a, self.b)

    @property
    def consistent(self) -> bool:
        r"""
        True when the scan agrees with the exact condition: everything is feasible under equal base
        rates, otherwise at most the random line survives.
        """
        if self.equal_base_rates:
            return self.classification is ScanClass.ALL_FEASIBLE
        if self.exclude_random_line:
            return self.classification is ScanClass.EMPTY
        return self.classification is ScanClass.ONLY_RANDOM_LINE

    def to_dict(self) -> dict:
        return {
            "a": {"P": self.a[0], "N": self.a[1]},
            "b": {"P": self.b[0], "N": self.b[1]},
            "grid_resolution": self.grid_resolution,
            "epsilon": self.epsilon,
            "tolerance": self.tolerance,
            "exclude_random_line": self.exclude_random_line,
            "equal_base_rates": self.equal_base_rates,
            "n_points": self.grid_resolution ** 2,
            "n_feasible": self.n_feasible,
            "classification": self.classification.value,
            "witnesses": [{"tpr": t, "fpr": f} for t, f in self.witnesses],
            "verdict": "pass" if self.consistent else "fail",
        }


def _positive_share_gap(a: Counts, b: Counts) -> float:
    # P_A / (P_A + N_A) - P_B / (P_B + N_B), exact before the final rounding
    return float(Fraction(int(a[0]), int(a[0] + a[1])) - Fraction(int(b[0]), int(b[0] + b[1])))


def _classify(feasible: Tensor, on_line: Tensor, candidates: Tensor) -> ScanClass:
    if not bool(feasible.any()):
        return ScanClass.EMPTY
    if bool(feasible[candidates].all()):
        return ScanClass.ALL_FEASIBLE
    if bool(on_line[feasible].all()):
        return ScanClass.ONLY_RANDOM_LINE
    return ScanClass.PARTIAL


def eo_ap_scan(a: Counts, b: Counts, grid_resolution: int = 1001, epsilon: float = 1e-9,
               exclude_random_line: bool = False, max_witnesses: int = 5) -> FeasibilityScan:
    r"""
    Scan every (tpr, fpr) pair on a uniform grid over [0, 1]^2. Both groups share the rates, so equalized
    odds holds by construction; a point is feasible when the accuracies also agree within the tolerance.

    The accuracy gap is evaluated in its factored form |pi_A - pi_B| * |tpr + fpr - 1| with
    pi = P / (P + N), so every grid point off the random line is at least |pi_A - pi_B| * spacing
    away from parity. The tolerance is ``epsilon`` capped at half of that, which keeps close but
    unequal base rates apart at any count size. Points within one grid spacing of tpr + fpr = 1
    count as the random line.

    :param a:                     (P_A, N_A)
    :param b:                     (P_B, N_B)
    :param grid_resolution:       points per axis, at least 11
    :param epsilon:               largest tolerance on |Acc_A - Acc_B|
    :param exclude_random_line:   drop the grid points on tpr + fpr = 1 before classifying
    :param max_witnesses:         feasible points reported, in row-major order
    """
    _check_counts(a, b)
    if grid_resolution < 11:
        raise ConfigurationError(f"grid resolution must be at least 11, got {grid_resolution}")
    if not epsilon > 0:
        raise ConfigurationError(f"epsilon must be positive, got {epsilon}")

    spacing = 1.0 / (grid_resolution - 1)
    index = torch.arange(grid_resolution)
    tpr_index, fpr_index = torch.meshgrid(index, index, indexing="ij")
    # (tpr + fpr - 1) in units of the grid spacing, exact integers
    offset = tpr_index + fpr_index - (grid_resolution - 1)

    share_gap = abs(_positive_share_gap(a, b))
    gap = share_gap * offset.abs().to(DTYPE) * spacing
    tolerance = epsilon if share_gap == 0.0 else min(epsilon, share_gap * spacing / 2)

    on_line = offset.abs() <= 1
    candidates = ~on_line if exclude_random_line else torch.ones_like(on_line)
    feasible = (gap <= tolerance) & candidates
    classification = _classify(feasible, on_line, candidates)

    grid = torch.linspace(0.0, 1.0, grid_resolution, dtype=DTYPE)
    witnesses = [(float(grid[i]), float(grid[j])) for i, j in feasible.nonzero()[:max_witnesses].tolist()]
    return FeasibilityScan(
        a=(int(a[0]), int(a[1])), b=(int(b[0]), int(b[1])), grid_resolution=grid_resolution, epsilon=epsilon,
        exclude_random_line=exclude_random_line, feasible=feasible, classification=classification,
        witnesses=witnesses, tolerance=tolerance,
    )


def _rates(values: FloatSequence, name: str) -> Tensor:
    values = torch.as_tensor(values, dtype=DTYPE).reshape(-1)
    if values.numel() == 0:
        raise EmptyInputError(f"no {name}")
    if bool(((values < 0) | (values > 1) | values.isnan()).any()):
        raise NumericInputError(f"{name} must lie in [0, 1]")
    return values


def fpned(group_fprs: FloatSequence, group_fnrs: FloatSequence, pooled_fpr: float,
          pooled_fnr: float) -> Tuple[float, float]:
    r"""
    :return:   (sum_g |FPR - FPR_g|, sum_g |FNR - FNR_g|)
    """
    fprs, fnrs = _rates(group_fprs, "group FPRs"), _rates(group_fnrs, "group FNRs")
    if fprs.shape != fnrs.shape:
        raise ShapeError(f"{fprs.numel()} group FPRs but {fnrs.numel()} group FNRs")
    pooled = _rates([pooled_fpr, pooled_fnr], "pooled rates")
    return float((pooled[0] - fprs).abs().sum()), float((pooled[1] - fnrs).abs().sum())


def fpned_ap_consistency(a: Counts, b: Counts) -> bool:
    """Whether equal error rates allow equal accuracy, i.e. P_A / N_A == P_B / N_B in exact integers."""
    _check_counts(a, b)
    return int(a[0]) * int(b[1]) == int(b[0]) * int(a[1])


@dataclass(frozen=True)
class Table2Row(object):
    case: str
    group: str
    P: int
    N: int
    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def acc(self) -> float:
        return (self.tp + self.tn) / (self.P + self.N)

    @property
    def tpr(self) -> float:
        return self.tp / self.P

    @property
    def fpr(self) -> float:
        return self.fp / self.N


# (tp, fn, fp, tn, acc, tpr, fpr) as published, rates rounded to two decimals
REPORTED_ROWS: Dict[Tuple[str, str], Tuple[int, int, int, int, float, float, float]] = {
    ("I", "A"): (80, 20, 30, 70, 0.75, 0.80, 0.30),
    ("I", "B"): (16, 4, 54, 126, 0.71, 0.80, 0.30),
    ("II", "A"): (77, 23, 23, 77, 0.77, 0.77, 0.23),
    ("II", "B"): (15, 5, 41, 139, 0.77, 0.75, 0.23),
}

_POPULATIONS = {"A": (100, 100), "B": (20, 180)}
_SHARED_TPR, _SHARED_FPR = 0.80, 0.30
# the accuracy-parity case is read off the published counts, its rates are not re-derived
_AP_COUNTS = {"A": (77, 23, 23, 77), "B": (15, 5, 41, 139)}


@dataclass
class Table2Report(object):
    rows: List[Table2Row]

    def row(self, case: str, group: str) -> Table2Row:
        for r in self.rows:
            if r.case == case and r.group == group:
                return r
        raise KeyError((case, group))

    def equalized_odds(self, case: str) -> bool:
        a, b = self.row(case, "A"), self.row(case, "B")
        return a.tp * b.P == b.tp * a.P and a.fp * b.N == b.fp * a.N

    def accuracy_parity(self, case: str) -> bool:
        a, b = self.row(case, "A"), self.row(case, "B")
        return (a.tp + a.tn) * (b.P + b.N) == (b.tp + b.tn) * (a.P + a.N)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["case", "group", "P", "N", "tp", "fn", "fp", "tn", "acc", "tpr", "fpr"])
        for r in self.rows:
            writer.writerow([r.case, r.group, r.P, r.N, r.tp, r.fn, r.fp, r.tn, repr(r.acc), repr(r.tpr),
                             repr(r.fpr)])
        return buffer.getvalue()


def table2_scenario() -> Table2Report:
    r"""
    Two groups of 200 with base rates 1 and 1/9.
    Case I shares TPR 0.80 and FPR 0.30 (equalized odds), Case II equalizes accuracy at 0.77.
    """
    rows = []
    for group, (p, n) in _POPULATIONS.items():
        tp, fp = round(_SHARED_TPR * p), round(_SHARED_FPR * n)
        rows.append(Table2Row("I", group, p, n, tp, p - tp, fp, n - fp))
    for group, (p, n) in _POPULATIONS.items():
        tp, fn, fp, tn = _AP_COUNTS[group]
        if tp + fn != p or fp + tn != n:
            raise VerificationError(f"case II counts of group {group} do not add up to its population")
        rows.append(Table2Row("II", group, p, n, tp, fn, fp, tn))
    return Table2Report(rows)


def verify_table2(report: Table2Report) -> None:
    r"""
    Compare every cell with the published table: counts exactly, rates after rounding to two decimals.

    :raise VerificationError: on the first mismatching cell
    """
    for (case, group), expected in REPORTED_ROWS.items():
        r = report.row(case, group)
        counts = (r.tp, r.fn, r.fp, r.tn)
        if counts != expected[:4]:
            raise VerificationError(f"case {case} group {group}: counts {counts} != reported {expected[:4]}")
        for name, value, reported in zip(("acc", "tpr", "fpr"), (r.acc, r.tpr, r.fpr), expected[4:]):
            if round(value, 2) != reported:
                raise VerificationError(f"case {case} group {group}: {name}={value:.4f} does not round to the "
                                        f"reported {reported:.2f}")
