# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 14:20
# @description:
from .theory import (
    GroupRates, ScanClass, FeasibilityScan, Table2Row, Table2Report, REPORTED_ROWS, acc_from_rates, eo_ap_scan,
    fpned, fpned_ap_consistency, table2_scenario, verify_table2,
)

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
