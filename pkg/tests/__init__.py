# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 21:00
# @description: make the src packages and the resources importable from the test cases
import sys
from pathlib import Path

_ROOT = Path(__file__).resolve().parent.parent

for _path in (_ROOT, _ROOT / "src"):
    if str(_path) not in sys.path:
        sys.path.insert(0, str(_path))
