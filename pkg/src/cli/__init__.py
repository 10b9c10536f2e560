# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 20:40
# @description:
from .commands import run

__all__ = ["run"]
