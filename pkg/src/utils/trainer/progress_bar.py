# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 17:25
# @description: one frame of the console progress bar drawn by the Trainer

__all__ = ["progress_bar"]

spinner = "◐◓◑◒"


def progress_bar(cur: int, total: int, width: int = 40) -> str:
    r"""
    :param cur:     steps done so far
    :param total:   steps of the epoch
    :param width:   characters of the bar
    :return:        the format string of progress bar
    """
    percent = cur / total if total else 1.0
    filled = int(percent * width)
    return f"|{'█' * filled:<{width}s}| {spinner[cur % len(spinner)]} {cur:>{len(str(total))}d}/{total} {percent:4.0%}"
