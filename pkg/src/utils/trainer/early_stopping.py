# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 17:20
# @description: stop when the monitored loss stops improving
import math

from utils.errors import ConfigurationError

__all__ = ["EarlyStopping"]


class EarlyStopping(object):
    r"""
    An epoch improves when its loss is below the best loss so far by more than ``min_delta``.
    Training stops once ``patience`` consecutive epochs did not improve, so a constant loss
    stream stops after exactly ``patience + 1`` epochs.
    """

    def __init__(self, min_delta: float = 1e-4, patience: int = 5):
        if not min_delta > 0:
            raise ConfigurationError(f"min_delta must be positive, got {min_delta}")
        if patience < 1:
            raise ConfigurationError(f"patience must be at least 1, got {patience}")
        self.min_delta = min_delta
        self.patience = patience
        self.best = math.inf
        self.best_epoch = 0
        self.epoch = 0
        self.wait = 0

    def update(self, loss: float) -> bool:
        r"""
        :param loss:   the monitored loss of the epoch that just finished
        :return:       True when training should stop
        """
        self.epoch += 1
        if loss < self.best - self.min_delta:
            self.best = loss
            self.best_epoch = self.epoch
            self.wait = 0
        else:
            self.wait += 1
        return self.wait >= self.patience
