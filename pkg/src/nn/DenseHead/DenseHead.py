# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 12:25
# @description: the multi-label classification head trained by the Trainer
from typing import Optional, Sequence

from torch import Tensor

from nn.optim import AdaMax
from utils.losses import LossConfig
from utils.types import STEP_OUTPUT
from .functional import ModelParams, backward, forward, init_params
from .. import EnhancedModule

__all__ = ["DenseHead"]


class DenseHead(EnhancedModule):

    def __init__(self, layer_sizes: Sequence[int], loss_config: LossConfig, seed: int = 0,
                 dropout_rate: float = 0.0, learning_rate: float = 0.001, params: Optional[ModelParams] = None):
        """
        :param layer_sizes:     [F, h_1, ..., G]，输入宽度、隐藏层宽度与组数
        :param loss_config:     训练目标
        :param seed:            参数初始化的种子
        :param dropout_rate:    隐藏层之后的dropout概率
        :param learning_rate:   AdaMax 的学习率
        :param params:          已有的参数，给出时忽略 layer_sizes 与 seed
        """
        super().__init__()
        self.loss_config = loss_config
        self.learning_rate = learning_rate
        self.params = params if params is not None else init_params(layer_sizes, seed, dropout_rate)

    def configure_optimizer(self) -> AdaMax:
        return AdaMax(self.params, lr=self.learning_rate)

    def training_step(self, inputs: Tensor, labels: Tensor, seed: int) -> STEP_OUTPUT:
        loss, grads = backward(self.params, inputs, labels, self.loss_config, training_mode=True, seed=seed)
        return {"loss": loss, "grads": grads}

    def validation_step(self, inputs: Tensor, labels: Tensor) -> Optional[STEP_OUTPUT]:
        loss, _ = backward(self.params, inputs, labels, self.loss_config)
        return loss

    def predict_step(self, inputs: Tensor) -> Tensor:
        return forward(self.params, inputs)
