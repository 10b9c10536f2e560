# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 12:10
# @description: the hook interface the Trainer drives, for models that own their parameters as values
import abc
from abc import abstractmethod
from typing import Optional

from torch import Tensor

from utils.types import STEP_OUTPUT

__all__ = ["EnhancedModule"]


# noinspection PyIncorrectDocstring
class EnhancedModule(metaclass=abc.ABCMeta):
    r"""
    The model keeps its parameters in ``self.params`` and its optimizer in ``self.optimizer``.
    The optimizer is any object with ``step(params, grads) -> params``.
    """

    def __init__(self):
        self.params = None
        self.optimizer = None
        self.training = False

    def train(self, mode: bool = True) -> "EnhancedModule":
        self.training = mode
        return self

    def eval(self) -> "EnhancedModule":
        return self.train(False)

    @abstractmethod
    def configure_optimizer(self):
        r"""
        Build the optimizer over the current parameters. Called once by the Trainer before the first step.
        """

    @abstractmethod
    def training_step(self, inputs: Tensor, labels: Tensor, seed: int) -> STEP_OUTPUT:
        r"""
        Compute the batch loss and the gradient of every parameter.

        Args:
            inputs: the batch features
            labels: the multi-label targets of the batch
            seed: seed of the dropout masks of this step
        Return:
            - dict: must include the keys 'loss' and 'grads'
            - None: Training will skip to the next batch.
        Example:
            def training_step(self, inputs, labels, seed):
                loss, grads = backward(self.params, inputs, labels, self.loss_config, True, seed)
                return {"loss": loss, "grads": grads}
        """

    def training_step_end(self, step_output: STEP_OUTPUT) -> STEP_OUTPUT:
        r"""
        Use this just in case that some works haven't been completed in the training_step.

        Args:
            step_output: What you return in `training_step` for each batch.

        Return:
            the step output handed to the optimizer
        """

    @abstractmethod
    def validation_step(self, inputs: Tensor, labels: Tensor) -> Optional[STEP_OUTPUT]:
        r"""
        see also training_step, the loss of a held-out batch without dropout.
        """

    def optimizer_step(self, grads):
        self.params = self.optimizer.step(self.params, grads)

    @abstractmethod
    def predict_step(self, inputs: Tensor) -> Tensor:
        r"""
        Here you generate the batch outputs Tensor

        Args:
            inputs: the tensor input into the model
        Return:
            - torch.Tensor: the probabilities
        """
