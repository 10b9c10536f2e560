# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 11:40
# @description: AdaMax on ModelParams, functional so that every parameter version is a new value
from dataclasses import dataclass, field, replace
from typing import List, Tuple

import torch
from torch import Tensor

from nn.DenseHead.functional import GradientBundle, ModelParams
from utils.errors import ConfigurationError, ShapeError

__all__ = ["OptimizerState", "adamax_step", "AdaMax"]


@dataclass
class OptimizerState(object):
    r"""
    :param step_count:      number of updates applied so far
    :param first_moment:    exponentially weighted mean of the gradients, one buffer per parameter tensor
    :param inf_norm:        exponentially weighted infinity norm of the gradients
    """
    first_moment: List[Tensor]
    inf_norm: List[Tensor]
    step_count: int = 0
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = field(default=1e-8)

    def __post_init__(self):
        if self.step_count < 0:
            raise ConfigurationError("step_count must be non-negative")
        if self.learning_rate <= 0:
            raise ConfigurationError(f"learning rate must be positive, got {self.learning_rate}")
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise ConfigurationError(f"beta1 and beta2 must lie in (0, 1), got {self.beta1}, {self.beta2}")
        if len(self.first_moment) != len(self.inf_norm):
            raise ShapeError("first moment and infinity norm buffers differ in length")

    @classmethod
    def fresh(cls, params: ModelParams, learning_rate: float = 0.001, beta1: float = 0.9, beta2: float = 0.999,
              epsilon: float = 1e-8) -> "OptimizerState":
        tensors = params.tensors()
        return cls(
            first_moment=[torch.zeros_like(t) for t in tensors],
            inf_norm=[torch.zeros_like(t) for t in tensors],
            learning_rate=learning_rate, beta1=beta1, beta2=beta2, epsilon=epsilon,
        )


def adamax_step(params: ModelParams, grads: GradientBundle,
                state: OptimizerState) -> Tuple[ModelParams, OptimizerState]:
    r"""
    m <- b1 m + (1 - b1) g
    u <- max(b2 u, |g|)
    theta <- theta - lr / (1 - b1^t) * m / (u + eps)

    Every entry takes the full update, a zero entry still decays its moments and moves with the
    accumulated momentum. A bundle that is zero everywhere only counts the step: parameters and both
    buffers come back unchanged.
    """
    tensors, gradients = params.tensors(), grads.tensors()
    if len(tensors) != len(gradients) or len(tensors) != len(state.first_moment):
        raise ShapeError(f"{len(tensors)} parameter tensors, {len(gradients)} gradients and "
                         f"{len(state.first_moment)} optimizer buffers")
    for t, g, m in zip(tensors, gradients, state.first_moment):
        if t.shape != g.shape or t.shape != m.shape:
            raise ShapeError(f"shape mismatch between parameter {tuple(t.shape)}, gradient {tuple(g.shape)} "
                             f"and optimizer buffer {tuple(m.shape)}")

    step = state.step_count + 1
    if not any(bool(g.any()) for g in gradients):
        return params, replace(state, step_count=step)

    step_size = state.learning_rate / (1.0 - state.beta1 ** step)

    updated, first_moment, inf_norm = [], [], []
    for t, g, m, u in zip(tensors, gradients, state.first_moment, state.inf_norm):
        m = state.beta1 * m + (1.0 - state.beta1) * g
        u = torch.maximum(state.beta2 * u, g.abs())
        updated.append(t - step_size * m / (u + state.epsilon))
        first_moment.append(m)
        inf_norm.append(u)

    new_state = OptimizerState(first_moment, inf_norm, step, state.learning_rate, state.beta1, state.beta2,
                               state.epsilon)
    return params.replace(updated), new_state


class AdaMax(object):
    r"""
    Stateful front of :func:`adamax_step`, the object a module keeps as its optimizer.
    """

    def __init__(self, params: ModelParams, lr: float = 0.001, betas: Tuple[float, float] = (0.9, 0.999),
                 eps: float = 1e-8):
        self.state = OptimizerState.fresh(params, learning_rate=lr, beta1=betas[0], beta2=betas[1], epsilon=eps)

    def step(self, params: ModelParams, grads: GradientBundle) -> ModelParams:
        params, self.state = adamax_step(params, grads, self.state)
        return params
