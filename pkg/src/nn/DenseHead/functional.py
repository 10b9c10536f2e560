# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 11:02
# @description: the dense/relu/dropout/sigmoid graph with its hand-derived backward pass
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import torch
from torch import Tensor

from utils.errors import ConfigurationError, NumericInputError, ShapeError
from utils.losses import PROBABILITY_EPSILON, LossConfig, clamp_probabilities, loss_gradient, loss_value
from utils.types import DTYPE

__all__ = [
    "ModelParams",
    "GradientBundle",
    "init_params",
    "forward",
    "backward",
    "finite_diff_grad",
    "central_difference",
    "max_relative_error",
]


def _interleave(weights: Sequence[Tensor], biases: Sequence[Optional[Tensor]]) -> List[Tensor]:
    tensors = []
    for w, b in zip(weights, biases):
        tensors.append(w)
        if b is not None:
            tensors.append(b)
    return tensors


def _split(tensors: Sequence[Tensor], n_layers: int) -> Tuple[List[Tensor], List[Optional[Tensor]]]:
    # inverse of _interleave: every layer but the output one carries a bias
    weights, biases = [], []
    cursor = 0
    for k in range(n_layers):
        weights.append(tensors[cursor])
        cursor += 1
        if k < n_layers - 1:
            biases.append(tensors[cursor])
            cursor += 1
        else:
            biases.append(None)
    if cursor != len(tensors):
        raise ShapeError(f"expected {cursor} tensors for {n_layers} layers, got {len(tensors)}")
    return weights, biases


@dataclass
class ModelParams(object):
    r"""
    Weights of the classification head.

    :param layer_weights:   one (fan_in, fan_out) matrix per dense layer
    :param layer_biases:    one (fan_out,) vector per hidden layer, None for the output layer
    :param layer_sizes:     [F, h_1, ..., h_k, G]
    :param dropout_rate:    dropout applied after every hidden relu while training
    """
    layer_weights: List[Tensor]
    layer_biases: List[Optional[Tensor]]
    layer_sizes: List[int]
    dropout_rate: float = 0.0

    def __post_init__(self):
        n_layers = len(self.layer_sizes) - 1
        if n_layers < 1 or len(self.layer_weights) != n_layers or len(self.layer_biases) != n_layers:
            raise ShapeError(f"{len(self.layer_weights)} weight matrices do not fit layer sizes {self.layer_sizes}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigurationError(f"dropout rate must lie in [0, 1), got {self.dropout_rate}")
        for k, (w, b) in enumerate(zip(self.layer_weights, self.layer_biases)):
            if tuple(w.shape) != (self.layer_sizes[k], self.layer_sizes[k + 1]):
                raise ShapeError(f"layer {k} weight has shape {tuple(w.shape)}, expected "
                                 f"{(self.layer_sizes[k], self.layer_sizes[k + 1])}")
            if k == n_layers - 1:
                if b is not None:
                    raise ShapeError("the output layer has no bias")
            elif b is None or tuple(b.shape) != (self.layer_sizes[k + 1],):
                raise ShapeError(f"layer {k} needs a bias of shape {(self.layer_sizes[k + 1],)}")
        if not all(bool(torch.isfinite(t).all()) for t in self.tensors()):
            raise NumericInputError("model parameters contain non-finite entries")

    @property
    def n_layers(self) -> int:
        return len(self.layer_weights)

    @property
    def n_features(self) -> int:
        return self.layer_sizes[0]

    @property
    def n_groups(self) -> int:
        return self.layer_sizes[-1]

    def tensors(self) -> List[Tensor]:
        """W_0, b_0, W_1, b_1, ..., W_out: the order shared by gradients and optimizer buffers."""
        return _interleave(self.layer_weights, self.layer_biases)

    def num_parameters(self) -> int:
        return sum(t.numel() for t in self.tensors())

    def replace(self, tensors: Sequence[Tensor]) -> "ModelParams":
        weights, biases = _split(tensors, self.n_layers)
        return ModelParams(weights, biases, list(self.layer_sizes), self.dropout_rate)

    def state_dict(self) -> dict:
        return {
            "layer_sizes": list(self.layer_sizes),
            "dropout_rate": self.dropout_rate,
            "layer_weights": [w.clone() for w in self.layer_weights],
            "layer_biases": [None if b is None else b.clone() for b in self.layer_biases],
        }

    @classmethod
    def from_state_dict(cls, state: dict) -> "ModelParams":
        return cls(
            layer_weights=[torch.as_tensor(w, dtype=DTYPE) for w in state["layer_weights"]],
            layer_biases=[None if b is None else torch.as_tensor(b, dtype=DTYPE) for b in state["layer_biases"]],
            layer_sizes=[int(s) for s in state["layer_sizes"]],
            dropout_rate=float(state["dropout_rate"]),
        )


@dataclass
class GradientBundle(object):
    layer_weights: List[Tensor]
    layer_biases: List[Optional[Tensor]]

    def tensors(self) -> List[Tensor]:
        return _interleave(self.layer_weights, self.layer_biases)

    @classmethod
    def from_tensors(cls, tensors: Sequence[Tensor], n_layers: int) -> "GradientBundle":
        return cls(*_split(tensors, n_layers))

    def is_finite(self) -> bool:
        return all(bool(torch.isfinite(t).all()) for t in self.tensors())

    def max_abs(self) -> float:
        return max(float(t.abs().max()) for t in self.tensors())


def init_params(layer_sizes: Sequence[int], seed: int, dropout_rate: float = 0.0) -> ModelParams:
    r"""
    Glorot-uniform weights, zero biases.

    :param layer_sizes:    [F, h_1, ..., G], at least the input and the output width
    :param seed:           seed of the private generator, equal seeds give bit-identical parameters
    :param dropout_rate:   stored with the parameters, used by :func:`forward` in training mode
    """
    layer_sizes = list(layer_sizes)
    if len(layer_sizes) < 2 or any(int(s) != s or s < 1 for s in layer_sizes):
        raise ConfigurationError(f"layer sizes must hold at least two positive integers, got {layer_sizes}")

    generator = torch.Generator().manual_seed(seed)
    weights, biases = [], []
    n_layers = len(layer_sizes) - 1
    for k in range(n_layers):
        fan_in, fan_out = layer_sizes[k], layer_sizes[k + 1]
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append((torch.rand(fan_in, fan_out, generator=generator, dtype=DTYPE) * 2.0 - 1.0) * limit)
        biases.append(torch.zeros(fan_out, dtype=DTYPE) if k < n_layers - 1 else None)
    return ModelParams(weights, biases, layer_sizes, dropout_rate)


@dataclass
class _ForwardCache(object):
    inputs: List[Tensor]  # input of every dense layer
    pre_activations: List[Tensor]  # z of every hidden layer
    masks: List[Optional[Tensor]]  # inverted-dropout masks, None outside training
    sigmoid: Tensor  # unclamped output probabilities


def _check_features(params: ModelParams, features: Tensor) -> Tensor:
    features = torch.as_tensor(features, dtype=DTYPE)
    if features.ndim != 2 or features.shape[1] != params.n_features:
        raise ShapeError(f"features of shape {tuple(features.shape)} do not match the input width "
                         f"{params.n_features}")
    if not bool(torch.isfinite(features).all()):
        raise NumericInputError("features contain NaN or infinite values")
    return features


def _forward(params: ModelParams, features: Tensor, training_mode: bool, seed: int) -> Tuple[Tensor, _ForwardCache]:
    features = _check_features(params, features)
    keep = 1.0 - params.dropout_rate
    generator = torch.Generator().manual_seed(seed) if training_mode and params.dropout_rate > 0 else None

    inputs, pre_activations, masks = [features], [], []
    a = features
    for k in range(params.n_layers - 1):
        z = a @ params.layer_weights[k] + params.layer_biases[k]
        a = torch.relu(z)
        mask = None
        if generator is not None:
            mask = (torch.rand(z.shape, generator=generator, dtype=DTYPE) < keep).to(DTYPE) / keep
            a = a * mask
        pre_activations.append(z)
        masks.append(mask)
        inputs.append(a)

    s = torch.sigmoid(a @ params.layer_weights[-1])
    return clamp_probabilities(s), _ForwardCache(inputs, pre_activations, masks, s)


def forward(params: ModelParams, features: Tensor, training_mode: bool = False, seed: int = 0) -> Tensor:
    r"""
    :param params:          the network
    :param features:        N x F inputs
    :param training_mode:   apply dropout masks drawn from ``seed``
    :param seed:            seed of the dropout masks, unused in evaluation mode
    :return:                N x G probabilities, clamped into [1e-7, 1 - 1e-7]
    """
    probabilities, _ = _forward(params, features, training_mode, seed)
    return probabilities


def backward(params: ModelParams, features: Tensor, targets: Tensor, loss_config: LossConfig,
             training_mode: bool = False, seed: int = 0) -> Tuple[Tensor, GradientBundle]:
    r"""
    Loss of the batch and its gradient w.r.t. every parameter.

    :return:   (scalar loss equal to ``loss_value`` on the same predictions, gradient bundle)
    """
    probabilities, cache = _forward(params, features, training_mode, seed)
    targets = torch.as_tensor(targets, dtype=DTYPE)
    if targets.shape != probabilities.shape:
        raise ShapeError(f"targets {tuple(targets.shape)} do not match predictions {tuple(probabilities.shape)}")

    loss = loss_value(loss_config, targets, probabilities)
    d_prob = loss_gradient(loss_config, targets, probabilities)

    s = cache.sigmoid
    # the clamp is flat outside [eps, 1 - eps]
    inside = ((s >= PROBABILITY_EPSILON) & (s <= 1.0 - PROBABILITY_EPSILON)).to(DTYPE)
    d_z = d_prob * s * (1.0 - s) * inside

    n_layers = params.n_layers
    grad_w: List[Optional[Tensor]] = [None] * n_layers
    grad_b: List[Optional[Tensor]] = [None] * n_layers
    for k in reversed(range(n_layers)):
        grad_w[k] = cache.inputs[k].T @ d_z
        if k < n_layers - 1:
            grad_b[k] = d_z.sum(dim=0)
        if k > 0:
            d_a = d_z @ params.layer_weights[k].T
            if cache.masks[k - 1] is not None:
                d_a = d_a * cache.masks[k - 1]
            d_z = d_a * (cache.pre_activations[k - 1] > 0).to(DTYPE)

    return loss, GradientBundle(grad_w, grad_b)


def central_difference(fn: Callable[[Tensor], Union[Tensor, float]], x: Union[Tensor, float],
                       h: float = 1e-5) -> Tensor:
    """(f(x + h e_i) - f(x - h e_i)) / 2h for every entry i of x."""
    if h <= 0:
        raise ConfigurationError(f"the step h must be positive, got {h}")
    x = torch.as_tensor(x, dtype=DTYPE)
    grad = torch.zeros_like(x)
    flat_grad = grad.view(-1)
    for i in range(x.numel()):
        x_plus = x.clone()
        x_minus = x.clone()
        x_plus.view(-1)[i] += h
        x_minus.view(-1)[i] -= h
        flat_grad[i] = (float(fn(x_plus)) - float(fn(x_minus))) / (2.0 * h)
    return grad


def finite_diff_grad(params: ModelParams, features: Tensor, targets: Tensor, loss_config: LossConfig,
                     h: float = 1e-5, training_mode: bool = False, seed: int = 0) -> GradientBundle:
    """Central-difference estimate of :func:`backward`'s gradient, the test oracle."""
    if h <= 0:
        raise ConfigurationError(f"the step h must be positive, got {h}")
    targets = torch.as_tensor(targets, dtype=DTYPE)
    flat = params.tensors()

    grads = []
    for index, tensor in enumerate(flat):
        def loss_at(candidate: Tensor, index=index) -> Tensor:
            tensors = list(flat)
            tensors[index] = candidate
            probabilities = forward(params.replace(tensors), features, training_mode, seed)
            return loss_value(loss_config, targets, probabilities)

        grads.append(central_difference(loss_at, tensor, h))
    return GradientBundle.from_tensors(grads, params.n_layers)


def max_relative_error(a: GradientBundle, b: GradientBundle, floor: float = 1e-5) -> float:
    r"""
    max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)

    The floor turns the comparison into an absolute one for near-zero partials, where the
    central difference is dominated by round-off.
    """
    worst = 0.0
    for x, y in zip(a.tensors(), b.tensors()):
        if x.shape != y.shape:
            raise ShapeError(f"gradient shapes {tuple(x.shape)} and {tuple(y.shape)} differ")
        scale = torch.maximum(torch.maximum(x.abs(), y.abs()), torch.full_like(x, floor))
        worst = max(worst, float(((x - y).abs() / scale).max()))
    return worst
