from .EnhancedModule import EnhancedModule
from .DenseHead import DenseHead, ModelParams, GradientBundle, init_params, forward, backward
from .optim import AdaMax, OptimizerState, adamax_step

__all__ = [
    "EnhancedModule",
    "DenseHead",
    "ModelParams",
    "GradientBundle",
    "init_params",
    "forward",
    "backward",
    "AdaMax",
    "OptimizerState",
    "adamax_step",
]
