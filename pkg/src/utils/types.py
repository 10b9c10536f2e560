# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 9:20
# @description:
from pathlib import Path
from typing import Union, Dict, Any, List, Sequence

import torch

# every tensor in the library is float64, the finite-difference oracle needs it
DTYPE = torch.float64

STEP_OUTPUT = Union[torch.Tensor, Dict[str, Any]]
EPOCH_OUTPUT = List[STEP_OUTPUT]
PathLike = Union[str, Path]
FloatSequence = Union[Sequence[float], torch.Tensor]
