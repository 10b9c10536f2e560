# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 20:05
# @description: atomic output files and the run manifest written next to them
import hashlib
import io
import json
import os
import platform
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pydantic
import sklearn
import torch
from pydantic import BaseModel

from utils.config import config_hash
from utils.errors import FairnessError
from utils.types import PathLike

__all__ = ["OverwriteRefusedError", "OutputDirectory", "utc_now"]


class OverwriteRefusedError(FairnessError):
    pass


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class OutputDirectory(object):
    r"""
    Collects the files of one command. Every file is written to a temporary name in the target
    directory and renamed into place, and :meth:`finish` adds ``manifest.json`` listing them all.
    """

    def __init__(self, path: PathLike, force: bool = False):
        self.path = Path(path)
        if self.path.exists() and not self.path.is_dir():
            raise OverwriteRefusedError(f"{self.path} exists and is not a directory")
        if self.path.is_dir() and any(self.path.iterdir()) and not force:
            raise OverwriteRefusedError(f"{self.path} is not empty, pass --force to overwrite")
        self.path.mkdir(parents=True, exist_ok=True)
        self.started_at = utc_now()
        self.outputs: Dict[str, str] = {}

    def write_bytes(self, name: str, data: bytes) -> Path:
        target = self.path / name
        fd, temp = tempfile.mkstemp(dir=self.path, prefix=f".{name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
            os.replace(temp, target)
        except BaseException:
            if os.path.exists(temp):
                os.remove(temp)
            raise
        self.outputs[name] = _sha256(data)
        return target

    def write_text(self, name: str, text: str) -> Path:
        return self.write_bytes(name, text.encode("utf-8"))

    def write_json(self, name: str, obj) -> Path:
        return self.write_text(name, json.dumps(obj, indent=2) + "\n")

    def write_tensor_dict(self, name: str, obj: dict) -> Path:
        buffer = io.BytesIO()
        torch.save(obj, buffer)
        return self.write_bytes(name, buffer.getvalue())

    def finish(self, command: str, argv: List[str], config: Optional[Union[BaseModel, dict]] = None,
               seed: Optional[int] = None) -> Path:
        if isinstance(config, BaseModel):
            config_dump, digest = config.model_dump(mode="json", by_alias=True), config_hash(config)
        elif config is not None:
            canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
            config_dump, digest = config, _sha256(canonical.encode("utf-8"))
        else:
            config_dump, digest = None, None
        manifest = {
            "command": command,
            "argv": list(argv),
            "config_hash": digest,
            "config": config_dump,
            "seed": seed,
            "num_threads": torch.get_num_threads(),
            "versions": {
                "python": platform.python_version(),
                "torch": torch.__version__,
                "numpy": np.__version__,
                "scikit-learn": sklearn.__version__,
                "pydantic": pydantic.VERSION,
            },
            "platform": sys.platform,
            "started_at": self.started_at,
            "finished_at": utc_now(),
            "outputs": dict(sorted(self.outputs.items())),
        }
        return self.write_json("manifest.json", manifest)
