# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 9:31
# @description: JSON config loading for the pydantic models
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from utils.errors import ConfigurationError
from utils.types import PathLike

__all__ = ["load_config", "config_hash"]

Model = TypeVar("Model", bound=BaseModel)


def load_config(model: Type[Model], source: Union[PathLike, Dict[str, Any]]) -> Model:
    r"""
    :param model:    the pydantic model class to validate against
    :param source:   a path to a JSON file, or an already decoded dictionary
    :return:         the validated model
    """
    origin = "<dict>"
    if not isinstance(source, dict):
        origin = str(source)
        try:
            source = json.loads(Path(source).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigurationError(f"config file {origin} does not exist")
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"config file {origin} is not valid JSON: {e}")
    try:
        return model.model_validate(source)
    except ValidationError as e:
        raise ConfigurationError(f"invalid {model.__name__} in {origin}:\n{e}")


def config_hash(config: BaseModel) -> str:
    canonical = json.dumps(config.model_dump(mode="json", by_alias=True), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
