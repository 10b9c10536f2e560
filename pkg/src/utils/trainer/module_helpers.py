# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 17:30
# @description: tell whether a model replaced one of the optional EnhancedModule hooks
from functools import partial
from typing import Optional, Type
from unittest.mock import Mock

from nn.EnhancedModule import EnhancedModule

__all__ = ["is_overridden"]


def _unwrap(attr):
    # functools.wraps, Mock(wraps=...) and partial all hide the function that actually runs
    if hasattr(attr, "__wrapped__"):
        return attr.__wrapped__
    if isinstance(attr, Mock):
        # noinspection PyProtectedMember
        return attr._mock_wraps
    if isinstance(attr, partial):
        return attr.func
    return attr


def is_overridden(method_name: str, instance: Optional[object], parent: Type[object] = EnhancedModule) -> bool:
    if instance is None:
        return False
    parent_attr = getattr(parent, method_name, None)
    if parent_attr is None:
        raise ValueError(f"{parent.__name__} does not define {method_name}")

    instance_attr = _unwrap(getattr(instance, method_name, None))
    code = getattr(instance_attr, "__code__", None)
    if code is None:
        return False
    return code is not parent_attr.__code__
