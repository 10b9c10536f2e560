# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 20:20
# @description: the argparse grammar of the command line
import argparse
import sys
from typing import List, Tuple

from utils.errors import ConfigurationError

__all__ = ["UsageError", "build_parser", "parse_args", "parse_counts"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):

    def error(self, message: str):
        # usage problems are validation errors: usage on stderr, exit code 1
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


def parse_counts(text: str) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    r"""
    "P_A,N_A,P_B,N_B" -> ((P_A, N_A), (P_B, N_B)), every count a positive integer.
    """
    try:
        counts = [int(c) for c in text.split(",")]
    except ValueError:
        raise ConfigurationError(f"--counts expects four integers P_A,N_A,P_B,N_B, got {text!r}")
    if len(counts) != 4:
        raise ConfigurationError(f"--counts expects four integers P_A,N_A,P_B,N_B, got {len(counts)}")
    if any(c < 1 for c in counts):
        raise ConfigurationError(f"counts must be positive, got {counts}")
    return (counts[0], counts[1]), (counts[2], counts[3])


def _common(p: argparse.ArgumentParser, config_required: bool = True):
    if config_required:
        p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--out", default=None, help="output directory, results/<command> by default")
    p.add_argument("--force", action="store_true", help="overwrite a non-empty output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairness-target-detection",
                     description="fairness-aware multi-label target group detection")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    commands.required = True

    p = commands.add_parser("gen-data", help="generate a synthetic dataset from a SyntheticSpec")
    _common(p)
    p.add_argument("--format", choices=("csv", "npz"), default="csv")

    p = commands.add_parser("train", help="train one head and evaluate it on the test split")
    _common(p)
    p.add_argument("--verbose", action="store_true", help="draw the progress bar")

    p = commands.add_parser("eval", help="evaluate saved parameters")
    _common(p, config_required=False)
    p.add_argument("--params", required=True, help="params.pt written by train")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="train config, its test split is evaluated")
    source.add_argument("--dataset", help="dataset file, every row is evaluated")
    p.add_argument("--threshold", type=float, default=None)

    for name, text in (("compare", "compare losses over several seeds"), ("sweep", "sweep the fairness weight")):
        p = commands.add_parser(name, help=text)
        _common(p)
        p.add_argument("--jobs", type=int, default=1, help="runs trained concurrently")

    p = commands.add_parser("verify", help="check the parity results numerically")
    _common(p, config_required=False)
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--theorem", type=int, choices=(1, 2))
    target.add_argument("--table2", action="store_true", help="rebuild the two-group rate table")
    p.add_argument("--counts", help="P_A,N_A,P_B,N_B")
    p.add_argument("--resolution", type=int, default=1001)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--exclude-random-line", action="store_true")

    p = commands.add_parser("stats", help="prevalence statistics and class weights of a dataset")
    _common(p, config_required=False)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="SyntheticSpec to generate")
    source.add_argument("--dataset", help="dataset file")

    return parser


def parse_args(argv: List[str]) -> argparse.Namespace:
    return build_parser().parse_args(argv)
