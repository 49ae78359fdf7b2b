"""Inverse curvature flows on starshaped radial graphs.

Configs and shapes are plain dicts with the same schema as the JSON files
read by the ``quermass`` command-line tool.
"""

import json

from . import _core
from ._core import (
    ConfigError,
    Error,
    InvalidInput,
    NumericalError,
    cnk,
    elem_sym,
    elem_sym_all,
    in_gamma_k,
    iso_ratio,
    iso_ratio_ball,
    newton_gap,
    quermass,
    roundness,
    suites,
    verify,
)

__all__ = [
    "ConfigError",
    "Error",
    "InvalidInput",
    "NumericalError",
    "cnk",
    "elem_sym",
    "elem_sym_all",
    "geometry",
    "in_gamma_k",
    "iso_ratio",
    "iso_ratio_ball",
    "make_shape",
    "newton_gap",
    "normalize_config",
    "quermass",
    "roundness",
    "run",
    "suites",
    "verify",
]


def make_shape(shape, n, intervals):
    """Radii of a shape dict such as {"type": "ellipse", "params": {"a": 2}}."""
    return _core.make_shape(json.dumps(shape), n, intervals)


def geometry(radii, n):
    return _core.geometry(list(radii), n)


def run(config):
    """Integrates the flow described by a config dict; returns a dict with
    status, columns, rows (2-D array) and the final radii."""
    return _core.run_json(json.dumps(config))


def normalize_config(config):
    """Config with every default written out."""
    return json.loads(_core.normalize_config_json(json.dumps(config)))
