"""Assorted project utilities"""

import logging
import os
import sys
from fractions import Fraction
from json import dumps
from typing import Any, Optional

import numpy as np
import pandas as pd
from ubiquerg import expandpath

from .const import FLOAT_FORMAT
from .exceptions import InvalidParamsError

_LOGGER = logging.getLogger(__name__)


def parse_rational(text: str) -> Fraction:
    """
    Parse an exact rational from text.

    Integers, "p/q" and terminating decimals ("0.25", "1e-3") are accepted;
    a decimal is read as the exact fraction it denotes.

    :param str text: the literal
    :return Fraction: its value
    :raise InvalidParamsError: if the literal is not a finite rational
    """
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidParamsError(f"Not an exact rational: '{text}' ({e})")


def rational_to_str(value: Fraction) -> str:
    """Render as "p/q", denominators of 1 included"""
    return f"{value.numerator}/{value.denominator}"


def to_jsonable(obj: Any) -> Any:
    """
    Recursively convert numpy scalars and arrays, tuples and Fractions into
    plain JSON types.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return rational_to_str(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def dump_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip float repr"""
    return dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def render_frame(df: pd.DataFrame, fmt: str) -> str:
    """
    Serialize a table.

    :param pandas.DataFrame df: the table
    :param str fmt: one of "json", "csv" or "table"
    :return str: the text
    """
    if fmt == "csv":
        return df.to_csv(index=False, float_format=FLOAT_FORMAT)
    if fmt == "table":
        return df.to_string(index=False, float_format=lambda v: f"{v:.10g}") + "\n"
    return dump_json(df.to_dict(orient="list"))


def make_subdirectories(path: str) -> None:
    """
    Create the parent directories of a file path

    :param str path: file path to create directories for
    """
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_output(text: str, path: Optional[str] = None) -> None:
    """
    Write a result to a file, or to stdout when no path is given.

    :param str text: serialized result
    :param str path: destination, environment variables and ~ are expanded
    """
    if path is None:
        sys.stdout.write(text)
        return
    path = expandpath(path)
    make_subdirectories(path)
    with open(path, "w") as f:
        f.write(text)
    _LOGGER.info(f"Wrote results to: {path}")
