"""Small numeric and serialization helpers used across modules."""

from __future__ import annotations

import math
from typing import Any

import numpy as np

#: Significant digits used everywhere a float leaves the process (files, JSON).
SIG_DIGITS = 9


def fmt9(x: float) -> str:
    """Format a float with 9 significant digits (shortest %g form)."""
    return f"{float(x):.{SIG_DIGITS}g}"


def sig9(x: float) -> float:
    """Round a float to 9 significant digits by a format/parse round trip."""
    return float(fmt9(x))


def quantize9(arr: np.ndarray) -> np.ndarray:
    """Round every element of an array to 9 significant digits.

    Done once at generation time so that writing with :func:`fmt9` and
    re-parsing reproduces the array bit for bit.
    """
    flat = np.asarray(arr, dtype=np.float64).ravel()
    out = np.fromiter((sig9(v) for v in flat), dtype=np.float64, count=flat.size)
    return out.reshape(np.shape(arr))


def round_floats(obj: Any) -> Any:
    """Recursively round floats in a JSON-ready structure to 9 significant digits.

    NaN becomes ``None`` (JSON has no NaN). Containers are rebuilt, so the
    result is safe to hand to ``json.dumps`` directly.
    """
    if isinstance(obj, float):
        return None if math.isnan(obj) else sig9(obj)
    if isinstance(obj, np.floating):
        return round_floats(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [round_floats(v) for v in obj.tolist()]
    return obj
