"""Argument checks shared by the samplers, theory functions and estimators."""
from __future__ import annotations

import math
import numbers

import numpy as np

from ._errors import ParameterError, StatisticsError


def check_int(value, name: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ParameterError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ParameterError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_edge_size(n, d) -> None:
    d = check_int(d, "d", 2)
    check_int(n, "n", d)


def check_probability(p, name: str = "p") -> float:
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a number") from None
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ParameterError(f"{name} must lie in [0, 1], got {p}")
    return p


def check_positive(x, name: str) -> float:
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise ParameterError(f"{name} must be positive and finite, got {x}")
    return x


def check_samples(values, minimum: int = 1, name: str = "samples") -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise StatisticsError(f"{name} is empty")
    if arr.size < minimum:
        raise StatisticsError(f"{name} has {arr.size} values, at least {minimum} required")
    if not np.all(np.isfinite(arr)):
        raise StatisticsError(f"{name} contains non-finite values")
    return arr
