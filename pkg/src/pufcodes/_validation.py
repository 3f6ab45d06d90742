from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import UsageError


def check_bits(X, n: int, name: str = "X") -> np.ndarray:
    """2-D array of 0/1 rows of width ``n``; a single row is promoted."""
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[None, :]
    X = check_array(X, dtype=np.int64, ensure_2d=True)
    if X.shape[1] != n:
        raise UsageError(f"{name} rows must have {n} bits, got {X.shape[1]}")
    if np.any((X != 0) & (X != 1)):
        raise UsageError(f"{name} must contain only 0 and 1")
    return X.astype(np.uint8)


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise UsageError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
