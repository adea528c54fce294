"""Input validation helpers used across the package."""

import math

import numpy as np

from .errors import DomainError

__all__ = [
    "check_positive",
    "check_nonnegative",
    "check_unit_open",
    "check_finite_scalar",
    "check_observations",
]


def check_finite_scalar(value, name="value"):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


def check_positive(value, name="value"):
    value = check_finite_scalar(value, name)
    if value <= 0:
        raise DomainError(f"{name} must be > 0, got {value}")
    return value


def check_nonnegative(value, name="value"):
    value = check_finite_scalar(value, name)
    if value < 0:
        raise DomainError(f"{name} must be >= 0, got {value}")
    return value


def check_unit_open(value, name="level"):
    value = check_finite_scalar(value, name)
    if not 0.0 < value < 1.0:
        raise DomainError(f"{name} must lie in (0, 1), got {value}")
    return value


def check_observations(X, d=1):
    """Coerce raw observations to a finite float array of shape (m,) or (m, d).

    Accepts any sequence of scalars (d == 1) or of length-d vectors.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 0:
        X = X.reshape(1)
    if d == 1:
        if X.ndim == 2 and X.shape[1] == 1:
            X = X[:, 0]
        if X.ndim != 1:
            raise DomainError(f"expected 1-d observations, got shape {X.shape}")
    else:
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2 or X.shape[1] != d:
            raise DomainError(
                f"expected observations of dimension {d}, got shape {X.shape}"
            )
    if X.shape[0] == 0:
        raise DomainError("at least one observation is required")
    if not np.all(np.isfinite(X)):
        raise DomainError("observations must be finite")
    return X
