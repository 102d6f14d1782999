"""Parameter vector helpers.

Every parameter, regressor and error vector in TunerSim is a one-dimensional
float64 numpy array. Inner products go through :func:`inner`, which returns the
correctly rounded sum of the element products so that outputs and prediction
errors do not depend on the BLAS build.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from tunersim.core.errors import InvalidSpecError

Vector = NDArray[np.float64]


def as_vector(values: ArrayLike, name: str = "vector", dim: int | None = None) -> Vector:
    """Coerce values to a 1-D float64 array, optionally checking its length."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InvalidSpecError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise InvalidSpecError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    return arr


def zeros(dim: int) -> Vector:
    """Zero parameter vector."""
    return np.zeros(dim, dtype=np.float64)


def inner(a: Vector, b: Vector) -> float:
    """Correctly rounded inner product of two equal-length vectors."""
    if a.shape != b.shape:
        raise InvalidSpecError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    with np.errstate(over="ignore", invalid="ignore"):
        products = np.multiply(a, b)
        if not np.isfinite(products).all():
            return float(products.sum())
        try:
            return math.fsum(products.tolist())
        except OverflowError:
            return float(products.sum())


def sq_norm(a: Vector) -> float:
    """Squared Euclidean norm."""
    return inner(a, a)


def norm(a: Vector) -> float:
    """Euclidean norm."""
    return math.sqrt(sq_norm(a))


def all_finite(*arrays: Vector | float) -> bool:
    """True when every entry of every argument is finite."""
    return all(bool(np.isfinite(a).all()) for a in arrays)


def check_same_dim(vectors: Sequence[Vector], names: Sequence[str]) -> int:
    """Return the shared dimension of vectors or raise InvalidSpecError."""
    dims = {v.shape[0] for v in vectors}
    if len(dims) > 1:
        shapes = ", ".join(f"{n}={v.shape[0]}" for n, v in zip(names, vectors))
        raise InvalidSpecError(f"dimension mismatch: {shapes}")
    return dims.pop() if dims else 0
