"""Empirical cdf and empirical copula transforms (per-column rank maps)."""

import numpy as np

from .errors import InvalidInputError


def as_sample(data, min_rows: int = 2, name: str = "sample") -> np.ndarray:
    """Coerce input to a float matrix of shape (n, d), observations as rows.

    A 1-D input is treated as a single column.  Non-finite entries are
    rejected with the offending position named.
    """
    m = np.asarray(data, dtype=float)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise InvalidInputError(f"{name} must be 1-D or 2-D, got {m.ndim} dimensions")
    n, d = m.shape
    if n < min_rows:
        raise InvalidInputError(f"{name} needs at least {min_rows} rows, got {n}")
    if d < 1:
        raise InvalidInputError(f"{name} needs at least one column")
    if not np.all(np.isfinite(m)):
        r, c = np.argwhere(~np.isfinite(m))[0]
        raise InvalidInputError(f"{name} has a non-finite entry at row {r}, column {c}")
    return m


def empirical_cdf(values) -> np.ndarray:
    """Fraction of entries less than or equal to each entry.

    ``out[i] = #{j : v[j] <= v[i]} / n``, so tied values all receive the
    maximum rank of their tie group and the output lies in (0, 1] (the
    sample maximum always maps to exactly 1).  Cost O(n log n).
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise InvalidInputError(f"expected a 1-D vector, got {v.ndim} dimensions")
    if v.size < 1:
        raise InvalidInputError("empty vector")
    if not np.all(np.isfinite(v)):
        i = int(np.argwhere(~np.isfinite(v))[0][0])
        raise InvalidInputError(f"non-finite entry at position {i}")
    ordered = np.sort(v)
    return np.searchsorted(ordered, v, side="right") / v.size


def copula_transform(sample) -> np.ndarray:
    """Column-wise empirical cdf of a sample matrix.

    Ranks depend only on the ordering within each column, so strictly
    increasing per-column transforms of the input leave the output
    bit-for-bit unchanged.  With distinct values each output column is a
    permutation of {1/n, 2/n, ..., 1}.
    """
    m = as_sample(sample)
    out = np.empty_like(m)
    for j in range(m.shape[1]):
        out[:, j] = empirical_cdf(m[:, j])
    return out
