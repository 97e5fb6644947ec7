"""Canonical correlations via per-side whitening and an SVD of the cross block.

The textbook stacked eigenproblem for canonical pairs is numerically
fragile when a covariance is ill conditioned, which sine/cosine feature
pairs often are.  Instead each covariance is eigendecomposed, directions
whose raw eigenvalue falls below a relative cutoff are dropped, a relative
ridge stabilises the inverse square root on the kept subspace, and the
singular values of the whitened cross-covariance are the correlations.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, InvalidInputError

#: Relative eigenvalue floor: directions below max(RANK_CUTOFF, ridge)
#: times (trace / p) of their side's covariance are dropped, not inverted.
RANK_CUTOFF = 1e-12

#: Singular values may exceed 1 by at most this before it is an error.
CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class CcaResult:
    """Canonical correlations, sorted descending, with bookkeeping.

    ranks holds the retained dimension of each side after the cutoff;
    ridge holds the absolute ridge actually added per side.  The number of
    correlations equals min(ranks).
    """

    correlations: np.ndarray
    ranks: tuple
    ridge: tuple


def _as_feature_matrix(a, name):
    m = np.asarray(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise InvalidInputError(f"{name} must be 1-D or 2-D")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return m


def _whitener(cov, ridge, side):
    """Inverse square root of cov on its numerically non-null subspace.

    Directions whose eigenvalue falls below the ridge carry no usable
    signal once regularised (their whitened variance is damped toward
    zero), so the rank cutoff is the larger of RANK_CUTOFF and the ridge,
    both relative to the mean eigenvalue.  Counting sub-ridge directions
    without signal would misstate the effective rank downstream.

    Returns (w, rank, ridge_abs) with w of shape (p, rank) such that
    w.T @ cov @ w is approximately the identity on the kept subspace.
    """
    p = cov.shape[0]
    mean_eig = float(np.trace(cov)) / p
    if mean_eig <= 0:
        raise DegenerateDataError(f"covariance of the {side} input has zero trace "
                                  "(all columns constant)")
    eigvals, eigvecs = np.linalg.eigh(cov)
    cutoff = max(RANK_CUTOFF, ridge) * mean_eig
    keep = eigvals > cutoff
    if ridge == 0 and not keep.all():
        raise DegenerateDataError(
            f"covariance of the {side} input is numerically singular; "
            "supply a positive ridge")
    ridge_abs = ridge * mean_eig
    w = eigvecs[:, keep] / np.sqrt(eigvals[keep] + ridge_abs)
    return w, int(np.count_nonzero(keep)), ridge_abs


def canonical_correlations(a, b, ridge: float = 1e-8) -> CcaResult:
    """All canonical correlations between the columns of two matrices.

    Parameters
    ----------
    a, b : array-like, shape (n, p) and (n, q)
        Paired observations (rows).  Columns are centered internally.
    ridge : float
        Relative regularisation; each side's covariance receives
        ``ridge * mean(diag)`` times the identity before inversion.  With
        ridge 0 a numerically singular side raises instead of truncating.

    Returns
    -------
    CcaResult
        Correlations sorted descending, each in [0, 1].
    """
    A = _as_feature_matrix(a, "first input")
    B = _as_feature_matrix(b, "second input")
    if A.shape[0] != B.shape[0]:
        raise InvalidInputError(
            f"row counts differ: {A.shape[0]} vs {B.shape[0]}")
    n = A.shape[0]
    if n < 2:
        raise InvalidInputError("need at least 2 rows")
    if not (isinstance(ridge, (int, float)) and ridge >= 0):
        raise InvalidInputError("ridge must be a nonnegative real")
    p, q = A.shape[1], B.shape[1]
    if n <= max(p, q):
        warnings.warn(
            f"only {n} rows for {max(p, q)} columns; correlations are "
            "unreliable without substantial regularisation", stacklevel=2)

    Ac = A - A.mean(axis=0)
    Bc = B - B.mean(axis=0)
    cxx = (Ac.T @ Ac) / (n - 1)
    cyy = (Bc.T @ Bc) / (n - 1)
    cxy = (Ac.T @ Bc) / (n - 1)

    wx, rank_x, ridge_x = _whitener(cxx, ridge, "first")
    wy, rank_y, ridge_y = _whitener(cyy, ridge, "second")

    svals = np.linalg.svd(wx.T @ cxy @ wy, compute_uv=False)
    if svals.size and svals[0] > 1.0 + CLAMP_TOL:
        raise DegenerateDataError(
            f"leading correlation {svals[0]!r} exceeds 1 beyond numerical tolerance")
    correlations = np.clip(svals, 0.0, 1.0)
    return CcaResult(correlations, (rank_x, rank_y), (ridge_x, ridge_y))
