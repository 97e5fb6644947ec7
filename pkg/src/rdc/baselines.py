"""Classical dependence measures: Pearson, Spearman, Kendall, distance correlation."""

import math

import numpy as np
from scipy.spatial.distance import cdist

from .copula import as_sample, empirical_cdf
from .errors import CapacityError, DegenerateDataError, InvalidInputError


def _paired_vectors(x, y):
    out = []
    for name, v in (("x", x), ("y", y)):
        a = np.asarray(v, dtype=float)
        if a.ndim == 2 and a.shape[1] == 1:
            a = a[:, 0]
        if a.ndim != 1:
            raise InvalidInputError(f"{name} must be a scalar sample (one column)")
        if a.size < 2:
            raise InvalidInputError(f"{name} needs at least 2 entries")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError(f"{name} contains non-finite entries")
        out.append(a)
    vx, vy = out
    if vx.size != vy.size:
        raise InvalidInputError(f"lengths differ: {vx.size} vs {vy.size}")
    return vx, vy


def pearson(x, y) -> float:
    """Sample correlation coefficient, in [-1, 1]."""
    vx, vy = _paired_vectors(x, y)
    xc = vx - vx.mean()
    yc = vy - vy.mean()
    sx = math.sqrt(float(xc @ xc))
    sy = math.sqrt(float(yc @ yc))
    if sx == 0.0 or sy == 0.0:
        side = "x" if sx == 0.0 else "y"
        raise DegenerateDataError(f"{side} has zero variance")
    r = float(xc @ yc) / (sx * sy)
    return min(1.0, max(-1.0, r))


def spearman(x, y) -> float:
    """Rank correlation: Pearson applied to the empirical cdf of each side.

    Ties take the maximum rank of their group, matching the copula
    transform used elsewhere in this package.
    """
    vx, vy = _paired_vectors(x, y)
    return pearson(empirical_cdf(vx), empirical_cdf(vy))


def _tie_pairs(v) -> int:
    _, counts = np.unique(v, return_counts=True)
    counts = counts.astype(np.int64)
    return int(np.sum(counts * (counts - 1) // 2))


def _joint_tie_pairs(vx, vy) -> int:
    _, counts = np.unique(np.column_stack([vx, vy]), axis=0, return_counts=True)
    counts = counts.astype(np.int64)
    return int(np.sum(counts * (counts - 1) // 2))


def _concordance_pairs(vx, vy) -> int:
    """Exact sum over pairs i<j of sign(dx)*sign(dy), O(n^2) but chunked."""
    n = vx.size
    total = 0
    chunk = max(1, 4_000_000 // n)
    for start in range(0, n, chunk):
        xs = vx[start:start + chunk, None]
        ys = vy[start:start + chunk, None]
        sx = (vx[None, :] > xs).astype(np.int8) - (vx[None, :] < xs).astype(np.int8)
        sy = (vy[None, :] > ys).astype(np.int8) - (vy[None, :] < ys).astype(np.int8)
        total += int((sx.astype(np.int64) * sy).sum())
    # every unordered pair was visited twice (and i == j contributed 0)
    return total // 2


_MERGE_BASE = 32


def _inversions(a) -> int:
    """Count strict inversions of a 1-D array in O(n log n).

    Bottom-up mergesort; blocks of _MERGE_BASE are seeded by a broadcast
    pair count, then adjacent sorted blocks are merged with vectorised
    rank lookups.  The array is padded to a block multiple with +inf,
    which never creates an inversion because pads stay at the tail.
    """
    a = np.asarray(a, dtype=float)
    n = a.size
    if n < 2:
        return 0
    padded_len = ((n + _MERGE_BASE - 1) // _MERGE_BASE) * _MERGE_BASE
    buf = np.full(padded_len, np.inf)
    buf[:n] = a

    blocks = buf.reshape(-1, _MERGE_BASE)
    greater = blocks[:, :, None] > blocks[:, None, :]
    upper = np.triu(np.ones((_MERGE_BASE, _MERGE_BASE), dtype=bool), k=1)
    count = int(np.count_nonzero(greater & upper))
    buf = np.sort(blocks, axis=1).reshape(-1)

    width = _MERGE_BASE
    while width < padded_len:
        merged = np.empty_like(buf)
        for lo in range(0, padded_len, 2 * width):
            mid = lo + width
            hi = min(lo + 2 * width, padded_len)
            left = buf[lo:mid]
            right = buf[mid:hi]
            if right.size == 0:
                merged[lo:hi] = left
                continue
            le_counts = np.searchsorted(left, right, side="right")
            count += int(np.sum(left.size - le_counts, dtype=np.int64))
            block = merged[lo:hi]
            block[np.arange(right.size) + le_counts] = right
            lt_counts = np.searchsorted(right, left, side="left")
            block[np.arange(left.size) + lt_counts] = left
        buf = merged
        width *= 2
    return count


def _concordance_merge(vx, vy) -> int:
    """Exact concordant-minus-discordant count via inversion counting.

    Sorting by (x, y) makes discordant pairs exactly the strict inversions
    of the y sequence; pairs tied in x or y are removed by
    inclusion-exclusion over the tie counts.
    """
    n = vx.size
    order = np.lexsort((vy, vx))
    discordant = _inversions(vy[order])
    n0 = n * (n - 1) // 2
    n1 = _tie_pairs(vx)
    n2 = _tie_pairs(vy)
    n3 = _joint_tie_pairs(vx, vy)
    return n0 - n1 - n2 + n3 - 2 * discordant


def kendall(x, y, method: str = "auto") -> float:
    """Tie-corrected Kendall correlation (tau-b), in [-1, 1].

    method "pairs" is the quadratic pair count, "merge" the O(n log n)
    counter; "auto" picks by size.  Both paths produce identical integer
    counts and share the final arithmetic, so they agree bit for bit.
    """
    vx, vy = _paired_vectors(x, y)
    n = vx.size
    if method == "auto":
        method = "merge" if n > 128 else "pairs"
    if method == "pairs":
        cmd = _concordance_pairs(vx, vy)
    elif method == "merge":
        cmd = _concordance_merge(vx, vy)
    else:
        raise InvalidInputError(f"unknown method {method!r}; expected auto, pairs or merge")
    n0 = n * (n - 1) // 2
    n1 = _tie_pairs(vx)
    n2 = _tie_pairs(vy)
    if n0 == n1 or n0 == n2:
        side = "x" if n0 == n1 else "y"
        raise DegenerateDataError(f"all values tied on the {side} side")
    return cmd / math.sqrt(float(n0 - n1) * float(n0 - n2))


def dcor(x, y, max_rows: int = 10_000) -> float:
    """Distance correlation between two (possibly multivariate) samples.

    The original V-statistic form: pairwise Euclidean distance matrices
    are double-centered and correlated.  Returns 0 whenever a distance
    variance is 0 (e.g. a constant sample).  O(n^2) time and memory, so
    inputs beyond max_rows raise CapacityError instead of thrashing.
    """
    X = as_sample(x, min_rows=2, name="x")
    Y = as_sample(y, min_rows=2, name="y")
    if X.shape[0] != Y.shape[0]:
        raise InvalidInputError(f"x has {X.shape[0]} rows but y has {Y.shape[0]}")
    n = X.shape[0]
    if n > max_rows:
        raise CapacityError(
            f"{n} rows would need two {n}x{n} distance matrices "
            f"(~{2 * 8 * n * n / 1e9:.1f} GB); subsample to at most {max_rows} rows")

    def centered(m):
        d = cdist(m, m)
        d -= d.mean(axis=1, keepdims=True)
        d -= d.mean(axis=0, keepdims=True)
        d += d.mean()
        return d

    A = centered(X)
    B = centered(Y)
    dcov2 = float(np.vdot(A, B)) / (n * n)
    dvar_x = float(np.vdot(A, A)) / (n * n)
    dvar_y = float(np.vdot(B, B)) / (n * n)
    denom = math.sqrt(dvar_x * dvar_y)
    if denom <= 0.0 or dcov2 <= 0.0:
        return 0.0
    return math.sqrt(min(1.0, dcov2 / denom))
