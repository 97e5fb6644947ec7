"""The randomized dependence coefficient and its independence tests.

The coefficient is the largest canonical correlation between random
sinusoidal features of the empirical copulas of the two samples.  It lies
in [0, 1], is invariant under strictly increasing per-column transforms of
either sample, and for a fixed seed is a deterministic function of the
inputs.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial.distance import pdist
from scipy.stats import chi2

from .cca import canonical_correlations
from .copula import as_sample, copula_transform
from .errors import DegenerateDataError, InvalidInputError
from .randproj import BIAS_MODES, ProjectionParams, project
from .seeding import derive_seed

# Sub-stream tags hung off RdcParams.seed.  The x and y projections use
# independent streams; the scale heuristic and the permutation test get
# their own so that toggling one never perturbs another.
STREAM_PROJECT_X = 0
STREAM_PROJECT_Y = 1
STREAM_SCALE_X = 2
STREAM_SCALE_Y = 3
STREAM_PERMUTE = 4


@dataclass(frozen=True)
class RdcParams:
    """Coefficient parameters.

    s_x / s_y are the weight variances of the two feature maps; None means
    "resolve by the median heuristic on the copula-transformed side".
    ridge is relative (see canonical_correlations).
    """

    k: int = 10
    s_x: float | None = None
    s_y: float | None = None
    seed: int = 0
    ridge: float = 1e-8
    bias_mode: str = "normative"

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidInputError(f"k must be a positive integer, got {self.k!r}")
        for label, s in (("s_x", self.s_x), ("s_y", self.s_y)):
            if s is not None and not (math.isfinite(s) and s > 0):
                raise InvalidInputError(f"{label} must be a positive real or None, got {s!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidInputError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not (isinstance(self.ridge, (int, float)) and self.ridge >= 0):
            raise InvalidInputError(f"ridge must be a nonnegative real, got {self.ridge!r}")
        if self.bias_mode not in BIAS_MODES:
            raise InvalidInputError(
                f"bias_mode must be one of {BIAS_MODES}, got {self.bias_mode!r}")


@dataclass(frozen=True)
class RdcResult:
    """Coefficient plus the full canonical-correlation vector.

    params_used echoes the parameters with auto scales resolved to the
    values actually applied; coefficient always equals correlations[0].
    """

    coefficient: float
    correlations: np.ndarray
    params_used: RdcParams
    n: int


@dataclass(frozen=True)
class IndependenceTest:
    """Outcome of an independence test.

    dof is the chi-square degrees of freedom for the Bartlett method and
    None for the permutation method.  degenerate flags an infinite
    statistic caused by a canonical correlation of exactly 1.
    """

    statistic: float
    dof: int | None
    p_value: float
    method: str
    degenerate: bool = False


def median_heuristic(u, cap: int = 1000, seed: int = 0) -> float:
    """Median squared Euclidean distance over all row pairs.

    Above ``cap`` rows a uniform subsample of ``cap`` rows (without
    replacement, drawn from ``seed``) keeps the pair count bounded.  At or
    below the cap no randomness is consumed.
    """
    m = as_sample(u, min_rows=2, name="scale input")
    if not isinstance(cap, int) or cap < 2:
        raise InvalidInputError(f"cap must be an integer >= 2, got {cap!r}")
    if m.shape[0] > cap:
        idx = np.random.default_rng(seed).choice(m.shape[0], size=cap, replace=False)
        m = m[idx]
    med = float(np.median(pdist(m, "sqeuclidean")))
    if med <= 0:
        raise DegenerateDataError(
            "pairwise squared distances have zero median (rows effectively "
            "identical); supply an explicit scale")
    return med


def _resolve_scales(params: RdcParams, ux, uy) -> RdcParams:
    """Fill in auto scales from the median heuristic, per side."""
    s_x, s_y = params.s_x, params.s_y
    try:
        if s_x is None:
            s_x = median_heuristic(ux, seed=derive_seed(params.seed, STREAM_SCALE_X))
    except DegenerateDataError as exc:
        raise DegenerateDataError(f"x side: {exc}") from exc
    try:
        if s_y is None:
            s_y = median_heuristic(uy, seed=derive_seed(params.seed, STREAM_SCALE_Y))
    except DegenerateDataError as exc:
        raise DegenerateDataError(f"y side: {exc}") from exc
    return replace(params, s_x=s_x, s_y=s_y)


def projection_seeds(seed: int) -> tuple[int, int]:
    """The derived (x side, y side) projection seeds for a base seed."""
    return (derive_seed(seed, STREAM_PROJECT_X), derive_seed(seed, STREAM_PROJECT_Y))


def _features(ux, uy, params: RdcParams):
    seed_x, seed_y = projection_seeds(params.seed)
    fx = project(ux, ProjectionParams(params.k, params.s_x, seed_x), params.bias_mode)
    fy = project(uy, ProjectionParams(params.k, params.s_y, seed_y), params.bias_mode)
    return fx, fy


def _prepare(x, y, params: RdcParams):
    X = as_sample(x, min_rows=2, name="x")
    Y = as_sample(y, min_rows=2, name="y")
    if X.shape[0] != Y.shape[0]:
        raise InvalidInputError(f"x has {X.shape[0]} rows but y has {Y.shape[0]}")
    ux = copula_transform(X)
    uy = copula_transform(Y)
    resolved = _resolve_scales(params, ux, uy)
    fx, fy = _features(ux, uy, resolved)
    return fx, fy, resolved, X.shape[0]


def rdc(x, y, params: RdcParams | None = None) -> RdcResult:
    """Randomized dependence coefficient between two samples.

    Parameters
    ----------
    x, y : array-like, shape (n, p) and (n, q)
        Paired observations; 1-D inputs are single columns.
    params : RdcParams, optional
        Feature count, scales, seed, ridge, phase convention.

    Returns
    -------
    RdcResult
        coefficient is the largest canonical correlation between the two
        random feature sets; correlations holds the full vector.
    """
    p = params if params is not None else RdcParams()
    fx, fy, resolved, n = _prepare(x, y, p)
    cc = canonical_correlations(fx, fy, resolved.ridge)
    return RdcResult(float(cc.correlations[0]), cc.correlations, resolved, n)


def bartlett_test(correlations, k: int, n: int) -> IndependenceTest:
    """Chi-square test that all canonical correlations vanish.

    statistic = ((2k+3)/2 - n) * log prod(1 - rho_i^2), referred to a
    chi-square with k^2 degrees of freedom, where k must equal the number
    of correlations supplied.  The leading factor is negative for
    admissible n and the log term nonpositive, so the statistic is
    nonnegative.  A correlation of exactly 1 yields an infinite statistic,
    reported as p_value 0 with the degenerate flag set.
    """
    rho = np.asarray(correlations, dtype=float)
    if rho.ndim != 1 or rho.size == 0:
        raise InvalidInputError("correlations must be a nonempty 1-D vector")
    if k != rho.size:
        raise InvalidInputError(
            f"k ({k}) must equal the number of canonical correlations ({rho.size})")
    if np.any((rho < 0) | (rho > 1)) or not np.all(np.isfinite(rho)):
        raise InvalidInputError("correlations must lie in [0, 1]")
    if not n > (2 * k + 3) / 2:
        raise InvalidInputError(
            f"sample size {n} too small for k={k}; need n > {(2 * k + 3) / 2}")
    dof = k * k
    if np.any(rho == 1.0):
        return IndependenceTest(math.inf, dof, 0.0, "bartlett", degenerate=True)
    statistic = ((2 * k + 3) / 2 - n) * float(np.sum(np.log1p(-rho * rho)))
    return IndependenceTest(statistic, dof, float(chi2.sf(statistic, dof)), "bartlett")


def rdc_independence_test(x, y, params: RdcParams | None = None) -> tuple[RdcResult, IndependenceTest]:
    """Coefficient and Bartlett test in one pass."""
    result = rdc(x, y, params)
    test = bartlett_test(result.correlations, result.correlations.size, result.n)
    return result, test


def permutation_test(x, y, params: RdcParams | None = None, n_perm: int = 500,
                     seed: int | None = None) -> IndependenceTest:
    """Permutation null for the coefficient.

    The copulas, resolved scales, and projection draws are computed once
    and held fixed; each permutation reshuffles the rows of the y-side
    feature matrix.  p = (1 + #{permuted >= observed}) / (1 + n_perm).
    The statistic reported is the observed coefficient.
    """
    if not isinstance(n_perm, int) or n_perm < 1:
        raise InvalidInputError(f"n_perm must be a positive integer, got {n_perm!r}")
    p = params if params is not None else RdcParams()
    fx, fy, resolved, n = _prepare(x, y, p)
    observed = float(canonical_correlations(fx, fy, resolved.ridge).correlations[0])
    perm_seed = derive_seed(p.seed, STREAM_PERMUTE) if seed is None else seed
    rng = np.random.default_rng(perm_seed)
    exceed = 0
    for _ in range(n_perm):
        shuffled = fy[rng.permutation(n)]
        top = float(canonical_correlations(fx, shuffled, resolved.ridge).correlations[0])
        if top >= observed:
            exceed += 1
    return IndependenceTest(observed, None, (1 + exceed) / (1 + n_perm), "permutation")
