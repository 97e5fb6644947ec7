"""Random sinusoidal feature maps with seeded Gaussian directions."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

#: Accepted phase conventions.  "normative" draws uniform phases on
#: [-pi, pi]; "appended-normal" instead appends a constant-1 input column
#: whose normally distributed weight plays the role of the phase.
BIAS_MODES = ("normative", "appended-normal")


@dataclass(frozen=True)
class ProjectionParams:
    """Feature-map parameters.

    k is the number of random directions (the map emits 2k columns),
    s the variance of the Gaussian weights, seed the PCG64 seed.
    """

    k: int
    s: float
    seed: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidInputError(f"k must be a positive integer, got {self.k!r}")
        if not (isinstance(self.s, (int, float)) and math.isfinite(self.s) and self.s > 0):
            raise InvalidInputError(f"s must be a positive finite real, got {self.s!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidInputError(f"seed must be a nonnegative integer, got {self.seed!r}")


def draw_projection(d: int, params: ProjectionParams):
    """Draw the weight matrix and phase vector for inputs of dimension d.

    Returns ``(weights, phases)`` with weights of shape (d, k), entries
    i.i.d. Normal(0, s), and phases of length k, i.i.d. Uniform[-pi, pi].
    The stream is filled one direction at a time (all d weights of
    direction 1, then direction 2, ...) followed by all phases, so scaling
    s rescales the same underlying standard-normal draws by sqrt(s).
    """
    if d < 1:
        raise InvalidInputError(f"input dimension must be >= 1, got {d}")
    rng = np.random.default_rng(params.seed)
    weights = math.sqrt(params.s) * rng.standard_normal((params.k, d)).T
    phases = rng.uniform(-math.pi, math.pi, size=params.k)
    return weights, phases


def draw_appended_weights(d: int, params: ProjectionParams) -> np.ndarray:
    """Weights for the appended-constant-column variant, shape (d+1, k).

    All entries are Normal(0, s), filled one direction at a time; the last
    row multiplies a constant-1 column and acts as a normally distributed
    phase.  No uniform phases are drawn in this mode.
    """
    if d < 1:
        raise InvalidInputError(f"input dimension must be >= 1, got {d}")
    rng = np.random.default_rng(params.seed)
    return math.sqrt(params.s) * rng.standard_normal((params.k, d + 1)).T


def sine_cosine_features(u, weights, phases) -> np.ndarray:
    """Evaluate interleaved cosine/sine features of a sample.

    For row r and direction i with angle ``theta = u[r, :] @ weights[:, i]
    + phases[i]``, column 2i holds cos(theta) and column 2i+1 sin(theta).
    Output shape is (n, 2k) with every entry in [-1, 1] and paired entries
    satisfying cos^2 + sin^2 = 1.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 2:
        raise InvalidInputError("expected a 2-D input matrix")
    weights = np.asarray(weights, dtype=float)
    phases = np.asarray(phases, dtype=float)
    if weights.ndim != 2:
        raise InvalidInputError("weights must be a (d, k) matrix")
    if u.shape[1] != weights.shape[0]:
        raise InvalidInputError(
            f"input has {u.shape[1]} columns but weights expect {weights.shape[0]}"
        )
    if phases.shape != (weights.shape[1],):
        raise InvalidInputError("phases must have one entry per direction")
    theta = u @ weights + phases
    out = np.empty((u.shape[0], 2 * weights.shape[1]))
    out[:, 0::2] = np.cos(theta)
    out[:, 1::2] = np.sin(theta)
    return out


def project(u, params: ProjectionParams, bias_mode: str = "normative") -> np.ndarray:
    """Random sinusoidal projection of a copula-scale sample, shape (n, 2k)."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 2:
        raise InvalidInputError("expected a 2-D input matrix")
    if bias_mode == "normative":
        weights, phases = draw_projection(u.shape[1], params)
        return sine_cosine_features(u, weights, phases)
    if bias_mode == "appended-normal":
        weights = draw_appended_weights(u.shape[1], params)
        augmented = np.hstack([u, np.ones((u.shape[0], 1))])
        return sine_cosine_features(augmented, weights, np.zeros(params.k))
    raise InvalidInputError(f"unknown bias mode {bias_mode!r}; expected one of {BIAS_MODES}")
