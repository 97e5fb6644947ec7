"""Bivariate association patterns and surrogate resampling for power studies.

Each pattern draws the input uniformly on the unit interval and applies a
fixed shape plus zero-mean Gaussian noise; the circle is parametric and
noise perturbs both coordinates.  The shape formulas are declared here and
treated as configuration, not as universal constants.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

PATTERN_ORDER = (
    "linear",
    "parabolic",
    "cubic",
    "sine_low_freq",
    "sine_high_freq",
    "fourth_root",
    "circle",
    "step",
)

_SHAPES = {
    "linear": lambda x: x,
    "parabolic": lambda x: 4.0 * (x - 0.5) ** 2,
    "cubic": lambda x: 128.0 * (x - 1 / 3) ** 3 - 48.0 * (x - 1 / 3) ** 2 - 12.0 * (x - 1 / 3),
    "sine_low_freq": lambda x: np.sin(4.0 * np.pi * x),
    "sine_high_freq": lambda x: np.sin(16.0 * np.pi * x),
    "fourth_root": lambda x: x ** 0.25,
    "step": lambda x: (x > 0.5).astype(float),
}


@dataclass(frozen=True)
class PatternSample:
    """One generated bivariate sample with its provenance."""

    x: np.ndarray
    y: np.ndarray
    pattern: str
    noise_sd: float
    seed: int


def _check_pattern(pattern):
    if pattern not in PATTERN_ORDER:
        raise InvalidInputError(
            f"unknown pattern {pattern!r}; valid patterns: {', '.join(PATTERN_ORDER)}")


def generate(pattern: str, n: int, noise_sd: float, seed: int) -> PatternSample:
    """Draw n points from a pattern with additive Normal(0, noise_sd^2) noise.

    Deterministic given the seed.  Noise variates are drawn even at
    noise_sd 0 so the x draws are identical across noise levels for a
    fixed seed.
    """
    _check_pattern(pattern)
    if n < 2:
        raise InvalidInputError(f"n must be >= 2, got {n}")
    if not (noise_sd >= 0 and math.isfinite(noise_sd)):
        raise InvalidInputError(f"noise_sd must be a finite nonnegative real, got {noise_sd!r}")
    rng = np.random.default_rng(seed)
    if pattern == "circle":
        t = rng.uniform(0.0, 1.0, size=n)
        x = np.cos(2.0 * np.pi * t) / 2.0 + 0.5 + rng.normal(0.0, noise_sd, size=n)
        y = np.sin(2.0 * np.pi * t) / 2.0 + 0.5 + rng.normal(0.0, noise_sd, size=n)
    else:
        x = rng.uniform(0.0, 1.0, size=n)
        y = _SHAPES[pattern](x) + rng.normal(0.0, noise_sd, size=n)
    return PatternSample(x, y, pattern, float(noise_sd), int(seed))


def independent_surrogate(sample: PatternSample, seed: int) -> PatternSample:
    """Break the dependence while preserving both marginals.

    y is kept exactly; x is replaced by a fresh draw from the pattern's
    own x-marginal law (uniform, or the noisy circle abscissa), so the
    joint is independent with equal marginal forms.
    """
    rng = np.random.default_rng(seed)
    n = sample.x.size
    if sample.pattern == "circle":
        t = rng.uniform(0.0, 1.0, size=n)
        x = np.cos(2.0 * np.pi * t) / 2.0 + 0.5 + rng.normal(0.0, sample.noise_sd, size=n)
    else:
        x = rng.uniform(0.0, 1.0, size=n)
    return PatternSample(x, sample.y.copy(), sample.pattern, sample.noise_sd, int(seed))


def noise_variance_grid(levels: int = 30, low: float = 1 / 30, high: float = 3.0,
                        spacing: str = "linear") -> np.ndarray:
    """Noise grid in variance units, default 30 levels from 1/30 to 3."""
    if levels < 1:
        raise InvalidInputError("levels must be >= 1")
    if not (0 < low <= high):
        raise InvalidInputError("need 0 < low <= high")
    if spacing == "linear":
        return np.linspace(low, high, levels)
    if spacing == "geometric":
        return np.geomspace(low, high, levels)
    raise InvalidInputError(f"unknown spacing {spacing!r}; expected linear or geometric")
