"""Randomized dependence coefficient toolkit.

A non-linear dependence measure between multivariate samples built from
empirical copula transforms, random sinusoidal projections, and canonical
correlation analysis, together with independence tests, classical
baseline measures, and experiment harnesses (power, runtimes, value
panels, greedy feature selection).
"""

__version__ = "0.1.0"

from .baselines import dcor, kendall, pearson, spearman
from .cca import CcaResult, canonical_correlations
from .coefficient import (IndependenceTest, RdcParams, RdcResult,
                          bartlett_test, median_heuristic, permutation_test,
                          rdc, rdc_independence_test)
from .copula import copula_transform, empirical_cdf
from .errors import (CapacityError, DataFormatError, DegenerateDataError,
                     InvalidInputError, RdcError)
from .randproj import (ProjectionParams, draw_projection, project,
                       sine_cosine_features)
from .synth import PatternSample, generate, independent_surrogate, noise_variance_grid

__all__ = [
    "CapacityError", "CcaResult", "DataFormatError", "DegenerateDataError",
    "IndependenceTest", "InvalidInputError", "PatternSample",
    "ProjectionParams", "RdcError", "RdcParams", "RdcResult",
    "bartlett_test", "canonical_correlations", "copula_transform", "dcor",
    "draw_projection", "empirical_cdf", "generate", "independent_surrogate",
    "kendall", "median_heuristic", "noise_variance_grid", "pearson",
    "permutation_test", "project", "rdc", "rdc_independence_test",
    "sine_cosine_features", "spearman",
]
