"""Experiment drivers: power curves, runtime benchmarks, value panels,
greedy feature selection."""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import baselines, synth
from .coefficient import RdcParams, rdc
from .copula import as_sample
from .errors import CapacityError, InvalidInputError, RdcError
from .seeding import derive_seed


# ---------------------------------------------------------------------------
# measure registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Measure:
    """A scalar dependence statistic plus its capabilities."""

    name: str
    fn: object
    multivariate: bool
    signed: bool


def _rdc_value(x, y, seed):
    return rdc(x, y, RdcParams(seed=seed)).coefficient


def _pearson_value(x, y, seed):
    return baselines.pearson(x, y)


def _spearman_value(x, y, seed):
    return baselines.spearman(x, y)


def _kendall_value(x, y, seed):
    return baselines.kendall(x, y)


def _dcor_value(x, y, seed):
    return baselines.dcor(x, y)


MEASURES = {
    "rdc": Measure("rdc", _rdc_value, multivariate=True, signed=False),
    "pearson": Measure("pearson", _pearson_value, multivariate=False, signed=True),
    "spearman": Measure("spearman", _spearman_value, multivariate=False, signed=True),
    "kendall": Measure("kendall", _kendall_value, multivariate=False, signed=True),
    "dcor": Measure("dcor", _dcor_value, multivariate=True, signed=False),
}

DEFAULT_MEASURES = ("rdc", "pearson", "spearman", "kendall", "dcor")


def _lookup_measure(name) -> Measure:
    try:
        return MEASURES[name]
    except KeyError:
        raise InvalidInputError(
            f"unknown measure {name!r}; valid measures: {', '.join(MEASURES)}") from None


def _statistic(measure: Measure, x, y, seed, absolute=False) -> float:
    v = measure.fn(x, y, seed)
    return abs(v) if absolute and measure.signed else v


# ---------------------------------------------------------------------------
# statistical power
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerConfig:
    """Grid and protocol for the power study.

    Per cell and repetition, a dependent sample and an independent
    surrogate with equal marginals are generated; the rejection threshold
    is the empirical (1 - alpha) quantile of the surrogate statistics and
    power is the fraction of dependent statistics exceeding it.  Signed
    measures are compared in absolute value.  null_reference replaces the
    dependent sample by a second surrogate (size calibration runs).
    """

    patterns: tuple = synth.PATTERN_ORDER
    noise_variances: tuple = tuple(float(v) for v in synth.noise_variance_grid())
    n: int = 500
    repetitions: int = 500
    alpha: float = 0.05
    measures: tuple = DEFAULT_MEASURES
    seed: int = 0
    null_reference: bool = False

    def __post_init__(self):
        if self.repetitions < 2:
            raise InvalidInputError("repetitions must be >= 2")
        if len(self.noise_variances) == 0:
            raise InvalidInputError("noise grid must be nonempty")
        if not 0 < self.alpha < 1:
            raise InvalidInputError("alpha must lie strictly between 0 and 1")
        if self.n < 2:
            raise InvalidInputError("n must be >= 2")
        for p in self.patterns:
            if p not in synth.PATTERN_ORDER:
                raise InvalidInputError(f"unknown pattern {p!r}")
        for m in self.measures:
            _lookup_measure(m)


@dataclass(frozen=True)
class PowerCell:
    measure: str
    pattern: str
    noise_variance: float
    power: float
    threshold: float
    error: str | None = None


@dataclass(frozen=True)
class PowerReport:
    config: PowerConfig
    cells: tuple


def _power_cell_group(config: PowerConfig, pattern: str, noise_index: int):
    """All measures for one (pattern, noise) cell.

    Cell seeds derive from (base seed, canonical pattern index, noise
    position, repetition, role), so results are independent of execution
    order and of which other cells are configured.
    """
    pi = synth.PATTERN_ORDER.index(pattern)
    variance = config.noise_variances[noise_index]
    sd = math.sqrt(variance)
    dep_stats = {m: [] for m in config.measures}
    null_stats = {m: [] for m in config.measures}
    errors = {}
    for rep in range(config.repetitions):
        dep = synth.generate(pattern, config.n, sd,
                             derive_seed(config.seed, pi, noise_index, rep, 0))
        if config.null_reference:
            dep = synth.independent_surrogate(
                dep, derive_seed(config.seed, pi, noise_index, rep, 2))
        null = synth.independent_surrogate(
            dep, derive_seed(config.seed, pi, noise_index, rep, 1))
        stat_seed = derive_seed(config.seed, pi, noise_index, rep, 3)
        for name in config.measures:
            if name in errors:
                continue
            measure = MEASURES[name]
            try:
                dep_stats[name].append(_statistic(measure, dep.x, dep.y, stat_seed, True))
                null_stats[name].append(_statistic(measure, null.x, null.y, stat_seed, True))
            except RdcError as exc:
                errors[name] = str(exc)
    cells = []
    for name in config.measures:
        if name in errors:
            cells.append(PowerCell(name, pattern, variance, math.nan, math.nan, errors[name]))
            continue
        threshold = float(np.quantile(null_stats[name], 1.0 - config.alpha))
        power = float(np.mean(np.asarray(dep_stats[name]) > threshold))
        cells.append(PowerCell(name, pattern, variance, power, threshold))
    return cells


def estimate_power(config: PowerConfig, jobs: int = 1) -> PowerReport:
    """Rejection frequency for every configured (measure, pattern, noise) cell.

    A measure erroring inside a cell marks only that cell failed (power
    NaN, message recorded); the run continues.  With jobs > 1 the
    (pattern, noise) cells run in separate processes; derived seeds make
    the result independent of the schedule.
    """
    tasks = [(pattern, ni) for pattern in config.patterns
             for ni in range(len(config.noise_variances))]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            groups = list(pool.map(_power_cell_group,
                                   [config] * len(tasks),
                                   [t[0] for t in tasks],
                                   [t[1] for t in tasks]))
    else:
        groups = [_power_cell_group(config, pattern, ni) for pattern, ni in tasks]
    by_key = {}
    for group in groups:
        for cell in group:
            by_key[(cell.measure, cell.pattern, cell.noise_variance)] = cell
    ordered = [by_key[(m, p, v)] for m in config.measures
               for p in config.patterns for v in config.noise_variances]
    return PowerReport(config, tuple(ordered))


# ---------------------------------------------------------------------------
# runtime benchmarks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchCell:
    measure: str
    n: int
    seconds: float | None
    status: str  # ok | timeout | capacity | error


@dataclass(frozen=True)
class BenchReport:
    measures: tuple
    sizes: tuple
    repetitions: int
    timeout: float
    seed: int
    cells: tuple


def benchmark_runtimes(measures, sizes=(1_000, 10_000, 100_000, 1_000_000),
                       repetitions: int = 3, timeout: float = 600.0,
                       seed: int = 0) -> BenchReport:
    """Mean wall-clock seconds per measure and size.

    Data are independent scalar pairs, uniform on [0, 1], regenerated per
    repetition (generation is untimed).  A repetition exceeding the
    timeout, or a capacity error, marks the cell absent; larger sizes of
    the same measure are then skipped since cost grows with n.  Timing
    cells run serially to keep the clock honest.
    """
    for m in measures:
        _lookup_measure(m)
    sizes = tuple(sorted(int(s) for s in sizes))
    if any(s < 2 for s in sizes):
        raise InvalidInputError("sizes must be >= 2")
    if repetitions < 1:
        raise InvalidInputError("repetitions must be >= 1")
    cells = []
    for name in measures:
        measure = MEASURES[name]
        blocked = None
        for si, n in enumerate(sizes):
            if blocked is not None:
                cells.append(BenchCell(name, n, None, blocked))
                continue
            times = []
            status = "ok"
            for rep in range(repetitions):
                rng = np.random.default_rng(derive_seed(seed, si, rep))
                x = rng.uniform(0.0, 1.0, size=n)
                y = rng.uniform(0.0, 1.0, size=n)
                stat_seed = derive_seed(seed, si, rep, 1)
                start = time.perf_counter()
                try:
                    measure.fn(x, y, stat_seed)
                except CapacityError:
                    status = "capacity"
                    break
                except RdcError:
                    status = "error"
                    break
                elapsed = time.perf_counter() - start
                if elapsed > timeout:
                    status = "timeout"
                    break
                times.append(elapsed)
            if status == "ok":
                cells.append(BenchCell(name, n, float(np.mean(times)), "ok"))
            else:
                cells.append(BenchCell(name, n, None, status))
                blocked = status
    return BenchReport(tuple(measures), sizes, repetitions, float(timeout),
                       int(seed), tuple(cells))


# ---------------------------------------------------------------------------
# value panel
# ---------------------------------------------------------------------------

DEFAULT_ASSOCIATIONS = (
    "gaussian:0.2", "gaussian:0.5", "gaussian:0.8",
    *synth.PATTERN_ORDER,
    "independent",
)


def association_sample(tag: str, n: int, seed: int):
    """Draw one named bivariate association.

    Tags: any synthetic pattern (noise-free), "gaussian:<rho>" for a
    correlated standard normal pair, "independent" for rho 0.
    """
    rng = np.random.default_rng(seed)
    if tag == "independent":
        return rng.standard_normal(n), rng.standard_normal(n)
    if tag.startswith("gaussian:"):
        try:
            rho = float(tag.split(":", 1)[1])
        except ValueError:
            raise InvalidInputError(f"bad gaussian tag {tag!r}") from None
        if not -1.0 <= rho <= 1.0:
            raise InvalidInputError(f"gaussian correlation must lie in [-1, 1], got {rho}")
        z1 = rng.standard_normal(n)
        z2 = rng.standard_normal(n)
        return z1, rho * z1 + math.sqrt(1.0 - rho * rho) * z2
    if tag in synth.PATTERN_ORDER:
        s = synth.generate(tag, n, 0.0, seed)
        return s.x, s.y
    raise InvalidInputError(
        f"unknown association {tag!r}; valid: gaussian:<rho>, independent, "
        f"{', '.join(synth.PATTERN_ORDER)}")


@dataclass(frozen=True)
class PanelCell:
    association: str
    measure: str
    value: float
    error: str | None = None


@dataclass(frozen=True)
class PanelReport:
    associations: tuple
    measures: tuple
    n: int
    seed: int
    cells: tuple


def value_panel(associations=None, n: int = 1000, seed: int = 0,
                measures=DEFAULT_MEASURES) -> PanelReport:
    """Every measure evaluated on every association; a per-cell failure
    becomes a NaN value rather than aborting the panel."""
    tags = tuple(associations) if associations is not None else DEFAULT_ASSOCIATIONS
    for m in measures:
        _lookup_measure(m)
    if n < 2:
        raise InvalidInputError("n must be >= 2")
    cells = []
    for ai, tag in enumerate(tags):
        x, y = association_sample(tag, n, derive_seed(seed, ai, 0))
        stat_seed = derive_seed(seed, ai, 1)
        for name in measures:
            try:
                value = _statistic(MEASURES[name], x, y, stat_seed)
                cells.append(PanelCell(tag, name, float(value)))
            except RdcError as exc:
                cells.append(PanelCell(tag, name, math.nan, str(exc)))
    return PanelReport(tags, tuple(measures), int(n), int(seed), tuple(cells))


# ---------------------------------------------------------------------------
# greedy feature selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SelectionTrace:
    """Greedy selection path: chosen column indices (0-based), the
    dependence value at each step, and the held-out OLS NMSE per step."""

    indices: tuple
    values: tuple
    nmse: tuple
    measure: str


def _ols_nmse(x_train, y_train, x_test, y_test) -> float:
    """Held-out normalized mean squared error of least squares with intercept.

    Per target column: mse(test) / var(test target); averaged over columns.
    """
    ones_tr = np.ones((x_train.shape[0], 1))
    ones_te = np.ones((x_test.shape[0], 1))
    a_tr = np.hstack([ones_tr, x_train])
    a_te = np.hstack([ones_te, x_test])
    beta, *_ = np.linalg.lstsq(a_tr, y_train, rcond=None)
    resid = y_test - a_te @ beta
    mse = np.mean(resid ** 2, axis=0)
    var = np.var(y_test, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        nmse = np.where(var > 0, mse / var, np.nan)
    return float(np.mean(nmse))


def greedy_select(features, target, measure: str = "rdc", max_steps: int = 10,
                  seed: int = 0, dcor_cap: int = 1000) -> SelectionTrace:
    """Forward selection maximizing dependence with the target.

    At each step every unchosen column is appended to the current set and
    the dependence between the augmented set and the target is evaluated
    on the training half; the argmax wins, ties resolving to the lowest
    column index.  Scalar-only measures are rejected up front.  dcor
    evaluations are capped at dcor_cap training rows (fixed, seeded
    subsample).  NMSE of an intercept-plus-least-squares regressor on the
    selected set is recorded on the held-out half after every step.
    """
    F = as_sample(features, min_rows=2, name="features")
    T = as_sample(target, min_rows=2, name="target")
    if F.shape[0] != T.shape[0]:
        raise InvalidInputError(
            f"features have {F.shape[0]} rows but target has {T.shape[0]}")
    m = _lookup_measure(measure)
    if not m.multivariate:
        raise InvalidInputError(
            f"{measure} only handles scalar pairs; greedy selection needs a "
            "multivariate measure (rdc, dcor)")
    if not isinstance(max_steps, int) or max_steps < 0:
        raise InvalidInputError("max_steps must be a nonnegative integer")
    if max_steps > F.shape[1]:
        raise InvalidInputError(
            f"max_steps ({max_steps}) exceeds the feature count ({F.shape[1]})")

    n = F.shape[0]
    perm = np.random.default_rng(derive_seed(seed, 0)).permutation(n)
    train, test = perm[: n // 2], perm[n // 2:]
    eval_rows = train
    if measure == "dcor" and train.size > dcor_cap:
        sub = np.random.default_rng(derive_seed(seed, 2)).choice(
            train.size, size=dcor_cap, replace=False)
        eval_rows = train[sub]
    t_eval = T[eval_rows]

    selected: list[int] = []
    values: list[float] = []
    nmses: list[float] = []
    for step in range(max_steps):
        step_seed = derive_seed(seed, 1, step)
        best_index = -1
        best_value = -math.inf
        for j in range(F.shape[1]):
            if j in selected:
                continue
            candidate = F[eval_rows][:, selected + [j]]
            value = _statistic(m, candidate, t_eval, step_seed)
            if value > best_value:
                best_value = value
                best_index = j
        selected.append(best_index)
        values.append(float(best_value))
        nmses.append(_ols_nmse(F[train][:, selected], T[train],
                               F[test][:, selected], T[test]))
    return SelectionTrace(tuple(selected), tuple(values), tuple(nmses), measure)
