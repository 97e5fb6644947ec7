import numpy as np
import pytest
from scipy.stats import norm

from rdc import InvalidInputError, copula_transform, empirical_cdf

from _oracles import brute_leq_counts


def test_sorted_distinct_values():
    out = empirical_cdf([1.0, 2.0, 3.0, 4.0])
    assert np.array_equal(out, [0.25, 0.50, 0.75, 1.00])


def test_ties_share_max_rank():
    out = empirical_cdf([5.0, 5.0, 1.0])
    assert np.array_equal(out, [1.0, 1.0, 1 / 3])


def test_mixed_values():
    out = empirical_cdf([0.3, -1.2, 7.0, 0.0, 2.5])
    assert np.array_equal(out, [0.6, 0.2, 1.0, 0.4, 0.8])


@pytest.mark.parametrize("seed", range(20))
def test_matches_brute_force_counts(seed):
    rng = np.random.default_rng(seed)
    # half the columns carry ties via rounding
    v = rng.normal(size=50)
    if seed % 2:
        v = np.round(v, 1)
    assert np.array_equal(empirical_cdf(v), brute_leq_counts(v))


def test_rejects_non_finite():
    with pytest.raises(InvalidInputError):
        empirical_cdf([1.0, np.nan, 2.0])
    with pytest.raises(InvalidInputError):
        copula_transform(np.array([[1.0, np.inf], [2.0, 3.0]]))


def test_rejects_empty_and_bad_shapes():
    with pytest.raises(InvalidInputError):
        empirical_cdf([])
    with pytest.raises(InvalidInputError):
        copula_transform(np.ones((1, 3)))


def test_monotone_column_gives_identical_columns():
    rng = np.random.default_rng(3)
    x = rng.normal(size=40)
    s = np.column_stack([x, 3.0 * x + 7.0])
    u = copula_transform(s)
    assert np.array_equal(u[:, 0], u[:, 1])


def test_idempotent_on_distinct_values():
    rng = np.random.default_rng(4)
    s = rng.normal(size=(30, 3))
    once = copula_transform(s)
    assert np.array_equal(copula_transform(once), once)


def test_single_column_sample():
    u = copula_transform(np.array([0.3, -1.2, 7.0, 0.0, 2.5]))
    assert np.array_equal(u[:, 0], [0.6, 0.2, 1.0, 0.4, 0.8])


@pytest.mark.parametrize("transform", [np.exp, lambda v: v ** 3 + v, np.arctan])
def test_marginal_invariance_is_bit_exact(transform):
    rng = np.random.default_rng(5)
    s = rng.normal(size=(80, 2))
    assert np.array_equal(copula_transform(transform(s)), copula_transform(s))


def test_uniform_marginals_when_distinct():
    rng = np.random.default_rng(6)
    u = copula_transform(rng.normal(size=(64, 2)))
    expected = np.arange(1, 65) / 64
    for j in range(2):
        assert np.array_equal(np.sort(u[:, j]), expected)
    assert u.min() > 0 and u.max() <= 1


def test_deviation_from_true_transform_shrinks_with_n():
    # sup-norm distance to the true normal cdf transform, small vs large n
    wins = 0
    for seed in range(20):
        rng = np.random.default_rng(100 + seed)
        devs = []
        for n in (100, 10_000):
            x = rng.standard_normal(n)
            emp = empirical_cdf(x)
            devs.append(np.max(np.abs(emp - norm.cdf(x))))
        wins += devs[1] < devs[0]
    assert wins >= 18


def test_transform_cost_scales_near_n_log_n():
    import time

    times = []
    sizes = (10_000, 100_000, 1_000_000)
    for n in sizes:
        x = np.random.default_rng(9).normal(size=(n, 1))
        best = np.inf
        for _ in range(3):
            t0 = time.perf_counter()
            copula_transform(x)
            best = min(best, time.perf_counter() - t0)
        times.append(best)
    slope = np.polyfit(np.log(sizes), np.log(times), 1)[0]
    assert slope < 1.3
