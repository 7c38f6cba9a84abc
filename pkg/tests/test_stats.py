import math

import numpy as np
import pytest

from scripts.extremes.dynamics import MapKind, MapSystem
from scripts.extremes.errors import InputError
from scripts.extremes.observables import (
    GevFamily,
    GevLimit,
    IidUniform,
    Observable,
    ObservableFamily,
    ObservedSystem,
    gev_quantile,
    threshold,
)
from scripts.extremes.stats import (
    block_independence_test,
    count_correlation,
    dprime_estimate,
    ecdf,
    ks_statistic,
    ks_test,
    ks_two_sample,
    poisson_count_test,
    verdict,
)

NEGLOG = Observable(ObservableFamily.NEGLOG)


def test_ecdf_steps():
    F = ecdf(np.arange(1.0, 41.0))
    assert F(20.0) == pytest.approx(0.5)
    assert F(0.0) == 0.0
    assert F(40.0) == 1.0


def test_ks_of_exact_quantiles_is_small():
    g = GevLimit(GevFamily.GUMBEL, 2.0)
    n = 100
    samples = gev_quantile(g, np.arange(1, n + 1) / (n + 1))
    assert ks_statistic(samples, g.dist.cdf) <= 1.0 / (n + 1) + 1e-9


def test_ks_is_invariant_under_increasing_maps(rng):
    g = GevLimit(GevFamily.GUMBEL, 1.0)
    x = rng.gumbel(size=500)
    a = ks_statistic(x, g.dist.cdf)
    b = ks_statistic(np.exp(x), lambda y: g.dist.cdf(np.log(y)))
    assert a == pytest.approx(b, abs=1e-12)


def test_ks_detects_wrong_law(rng):
    x = rng.normal(size=2000)
    assert ks_test(x, lambda u: np.clip(u, 0.0, 1.0))[1] < 1e-3


def test_ks_needs_enough_samples():
    with pytest.raises(InputError):
        ks_test(np.arange(10.0), lambda u: u)
    with pytest.raises(InputError):
        ks_two_sample(np.arange(100.0), np.arange(5.0))


def test_two_sample_identical():
    x = np.linspace(0.0, 1.0, 200)
    stat, p = ks_two_sample(x, x)
    assert stat == 0.0
    assert p == pytest.approx(1.0)


def test_poisson_degenerate_counts_pass():
    stat, p = poisson_count_test(np.zeros(1000, dtype=int), 1e-6)
    assert stat == 0.0
    assert p == pytest.approx(1.0)


def test_poisson_accepts_right_mean(rng):
    assert poisson_count_test(rng.poisson(1.0, size=2000), 1.0)[1] > 1e-3


def test_poisson_rejects_wrong_mean(rng):
    assert poisson_count_test(rng.poisson(1.5, size=5000), 1.0)[1] < 1e-3


def test_poisson_validation(rng):
    with pytest.raises(InputError):
        poisson_count_test(rng.poisson(1.0, size=100), 1.0)
    with pytest.raises(InputError):
        poisson_count_test(rng.poisson(1.0, size=500), 0.0)
    with pytest.raises(InputError):
        poisson_count_test(-np.ones(500, dtype=int), 1.0)


def test_count_correlation():
    assert count_correlation([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert count_correlation([1, 1, 1], [2, 4, 6]) == 0.0


def test_verdict_record():
    v = verdict("ks", 0.01, 0.5, 1000, 200, 7, True, asserted=False, t=1.0)
    assert v == {
        "test": "ks", "statistic": 0.01, "p_value": 0.5, "n": 1000, "trials": 200, "seed": 7,
        "pass": True, "asserted": False, "t": 1.0,
    }


def test_dprime_iid_matches_pair_count():
    src = IidUniform(NEGLOG)
    n, k, x = 10_000, 10, 1.0
    u = threshold(NEGLOG, src.limit(), n, x)
    est, se = dprime_estimate(src, u, n, k, trials=400, seed=3, bootstrap=200)
    m = n // k
    assert est == pytest.approx((m - 1) * x * x / n, abs=0.06)
    assert se > 0.0


def test_dprime_validation():
    src = IidUniform(NEGLOG)
    with pytest.raises(InputError):
        dprime_estimate(src, 5.0, 10, 10, trials=10, seed=1)
    with pytest.raises(InputError):
        dprime_estimate(src, 5.0, 100, 10, trials=1, seed=1)


def test_block_independence_tent():
    src = ObservedSystem(MapSystem(MapKind.TENT), NEGLOG)
    df = block_independence_test(src, [(0.0, 0.4), (0.5, 0.9)], [1.0, 2.0], 1000, 1000, seed=2)
    assert df["event"].tolist() == ["I1", "I2", "joint"]
    joint = df.set_index("event").loc["joint"]
    assert joint["predicted"] == pytest.approx(math.exp(-1.2))
    assert joint["empirical"] == pytest.approx(joint["predicted"], abs=0.06)


def test_block_independence_rejects_overlap():
    src = IidUniform(NEGLOG)
    with pytest.raises(InputError):
        block_independence_test(src, [(0.0, 0.5), (0.4, 0.9)], [1.0, 1.0], 100, 10, seed=1)
    with pytest.raises(InputError):
        block_independence_test(src, [(0.0, 0.5)], [1.0, 2.0], 100, 10, seed=1)
