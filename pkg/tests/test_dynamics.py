import math

import numpy as np
import pytest
from scipy import stats

from scripts.extremes.dynamics import (
    GenerationMode,
    MapKind,
    MapSystem,
    OrbitCursor,
    OrbitSpec,
    initial_samples,
    invariant_density,
    is_periodic,
    lsv_density_table,
    sample_orbit,
    sample_orbit_block,
    step,
)
from scripts.extremes.errors import ConfigError, DomainError, InputError
from scripts.extremes.streams import STREAM_ORBIT, trial_rngs

TENT = MapSystem(MapKind.TENT)
DOUBLING = MapSystem(MapKind.DOUBLING)
LOGISTIC = MapSystem(MapKind.LOGISTIC4)


def test_step_examples():
    assert step(TENT, 0.25) == 0.5
    assert step(TENT, 0.75) == 0.5
    assert step(DOUBLING, 0.75) == 0.5
    assert step(LOGISTIC, 0.5) == 1.0
    assert step(MapSystem(MapKind.LSV, 0.5), 0.5) == 0.0
    assert step(MapSystem(MapKind.LSV, 0.5), 0.75) == 0.5


def test_step_vectorized_and_out_of_range():
    out = step(TENT, np.array([0.0, 0.5, 1.0]))
    assert np.array_equal(out, [0.0, 1.0, 0.0])
    with pytest.raises(InputError):
        step(TENT, 1.5)
    with pytest.raises(InputError):
        step(DOUBLING, np.array([0.2, -0.1]))


@pytest.mark.parametrize("alpha", [None, 0.0, 1.0, 1.5])
def test_lsv_requires_alpha_in_open_unit_interval(alpha):
    with pytest.raises(ConfigError):
        MapSystem(MapKind.LSV, alpha)


def test_pullback_rejected_for_non_dyadic_maps():
    spec = OrbitSpec(length=10, generation_mode=GenerationMode.PULLBACK)
    with pytest.raises(ConfigError):
        sample_orbit(LOGISTIC, spec)


def test_default_mode_per_map():
    spec = OrbitSpec(length=10)
    assert spec.mode_for(TENT) is GenerationMode.PULLBACK
    assert spec.mode_for(LOGISTIC) is GenerationMode.FORWARD


def test_orbit_spec_validation():
    with pytest.raises(InputError):
        OrbitSpec(length=0)
    with pytest.raises(InputError):
        OrbitSpec(length=5, burn_in=-1)


@pytest.mark.parametrize("system", [TENT, DOUBLING])
def test_pullback_orbit_follows_the_map(system):
    xs = sample_orbit(system, OrbitSpec(length=2000, seed=3))
    assert xs.shape == (2000,)
    assert np.all((xs >= 0.0) & (xs <= 1.0))
    # consecutivos diferem do passo exato só na truncagem 2^-52
    np.testing.assert_allclose(step(system, xs[:-1]), xs[1:], rtol=0, atol=1e-15)


def test_pullback_does_not_collapse():
    xs = sample_orbit(DOUBLING, OrbitSpec(length=100_000, seed=5))
    assert np.count_nonzero(xs == 0.0) == 0
    assert xs[-100:].max() > 0.0


def test_forward_doubling_collapses_to_zero():
    xs = sample_orbit(DOUBLING, OrbitSpec(length=60, seed=5, generation_mode="forward"))
    assert xs[-1] == 0.0


def test_orbits_are_deterministic_per_seed():
    spec = OrbitSpec(length=500, seed=11)
    a = sample_orbit(TENT, spec)
    b = sample_orbit(TENT, spec)
    c = sample_orbit(TENT, OrbitSpec(length=500, seed=12))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_block_rows_match_single_trials():
    spec = OrbitSpec(length=300)
    block = sample_orbit_block(TENT, spec, trial_rngs(9, STREAM_ORBIT, range(4)))
    single = sample_orbit(TENT, spec, trial_rngs(9, STREAM_ORBIT, [2])[0])
    assert block.shape == (4, 300)
    assert np.array_equal(block[2], single)


@pytest.mark.parametrize("system", [TENT, DOUBLING])
def test_cursor_chunks_continue_the_pullback_orbit(system):
    rngs = trial_rngs(4, STREAM_ORBIT, range(3))
    spec = OrbitSpec(length=1)
    first = OrbitCursor(system, spec, rngs).take(100)
    np.testing.assert_array_equal(first, sample_orbit_block(system, OrbitSpec(length=100), trial_rngs(4, STREAM_ORBIT, range(3))))

    cursor = OrbitCursor(system, spec, trial_rngs(4, STREAM_ORBIT, range(3)))
    a = cursor.take(100)
    b = cursor.take(80)
    np.testing.assert_allclose(step(system, a[:, -1]), b[:, 0], rtol=0.0, atol=1e-15)
    c = cursor.take(40, rows=[1])
    d = cursor.take(10)
    assert c.shape == (1, 40) and d.shape == (3, 10)
    np.testing.assert_allclose(step(system, c[0, -1]), d[1, 0], rtol=0.0, atol=1e-15)
    np.testing.assert_allclose(step(system, b[[0, 2], -1]), d[[0, 2], 0], rtol=0.0, atol=1e-15)


def test_cursor_chunks_continue_the_forward_orbit():
    cursor = OrbitCursor(LOGISTIC, OrbitSpec(length=1), trial_rngs(6, STREAM_ORBIT, range(2)))
    a = cursor.take(30)
    b = cursor.take(30, rows=[0])
    c = cursor.take(5)
    assert np.array_equal(step(LOGISTIC, a[:, -1]), np.array([b[0, 0], c[1, 0]]))
    assert step(LOGISTIC, b[0, -1]) == c[0, 0]
    with pytest.raises(InputError):
        cursor.take(0)


def test_tent_pullback_marginal_is_uniform():
    xs = sample_orbit_block(TENT, OrbitSpec(length=50), trial_rngs(1, STREAM_ORBIT, range(2000)))
    assert stats.kstest(xs[:, -1], "uniform").pvalue > 1e-3


def test_logistic_initial_samples_follow_arcsine_law():
    x0 = initial_samples(LOGISTIC, trial_rngs(2, STREAM_ORBIT, range(3000)))
    cdf = lambda x: (2.0 / math.pi) * np.arcsin(np.sqrt(np.clip(x, 0.0, 1.0)))
    assert stats.kstest(x0, cdf).pvalue > 1e-3


def test_invariant_density_values():
    assert invariant_density(TENT, 0.3) == 1.0
    assert invariant_density(DOUBLING, 0.9) == 1.0
    assert invariant_density(LOGISTIC, 0.5) == pytest.approx(2.0 / math.pi)
    assert math.isinf(invariant_density(LOGISTIC, 0.0))
    with pytest.raises(InputError):
        invariant_density(TENT, 1.2)


def test_lsv_density_near_singularity():
    lsv = MapSystem(MapKind.LSV, 0.5)
    assert math.isinf(invariant_density(lsv, 0.0))
    with pytest.raises(DomainError):
        invariant_density(lsv, 1e-4)


def test_lsv_density_table_is_normalized_and_decreasing():
    table = lsv_density_table(0.5, bins=100, samples=200_000, seed=1)
    assert table.mean() == pytest.approx(1.0)
    # a densidade explode em 0 e é mais baixa perto de 1
    assert table[:5].mean() > table[-20:].mean()


def test_periodic_points():
    assert is_periodic(TENT, 2.0 / 3.0)
    assert is_periodic(DOUBLING, 1.0 / 3.0)
    assert not is_periodic(TENT, 1.0 / math.sqrt(2.0))
