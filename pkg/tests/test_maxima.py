import math

import numpy as np
import pytest

from scripts.extremes.errors import InputError
from scripts.extremes.maxima import CadlagStepPath, build_path, invert_path, record_mask, running_max


def test_running_max_examples():
    assert running_max([3, 1, 4, 1, 5]).tolist() == [3, 3, 4, 4, 5]
    assert running_max([2.0]).tolist() == [2.0]
    with pytest.raises(InputError):
        running_max([])


def test_record_mask_is_strict():
    assert record_mask([1.0, 1.0, 2.0, 2.0, 0.5]).tolist() == [True, False, True, False, False]


def test_build_path_small_example():
    p = build_path([2.0, 1.0, 3.0], 1.0, 0.0, 3)
    assert p.window == (0.0, 1.0)
    assert p.value_at(0.5) == 2.0
    assert p.value_at(1.0) == 3.0
    assert p.value_at(0.1) == 2.0
    np.testing.assert_allclose(p.times, [1.0 / 3.0, 1.0])
    assert p.values.tolist() == [2.0, 3.0]


def test_build_path_needs_enough_points():
    with pytest.raises(InputError):
        build_path([1.0, 2.0], 1.0, 0.0, 3)
    with pytest.raises(InputError):
        build_path([1.0, 2.0, 3.0, 4.0], 1.0, 0.0, 2, t_hi=3.0)


def test_build_path_matches_running_max(rng):
    n = 50
    for _ in range(200):
        xs = rng.standard_normal(n)
        p = build_path(xs, 2.0, 0.5, n)
        m = running_max(xs)
        t = rng.uniform(1.0 / n, 1.0, size=5)
        expected = 2.0 * (m[np.floor(n * t).astype(int) - 1] - 0.5)
        np.testing.assert_allclose(p.value_at(t), expected)


def test_build_path_is_linear_in_scaling(rng):
    xs = rng.random(200)
    base = build_path(xs, 1.0, 0.0, 200)
    scaled = build_path(xs, 3.0, 0.25, 200)
    np.testing.assert_array_equal(base.times, scaled.times)
    np.testing.assert_allclose(scaled.values, 3.0 * (base.values - 0.25))


def test_build_path_beyond_unit_time():
    xs = np.arange(1.0, 9.0)
    p = build_path(xs, 1.0, 0.0, 4, t_hi=2.0)
    assert p.window == (0.0, 2.0)
    assert p.n_jumps == 8
    assert p.value_at(2.0) == 8.0


def test_path_validation():
    with pytest.raises(InputError):
        CadlagStepPath((0.0, 1.0), [0.5, 0.4], [1.0, 2.0], 0.0)
    with pytest.raises(InputError):
        CadlagStepPath((0.0, 1.0), [1.5], [1.0], 0.0)
    with pytest.raises(InputError):
        CadlagStepPath((1.0, 1.0), [], [], 0.0)


def test_path_arrays_are_read_only():
    p = CadlagStepPath((0.0, 1.0), [0.5], [1.0], 0.0)
    with pytest.raises(ValueError):
        p.times[0] = 0.2


def test_restrict_keeps_value_at_left_end():
    p = CadlagStepPath((0.0, 4.0), [1.0, 2.0, 3.0], [1.0, 2.0, 3.0], 0.0)
    r = p.restrict(1.5, 3.0)
    assert r.window == (1.5, 3.0)
    assert r.initial_value == 1.0
    assert r.times.tolist() == [2.0, 3.0]
    with pytest.raises(InputError):
        p.restrict(-1.0, 2.0)


def test_invert_single_jump():
    p = CadlagStepPath((0.0, 1.0), [0.5], [3.0], 1.0)
    inv = invert_path(p, (0.0, 10.0))
    assert inv.value_at(0.5) == 0.0
    assert inv.value_at(1.5) == 0.5
    assert inv.value_at(2.999) == 0.5
    assert inv.value_at(3.0) == math.inf


def test_invert_staircase():
    p = CadlagStepPath((0.0, 4.0), [1.0, 2.0, 3.0], [1.0, 2.0, 3.0], 0.0)
    inv = invert_path(p, (-0.5, 3.5))
    assert inv.value_at(-0.2) == 0.0
    assert inv.value_at(0.5) == 1.0
    assert inv.value_at(1.5) == 2.0
    assert inv.value_at(2.5) == 3.0
    assert inv.value_at(3.2) == math.inf
    assert inv.is_nondecreasing()


def test_invert_skips_zero_height_jump():
    p = build_path([2.0, 1.0, 3.0], 1.0, 0.0, 3)
    inv = invert_path(p, (0.0, 5.0))
    # o nível 2 só é ultrapassado em t = 1
    assert inv.value_at(2.5) == 1.0
    assert inv.value_at(1.0) == 0.0


def test_invert_twice_returns_original(rng):
    for _ in range(50):
        k = int(rng.integers(1, 8))
        times = np.sort(rng.choice(np.arange(1, 100), size=k, replace=False)) / 100.0
        values = np.cumsum(rng.uniform(0.1, 1.0, size=k))
        p = CadlagStepPath((0.0, 1.0), times, values, 0.0)
        q = invert_path(p, (-1.0, values[-1] + 1.0))
        r = invert_path(q, p.window)
        assert r.initial_value == p.initial_value
        np.testing.assert_array_equal(r.times, p.times)
        np.testing.assert_array_equal(r.values, p.values)


def test_invert_rejects_decreasing_path():
    p = CadlagStepPath((0.0, 1.0), [0.5], [-1.0], 0.0)
    with pytest.raises(InputError):
        invert_path(p, (-2.0, 2.0))


def test_path_csv_keeps_window_and_initial_value(tmp_path):
    p = CadlagStepPath((0.0, 2.0), [0.25, 1.5], [0.1, 0.7], -0.3)
    target = tmp_path / "path.csv"
    p.to_csv(str(target), extra_header=["origem=teste"])
    assert target.read_text().startswith("# ")
    back = CadlagStepPath.from_csv(str(target))
    assert back.window == p.window
    assert back.initial_value == p.initial_value
    np.testing.assert_array_equal(back.times, p.times)
    np.testing.assert_array_equal(back.values, p.values)
