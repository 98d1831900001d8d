"""Tests for the driving systems and their realizations."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.services.rds.driver import (
	BLOCK_SIZE,
	Realization,
	birkhoff_average,
	build_driver,
	shift,
)
from app.services.rds.errors import InvalidArgumentError

IID = build_driver('iid-sequence', 2, {'low': -1.0, 'high': 1.0}, 11)


@settings(max_examples=50, deadline=None)
@given(
	st.integers(min_value=-3000, max_value=3000),
	st.integers(min_value=-3000, max_value=3000),
)
def test_shift_group_law(a, b):
	omega = IID.realization(0)
	assert shift(shift(omega, a), b) == shift(omega, a + b)
	assert shift(shift(omega, a), -a) == omega


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=-3 * BLOCK_SIZE, max_value=3 * BLOCK_SIZE))
def test_symbol_of_shifted_realization(j):
	omega = IID.realization(5)
	np.testing.assert_array_equal(shift(omega, j).symbol(0), omega.symbol(j))


def test_window_matches_symbols_across_origin():
	omega = IID.realization(0)
	window = omega.window(-5, 5)
	expected = np.array([omega.symbol(j) for j in range(-5, 5)])
	np.testing.assert_array_equal(window, expected)
	assert window.shape == (10, 2)


def test_same_seed_same_realization():
	first = build_driver('iid-sequence', 1, {}, 3)
	second = build_driver('iid-sequence', 1, {}, 3)
	other = build_driver('iid-sequence', 1, {}, 4)
	np.testing.assert_array_equal(first.symbols(-2000, 2000), second.symbols(-2000, 2000))
	assert not np.array_equal(first.symbols(0, 100), other.symbols(0, 100))
	assert first == second
	assert first != other


def test_query_order_does_not_change_symbols():
	first = build_driver('iid-sequence', 1, {}, 21)
	second = build_driver('iid-sequence', 1, {}, 21)
	late = first.symbols(5000, 5010)
	second.symbols(-3000, 0)
	np.testing.assert_array_equal(second.symbols(5000, 5010), late)


def test_uniform_symbols_stay_in_interval():
	driver = build_driver('iid-sequence', 3, {'low': 0.2, 'high': 0.7}, 1)
	values = driver.symbols(-1500, 1500)
	assert values.min() >= 0.2
	assert values.max() <= 0.7


def test_sign_distribution():
	driver = build_driver('iid-sequence', 1, {'scale': 0.3}, 9)
	values = driver.symbols(0, 10000)[:, 0]
	assert set(np.round(np.abs(values), 12)) == {0.3}
	assert abs(values.mean()) < 0.02


def test_rotation_phase():
	driver = build_driver('finite-rotation', 1, {'alpha': 0.25, 'phase': 0.1}, 0)
	omega = driver.realization(0)
	assert omega.symbol(0)[0] == pytest.approx(0.1)
	assert omega.symbol(3)[0] == pytest.approx(0.85)
	assert omega.symbol(-1)[0] == pytest.approx(0.85)


def test_rotation_seeded_phase_is_reproducible():
	first = build_driver('finite-rotation', 1, {'alpha': 0.3}, 5)
	second = build_driver('finite-rotation', 1, {'alpha': 0.3}, 5)
	assert first.phase == second.phase
	assert 0.0 <= first.phase < 1.0


def test_deterministic_point_is_constant():
	driver = build_driver('deterministic-point', 2, {'value': 1.5}, 0)
	np.testing.assert_array_equal(driver.symbols(-4, 4), np.full((8, 2), 1.5))


@pytest.mark.parametrize(
	'kind, dimension, params, seed',
	[
		('unknown', 1, {}, 0),
		('iid-sequence', 0, {}, 0),
		('iid-sequence', 1, {}, -1),
		('iid-sequence', 1, {'low': 1.0, 'high': 1.0}, 0),
		('iid-sequence', 1, {'scale': -1.0}, 0),
		('finite-rotation', 2, {'alpha': 0.1}, 0),
		('finite-rotation', 1, {}, 0),
	],
)
def test_invalid_drivers(kind, dimension, params, seed):
	with pytest.raises(InvalidArgumentError):
		build_driver(kind, dimension, params, seed)


def test_distance():
	omega = IID.realization(2)
	assert omega.distance(shift(omega, 7)) == 7
	assert shift(omega, 7).distance(omega) == -7

	other = Realization(build_driver('iid-sequence', 2, {}, 12), 2)
	with pytest.raises(InvalidArgumentError):
		omega.distance(other)


def test_birkhoff_average():
	constant = build_driver('deterministic-point', 1, {'value': 2.0}, 0)
	assert birkhoff_average(lambda s: s[0], constant.realization(), 10) == pytest.approx(2.0)

	uniform = build_driver('iid-sequence', 1, {}, 2)
	assert abs(birkhoff_average(lambda s: s[0], uniform.realization(), 20000)) < 0.03

	with pytest.raises(InvalidArgumentError):
		birkhoff_average(lambda s: s[0], constant.realization(), 0)
