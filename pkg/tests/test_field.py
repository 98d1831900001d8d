"""Tests for fiber specs, vectors and schedules."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from app.services.rds.driver import build_driver
from app.services.rds.errors import InvalidArgumentError
from app.services.rds.field import FiberSchedule, FiberSpec, FiberVector, fiber_norm

coordinate = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
vectors = st.lists(coordinate, min_size=3, max_size=3)
specs = st.sampled_from(
	[
		FiberSpec(3),
		FiberSpec(3, 'sup'),
		FiberSpec(3, 'weighted', (1.0, 2.0, 0.5), 1.0),
		FiberSpec(3, 'weighted', (0.3, 1.0, 4.0), 3.0),
	]
)


def test_norm_values():
	assert fiber_norm(FiberSpec(2), [3.0, 4.0]) == pytest.approx(5.0)
	assert fiber_norm(FiberSpec(2, 'sup'), [3.0, -4.0]) == pytest.approx(4.0)
	assert fiber_norm(FiberSpec(2, 'weighted', (1.0, 2.0), 1.0), [3.0, -4.0]) == pytest.approx(11.0)


@given(specs, vectors, vectors)
def test_triangle_inequality(spec, u, v):
	u, v = np.array(u), np.array(v)
	assert fiber_norm(spec, u + v) <= fiber_norm(spec, u) + fiber_norm(spec, v) + 1e-9 * (
		1 + fiber_norm(spec, u) + fiber_norm(spec, v)
	)


@given(specs, vectors, st.floats(min_value=-10, max_value=10, allow_nan=False))
def test_homogeneity(spec, u, scale):
	u = np.array(u)
	expected = abs(scale) * fiber_norm(spec, u)
	assert fiber_norm(spec, scale * u) == pytest.approx(expected, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize(
	'kwargs',
	[
		{'dimension': 0},
		{'dimension': 2, 'norm': 'manhattan'},
		{'dimension': 2, 'norm': 'weighted', 'weights': (1.0,)},
		{'dimension': 2, 'norm': 'weighted', 'weights': (1.0, 0.0)},
		{'dimension': 2, 'norm': 'weighted', 'weights': (1.0, 1.0), 'p': 0.5},
		{'dimension': 2, 'labels': ('x',)},
	],
)
def test_invalid_specs(kwargs):
	with pytest.raises(InvalidArgumentError):
		FiberSpec(**kwargs)


def test_dimension_mismatch():
	with pytest.raises(InvalidArgumentError):
		fiber_norm(FiberSpec(2), [1.0, 2.0, 3.0])


def test_fiber_vector_is_read_only():
	v = FiberVector([1.0, 2.0], tag=3)
	assert v.dimension == 2
	assert v.tag == 3
	with pytest.raises(ValueError):
		v.coords[0] = 5.0


def test_schedule_with_selector():
	driver = build_driver('deterministic-point', 1, {}, 0)
	schedule = FiberSchedule((FiberSpec(2), FiberSpec(3)), lambda omega: omega.offset % 2)
	assert not schedule.is_constant
	assert schedule.dimension_at(driver.realization(0)) == 2
	assert schedule.dimension_at(driver.realization(1)) == 3
	np.testing.assert_array_equal(schedule.check(driver.realization(1), [1, 2, 3]), [1.0, 2.0, 3.0])
	with pytest.raises(InvalidArgumentError):
		schedule.check(driver.realization(0), [1, 2, 3])


def test_constant_schedule():
	driver = build_driver('deterministic-point', 1, {}, 0)
	schedule = FiberSchedule.euclidean(4)
	assert schedule.is_constant
	assert schedule.spec_at(driver.realization(-7)) == FiberSpec(4)
