"""Session fixtures: analyses and charts of the benchmark systems."""

import pytest

from app.services.rds import pipeline

from tests.helpers import linear_benchmark, make_config, oracle_config


@pytest.fixture(scope='session')
def det2d():
	"""Analysis of det-2d with the fixed oracle radius."""
	return pipeline.analyze(oracle_config('det-2d'))


@pytest.fixture(scope='session')
def det2d_chart(det2d):
	"""Chart of det-2d on the grid of radius 0.02."""
	return pipeline.solve_chart(det2d)


@pytest.fixture(scope='session')
def det2d_certified():
	"""Analysis of det-2d with the certified radius."""
	return pipeline.analyze(make_config('det-2d', grid={'points': 7}))


@pytest.fixture(scope='session')
def det3d():
	"""Analysis of det-3d with the fixed oracle radius."""
	return pipeline.analyze(oracle_config('det-3d', verify={'degree': 4}))


@pytest.fixture(scope='session')
def det3d_chart(det3d):
	"""Chart of det-3d on the grid of radius 0.02."""
	return pipeline.solve_chart(det3d)


@pytest.fixture(scope='session')
def linear():
	"""Analysis of the linear map diag(1, 1/2)."""
	config = oracle_config('det-2d', grid={'points': 9})
	return pipeline.analyze(config, benchmark=linear_benchmark())
