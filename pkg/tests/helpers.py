"""Configuration builders and systems shared by the test modules."""

import numpy as np

from app.controllers.rds.schemas import RunConfig
from app.services.rds.cocycle import Cocycle, StationaryPoint
from app.services.rds.driver import build_driver
from app.services.rds.field import FiberSchedule
from app.services.rds.systems import Benchmark, SystemSpec


def make_config(name: str, **sections) -> RunConfig:
	"""Return a validated configuration for a benchmark with section overrides."""
	data = {'system': {'name': name}, 'met': {'n': 200}}
	for section, values in sections.items():
		if isinstance(values, dict):
			data.setdefault(section, {}).update(values)
		else:
			data[section] = values
	return RunConfig.model_validate(data)


def oracle_config(name: str, **sections) -> RunConfig:
	"""Return the fixed-radius configuration used for oracle comparisons."""
	base = {
		'lp': {'rho_policy': 'fixed', 'rho': 0.05},
		'grid': {'radius': 0.02, 'points': 21},
	}
	for section, values in sections.items():
		base.setdefault(section, {}).update(values)
	return make_config(name, **base)


def linear_benchmark() -> Benchmark:
	"""Return the linear map diag(1, 1/2), whose center manifold is the x axis."""
	driver = build_driver('deterministic-point', 1, {}, 0)
	matrix = np.diag([1.0, 0.5])
	fibers = FiberSchedule.euclidean(2)
	spec = SystemSpec(
		name='linear',
		description='Mapa lineal diagonal',
		fibers=fibers,
		params={},
		surrogate='linear',
		f=1.0,
		center_coordinate=0,
	)
	cocycle = Cocycle(lambda omega, x: matrix @ x, fibers, lambda omega, x: matrix)
	return Benchmark(driver, cocycle, StationaryPoint.zero(2), spec)
