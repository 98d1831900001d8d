"""
Benchmark cocycles with known oracles.

Each benchmark is registered with a builder and a set of default
parameters. Builders are pure: the same name, parameters and seed give
the same driver, cocycle and stationary point.

    - det-2d:           (x, y) ↦ (x + xy, y/2 + x²)
    - det-3d:           (u, x, y) ↦ (2u + x², x + xy, y/2 + x²)
    - random-diag:      diagonal exponents e^{a(ω)}, 1, e^{c(ω)} with a
                        cubic center nonlinearity
    - additive-noise:   y_{n+1} = y_n/2 + ξ_n coupled to a neutral x
    - delay-companion:  companion form of x_n = 1.5x_{n−1} − 0.5x_{n−2}
                        with a random quadratic term
    - driven-ode:       one Euler step of ẋ = V₀(x) + V(x)·Δ driven by a
                        circle rotation

This file is part of RandomCenter project.

RandomCenter is free software: you can redistribute it and/or
modify it under the terms of the GNU General Public License as
published by the Free Software Foundation, either version 3 of
the License, or (at your option) any later version.

RandomCenter is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU
General Public License for more details.

You should have received a copy of the GNU General Public License
along with RandomCenter. If not, see <https://www.gnu.org/licenses/>.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from app.services.rds.cocycle import Cocycle, PowerModulus, StationaryPoint
from app.services.rds.driver import DrivingSystem, Realization, birkhoff_average, build_driver
from app.services.rds.errors import InvalidArgumentError
from app.services.rds.field import FiberSchedule

logger = logging.getLogger(__name__)

NOISE_TERMS = 60
"""Terms of the geometric series of the additive-noise stationary point."""

LN2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class SystemSpec:
	"""Description and oracle data of a benchmark.

	Attributes:
	    name (str): Catalog name.
	    description (str): One-line description.
	    fibers (FiberSchedule): Fibers of the cocycle.
	    params (Dict[str, float]): Parameters after defaults.
	    surrogate (str): Continuous model the benchmark stands in for.
	    f (float): Constant bound of the remainder modulus with h = id.
	    exponents (Optional[Callable[[Realization, int], Tuple[float, ...]]]):
	        Oracle exponents in decreasing order for a base realization and
	        a number of steps.
	    series (Dict[int, Dict[int, float]]): Manifold series of the non-
	        center coordinates: coordinate ↦ {power: coefficient}.
	    center_coordinate (Optional[int]): Ambient coordinate spanning C
	        when C is a coordinate axis.

	"""

	name: str
	description: str
	fibers: FiberSchedule
	params: Dict[str, float]
	surrogate: str
	f: float
	exponents: Optional[Callable[[Realization, int], Tuple[float, ...]]] = None
	series: Dict[int, Dict[int, float]] = field(default_factory=dict)
	center_coordinate: Optional[int] = None

	@property
	def h(self) -> PowerModulus:
		"""Return the modulus h = id of every benchmark."""
		return PowerModulus(1.0)

	def describe(self) -> Dict[str, object]:
		"""Return the catalog entry."""
		return {
			'name': self.name,
			'description': self.description,
			'dimension': self.fibers.specs[0].dimension,
			'params': dict(sorted(self.params.items())),
			'surrogate': self.surrogate,
		}


class Benchmark(NamedTuple):
	"""A ready-to-analyze system."""

	driver: DrivingSystem
	cocycle: Cocycle
	stationary: StationaryPoint
	spec: SystemSpec


def _constant(values: Tuple[float, ...]) -> Callable[[Realization, int], Tuple[float, ...]]:
	return lambda omega, n: values


def _det_2d(params: Dict[str, float], seed: int) -> Benchmark:
	driver = build_driver('deterministic-point', 1, {}, seed)

	def step(omega: Realization, x: np.ndarray) -> np.ndarray:
		return np.array([x[0] + x[0] * x[1], x[1] / 2 + x[0] ** 2])

	def jacobian(omega: Realization, x: np.ndarray) -> np.ndarray:
		return np.array([[1.0 + x[1], x[0]], [2.0 * x[0], 0.5]])

	fibers = FiberSchedule.euclidean(2)
	spec = SystemSpec(
		name='det-2d',
		description='Mapa plano autónomo con un exponente nulo y otro −ln 2',
		fibers=fibers,
		params=params,
		surrogate='deterministic',
		f=math.sqrt(5.0),
		exponents=_constant((0.0, -LN2)),
		series={1: {2: 2.0, 4: -16.0, 6: 368.0}},
		center_coordinate=0,
	)
	return Benchmark(driver, Cocycle(step, fibers, jacobian), StationaryPoint.zero(2), spec)


def _det_3d(params: Dict[str, float], seed: int) -> Benchmark:
	driver = build_driver('deterministic-point', 1, {}, seed)

	def step(omega: Realization, x: np.ndarray) -> np.ndarray:
		u, s, y = x
		return np.array([2 * u + s**2, s + s * y, y / 2 + s**2])

	def jacobian(omega: Realization, x: np.ndarray) -> np.ndarray:
		u, s, y = x
		return np.array([[2.0, 2 * s, 0.0], [0.0, 1.0 + y, s], [0.0, 2 * s, 0.5]])

	fibers = FiberSchedule.euclidean(3)
	spec = SystemSpec(
		name='det-3d',
		description='Mapa autónomo con exponentes ln 2, 0 y −ln 2',
		fibers=fibers,
		params=params,
		surrogate='deterministic',
		f=3.0,
		exponents=_constant((LN2, 0.0, -LN2)),
		series={0: {2: -1.0}, 2: {2: 2.0}},
		center_coordinate=1,
	)
	return Benchmark(driver, Cocycle(step, fibers, jacobian), StationaryPoint.zero(3), spec)


def _random_diag(params: Dict[str, float], seed: int) -> Benchmark:
	driver = build_driver('iid-sequence', 2, {'low': -1.0, 'high': 1.0}, seed)
	a_mean, c_mean, spread = params['a_mean'], params['c_mean'], params['spread']
	if not a_mean - spread > 0 > c_mean + spread:
		raise InvalidArgumentError('Se requiere a > 0 > c en todo el soporte')

	def rates(omega: Realization) -> Tuple[float, float]:
		s = omega.symbol(0)
		return a_mean + spread * s[0], c_mean + spread * s[1]

	def step(omega: Realization, x: np.ndarray) -> np.ndarray:
		a, c = rates(omega)
		u, s, y = x
		return np.array([math.exp(a) * u + s**2, s - s**3, math.exp(c) * y + s**2])

	def jacobian(omega: Realization, x: np.ndarray) -> np.ndarray:
		a, c = rates(omega)
		s = x[1]
		return np.array(
			[[math.exp(a), 2 * s, 0.0], [0.0, 1.0 - 3 * s**2, 0.0], [0.0, 2 * s, math.exp(c)]]
		)

	def exponents(omega: Realization, n: int) -> Tuple[float, ...]:
		mean_a = a_mean + spread * birkhoff_average(lambda s: s[0], omega, n)
		mean_c = c_mean + spread * birkhoff_average(lambda s: s[1], omega, n)
		return (mean_a, 0.0, mean_c)

	fibers = FiberSchedule.euclidean(3)
	spec = SystemSpec(
		name='random-diag',
		description='Cociclo diagonal aleatorio con dirección central cúbica',
		fibers=fibers,
		params=params,
		surrogate='random linear part with bounded iid rates',
		f=math.sqrt(17.0),
		exponents=exponents,
		center_coordinate=1,
	)
	cocycle = Cocycle(step, fibers, jacobian, validity_radius=lambda omega: 1.0)
	return Benchmark(driver, cocycle, StationaryPoint.zero(3), spec)


def _additive_noise(params: Dict[str, float], seed: int) -> Benchmark:
	amplitude = params['amplitude']
	if amplitude <= 0:
		raise InvalidArgumentError('La amplitud del ruido debe ser positiva')
	driver = build_driver('iid-sequence', 1, {'low': -amplitude, 'high': amplitude}, seed)
	weights = 0.5 ** np.arange(NOISE_TERMS)

	def level(omega: Realization) -> float:
		past = omega.window(-NOISE_TERMS, 0)[::-1, 0]
		return float(weights @ past)

	def step(omega: Realization, x: np.ndarray) -> np.ndarray:
		noise = float(omega.symbol(0)[0])
		return np.array([x[0] + x[0] * (x[1] - level(omega)), x[1] / 2 + noise + x[0] ** 2])

	def jacobian(omega: Realization, x: np.ndarray) -> np.ndarray:
		return np.array([[1.0 + x[1] - level(omega), x[0]], [2.0 * x[0], 0.5]])

	fibers = FiberSchedule.euclidean(2)
	spec = SystemSpec(
		name='additive-noise',
		description='Coordenada estable con ruido aditivo acoplada a una dirección neutra',
		fibers=fibers,
		params=params,
		surrogate='stochastic equation with additive noise',
		f=math.sqrt(5.0),
		exponents=_constant((0.0, -LN2)),
		series={1: {2: 2.0}},
		center_coordinate=0,
	)
	stationary = StationaryPoint(lambda omega: np.array([0.0, level(omega)]))
	return Benchmark(driver, Cocycle(step, fibers, jacobian), stationary, spec)


def _delay_companion(params: Dict[str, float], seed: int) -> Benchmark:
	gamma, sigma = params['gamma'], params['sigma']
	driver = build_driver('iid-sequence', 1, {'low': -1.0, 'high': 1.0}, seed)
	first, second = params['a1'], params['a2']
	companion = np.array([[first, second], [1.0, 0.0]])

	def step(omega: Realization, x: np.ndarray) -> np.ndarray:
		weight = gamma + sigma * float(omega.symbol(0)[0])
		return companion @ x + np.array([weight * x[0] ** 2, 0.0])

	def jacobian(omega: Realization, x: np.ndarray) -> np.ndarray:
		weight = gamma + sigma * float(omega.symbol(0)[0])
		return companion + np.array([[2 * weight * x[0], 0.0], [0.0, 0.0]])

	roots = np.sort(np.abs(np.roots([1.0, -first, -second])))[::-1]
	with np.errstate(divide='ignore'):
		logs = tuple(float(v) for v in np.log(roots))

	fibers = FiberSchedule.euclidean(2)
	spec = SystemSpec(
		name='delay-companion',
		description='Ecuación en diferencias con retardo en forma compañera',
		fibers=fibers,
		params=params,
		surrogate='stochastic delay equation on segment fibers',
		f=2.0 * (abs(gamma) + abs(sigma)),
		exponents=_constant(logs),
	)
	return Benchmark(driver, Cocycle(step, fibers, jacobian), StationaryPoint.zero(2), spec)


def _driven_ode(params: Dict[str, float], seed: int) -> Benchmark:
	amplitude, decay, t0 = params['amplitude'], params['decay'], params['t0']
	driver = build_driver('finite-rotation', 1, {'alpha': params['alpha']}, seed)
	if not 0 < t0 * decay < 2:
		raise InvalidArgumentError('Se requiere 0 < t0·λ < 2 para una dirección estable')

	def increment(omega: Realization) -> float:
		phase = float(omega.symbol(0)[0])
		following = float(omega.symbol(1)[0])
		return amplitude * (math.sin(2 * math.pi * following) - math.sin(2 * math.pi * phase))

	def step(omega: Realization, x: np.ndarray) -> np.ndarray:
		delta = increment(omega)
		drift = np.array([x[0] * x[1], -decay * x[1] + x[0] ** 2])
		return x + t0 * drift + delta * x**2

	def jacobian(omega: Realization, x: np.ndarray) -> np.ndarray:
		delta = increment(omega)
		drift = np.array([[x[1], x[0]], [2 * x[0], -decay]])
		return np.eye(2) + t0 * drift + 2 * delta * np.diag(x)

	bound = 2 * abs(amplitude)
	f = math.sqrt((t0 + 2 * bound) ** 2 + t0**2 + 4 * t0**2 + 4 * bound**2)
	fibers = FiberSchedule.euclidean(2)
	spec = SystemSpec(
		name='driven-ode',
		description='Paso de Euler de una ecuación conducida por una señal suave',
		fibers=fibers,
		params=params,
		surrogate='differential equation driven by a smooth path',
		f=f,
		exponents=_constant((0.0, math.log(abs(1 - t0 * decay)))),
		center_coordinate=0,
	)
	return Benchmark(driver, Cocycle(step, fibers, jacobian), StationaryPoint.zero(2), spec)


Builder = Callable[[Dict[str, float], int], Benchmark]

REGISTRY: Dict[str, Tuple[Builder, Dict[str, float]]] = {
	'det-2d': (_det_2d, {}),
	'det-3d': (_det_3d, {}),
	'random-diag': (_random_diag, {'a_mean': 0.6, 'c_mean': -0.6, 'spread': 0.3}),
	'additive-noise': (_additive_noise, {'amplitude': 0.5}),
	'delay-companion': (
		_delay_companion,
		{'a1': 1.5, 'a2': -0.5, 'gamma': 1.0, 'sigma': 0.5},
	),
	'driven-ode': (
		_driven_ode,
		{'alpha': (math.sqrt(5.0) - 1) / 2, 'amplitude': 0.5, 'decay': 1.0, 't0': 0.5},
	),
}


def build_benchmark(
	name: str, params: Optional[Dict[str, float]] = None, seed: int = 0
) -> Benchmark:
	"""Build a benchmark system.

	Args:
	    name (str): Catalog name.
	    params (Optional[Dict[str, float]]): Overrides of the defaults.
	    seed (int): Seed of the driver.

	Returns:
	    Benchmark: Driver, cocycle, stationary point and spec.

	Raises:
	    InvalidArgumentError: If the name or a parameter is unknown.

	"""
	if name not in REGISTRY:
		raise InvalidArgumentError(f'Sistema desconocido: {name}')
	builder, defaults = REGISTRY[name]
	unknown = sorted(set(params or {}) - set(defaults))
	if unknown:
		raise InvalidArgumentError(f'Parámetros desconocidos para {name}: {", ".join(unknown)}')

	merged = {**defaults, **{k: float(v) for k, v in (params or {}).items()}}
	benchmark = builder(merged, seed)
	logger.info('Sistema %s construido con parámetros %s y semilla %d', name, merged, seed)
	return benchmark


def catalog() -> List[Dict[str, object]]:
	"""Return the catalog entries in registry order."""
	return [build_benchmark(name).spec.describe() for name in REGISTRY]
