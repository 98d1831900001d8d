"""
Nonlinear cocycles, stationary points, linearization and cutoff remainders.

A cocycle is given by its one-step maps φ¹_ω : E_ω → E_{θω}; longer
iterates are compositions along the orbit of the driver. Around a
stationary point Y_ω the map splits into its differential ψ¹_ω and a
remainder P_ω, and the remainder is localized with a bump function
scaled by a random radius ρ.

The bump and the modulus h are strategies, so alternative choices can
be plugged in without touching the operators:

    - Bump:
        SmoothstepBump is the default: 1 on [-1, 1], 0 outside [-2, 2]
        and the quintic smoothstep in between.

    - Modulus:
        PowerModulus implements h(x) = x^r with its inverse.

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
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional

import numpy as np

from app.services.rds.driver import Realization, shift
from app.services.rds.errors import (
	InvalidArgumentError,
	LinearizationFailureError,
	NumericalFailureError,
	OutsideValidityRadiusError,
)
from app.services.rds.field import FiberSchedule, VectorLike, coordinates

logger = logging.getLogger(__name__)

FD_STEP = 1e-6
LADDER = tuple(2.0**-k for k in range(3, 13))
LADDER_FLOOR = 1e-6
MATRIX_CACHE = 4096

StepMap = Callable[[Realization, np.ndarray], np.ndarray]
RandomVariable = Callable[[Realization], float]


def _infinite(omega: Realization) -> float:
	return math.inf


@dataclass(frozen=True, eq=False)
class Cocycle:
	"""Random map φ¹_ω together with its fiber schedule.

	Attributes:
	    step (StepMap): One-step map (ω, x) ↦ φ¹_ω(x).
	    fibers (FiberSchedule): Fibers E_ω.
	    differential (Optional[StepMap]): Analytic Jacobian (ω, x) ↦ Dφ¹_ω(x).
	    order (int): Differentiability order m.
	    validity_radius (RandomVariable): R(ω), +∞ for global maps.

	"""

	step: StepMap
	fibers: FiberSchedule
	differential: Optional[StepMap] = None
	order: int = 2
	validity_radius: RandomVariable = _infinite

	def __call__(self, omega: Realization, x: VectorLike) -> np.ndarray:
		"""Apply φ¹_ω to x."""
		coords = self.fibers.check(omega, x)
		image = np.asarray(self.step(omega, coords), dtype=float)
		return self.fibers.check(shift(omega, 1), image)

	def orbit(self, omega: Realization, x: VectorLike, n: int) -> List[np.ndarray]:
		"""Return [x, φ¹_ω(x), …, φⁿ_ω(x)]."""
		points = [self.fibers.check(omega, x)]
		for j in range(n):
			points.append(self(shift(omega, j), points[-1]))
		return points

	def norm(self, omega: Realization, xi: VectorLike) -> float:
		"""Return ‖ξ‖ in the norm of E_ω."""
		return self.fibers.spec_at(omega).measure(coordinates(xi))


def iterate(c: Cocycle, omega: Realization, x: VectorLike, n: int) -> np.ndarray:
	"""Return φⁿ_ω(x) = φ_{θ^{n-1}ω} ∘ ⋯ ∘ φ_ω(x).

	Args:
	    c (Cocycle): The cocycle.
	    omega (Realization): Base realization.
	    x (VectorLike): Point of E_ω.
	    n (int): Number of steps.

	Returns:
	    np.ndarray: Coordinates of the image in E_{θⁿω}.

	Raises:
	    InvalidArgumentError: If x is not in E_ω or n is negative.

	"""
	if n < 0:
		raise InvalidArgumentError('El número de pasos no puede ser negativo')

	point = c.fibers.check(omega, x)
	for j in range(n):
		point = c(shift(omega, j), point)
	return point


@dataclass(frozen=True, eq=False)
class StationaryPoint:
	"""Random fixed trajectory with φ¹_ω(Y_ω) = Y_{θω}.

	Attributes:
	    evaluator (Callable[[Realization], np.ndarray]): ω ↦ Y_ω.
	    tolerance (float): Accepted stationarity residual.

	"""

	evaluator: Callable[[Realization], np.ndarray]
	tolerance: float = 1e-12

	@classmethod
	def zero(cls, dimension: int) -> 'StationaryPoint':
		"""Return the stationary point Y ≡ 0."""
		origin = np.zeros(dimension)
		return cls(lambda omega: origin)

	def at(self, omega: Realization) -> np.ndarray:
		"""Return Y_ω."""
		return np.asarray(self.evaluator(omega), dtype=float)

	def residual(self, c: Cocycle, omega: Realization) -> float:
		"""Return ‖φ¹_ω(Y_ω) − Y_{θω}‖."""
		return float(np.linalg.norm(c(omega, self.at(omega)) - self.at(shift(omega, 1))))


class LinearCocycle:
	"""Matrix cocycle ψ¹_ω : E_ω → E_{θω}.

	The most recently used matrices are cached per realization. The LRU
	cache is thread safe, so a linear cocycle can be shared by parallel
	solvers, and bounded, so sliding windows do not grow it.
	"""

	def __init__(
		self, generator: Callable[[Realization], np.ndarray], cache_size: int = MATRIX_CACHE
	):
		"""Initialize the cocycle from its one-step generator.

		Args:
		    generator (Callable[[Realization], np.ndarray]): ω ↦ ψ¹_ω.
		    cache_size (int): Number of matrices kept.

		"""
		self.generator = generator
		self._cached = lru_cache(maxsize=cache_size)(self._evaluate)

	@classmethod
	def constant(cls, matrix: np.ndarray) -> 'LinearCocycle':
		"""Return the autonomous cocycle with a fixed matrix."""
		fixed = np.array(matrix, dtype=float)
		return cls(lambda omega: fixed)

	@classmethod
	def from_cocycle(cls, c: Cocycle, Y: StationaryPoint) -> 'LinearCocycle':
		"""Return the linearization of c along the stationary point Y."""
		return cls(lambda omega: linearize(c, Y, omega))

	def matrix(self, omega: Realization) -> np.ndarray:
		"""Return ψ¹_ω.

		Raises:
		    NumericalFailureError: If the matrix has non-finite entries.

		"""
		return self._cached(omega)

	def cache_info(self):
		"""Return the hit and size statistics of the matrix cache."""
		return self._cached.cache_info()

	def _evaluate(self, omega: Realization) -> np.ndarray:
		value = np.array(self.generator(omega), dtype=float)
		if value.ndim != 2 or not np.all(np.isfinite(value)):
			raise NumericalFailureError(f'Matriz no finita en el desplazamiento {omega.offset}')
		value.setflags(write=False)
		return value

	def power(self, omega: Realization, n: int) -> np.ndarray:
		"""Return ψⁿ_ω = ψ¹_{θ^{n-1}ω} ⋯ ψ¹_ω."""
		product = np.eye(self.matrix(omega).shape[1])
		for j in range(n):
			product = self.matrix(shift(omega, j)) @ product
		return product


def _central_differences(c: Cocycle, omega: Realization, y: np.ndarray) -> np.ndarray:
	h = max(FD_STEP, FD_STEP * float(np.linalg.norm(y)))
	columns = []
	for i in range(y.shape[0]):
		e = np.zeros_like(y)
		e[i] = h
		columns.append((c.step(omega, y + e) - c.step(omega, y - e)) / (2.0 * h))
	return np.column_stack(columns)


def linearize(c: Cocycle, Y: StationaryPoint, omega: Realization) -> np.ndarray:
	"""Return ψ¹_ω = D_{Y_ω}φ¹_ω.

	The analytic differential is used when the cocycle provides one.
	Otherwise central differences with step max(1e-6, 1e-6‖Y_ω‖) are
	taken, and the result is accepted only if the linearization error
	‖φ(Y+ξ) − φ(Y) − ψξ‖/‖ξ‖ decreases along a shrinking ladder of ξ.

	Args:
	    c (Cocycle): The cocycle.
	    Y (StationaryPoint): Stationary point.
	    omega (Realization): Realization ω.

	Returns:
	    np.ndarray: Matrix from E_ω to E_{θω}.

	Raises:
	    LinearizationFailureError: If the ladder test fails.
	    NumericalFailureError: If the matrix has non-finite entries.

	"""
	y = Y.at(omega)
	if c.differential is not None:
		return np.asarray(c.differential(omega, y), dtype=float)

	jacobian = _central_differences(c, omega, y)
	if not np.all(np.isfinite(jacobian)):
		raise NumericalFailureError('Diferencias finitas no finitas')

	direction = np.ones_like(y) / math.sqrt(y.shape[0])
	base = c.step(omega, y)
	ratios = []
	for s in LADDER:
		image = c.step(omega, y + s * direction)
		ratios.append(float(np.linalg.norm(image - base - s * jacobian @ direction)) / s)
	if ratios[-1] > LADDER_FLOOR and ratios[-1] > 0.5 * ratios[0]:
		raise LinearizationFailureError(
			f'La linealización no es consistente: error relativo {ratios[-1]:.3e} '
			f'en la escala {LADDER[-1]:.3e}'
		)

	return jacobian


@dataclass(frozen=True, eq=False)
class Remainder:
	"""Nonlinear remainder P_ω(ξ) = φ¹_ω(Y_ω + ξ) − φ¹_ω(Y_ω) − ψ¹_ω ξ.

	Attributes:
	    cocycle (Cocycle): The cocycle φ.
	    stationary (StationaryPoint): Stationary point Y.
	    linear (LinearCocycle): Linearization ψ along Y.

	"""

	cocycle: Cocycle
	stationary: StationaryPoint
	linear: LinearCocycle

	def __call__(self, omega: Realization, xi: VectorLike) -> np.ndarray:
		"""Evaluate P_ω(ξ)."""
		return remainder(self.cocycle, self.stationary, self.linear, omega, xi)


def remainder(
	c: Cocycle, Y: StationaryPoint, psi: LinearCocycle, omega: Realization, xi: VectorLike
) -> np.ndarray:
	"""Return P_ω(ξ).

	Args:
	    c (Cocycle): The cocycle.
	    Y (StationaryPoint): Stationary point.
	    psi (LinearCocycle): Linearization along Y.
	    omega (Realization): Realization ω.
	    xi (VectorLike): Displacement from Y_ω.

	Returns:
	    np.ndarray: The remainder in E_{θω}.

	Raises:
	    OutsideValidityRadiusError: If ‖ξ‖ ≥ R(ω).

	"""
	coords = c.fibers.check(omega, xi)
	size = c.fibers.spec_at(omega).measure(coords)
	if size >= c.validity_radius(omega):
		raise OutsideValidityRadiusError(
			f'‖ξ‖ = {size:.3e} fuera del radio de validez {c.validity_radius(omega):.3e}'
		)

	y = Y.at(omega)
	return c.step(omega, y + coords) - c.step(omega, y) - psi.matrix(omega) @ coords


class Bump(ABC):
	"""Define interface for cutoff bump functions δ."""

	@abstractmethod
	def __call__(self, x: float) -> float:
		"""Return δ(x)."""
		pass

	@abstractmethod
	def derivative(self, x: float) -> float:
		"""Return δ'(x)."""
		pass


class SmoothstepBump(Bump):
	"""Quintic smoothstep bump.

	δ(x) = 1 for |x| ≤ 1, 0 for |x| ≥ 2 and q(t) = 1 − t³(10 − 15t + 6t²)
	with t = |x| − 1 in between. The derivative peaks at 15/8.
	"""

	def __call__(self, x: float) -> float:
		"""Return δ(x)."""
		t = abs(x) - 1.0
		if t <= 0.0:
			return 1.0
		if t >= 1.0:
			return 0.0
		return 1.0 - t**3 * (10.0 - 15.0 * t + 6.0 * t * t)

	def derivative(self, x: float) -> float:
		"""Return δ'(x) = −sign(x)·30t²(1 − t)² inside the transition."""
		t = abs(x) - 1.0
		if t <= 0.0 or t >= 1.0:
			return 0.0
		return -math.copysign(30.0 * t * t * (1.0 - t) ** 2, x)


DEFAULT_BUMP = SmoothstepBump()


def bump(x: float) -> float:
	"""Return the default cutoff bump δ(x)."""
	return DEFAULT_BUMP(x)


class Modulus(ABC):
	"""Define interface for the increasing modulus h with h(0) = 0."""

	exponent = 1.0

	@abstractmethod
	def __call__(self, x: float) -> float:
		"""Return h(x)."""
		pass

	@abstractmethod
	def inverse(self, y: float) -> float:
		"""Return h⁻¹(y)."""
		pass


class PowerModulus(Modulus):
	"""Implement h(x) = x^r for r > 0."""

	def __init__(self, exponent: float = 1.0):
		"""Initialize the power.

		Args:
		    exponent (float): The exponent r.

		Raises:
		    InvalidArgumentError: If r is not positive.

		"""
		if exponent <= 0:
			raise InvalidArgumentError('El exponente del módulo debe ser positivo')
		self.exponent = float(exponent)

	def __call__(self, x: float) -> float:
		"""Return x^r."""
		return float(x) ** self.exponent

	def inverse(self, y: float) -> float:
		"""Return y^{1/r}."""
		return float(y) ** (1.0 / self.exponent)


def _unit(omega: Realization) -> float:
	return 1.0


@dataclass(frozen=True, eq=False)
class CutoffSpec:
	"""Localization data of the remainder.

	Attributes:
	    rho (RandomVariable): Cutoff radius ρ(ω).
	    f (RandomVariable): Tempered factor f(ω) of the remainder bound.
	    h (Modulus): Increasing modulus h.
	    bump (Bump): Bump function δ.
	    validity_radius (RandomVariable): R(ω).

	"""

	rho: RandomVariable = _unit
	f: RandomVariable = _unit
	h: Modulus = field(default_factory=PowerModulus)
	bump: Bump = DEFAULT_BUMP
	validity_radius: RandomVariable = _infinite

	def with_rho(self, rho: RandomVariable) -> 'CutoffSpec':
		"""Return a copy with another radius."""
		return CutoffSpec(rho, self.f, self.h, self.bump, self.validity_radius)


def cutoff_remainder(
	P: Callable[[Realization, np.ndarray], np.ndarray],
	spec: CutoffSpec,
	omega: Realization,
	xi: VectorLike,
	fibers: Optional[FiberSchedule] = None,
) -> np.ndarray:
	"""Return P_{ω,ρ}(ξ) = δ(‖ξ‖/ρ(θω)) P_ω(ξ).

	‖ξ‖ is the norm of E_ω from `fibers`, euclidean when omitted. The
	remainder is not evaluated where the bump vanishes, so the cutoff
	extends P by zero beyond 2ρ(θω) even when R(ω) is finite.
	"""
	coords = coordinates(xi)
	size = fibers.spec_at(omega).measure(coords) if fibers else float(np.linalg.norm(coords))
	weight = spec.bump(size / spec.rho(shift(omega, 1)))
	if weight == 0.0:
		return np.zeros_like(coords)
	return weight * np.asarray(P(omega, coords), dtype=float)


@dataclass
class AssumptionReport:
	"""Diagnostics of the standing assumptions on a sampled orbit.

	Attributes:
	    samples (int): Number of orbit samples.
	    log_norm_mean (float): Mean of log⁺‖ψ¹_{θⁿω}‖.
	    violation_ratio (float): Largest observed ratio of the remainder
	        increment to its bound ‖ξ−ξ̃‖ f(θω) h(‖ξ‖+‖ξ̃‖).
	    f_slope (float): Least-squares slope of log⁺f(θⁿω) in n.
	    f_rate (float): (1/n) log⁺ f(θⁿω) at the last sample.
	    rho_slope (Optional[float]): Least-squares slope of log ρ(θⁿω).
	    rho_rate (Optional[float]): (1/n) log ρ(θⁿω) at the last sample.
	    tolerance (float): Tolerance of the slope flags.
	    flags (List[str]): Failed checks.

	"""

	samples: int
	log_norm_mean: float
	violation_ratio: float
	f_slope: float
	f_rate: float
	rho_slope: Optional[float]
	rho_rate: Optional[float]
	tolerance: float
	flags: List[str] = field(default_factory=list)

	@property
	def passed(self) -> bool:
		"""Return True when no check was flagged."""
		return not self.flags

	def to_dict(self) -> dict:
		"""Return a JSON-ready dictionary."""
		return {
			'samples': self.samples,
			'log_norm_mean': self.log_norm_mean,
			'violation_ratio': self.violation_ratio,
			'f_slope': self.f_slope,
			'f_rate': self.f_rate,
			'rho_slope': self.rho_slope,
			'rho_rate': self.rho_rate,
			'tolerance': self.tolerance,
			'flags': list(self.flags),
			'passed': self.passed,
		}


def _ball_pairs(rng: np.random.Generator, dimension: int, radius: float, count: int):
	def draw() -> np.ndarray:
		direction = rng.standard_normal((count, dimension))
		direction /= np.linalg.norm(direction, axis=1, keepdims=True)
		return direction * radius * rng.random((count, 1)) ** (1.0 / dimension)

	return draw(), draw()


def remainder_ratios(
	P: Remainder,
	spec: CutoffSpec,
	omega: Realization,
	radius: float,
	pairs: int,
	rng: np.random.Generator,
	f_value: Optional[float] = None,
) -> np.ndarray:
	"""Return ‖P(ξ)−P(ξ̃)‖ / (‖ξ−ξ̃‖ f(θω) h(‖ξ‖+‖ξ̃‖)) on random pairs.

	Pairs are drawn uniformly in the ball of the given radius, clipped
	below R(ω).
	"""
	c = P.cocycle
	dimension = c.fibers.dimension_at(omega)
	radius = min(radius, 0.99 * c.validity_radius(omega))
	factor = spec.f(shift(omega, 1)) if f_value is None else f_value
	first, second = _ball_pairs(rng, dimension, radius, pairs)

	ratios = np.zeros(pairs)
	for i, (xi, eta) in enumerate(zip(first, second)):
		gap = c.norm(omega, xi - eta)
		scale = gap * factor * spec.h(c.norm(omega, xi) + c.norm(omega, eta))
		if scale > 0.0:
			ratios[i] = c.norm(shift(omega, 1), P(omega, xi) - P(omega, eta)) / scale
	return ratios


def estimate_f(
	P: Remainder,
	spec: CutoffSpec,
	omega: Realization,
	samples: int = 20,
	radius: float = 1.0,
	pairs: int = 20,
	safety: float = 1.25,
	seed: int = 0,
) -> float:
	"""Estimate a constant f from sampled Lipschitz quotients of P.

	Returns the largest observed quotient with f = 1, times the safety
	factor, and never less than a tiny positive floor.
	"""
	rng = np.random.default_rng(seed)
	worst = 0.0
	for n in range(samples):
		ratios = remainder_ratios(P, spec, shift(omega, n), radius, pairs, rng, f_value=1.0)
		worst = max(worst, float(ratios.max(initial=0.0)))
	return max(safety * worst, 1e-12)


def _slope(values: np.ndarray) -> float:
	indices = np.arange(1, values.shape[0] + 1, dtype=float)
	if values.shape[0] < 2:
		return 0.0
	return float(np.polyfit(indices, values, 1)[0])


def verify_assumption(
	c: Cocycle,
	Y: StationaryPoint,
	spec: CutoffSpec,
	samples: int,
	omega: Realization,
	psi: Optional[LinearCocycle] = None,
	radius: float = 1.0,
	pairs: int = 20,
	tolerance: float = 0.05,
	seed: int = 0,
) -> AssumptionReport:
	"""Check the standing assumptions on a sampled orbit.

	Args:
	    c (Cocycle): The cocycle.
	    Y (StationaryPoint): Stationary point.
	    spec (CutoffSpec): Moduli f and h, and the radius ρ when known.
	    samples (int): Number of orbit indices sampled.
	    omega (Realization): Base realization.
	    psi (Optional[LinearCocycle]): Linearization, built if omitted.
	    radius (float): Radius of the ball where pairs are drawn.
	    pairs (int): Pairs drawn per orbit sample.
	    tolerance (float): Threshold of the slope flags.
	    seed (int): Seed of the pair sampler.

	Returns:
	    AssumptionReport: The diagnostics.

	Raises:
	    InvalidArgumentError: If samples < 1.

	"""
	if samples < 1:
		raise InvalidArgumentError('Se requiere al menos una muestra')

	psi = psi or LinearCocycle.from_cocycle(c, Y)
	P = Remainder(c, Y, psi)
	rng = np.random.default_rng(seed)

	log_norms = []
	worst = 0.0
	for n in range(samples):
		point = shift(omega, n)
		log_norms.append(max(0.0, math.log(max(np.linalg.norm(psi.matrix(point), 2), 1e-300))))
		ratios = remainder_ratios(P, spec, point, radius, pairs, rng)
		worst = max(worst, float(ratios.max(initial=0.0)))

	f_logs = np.array(
		[max(0.0, math.log(spec.f(shift(omega, n)))) for n in range(1, samples + 1)]
	)
	rho_logs = np.array([math.log(spec.rho(shift(omega, n))) for n in range(1, samples + 1)])

	report = AssumptionReport(
		samples=samples,
		log_norm_mean=float(np.mean(log_norms)),
		violation_ratio=worst,
		f_slope=_slope(f_logs),
		f_rate=float(f_logs[-1] / samples),
		rho_slope=_slope(rho_logs),
		rho_rate=float(rho_logs[-1] / samples),
		tolerance=tolerance,
	)
	if not math.isfinite(report.log_norm_mean):
		report.flags.append('log-norm-integrability')
	if report.violation_ratio > 1.0:
		report.flags.append('remainder-bound')
	if abs(report.f_slope) > tolerance:
		report.flags.append('f-temperedness')
	if report.rho_slope < -tolerance:
		report.flags.append('rho-temperedness')

	logger.info(
		'Hipótesis verificadas en %d muestras: cociente máximo %.3e, banderas %s',
		samples,
		worst,
		report.flags,
	)
	return report
