"""
Driving systems realized as seeded bi-infinite symbol sequences.

A driving system is the noise model (Ω, θ). Every realization ω is a
bi-infinite sequence of symbols and the shift θ moves the origin of the
sequence by one. Three kinds of driver are provided:

    - iid-sequence:
        Independent bounded symbols (uniform on an interval or a scaled
        sign). Blocks of symbols are generated lazily by a counter-based
        generator keyed on the seed, the side of the origin and the
        block number, so any index can be queried without simulating
        the indices before it.

    - finite-rotation:
        Rotation of the circle by an angle α. The symbol at index j is
        the phase (phase0 + jα) mod 1.

    - deterministic-point:
        A one-point probability space. Every symbol equals a fixed
        value, so every cocycle driven by it is autonomous.

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
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from app.services.rds.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

BLOCK_SIZE = 1024
"""Number of symbols generated per counter block."""


class DrivingSystem(ABC):
	"""Define interface for driving systems.

	A driving system knows how to produce the symbol at any integer
	index of its base realization. Realizations are views with an
	offset into that sequence, so the shift never copies data.

	Attributes:
	    kind (str): Name of the driver kind.
	    dimension (int): Number of real components of one symbol.
	    params (Dict[str, float]): Distribution parameters.
	    seed (int): Seed of the base realization.

	"""

	kind = 'abstract'

	def __init__(self, dimension: int, params: Dict[str, float], seed: int):
		"""Initialize the common driver fields.

		Args:
		    dimension (int): Number of real components of one symbol.
		    params (Dict[str, float]): Distribution parameters.
		    seed (int): Seed of the base realization.

		Raises:
		    InvalidArgumentError: If the dimension is not positive or the
		        seed does not fit in 64 bits.

		"""
		if dimension < 1:
			raise InvalidArgumentError('La dimensión de los símbolos debe ser positiva')
		if not 0 <= seed < 2**64:
			raise InvalidArgumentError('La semilla debe ser un entero de 64 bits sin signo')

		self.dimension = dimension
		self.params = dict(params)
		self.seed = seed

	@abstractmethod
	def symbols(self, lo: int, hi: int) -> np.ndarray:
		"""Return the symbols of the base realization on [lo, hi).

		Args:
		    lo (int): First absolute index (inclusive).
		    hi (int): Last absolute index (exclusive).

		Returns:
		    np.ndarray: Array of shape (hi - lo, dimension).

		"""
		pass

	def realization(self, offset: int = 0) -> 'Realization':
		"""Return the realization θ^offset of the base point."""
		return Realization(self, offset)

	def describe(self) -> Dict[str, object]:
		"""Return the fields that identify this driver."""
		return {
			'kind': self.kind,
			'dimension': self.dimension,
			'params': dict(sorted(self.params.items())),
			'seed': self.seed,
		}

	def __eq__(self, other: object) -> bool:
		"""Compare drivers by their identifying fields."""
		if not isinstance(other, DrivingSystem):
			return NotImplemented
		return self.describe() == other.describe()

	def __hash__(self) -> int:
		"""Hash consistently with equality."""
		return hash((self.kind, self.dimension, self.seed, tuple(sorted(self.params.items()))))


class IidSequenceDriver(DrivingSystem):
	"""Implement the Bernoulli-type shift of independent symbols.

	Supported distributions:

	    - **uniform**: each component uniform on [low, high].
	    - **sign**: each component equal to ±scale with probability 1/2.

	Symbols live in two growable arrays, one for non-negative indices
	and one for negative indices. Extension happens in whole blocks and
	is guarded by a lock, so realizations can be shared by workers.
	"""

	kind = 'iid-sequence'

	def __init__(self, dimension: int, params: Dict[str, float], seed: int):
		"""Initialize the driver and validate the distribution.

		Args:
		    dimension (int): Number of components of one symbol.
		    params (Dict[str, float]): `distribution` code (0 uniform,
		        1 sign) or the keys `low`/`high` or `scale`.
		    seed (int): Seed of the base realization.

		Raises:
		    InvalidArgumentError: If the parameters are inconsistent.

		"""
		super().__init__(dimension, params, seed)
		if 'scale' in self.params:
			self.distribution = 'sign'
			self.scale = float(self.params['scale'])
			if self.scale <= 0:
				raise InvalidArgumentError(
					'La escala de la distribución de signo debe ser positiva'
				)
		else:
			self.distribution = 'uniform'
			self.low = float(self.params.get('low', -1.0))
			self.high = float(self.params.get('high', 1.0))
			if not self.low < self.high:
				raise InvalidArgumentError('El intervalo uniforme requiere low < high')

		self._positive = np.empty((0, dimension))
		self._negative = np.empty((0, dimension))
		self._lock = threading.Lock()

	def _block(self, side: int, number: int) -> np.ndarray:
		rng = np.random.default_rng(np.random.SeedSequence([self.seed, side, number]))
		shape = (BLOCK_SIZE, self.dimension)

		if self.distribution == 'sign':
			return self.scale * (2.0 * rng.integers(0, 2, size=shape) - 1.0)

		return rng.uniform(self.low, self.high, size=shape)

	def _ensure(self, lo: int, hi: int) -> None:
		with self._lock:
			while self._positive.shape[0] < hi:
				number = self._positive.shape[0] // BLOCK_SIZE
				self._positive = np.vstack([self._positive, self._block(0, number)])
			while self._negative.shape[0] < -lo:
				number = self._negative.shape[0] // BLOCK_SIZE
				self._negative = np.vstack([self._negative, self._block(1, number)])

	def symbols(self, lo: int, hi: int) -> np.ndarray:
		"""Return the symbols on [lo, hi), extending the cache if needed.

		Index -1 is the first entry of the negative array, -2 the second
		and so on.
		"""
		if hi <= lo:
			return np.empty((0, self.dimension))

		self._ensure(lo, hi)
		parts = []
		if lo < 0:
			stop = min(hi, 0)
			parts.append(self._negative[-stop : -lo][::-1])
		if hi > 0:
			parts.append(self._positive[max(lo, 0) : hi])

		return np.vstack(parts)


class RotationDriver(DrivingSystem):
	"""Implement the rotation of the circle by a fixed angle.

	The initial phase is drawn from the seed, so two drivers with the
	same seed and angle produce the same phases.
	"""

	kind = 'finite-rotation'

	def __init__(self, dimension: int, params: Dict[str, float], seed: int):
		"""Initialize the rotation.

		Args:
		    dimension (int): Must be 1, the symbol is the phase.
		    params (Dict[str, float]): `alpha` (rotation angle in turns)
		        and optional `phase` overriding the seeded phase.
		    seed (int): Seed of the initial phase.

		Raises:
		    InvalidArgumentError: If the dimension is not 1 or alpha is
		        missing.

		"""
		super().__init__(dimension, params, seed)
		if dimension != 1:
			raise InvalidArgumentError('La rotación tiene símbolos de dimensión 1')
		if 'alpha' not in self.params:
			raise InvalidArgumentError('La rotación requiere el parámetro alpha')

		self.alpha = float(self.params['alpha'])
		if 'phase' in self.params:
			self.phase = float(self.params['phase']) % 1.0
		else:
			self.phase = float(np.random.default_rng(np.random.SeedSequence([seed])).random())

	def symbols(self, lo: int, hi: int) -> np.ndarray:
		"""Return the phases (phase0 + jα) mod 1 for j in [lo, hi)."""
		indices = np.arange(lo, hi, dtype=float)
		return np.mod(self.phase + indices * self.alpha, 1.0).reshape(-1, 1)


class DeterministicPointDriver(DrivingSystem):
	"""Implement the trivial driver on a single point."""

	kind = 'deterministic-point'

	def __init__(self, dimension: int, params: Dict[str, float], seed: int):
		"""Initialize the constant symbol.

		Args:
		    dimension (int): Number of components of the symbol.
		    params (Dict[str, float]): Optional `value` of every component.
		    seed (int): Unused but kept for the common interface.

		"""
		super().__init__(dimension, params, seed)
		self.value = float(self.params.get('value', 0.0))

	def symbols(self, lo: int, hi: int) -> np.ndarray:
		"""Return the constant symbol repeated on [lo, hi)."""
		return np.full((max(hi - lo, 0), self.dimension), self.value)


DRIVERS = {
	IidSequenceDriver.kind: IidSequenceDriver,
	RotationDriver.kind: RotationDriver,
	DeterministicPointDriver.kind: DeterministicPointDriver,
}


def build_driver(
	kind: str,
	dimension: int = 1,
	params: Optional[Dict[str, float]] = None,
	seed: int = 0,
) -> DrivingSystem:
	"""Build a driving system from its kind name.

	Args:
	    kind (str): One of `iid-sequence`, `finite-rotation` or
	        `deterministic-point`.
	    dimension (int): Number of components of one symbol.
	    params (Optional[Dict[str, float]]): Distribution parameters.
	    seed (int): Seed of the base realization.

	Returns:
	    DrivingSystem: The configured driver.

	Raises:
	    InvalidArgumentError: If the kind is unknown.

	"""
	if kind not in DRIVERS:
		raise InvalidArgumentError(f'Tipo de sistema conductor desconocido: {kind}')

	driver = DRIVERS[kind](dimension, params or {}, seed)
	logger.debug('Sistema conductor %s creado con semilla %d', kind, seed)
	return driver


@dataclass(frozen=True)
class Realization:
	"""A point θ^offset ω₀ of the driving system.

	The symbol at index j of a realization is the symbol at absolute
	index offset + j of the base sequence, which is exactly the symbol
	at index 0 of θ^j applied to it.

	Attributes:
	    driver (DrivingSystem): Owner of the symbol sequence.
	    offset (int): Position of index 0 in the base sequence.

	"""

	driver: DrivingSystem
	offset: int = 0

	def symbol(self, j: int = 0) -> np.ndarray:
		"""Return the symbol at index j of this realization."""
		return self.driver.symbols(self.offset + j, self.offset + j + 1)[0]

	def window(self, lo: int, hi: int) -> np.ndarray:
		"""Return the symbols at indices [lo, hi) of this realization."""
		return self.driver.symbols(self.offset + lo, self.offset + hi)

	def distance(self, other: 'Realization') -> int:
		"""Return j such that other = θ^j self.

		Raises:
		    InvalidArgumentError: If both realizations do not share the
		        same driver.

		"""
		if other.driver is not self.driver:
			raise InvalidArgumentError(
				'Las realizaciones pertenecen a sistemas conductores distintos'
			)
		return other.offset - self.offset


def shift(omega: Realization, j: int) -> Realization:
	"""Return the realization θ^j ω.

	Args:
	    omega (Realization): Base realization.
	    j (int): Number of shifts, negative for θ^{-1}.

	Returns:
	    Realization: The shifted realization.

	"""
	return Realization(omega.driver, omega.offset + j)


def birkhoff_average(
	g: Callable[[np.ndarray], float], omega: Realization, n: int
) -> float:
	"""Return the time average of an observable along the orbit.

	Args:
	    g (Callable[[np.ndarray], float]): Scalar observable on symbols.
	    omega (Realization): Starting realization.
	    n (int): Number of terms.

	Returns:
	    float: (1/n) Σ_{j=0}^{n-1} g(symbol at j).

	Raises:
	    InvalidArgumentError: If n < 1.

	"""
	if n < 1:
		raise InvalidArgumentError('El promedio de Birkhoff requiere n >= 1')

	values = np.fromiter((g(s) for s in omega.window(0, n)), dtype=float, count=n)
	return float(values.mean())
