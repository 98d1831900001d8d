"""
Finite-dimensional fibers E_ω attached to the realizations of a driver.

A `FiberSpec` fixes the dimension and the norm of one fiber. A
`FiberSchedule` assigns a spec to every realization, either the same
spec everywhere or one chosen by a symbol of ω. `FiberVector` tags a
coordinate vector with the orbit index of the fiber it lives in.

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

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy as np

from app.services.rds.driver import Realization
from app.services.rds.errors import InvalidArgumentError

NORMS = ('euclidean', 'weighted', 'sup')


@dataclass(frozen=True)
class FiberSpec:
	"""Dimension and norm of a fiber.

	Attributes:
	    dimension (int): Number of coordinates.
	    norm (str): `euclidean`, `weighted` (weighted p-norm) or `sup`.
	    weights (Tuple[float, ...]): Positive weights of the weighted norm.
	    p (float): Exponent of the weighted norm, p >= 1.
	    labels (Tuple[str, ...]): Optional names of the coordinates.

	"""

	dimension: int
	norm: str = 'euclidean'
	weights: Tuple[float, ...] = ()
	p: float = 2.0
	labels: Tuple[str, ...] = ()

	def __post_init__(self):
		"""Validate the descriptor."""
		if self.dimension < 1:
			raise InvalidArgumentError('La dimensión de la fibra debe ser al menos 1')
		if self.norm not in NORMS:
			raise InvalidArgumentError(f'Norma desconocida: {self.norm}')
		if self.norm == 'weighted':
			if len(self.weights) != self.dimension:
				raise InvalidArgumentError('Se requiere un peso por coordenada')
			if any(w <= 0 for w in self.weights):
				raise InvalidArgumentError('Los pesos deben ser estrictamente positivos')
			if self.p < 1:
				raise InvalidArgumentError('La norma ponderada requiere p >= 1')
		if self.labels and len(self.labels) != self.dimension:
			raise InvalidArgumentError('Se requiere una etiqueta por coordenada')

	def measure(self, coords: np.ndarray) -> float:
		"""Return the norm of a coordinate vector of matching length."""
		if self.norm == 'euclidean':
			return float(np.linalg.norm(coords))
		if self.norm == 'sup':
			return float(np.max(np.abs(coords)))

		weighted = np.asarray(self.weights) * np.abs(coords)
		return float(np.linalg.norm(weighted, ord=self.p))


@dataclass(frozen=True, eq=False)
class FiberVector:
	"""Coordinates of a point of E_{θⁿω}.

	Attributes:
	    coords (np.ndarray): Coordinates in the declared basis.
	    tag (int): Orbit index n of the fiber, relative to the base ω.

	"""

	coords: np.ndarray
	tag: int = 0

	def __post_init__(self):
		"""Store the coordinates as a read-only float array."""
		array = np.array(self.coords, dtype=float).reshape(-1)
		array.setflags(write=False)
		object.__setattr__(self, 'coords', array)

	@property
	def dimension(self) -> int:
		"""Return the number of coordinates."""
		return self.coords.shape[0]


VectorLike = Union[FiberVector, np.ndarray, Tuple[float, ...], list]


def coordinates(v: VectorLike) -> np.ndarray:
	"""Return the coordinates of a fiber vector or of a raw array."""
	if isinstance(v, FiberVector):
		return v.coords
	return np.asarray(v, dtype=float).reshape(-1)


def fiber_norm(spec: FiberSpec, v: VectorLike) -> float:
	"""Return the norm of v in the fiber described by spec.

	Args:
	    spec (FiberSpec): Fiber descriptor.
	    v (VectorLike): Vector of the fiber.

	Returns:
	    float: ‖v‖, zero only for v = 0.

	Raises:
	    InvalidArgumentError: If the dimensions differ.

	"""
	coords = coordinates(v)
	if coords.shape[0] != spec.dimension:
		raise InvalidArgumentError(
			f'Dimensión {coords.shape[0]} incompatible con la fibra de dimensión {spec.dimension}'
		)
	return spec.measure(coords)


@dataclass(frozen=True)
class FiberSchedule:
	"""Assignment ω ↦ E_ω.

	With a single spec every fiber is the same space. With several specs
	the `selector` maps a realization to the position of its spec, so the
	dimension may change along the orbit.

	Attributes:
	    specs (Tuple[FiberSpec, ...]): Candidate fiber specs.
	    selector (Optional[Callable[[Realization], int]]): Chooses a spec.

	"""

	specs: Tuple[FiberSpec, ...]
	selector: Optional[Callable[[Realization], int]] = field(default=None, compare=False)

	@classmethod
	def constant(cls, spec: FiberSpec) -> 'FiberSchedule':
		"""Return the schedule that uses spec at every realization."""
		return cls((spec,))

	@classmethod
	def euclidean(cls, dimension: int) -> 'FiberSchedule':
		"""Return the constant euclidean schedule of a dimension."""
		return cls.constant(FiberSpec(dimension))

	@property
	def is_constant(self) -> bool:
		"""Return True when every fiber has the same spec."""
		return self.selector is None or len(self.specs) == 1

	def spec_at(self, omega: Realization) -> FiberSpec:
		"""Return the spec of E_ω."""
		if self.is_constant:
			return self.specs[0]
		return self.specs[self.selector(omega)]

	def dimension_at(self, omega: Realization) -> int:
		"""Return dim E_ω."""
		return self.spec_at(omega).dimension

	def check(self, omega: Realization, v: VectorLike) -> np.ndarray:
		"""Return the coordinates of v after checking they fit in E_ω.

		Raises:
		    InvalidArgumentError: If the dimension of v is not dim E_ω.

		"""
		coords = coordinates(v)
		expected = self.dimension_at(omega)
		if coords.shape[0] != expected:
			raise InvalidArgumentError(
				f'El vector tiene dimensión {coords.shape[0]} y la fibra {expected}'
			)
		return coords
