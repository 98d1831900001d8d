"""
Numerical multiplicative ergodic theory for linear cocycles.

This module turns a linear cocycle ψ along a sampled orbit into the
data the center-manifold construction consumes:

    - LyapunovSpectrum:
        Exponents from the push of an orthonormal frame with QR
        re-orthonormalization, clustered by a gap threshold.

    - OseledetsSplitting:
        Bases of U (positive exponents), C (zero exponent) and S
        (negative exponents) at every orbit index of a window. Fast
        subspaces come from pushing random frames forward in time;
        the slow filtration is the orthogonal complement of frames of
        the transposed cocycle pushed backward in time.

    - ProjectionSet:
        The three oblique projections of the splitting.

    - GrowthConstants:
        Finite-horizon suprema of the restricted cocycle norms against
        their exponential rates.

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
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space, subspace_angles

from app.services.rds.cocycle import LinearCocycle
from app.services.rds.driver import Realization, shift
from app.services.rds.errors import (
	InvalidArgumentError,
	NoCenterExponentError,
	NotInvertibleDirectionError,
	NumericalFailureError,
	SplittingNotConvergedError,
)
from app.services.rds.field import VectorLike, coordinates

logger = logging.getLogger(__name__)

DEFAULT_GAP = 0.05
SUBSPACES = ('C', 'U', 'S')
ALIASES = {
	'C': 'C',
	'U': 'U',
	'S': 'S',
	'C‖S⊕U': 'C',
	'U‖C⊕S': 'U',
	'S‖U⊕C': 'S',
}
CONDITION_LIMIT = 1e12
DIRECTION_TOLERANCE = 1e-8


@dataclass(frozen=True)
class LyapunovSpectrum:
	"""Clustered Lyapunov exponents.

	Attributes:
	    exponents (Tuple[float, ...]): Strictly decreasing cluster means.
	    multiplicities (Tuple[int, ...]): Size of each cluster.
	    gap (float): Clustering threshold.
	    raw (Tuple[float, ...]): Unclustered exponents, decreasing.
	    standard_errors (Tuple[float, ...]): Batch-means standard error of
	        each raw exponent.
	    steps (int): Number of cocycle steps averaged.

	"""

	exponents: Tuple[float, ...]
	multiplicities: Tuple[int, ...]
	gap: float = DEFAULT_GAP
	raw: Tuple[float, ...] = ()
	standard_errors: Tuple[float, ...] = ()
	steps: int = 0

	@property
	def center_index(self) -> Optional[int]:
		"""Return the position of the zero exponent, or None."""
		band = [i for i, mu in enumerate(self.exponents) if abs(mu) < self.gap / 2]
		if not band:
			return None
		return min(band, key=lambda i: abs(self.exponents[i]))

	@property
	def mu_plus(self) -> float:
		"""Return the smallest positive exponent, +∞ if none."""
		ic = self.center_index
		values = [mu for i, mu in enumerate(self.exponents) if mu > 0 and i != ic]
		return min(values) if values else math.inf

	@property
	def mu_minus(self) -> float:
		"""Return the largest negative exponent, −∞ if none."""
		ic = self.center_index
		values = [mu for i, mu in enumerate(self.exponents) if mu < 0 and i != ic]
		return max(values) if values else -math.inf

	@property
	def unstable_dimension(self) -> int:
		"""Return dim U, the multiplicity of the exponents above zero."""
		ic = self.center_index
		if ic is None:
			raise NoCenterExponentError('El espectro no contiene un exponente nulo')
		return sum(self.multiplicities[:ic])

	@property
	def center_dimension(self) -> int:
		"""Return dim C."""
		ic = self.center_index
		if ic is None:
			raise NoCenterExponentError('El espectro no contiene un exponente nulo')
		return self.multiplicities[ic]


def cluster(raw: List[float], gap: float) -> Tuple[Tuple[float, ...], Tuple[int, ...]]:
	"""Group decreasing exponents closer than gap and average each group."""
	ordered = sorted(raw, reverse=True)
	groups: List[List[float]] = []
	for mu in ordered:
		if groups and groups[-1][-1] - mu < gap:
			groups[-1].append(mu)
		else:
			groups.append([mu])
	return tuple(float(np.mean(g)) for g in groups), tuple(len(g) for g in groups)


def lyapunov_spectrum(
	psi: LinearCocycle,
	omega: Realization,
	k: int,
	n: int,
	gap: float = DEFAULT_GAP,
	period: int = 1,
	batches: int = 20,
) -> LyapunovSpectrum:
	"""Estimate the top-k Lyapunov exponents.

	An orthonormal k-frame (the first k coordinate vectors) is pushed
	forward along the orbit and re-orthonormalized by a QR step every
	`period` steps. The logarithms of the diagonal of R are the stretch
	factors; their time averages are the exponents. Standard errors come
	from the spread of the averages over `batches` consecutive blocks.

	Args:
	    psi (LinearCocycle): Linear cocycle.
	    omega (Realization): Base realization.
	    k (int): Number of exponents.
	    n (int): Number of cocycle steps.
	    gap (float): Clustering threshold.
	    period (int): Steps between re-orthonormalizations.
	    batches (int): Number of blocks of the batch-means estimate.

	Returns:
	    LyapunovSpectrum: Clustered exponents.

	Raises:
	    InvalidArgumentError: If k exceeds the fiber dimension or n is
	        shorter than the re-orthonormalization period.
	    NumericalFailureError: If a matrix or stretch factor is not finite.

	"""
	dimension = psi.matrix(omega).shape[1]
	if not 1 <= k <= dimension:
		raise InvalidArgumentError(f'k = {k} debe estar entre 1 y la dimensión {dimension}')
	if period < 1 or n < period:
		raise InvalidArgumentError('n debe ser al menos el periodo de reortonormalización')

	frame = np.eye(dimension)[:, :k]
	events = n // period
	stretches = np.zeros((events, k))
	for event in range(events):
		for j in range(event * period, (event + 1) * period):
			frame = psi.matrix(shift(omega, j)) @ frame
		q, r = np.linalg.qr(frame)
		diagonal = np.diag(r)
		with np.errstate(divide='ignore'):
			logs = np.log(np.abs(diagonal))
		if not np.all(np.isfinite(logs)):
			raise NumericalFailureError(
				f'Factor de estiramiento no finito en el paso {event * period}'
			)
		stretches[event] = logs
		frame = q * np.sign(np.where(diagonal == 0, 1.0, diagonal))

	steps = events * period
	raw = stretches.sum(axis=0) / steps
	order = np.argsort(-raw, kind='stable')
	raw = raw[order]

	blocks = min(batches, events)
	if blocks >= 2:
		sizes = np.array([len(b) for b in np.array_split(np.arange(events), blocks)])
		sums = np.array([b.sum(axis=0) for b in np.array_split(stretches, blocks)])
		estimates = sums[:, order] / (sizes[:, None] * period)
		errors = estimates.std(axis=0, ddof=1) / math.sqrt(blocks)
	else:
		errors = np.zeros(k)

	exponents, multiplicities = cluster(list(raw), gap)
	logger.info('Espectro de Lyapunov con %d pasos: %s', steps, np.round(raw, 6).tolist())
	return LyapunovSpectrum(
		exponents=exponents,
		multiplicities=multiplicities,
		gap=gap,
		raw=tuple(float(x) for x in raw),
		standard_errors=tuple(float(x) for x in errors),
		steps=steps,
	)


def _orient(basis: np.ndarray) -> np.ndarray:
	"""Flip columns so their largest-magnitude entry is positive."""
	if basis.shape[1] == 0:
		return basis
	pivots = basis[np.argmax(np.abs(basis), axis=0), np.arange(basis.shape[1])]
	return basis * np.where(pivots < 0, -1.0, 1.0)


def _random_frame(rng: np.random.Generator, dimension: int, size: int) -> np.ndarray:
	q, _ = np.linalg.qr(rng.standard_normal((dimension, size)))
	return q


def _push(matrices, frame: np.ndarray) -> np.ndarray:
	for matrix in matrices:
		q, r = np.linalg.qr(matrix @ frame)
		frame = q
	return frame


def _nested_angle(first: np.ndarray, second: np.ndarray, sizes: Tuple[int, ...]) -> float:
	worst = 0.0
	for size in sizes:
		if 0 < size < first.shape[0]:
			worst = max(worst, float(np.max(subspace_angles(first[:, :size], second[:, :size]))))
	return worst


class ProjectionSet:
	"""Oblique projections Π_{C‖S⊕U}, Π_{U‖C⊕S}, Π_{S‖U⊕C} on a window.

	Attributes:
	    lower (int): First orbit index.
	    matrices (Dict[str, np.ndarray]): Arrays of shape (size, d, d).

	"""

	def __init__(self, lower: int, matrices: Dict[str, np.ndarray]):
		"""Initialize the set from stacked projection matrices."""
		self.lower = lower
		self.matrices = matrices
		self.upper = lower + matrices['C'].shape[0] - 1

	@classmethod
	def from_bases(
		cls, lower: int, unstable: np.ndarray, center: np.ndarray, stable: np.ndarray
	) -> 'ProjectionSet':
		"""Build the projections from stacked bases.

		Raises:
		    NumericalFailureError: If the joined basis is singular.

		"""
		size, dimension = center.shape[0], center.shape[1]
		result = {name: np.zeros((size, dimension, dimension)) for name in SUBSPACES}
		u, c = unstable.shape[2], center.shape[2]
		for i in range(size):
			joined = np.hstack([unstable[i], center[i], stable[i]])
			if np.linalg.cond(joined) > CONDITION_LIMIT:
				raise NumericalFailureError(f'Subespacios casi paralelos en el índice {lower + i}')
			inverse = np.linalg.inv(joined)
			result['U'][i] = joined[:, :u] @ inverse[:u]
			result['C'][i] = joined[:, u : u + c] @ inverse[u : u + c]
			result['S'][i] = joined[:, u + c :] @ inverse[u + c :]
		return cls(lower, result)

	def matrix(self, which: str, n: int) -> np.ndarray:
		"""Return the projection matrix onto a subspace at orbit index n.

		Raises:
		    InvalidArgumentError: If n is outside the window or the
		        subspace name is unknown.

		"""
		if which not in ALIASES:
			raise InvalidArgumentError(f'Subespacio desconocido: {which}')
		if not self.lower <= n <= self.upper:
			raise InvalidArgumentError(
				f'Índice {n} fuera de la ventana [{self.lower}, {self.upper}]'
			)
		return self.matrices[ALIASES[which]][n - self.lower]

	def norms(self, which: str) -> np.ndarray:
		"""Return the operator norms ‖Π‖ along the window."""
		return np.array([np.linalg.norm(m, 2) for m in self.matrices[ALIASES[which]]])


class OseledetsSplitting:
	"""Bases of U, C and S on the orbit window [lower, upper].

	Attributes:
	    anchor (Realization): Realization of orbit index 0.
	    lower (int): First orbit index.
	    upper (int): Last orbit index.
	    unstable (np.ndarray): Bases of U, shape (size, d, dim U).
	    center (np.ndarray): Bases of C, shape (size, d, dim C).
	    stable (np.ndarray): Bases of S, shape (size, d, dim S).
	    matrices (np.ndarray): ψ¹ at every index of the window.
	    center_index (int): Position of the zero exponent in the spectrum.
	    spectrum (Optional[LyapunovSpectrum]): Spectrum used to split.
	    horizons (Tuple[int, int]): Forward and backward push lengths.
	    projections (ProjectionSet): Oblique projections.

	"""

	def __init__(
		self,
		anchor: Realization,
		lower: int,
		unstable: np.ndarray,
		center: np.ndarray,
		stable: np.ndarray,
		matrices: np.ndarray,
		center_index: int = 0,
		spectrum: Optional[LyapunovSpectrum] = None,
		horizons: Tuple[int, int] = (0, 0),
	):
		"""Initialize the splitting and derive projections and inverses.

		Raises:
		    InvalidArgumentError: If the dimensions do not add up.
		    NumericalFailureError: If a restricted inverse is singular.

		"""
		self.anchor = anchor
		self.lower = lower
		self.upper = lower + center.shape[0] - 1
		self.unstable = unstable
		self.center = center
		self.stable = stable
		self.matrices = matrices
		self.center_index = center_index
		self.spectrum = spectrum
		self.horizons = horizons
		self.dimension = center.shape[1]

		if unstable.shape[2] + center.shape[2] + stable.shape[2] != self.dimension:
			raise InvalidArgumentError('dim U + dim C + dim S debe ser la dimensión de la fibra')

		self.projections = ProjectionSet.from_bases(lower, unstable, center, stable)
		self._inverse = {
			'U': self._inverse_steps(unstable),
			'C': self._inverse_steps(center),
			'UC': self._inverse_steps(np.concatenate([unstable, center], axis=2)),
		}

	@classmethod
	def from_bases(
		cls,
		anchor: Realization,
		lower: int,
		upper: int,
		unstable: np.ndarray,
		center: np.ndarray,
		stable: np.ndarray,
		matrix: np.ndarray,
	) -> 'OseledetsSplitting':
		"""Build a splitting with the same bases and matrix at every index.

		Used for autonomous systems whose splitting is known in closed
		form.
		"""
		size = upper - lower + 1

		def stack(basis: np.ndarray) -> np.ndarray:
			basis = np.asarray(basis, dtype=float)
			if basis.ndim == 1:
				basis = basis[:, None]
			return np.repeat(basis[None], size, axis=0)

		return cls(
			anchor,
			lower,
			stack(unstable),
			stack(center),
			stack(stable),
			np.repeat(np.asarray(matrix, dtype=float)[None], size, axis=0),
		)

	def _inverse_steps(self, bases: np.ndarray) -> np.ndarray:
		"""Return the maps X_m → X_{m−1} inverting ψ¹ restricted to X."""
		size, dimension = bases.shape[0], bases.shape[1]
		steps = np.full((size, dimension, dimension), np.nan)
		if bases.shape[2] == 0:
			steps[1:] = 0.0
			return steps

		for i in range(1, size):
			previous = bases[i - 1]
			image = self.matrices[i - 1] @ previous
			if np.linalg.cond(image) > CONDITION_LIMIT:
				raise NumericalFailureError(
					f'Inversa restringida singular en el índice {self.lower + i}'
				)
			steps[i] = previous @ np.linalg.pinv(image)
		return steps

	def position(self, n: int) -> int:
		"""Return the array position of orbit index n.

		Raises:
		    InvalidArgumentError: If n is outside the window.

		"""
		if not self.lower <= n <= self.upper:
			raise InvalidArgumentError(
				f'Índice {n} fuera de la ventana del desdoblamiento [{self.lower}, {self.upper}]'
			)
		return n - self.lower

	def covers(self, lo: int, hi: int) -> bool:
		"""Return True when [lo, hi] lies inside the window."""
		return self.lower <= lo and hi <= self.upper

	def basis(self, which: str, n: int) -> np.ndarray:
		"""Return the orthonormal basis of U, C or S at index n."""
		name = ALIASES.get(which)
		if name is None:
			raise InvalidArgumentError(f'Subespacio desconocido: {which}')
		bases = {'U': self.unstable, 'C': self.center, 'S': self.stable}[name]
		return bases[self.position(n)]

	def matrix(self, n: int) -> np.ndarray:
		"""Return ψ¹ at orbit index n."""
		return self.matrices[self.position(n)]

	def inverse_step(self, which: str, m: int) -> np.ndarray:
		"""Return the restricted inverse from index m to m − 1.

		`which` is `U`, `C` or `UC` (the sum U ⊕ C).

		Raises:
		    InvalidArgumentError: If m − 1 is outside the window.

		"""
		position = self.position(m)
		if position == 0:
			raise InvalidArgumentError(f'La inversa en {m} requiere el índice {m - 1}')
		return self._inverse[which][position]

	@property
	def dimensions(self) -> Dict[str, int]:
		"""Return the dimensions of U, C and S."""
		return {
			'U': self.unstable.shape[2],
			'C': self.center.shape[2],
			'S': self.stable.shape[2],
		}


def _window_matrices(psi: LinearCocycle, omega: Realization, lo: int, hi: int) -> np.ndarray:
	matrices = [psi.matrix(shift(omega, n)) for n in range(lo, hi + 1)]
	shapes = {m.shape for m in matrices}
	if len(shapes) != 1 or matrices[0].shape[0] != matrices[0].shape[1]:
		raise InvalidArgumentError(
			'El desdoblamiento requiere fibras de dimensión constante en la ventana'
		)
	return np.array(matrices)


def _converged_push(
	psi: LinearCocycle,
	omega: Realization,
	start: int,
	direction: int,
	frame: np.ndarray,
	sizes: Tuple[int, ...],
	tolerance: float,
	initial: int,
	limit: int,
) -> Tuple[np.ndarray, int]:
	"""Push frames toward `start` from ever farther points until they agree.

	For direction +1 the frames travel forward with ψ; for −1 they
	travel backward with the transposed matrices.
	"""

	def run(length: int) -> np.ndarray:
		if direction > 0:
			indices = range(start - length, start)
			matrices = (psi.matrix(shift(omega, m)) for m in indices)
		else:
			indices = range(start + length - 1, start - 1, -1)
			matrices = (psi.matrix(shift(omega, m)).T for m in indices)
		return _push(matrices, frame)

	length = initial
	previous = run(length)
	while length < limit:
		length *= 2
		current = run(length)
		increment = _nested_angle(previous, current, sizes)
		logger.debug('Empuje de longitud %d: incremento angular %.3e', length, increment)
		if increment < tolerance:
			return current, length
		previous = current

	raise SplittingNotConvergedError(
		f'Los subespacios no convergen tras empujes de longitud {limit}'
	)


def oseledets_split(
	psi: LinearCocycle,
	omega: Realization,
	spectrum: LyapunovSpectrum,
	N_orbit: int,
	tolerance: float = 1e-9,
	initial_push: int = 16,
	max_push: int = 2**14,
	seed: int = 0,
) -> OseledetsSplitting:
	"""Compute U, C and S on the orbit window [−N_orbit, N_orbit].

	Args:
	    psi (LinearCocycle): Linear cocycle.
	    omega (Realization): Realization of orbit index 0.
	    spectrum (LyapunovSpectrum): Spectrum with a zero exponent.
	    N_orbit (int): Half width of the window.
	    tolerance (float): Subspace-angle Cauchy tolerance.
	    initial_push (int): First push length of the doubling search.
	    max_push (int): Longest push tried.
	    seed (int): Seed of the random initial frames.

	Returns:
	    OseledetsSplitting: Bases, projections and restricted inverses.

	Raises:
	    NoCenterExponentError: If no exponent lies in the zero band.
	    SplittingNotConvergedError: If the pushes do not converge.
	    InvalidArgumentError: If the fiber dimension is not constant.

	"""
	if spectrum.center_index is None:
		raise NoCenterExponentError('El espectro no contiene un exponente nulo')
	if N_orbit < 1:
		raise InvalidArgumentError('La ventana orbital debe tener semiancho positivo')

	matrices = _window_matrices(psi, omega, -N_orbit, N_orbit)
	dimension = matrices.shape[1]
	dim_u = spectrum.unstable_dimension
	dim_uc = dim_u + spectrum.center_dimension
	if dim_uc > dimension:
		raise InvalidArgumentError('Las multiplicidades exceden la dimensión de la fibra')
	if spectrum.mu_plus == math.inf and dim_u == 0:
		logger.warning('Subespacio inestable vacío: fuera de la hipótesis μ₁ > 0')

	rng = np.random.default_rng(seed)
	sizes = (dim_u, dim_uc)
	size = 2 * N_orbit + 1

	forward, forward_length = _converged_push(
		psi, omega, -N_orbit, 1, _random_frame(rng, dimension, dim_uc),
		sizes, tolerance, initial_push, max_push,
	)
	backward, backward_length = _converged_push(
		psi, omega, N_orbit + 1, -1, _random_frame(rng, dimension, dim_uc),
		sizes, tolerance, initial_push, max_push,
	)

	fast = np.zeros((size, dimension, dim_uc))
	fast[0] = forward
	for i in range(1, size):
		fast[i], _ = np.linalg.qr(matrices[i - 1] @ fast[i - 1])

	annihilators = np.zeros((size, dimension, dim_uc))
	frame = backward
	for i in range(size - 1, -1, -1):
		frame, _ = np.linalg.qr(matrices[i].T @ frame)
		annihilators[i] = frame

	unstable = np.zeros((size, dimension, dim_u))
	center = np.zeros((size, dimension, dim_uc - dim_u))
	stable = np.zeros((size, dimension, dimension - dim_uc))
	for i in range(size):
		unstable[i] = _orient(fast[i][:, :dim_u])
		if dim_uc < dimension:
			stable[i] = _orient(null_space(annihilators[i].T))
		span = fast[i]
		if dim_u > 0:
			coefficients = null_space(annihilators[i][:, :dim_u].T @ span)
			if coefficients.shape[1] != dim_uc - dim_u:
				raise NumericalFailureError(f'Intersección degenerada en el índice {i - N_orbit}')
			span, _ = np.linalg.qr(span @ coefficients)
		center[i] = _orient(span)

	logger.info(
		'Desdoblamiento en [%d, %d]: dim U = %d, dim C = %d, dim S = %d',
		-N_orbit,
		N_orbit,
		dim_u,
		dim_uc - dim_u,
		dimension - dim_uc,
	)
	return OseledetsSplitting(
		omega,
		-N_orbit,
		unstable,
		center,
		stable,
		matrices,
		spectrum.center_index,
		spectrum,
		(forward_length, backward_length),
	)


def project(splitting: OseledetsSplitting, which: str, n: int, v: VectorLike) -> np.ndarray:
	"""Project v at orbit index n onto a subspace along the other two.

	Args:
	    splitting (OseledetsSplitting): The splitting.
	    which (str): `C`, `U`, `S` or the long names `C‖S⊕U`, `U‖C⊕S`,
	        `S‖U⊕C`.
	    n (int): Orbit index.
	    v (VectorLike): Vector of E_{θⁿω}.

	Returns:
	    np.ndarray: The projected vector.

	Raises:
	    InvalidArgumentError: If n is outside the computed window.

	"""
	return splitting.projections.matrix(which, n) @ coordinates(v)


def restricted_inverse(
	psi: LinearCocycle,
	splitting: OseledetsSplitting,
	n_from: int,
	steps: int,
	v: VectorLike,
) -> np.ndarray:
	"""Apply ψ^{−steps} to a vector of U ⊕ C at index n_from.

	At each step the vector is written in the basis of ψ¹(U ⊕ C) and
	the coefficients are pulled back to the basis of the previous fiber.

	Raises:
	    NotInvertibleDirectionError: If v has a stable component.
	    NumericalFailureError: If a pushed basis is ill conditioned.
	    InvalidArgumentError: If the window does not reach n_from − steps.

	"""
	if steps < 0:
		raise InvalidArgumentError('El número de pasos no puede ser negativo')
	if not splitting.covers(n_from - steps, n_from):
		raise InvalidArgumentError(
			f'La ventana no cubre los índices [{n_from - steps}, {n_from}]'
		)

	w = coordinates(v)
	leak = float(np.linalg.norm(project(splitting, 'S', n_from, w)))
	if leak > DIRECTION_TOLERANCE * max(1.0, float(np.linalg.norm(w))):
		raise NotInvertibleDirectionError(
			f'El vector tiene componente estable {leak:.3e}, la inversa no está definida'
		)

	for m in range(n_from, n_from - steps, -1):
		previous = np.hstack([splitting.basis('U', m - 1), splitting.basis('C', m - 1)])
		image = psi.matrix(shift(splitting.anchor, m - 1)) @ previous
		if np.linalg.cond(image) > CONDITION_LIMIT:
			raise NumericalFailureError(f'Base mal condicionada en el índice {m - 1}')
		coefficients, *_ = np.linalg.lstsq(image, w, rcond=None)
		w = previous @ coefficients
	return w


def equivariance_angles(splitting: OseledetsSplitting) -> Dict[str, float]:
	"""Return the largest angle between ψ¹(X_n) and X_{n+1} on the window.

	Checked for U, C, S and for the orthogonal complement of S under the
	transposed cocycle.
	"""
	worst = {'U': 0.0, 'C': 0.0, 'S': 0.0, 'S-complement': 0.0}
	for n in range(splitting.lower, splitting.upper):
		matrix = splitting.matrix(n)
		for name in SUBSPACES:
			basis = splitting.basis(name, n)
			if basis.shape[1] == 0:
				continue
			angles = subspace_angles(matrix @ basis, splitting.basis(name, n + 1))
			worst[name] = max(worst[name], float(np.max(angles)))

		stable_next = splitting.basis('S', n + 1)
		if 0 < stable_next.shape[1]:
			complement_next = null_space(stable_next.T)
			complement = null_space(splitting.basis('S', n).T)
			angles = subspace_angles(matrix.T @ complement_next, complement)
			worst['S-complement'] = max(worst['S-complement'], float(np.max(angles)))
	return worst


def projection_slopes(splitting: OseledetsSplitting) -> Dict[str, float]:
	"""Return the least-squares slope of log‖Π‖ against the orbit index."""
	indices = np.arange(splitting.lower, splitting.upper + 1, dtype=float)
	slopes = {}
	for name in SUBSPACES:
		norms = splitting.projections.norms(name)
		if np.any(norms == 0):
			slopes[name] = 0.0
			continue
		slopes[name] = float(np.polyfit(indices, np.log(norms), 1)[0])
	return slopes


@dataclass(frozen=True)
class GrowthConstants:
	"""Finite-horizon growth constants on an orbit window.

	Attributes:
	    eps (float): Rate margin ε.
	    lower (int): First orbit index.
	    stable (np.ndarray): F^S_ε per index.
	    unstable (np.ndarray): F^U_ε per index.
	    center_forward (np.ndarray): F^{C,1}_ε per index.
	    center_backward (np.ndarray): F^{C,−1}_ε per index.
	    horizon (int): Horizon N_F.
	    safety (float): Factor applied to the suprema.

	"""

	eps: float
	lower: int
	stable: np.ndarray
	unstable: np.ndarray
	center_forward: np.ndarray
	center_backward: np.ndarray
	horizon: int
	safety: float

	def at(self, n: int) -> Dict[str, float]:
		"""Return the four constants at orbit index n."""
		i = n - self.lower
		if not 0 <= i < self.stable.shape[0]:
			raise InvalidArgumentError(f'Índice {n} fuera de la ventana de las constantes')
		return {
			'S': float(self.stable[i]),
			'U': float(self.unstable[i]),
			'C1': float(self.center_forward[i]),
			'C-1': float(self.center_backward[i]),
		}


def _forward_supremum(
	psi: LinearCocycle, omega: Realization, n: int, basis: np.ndarray, rate: float, horizon: int
) -> float:
	image = basis
	best = float(np.linalg.norm(image, 2))
	for k in range(1, horizon + 1):
		image = psi.matrix(shift(omega, n + k - 1)) @ image
		best = max(best, float(np.linalg.norm(image, 2)) * math.exp(-k * rate))
	return best


def _backward_supremum(
	splitting: OseledetsSplitting, which: str, n: int, basis: np.ndarray, rate: float, horizon: int
) -> float:
	image = basis
	best = float(np.linalg.norm(image, 2))
	for k in range(1, min(horizon, n - splitting.lower) + 1):
		image = splitting.inverse_step(which, n - k + 1) @ image
		if not np.all(np.isfinite(image)):
			raise NumericalFailureError(f'Inversa restringida no finita en el índice {n - k + 1}')
		best = max(best, float(np.linalg.norm(image, 2)) * math.exp(k * rate))
	return best


def growth_constants(
	psi: LinearCocycle,
	splitting: OseledetsSplitting,
	eps: float,
	N_F: int,
	safety: float = 1.25,
	spectrum: Optional[LyapunovSpectrum] = None,
) -> GrowthConstants:
	"""Evaluate F^S_ε, F^U_ε, F^{C,1}_ε and F^{C,−1}_ε on the window.

	Forward suprema run over 0 ≤ k ≤ N_F, backward ones over
	−N_F ≤ k ≤ 0 clipped at the start of the window. Empty subspaces
	get the constant 1.

	Raises:
	    InvalidArgumentError: If ε ≤ 0 or N_F < 1.
	    NumericalFailureError: If a restricted inverse is singular.

	"""
	if eps <= 0:
		raise InvalidArgumentError('ε debe ser positivo')
	if N_F < 1:
		raise InvalidArgumentError('El horizonte N_F debe ser al menos 1')

	spectrum = spectrum or splitting.spectrum
	mu_plus = spectrum.mu_plus if spectrum else math.inf
	mu_minus = spectrum.mu_minus if spectrum else -math.inf
	dims = splitting.dimensions

	size = splitting.upper - splitting.lower + 1
	values = {name: np.ones(size) for name in ('S', 'U', 'C1', 'C-1')}
	for i, n in enumerate(range(splitting.lower, splitting.upper + 1)):
		if dims['S']:
			values['S'][i] = _forward_supremum(
				psi, splitting.anchor, n, splitting.basis('S', n), mu_minus + eps, N_F
			)
		if dims['U']:
			values['U'][i] = _backward_supremum(
				splitting, 'U', n, splitting.basis('U', n), mu_plus - eps, N_F
			)
		values['C1'][i] = _forward_supremum(
			psi, splitting.anchor, n, splitting.basis('C', n), eps, N_F
		)
		values['C-1'][i] = _backward_supremum(
			splitting, 'C', n, splitting.basis('C', n), -eps, N_F
		)

	for name in values:
		if name == 'C1' or name == 'C-1' or dims[name[0]]:
			values[name] = values[name] * safety

	logger.info(
		'Constantes de crecimiento con ε = %.4f: max F^S = %.3f, max F^U = %.3f, max F^C = %.3f',
		eps,
		values['S'].max(),
		values['U'].max(),
		max(values['C1'].max(), values['C-1'].max()),
	)
	return GrowthConstants(
		eps=eps,
		lower=splitting.lower,
		stable=values['S'],
		unstable=values['U'],
		center_forward=values['C1'],
		center_backward=values['C-1'],
		horizon=N_F,
		safety=safety,
	)
