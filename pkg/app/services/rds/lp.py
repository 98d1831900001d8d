"""
Lyapunov–Perron operator on truncated weighted sequence windows.

A sequence window Γ holds one fiber vector per orbit index in
[lower, upper] around a base realization. The operator I(v, Γ) builds
the sequence whose center part is the orbit of v corrected by the
center-projected remainders, whose stable part sums the past
remainders forward and whose unstable part pulls the future remainders
back with restricted inverses. Fixed points are exactly the orbits of
the cutoff-modified cocycle that grow at most like e^{ν|n|}.

The sums are evaluated with one-step recurrences, which is the same
as summing over the window with entries beyond it set to zero:

    - center, n > 0:   c_n = ψ c_{n−1} + Π_C p_n,      c_0 = Π_C v
    - center, n < 0:   c_n = ψ⁻¹ (c_{n+1} − Π_C p_{n+1})
    - stable:          s_n = ψ s_{n−1} + Π_S p_n
    - unstable:        u_n = ψ⁻¹ (u_{n+1} − Π_U p_{n+1})

where p_j = P_{θ^{j−1}ω,ρ}(Γ_{j−1}) lives in the fiber of index j.

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
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from app.services.rds.cocycle import Cocycle, CutoffSpec, LinearCocycle, StationaryPoint
from app.services.rds.driver import Realization, shift
from app.services.rds.errors import (
	FixedPointNotConvergedError,
	InvalidArgumentError,
	NotInCenterError,
	OutsideValidityRadiusError,
	ParametersInfeasibleError,
	RadiusFailureError,
)
from app.services.rds.field import VectorLike, coordinates
from app.services.rds.met import GrowthConstants, LyapunovSpectrum, OseledetsSplitting

logger = logging.getLogger(__name__)

CENTER_TOLERANCE = 1e-8
RATIO_FLOOR = 1e-13


@dataclass(frozen=True, eq=False)
class SequenceWindow:
	"""Truncated element Γ of the weighted sequence space.

	Attributes:
	    realization (Realization): Base realization ω.
	    lower (int): First orbit index of the window.
	    upper (int): Last orbit index of the window.
	    entries (np.ndarray): Π^n[Γ] for n in [lower, upper], one per row.
	    nu (float): Weight exponent ν.

	"""

	realization: Realization
	lower: int
	upper: int
	entries: np.ndarray
	nu: float

	@classmethod
	def zeros(
		cls, realization: Realization, half_width: int, dimension: int, nu: float
	) -> 'SequenceWindow':
		"""Return Γ = 0 on [−half_width, half_width]."""
		size = 2 * half_width + 1
		return cls(realization, -half_width, half_width, np.zeros((size, dimension)), nu)

	def entry(self, n: int) -> np.ndarray:
		"""Return Π^n[Γ].

		Raises:
		    InvalidArgumentError: If n is outside the window.

		"""
		if not self.lower <= n <= self.upper:
			raise InvalidArgumentError(
				f'Índice {n} fuera de la ventana [{self.lower}, {self.upper}]'
			)
		return self.entries[n - self.lower]

	def weights(self) -> np.ndarray:
		"""Return e^{−ν|n|} for every index of the window."""
		return np.exp(-self.nu * np.abs(np.arange(self.lower, self.upper + 1)))

	def with_entries(self, entries: np.ndarray) -> 'SequenceWindow':
		"""Return a window with the same frame and other entries."""
		return replace(self, entries=entries)


def weighted_norm(gamma: SequenceWindow) -> float:
	"""Return sup_n ‖Π^n[Γ]‖ e^{−ν|n|} over the window."""
	if gamma.entries.size == 0:
		return 0.0
	return float(np.max(np.linalg.norm(gamma.entries, axis=1) * gamma.weights()))


def weighted_distance(first: SequenceWindow, second: SequenceWindow) -> float:
	"""Return the weighted norm of Γ − Γ̃ for windows with the same frame."""
	return weighted_norm(first.with_entries(first.entries - second.entries))


@dataclass(frozen=True)
class LPConfig:
	"""Settings of the Lyapunov–Perron construction.

	Attributes:
	    nu (float): Weight exponent ν.
	    eps (Optional[float]): Rate margin ε, default from the spectrum.
	    N (int): Half width of the sequence windows.
	    tolerance (float): Fixed-point tolerance in the weighted norm.
	    max_iterations (int): Picard iteration limit.
	    M (Optional[float]): Constant M_ε, largest with 5L_ε ≤ 1/2 if unset.
	    M_tilde (Optional[float]): Constant M̃_ε, largest with 5L̃_ε ≤ 1.
	    N_F (int): Horizon of the growth constants.

	"""

	nu: float = 0.2
	eps: Optional[float] = None
	N: int = 40
	tolerance: float = 1e-12
	max_iterations: int = 200
	M: Optional[float] = None
	M_tilde: Optional[float] = None
	N_F: int = 50

	def resolve(self, spectrum: LyapunovSpectrum) -> 'LPConfig':
		"""Return a copy with ε, M_ε and M̃_ε fixed and the rates validated.

		Raises:
		    ParametersInfeasibleError: If ν or ε violate the rate
		        conditions of the spectrum.

		"""
		mu_plus, mu_minus = spectrum.mu_plus, spectrum.mu_minus
		if not 0 < self.nu < min(mu_plus, -mu_minus):
			raise ParametersInfeasibleError(
				f'ν = {self.nu} debe estar en (0, {min(mu_plus, -mu_minus):.6f})'
			)
		eps = self.eps
		if eps is None:
			eps = min(self.nu, mu_plus - self.nu, -mu_minus - self.nu) / 4
		if not 0 < eps < self.nu:
			raise ParametersInfeasibleError(f'ε = {eps} debe estar en (0, ν)')

		center, unstable, stable = rate_sums(self.nu, eps, mu_plus, mu_minus)
		M = self.M
		if M is None:
			M = 0.1 / (math.exp(self.nu) * (center + unstable + stable))
		M_tilde = self.M_tilde
		if M_tilde is None:
			hyperbolic = unstable + stable
			M_tilde = 0.2 / (math.exp(self.nu) * hyperbolic) if hyperbolic > 0 else math.inf

		if self.N < 1 or self.max_iterations < 1 or self.tolerance <= 0:
			raise InvalidArgumentError('N, max_iterations y tolerance deben ser positivos')
		return replace(self, eps=eps, M=M, M_tilde=M_tilde)


def rate_sums(nu: float, eps: float, mu_plus: float, mu_minus: float) -> Tuple[float, float, float]:
	"""Return the center, unstable and stable geometric sums of L_ε.

	Raises:
	    ParametersInfeasibleError: If a ratio is not below one.

	"""
	if not eps < nu:
		raise ParametersInfeasibleError('Se requiere ε < ν')
	if -mu_plus + eps + nu >= 0:
		raise ParametersInfeasibleError('Se requiere −μ⁺ + ε + ν < 0')
	if mu_minus + eps + nu >= 0:
		raise ParametersInfeasibleError('Se requiere μ⁻ + ε + ν < 0')

	center = 1.0 / (1.0 - math.exp(eps - nu))
	unstable = 0.0
	if mu_plus < math.inf:
		ratio = math.exp(-mu_plus + eps + nu)
		unstable = ratio / (1.0 - ratio)
	stable = 0.0
	if mu_minus > -math.inf:
		stable = 1.0 / (1.0 - math.exp(mu_minus + eps + nu))
	return center, unstable, stable


def contraction_bound(cfg: LPConfig, spectrum: LyapunovSpectrum) -> float:
	"""Return L_ε = M_ε e^ν (center + unstable + stable sums).

	Args:
	    cfg (LPConfig): Settings with ν, ε and M_ε.
	    spectrum (LyapunovSpectrum): Spectrum giving μ⁺ and μ⁻.

	Returns:
	    float: The contraction constant; 5L_ε < 1 certifies the operator.

	Raises:
	    ParametersInfeasibleError: If the sign conditions fail.

	"""
	center, unstable, stable = rate_sums(cfg.nu, cfg.eps, spectrum.mu_plus, spectrum.mu_minus)
	return (cfg.M or 0.0) * math.exp(cfg.nu) * (center + unstable + stable)


def injectivity_bound(cfg: LPConfig, spectrum: LyapunovSpectrum) -> float:
	"""Return L̃_ε, the constant of L_ε without the center sum, with M̃_ε."""
	_, unstable, stable = rate_sums(cfg.nu, cfg.eps, spectrum.mu_plus, spectrum.mu_minus)
	if unstable + stable == 0.0:
		return 0.0
	return (cfg.M_tilde or 0.0) * math.exp(cfg.nu) * (unstable + stable)


@dataclass(frozen=True)
class Certificate:
	"""Contraction certificate of a resolved configuration.

	Attributes:
	    L (float): Contraction constant L_ε.
	    L_tilde (float): Injectivity constant L̃_ε.
	    M (float): M_ε.
	    M_tilde (float): M̃_ε.
	    eps (float): ε.
	    nu (float): ν.
	    rho_policy (str): `certified` or `fixed`.

	"""

	L: float
	L_tilde: float
	M: float
	M_tilde: float
	eps: float
	nu: float
	rho_policy: str = 'certified'

	@property
	def holds(self) -> bool:
		"""Return True when 5L_ε < 1 and 5L̃_ε ≤ 1, the latter up to rounding."""
		return 5 * self.L < 1 and 5 * self.L_tilde <= 1 + 1e-12

	def to_dict(self) -> dict:
		"""Return a JSON-ready dictionary."""
		return {
			'L': self.L,
			'L_tilde': self.L_tilde,
			'M': self.M,
			'M_tilde': self.M_tilde if math.isfinite(self.M_tilde) else None,
			'eps': self.eps,
			'nu': self.nu,
			'rho_policy': self.rho_policy,
			'holds': self.holds,
			'applies_to_radius': self.rho_policy == 'certified',
		}


def thresholds(
	M: float,
	M_tilde: float,
	f: float,
	constants: dict,
	constants_nu: dict,
	norms: dict,
) -> Tuple[float, float]:
	"""Return T(ω) and T̃(ω) from plain numbers.

	Args:
	    M (float): M_ε.
	    M_tilde (float): M̃_ε.
	    f (float): f(ω).
	    constants (dict): ε-constants with keys `S`, `U`, `C1`, `C-1`.
	    constants_nu (dict): ν-constants with keys `C1`, `C-1`.
	    norms (dict): Projection norms with keys `C`, `U`, `S`.

	Returns:
	    Tuple[float, float]: (T, T̃). Terms of empty subspaces
	    (zero projection) drop out of the minima.

	"""

	def reciprocal(value: float) -> float:
		return math.inf if value == 0.0 else 1.0 / value

	hyperbolic = min(
		reciprocal(constants['U'] * norms['U']),
		reciprocal(constants['S'] * norms['S']),
	)
	T = (M / f) * min(
		reciprocal(constants['C1'] * norms['C']),
		reciprocal(constants['C-1'] * norms['C'] * f),
		hyperbolic,
	)
	if math.isinf(M_tilde) or math.isinf(hyperbolic):
		return T, math.inf
	T_tilde = M_tilde / (4 * f * max(constants_nu['C1'], constants_nu['C-1'])) * hyperbolic
	return T, T_tilde


def radius_from_thresholds(T: float, T_tilde: float, h) -> float:
	"""Return ρ = min{¼h⁻¹(T̃), ¼h⁻¹(T)}.

	Raises:
	    RadiusFailureError: If T ≤ 0 or h⁻¹ is not finite at T.

	"""
	if not T > 0 or not math.isfinite(T):
		raise RadiusFailureError(f'T = {T} no es un umbral válido')
	try:
		values = [0.25 * h.inverse(T)]
		if math.isfinite(T_tilde):
			if not T_tilde > 0:
				raise RadiusFailureError(f'T̃ = {T_tilde} no es un umbral válido')
			values.append(0.25 * h.inverse(T_tilde))
	except (ValueError, OverflowError, ZeroDivisionError) as exc:
		raise RadiusFailureError(f'h⁻¹ no está definida en T = {T}') from exc

	rho = min(values)
	if not rho > 0 or not math.isfinite(rho):
		raise RadiusFailureError(f'Radio no positivo: {rho}')
	return rho


def radius(
	omega: Realization,
	constants: GrowthConstants,
	splitting: OseledetsSplitting,
	cutoff: CutoffSpec,
	cfg: LPConfig,
	constants_nu: Optional[GrowthConstants] = None,
) -> float:
	"""Return the refined cutoff radius ρ(ω).

	Args:
	    omega (Realization): Realization on the splitting window.
	    constants (GrowthConstants): ε-constants.
	    splitting (OseledetsSplitting): Splitting with its projections.
	    cutoff (CutoffSpec): Provides f and h.
	    cfg (LPConfig): Resolved settings with M_ε and M̃_ε.
	    constants_nu (Optional[GrowthConstants]): ν-constants used by the
	        injectivity threshold, the ε-constants if omitted.

	Returns:
	    float: ρ(ω).

	Raises:
	    RadiusFailureError: If a threshold is not positive.

	"""
	n = splitting.anchor.distance(omega)
	norms = {
		name: float(np.linalg.norm(splitting.projections.matrix(name, n), 2))
		for name in ('C', 'U', 'S')
	}
	T, T_tilde = thresholds(
		cfg.M,
		cfg.M_tilde,
		cutoff.f(omega),
		constants.at(n),
		(constants_nu or constants).at(n),
		norms,
	)
	return radius_from_thresholds(T, T_tilde, cutoff.h)


@dataclass(frozen=True, eq=False)
class OrbitTable:
	"""Random variable tabulated on an orbit window.

	Attributes:
	    anchor (Realization): Realization of orbit index 0.
	    lower (int): First orbit index.
	    values (np.ndarray): One value per index.

	"""

	anchor: Realization
	lower: int
	values: np.ndarray

	def __call__(self, omega: Realization) -> float:
		"""Return the value at ω.

		Raises:
		    InvalidArgumentError: If ω is not on the tabulated window.

		"""
		i = self.anchor.distance(omega) - self.lower
		if not 0 <= i < self.values.shape[0]:
			raise InvalidArgumentError(f'Realización fuera de la tabla orbital: {i + self.lower}')
		return float(self.values[i])


class LPContext:
	"""Orbit data shared by every Lyapunov–Perron evaluation.

	The context tabulates, on the splitting window, the stationary
	point, its image, the cutoff radius and the realizations, so the
	operator only evaluates the cocycle on displaced points.

	Attributes:
	    anchor (Realization): Realization of orbit index 0.
	    cocycle (Cocycle): The cocycle φ.
	    stationary (StationaryPoint): Stationary point Y.
	    linear (LinearCocycle): Linearization ψ.
	    splitting (OseledetsSplitting): Splitting on the window.
	    constants (GrowthConstants): ε-constants.
	    constants_nu (GrowthConstants): ν-constants.
	    cutoff (CutoffSpec): Cutoff data, with ρ tabulated on the window.
	    config (LPConfig): Resolved settings.
	    certificate (Certificate): Contraction certificate.

	"""

	def __init__(
		self,
		cocycle: Cocycle,
		stationary: StationaryPoint,
		linear: LinearCocycle,
		splitting: OseledetsSplitting,
		constants: GrowthConstants,
		constants_nu: GrowthConstants,
		cutoff: CutoffSpec,
		config: LPConfig,
		certificate: Certificate,
	):
		"""Initialize the context and tabulate the orbit data."""
		self.anchor = splitting.anchor
		self.cocycle = cocycle
		self.stationary = stationary
		self.linear = linear
		self.splitting = splitting
		self.constants = constants
		self.constants_nu = constants_nu
		self.cutoff = cutoff
		self.config = config
		self.certificate = certificate

		self.lower, self.upper = splitting.lower, splitting.upper
		indices = range(self.lower, self.upper + 1)
		self.realizations = [shift(self.anchor, n) for n in indices]
		self.points = np.array([stationary.at(r) for r in self.realizations])
		self.images = np.array([cocycle.step(r, y) for r, y in zip(self.realizations, self.points)])
		self.rho = np.array([cutoff.rho(r) for r in self.realizations])
		self.dimension = splitting.dimension

	def index_of(self, omega: Realization) -> int:
		"""Return the orbit index of ω relative to the anchor."""
		return self.anchor.distance(omega)

	def realization(self, n: int) -> Realization:
		"""Return θⁿ of the anchor."""
		return shift(self.anchor, n)

	def require(self, lo: int, hi: int) -> None:
		"""Check that the orbit indices [lo, hi] are tabulated.

		Raises:
		    InvalidArgumentError: If the splitting window is too small.

		"""
		if not self.splitting.covers(lo, hi):
			raise InvalidArgumentError(
				f'La ventana del desdoblamiento [{self.lower}, {self.upper}] '
				f'no cubre [{lo}, {hi}]'
			)

	def stationary_at(self, n: int) -> np.ndarray:
		"""Return Y at orbit index n."""
		self.require(n, n)
		return self.points[n - self.lower]

	def radius_at(self, n: int) -> float:
		"""Return ρ at orbit index n."""
		self.require(n, n)
		return float(self.rho[n - self.lower])

	def projection(self, which: str, n: int) -> np.ndarray:
		"""Return the projection matrix at orbit index n."""
		return self.splitting.projections.matrix(which, n)

	def remainder(self, n: int, xi: np.ndarray) -> np.ndarray:
		"""Return P_{θⁿω}(ξ).

		Raises:
		    OutsideValidityRadiusError: If ‖ξ‖ ≥ R(θⁿω).

		"""
		i = n - self.lower
		realization = self.realizations[i]
		size = self.cocycle.norm(realization, xi)
		if size >= self.cocycle.validity_radius(realization):
			raise OutsideValidityRadiusError(f'‖ξ‖ = {size:.3e} fuera del radio de validez')
		displaced = self.cocycle.step(realization, self.points[i] + xi)
		return displaced - self.images[i] - self.splitting.matrices[i] @ xi

	def cutoff_remainder(self, n: int, xi: np.ndarray) -> np.ndarray:
		"""Return P_{θⁿω,ρ}(ξ) = δ(‖ξ‖/ρ(θ^{n+1}ω)) P_{θⁿω}(ξ)."""
		size = self.cocycle.norm(self.realizations[n - self.lower], xi)
		weight = self.cutoff.bump(size / self.rho[n + 1 - self.lower])
		if weight == 0.0:
			return np.zeros_like(xi)
		return weight * self.remainder(n, xi)

	def modified_step(self, n: int, x: np.ndarray) -> np.ndarray:
		"""Return Y_{θ^{n+1}ω} + ψ ξ + P_{θⁿω,ρ}(ξ) for x = Y_{θⁿω} + ξ."""
		i = n - self.lower
		xi = x - self.points[i]
		return self.points[i + 1] + self.splitting.matrices[i] @ xi + self.cutoff_remainder(n, xi)


def _remainders(gamma: SequenceWindow, base: int, ctx: LPContext) -> np.ndarray:
	"""Return p_j for j in [lower, upper + 1]; p_lower is zero."""
	lo, hi = gamma.lower, gamma.upper
	p = np.zeros((hi - lo + 2, ctx.dimension))
	for j in range(lo + 1, hi + 2):
		p[j - lo] = ctx.cutoff_remainder(base + j - 1, gamma.entries[j - 1 - lo])
	return p


def _stable_sums(p: np.ndarray, base: int, lo: int, hi: int, ctx: LPContext) -> np.ndarray:
	sums = np.zeros((hi - lo + 1, ctx.dimension))
	sums[0] = ctx.projection('S', base + lo) @ p[0]
	for n in range(lo + 1, hi + 1):
		g = base + n
		step = ctx.splitting.matrix(g - 1) @ sums[n - 1 - lo]
		sums[n - lo] = step + ctx.projection('S', g) @ p[n - lo]
	return sums


def _unstable_sums(p: np.ndarray, base: int, lo: int, hi: int, ctx: LPContext) -> np.ndarray:
	sums = np.zeros((hi - lo + 1, ctx.dimension))
	following = np.zeros(ctx.dimension)
	for n in range(hi, lo - 1, -1):
		g = base + n
		correction = following - ctx.projection('U', g + 1) @ p[n + 1 - lo]
		sums[n - lo] = ctx.splitting.inverse_step('U', g + 1) @ correction
		following = sums[n - lo]
	return sums


def _center_sums(
	v: np.ndarray, p: np.ndarray, base: int, lo: int, hi: int, ctx: LPContext
) -> np.ndarray:
	sums = np.zeros((hi - lo + 1, ctx.dimension))
	sums[-lo] = v
	for n in range(1, hi + 1):
		g = base + n
		step = ctx.splitting.matrix(g - 1) @ sums[n - 1 - lo]
		sums[n - lo] = step + ctx.projection('C', g) @ p[n - lo]
	for n in range(-1, lo - 1, -1):
		g = base + n
		correction = sums[n + 1 - lo] - ctx.projection('C', g + 1) @ p[n + 1 - lo]
		sums[n - lo] = ctx.splitting.inverse_step('C', g + 1) @ correction
	return sums


def _prepare(gamma: SequenceWindow, ctx: LPContext) -> int:
	base = ctx.index_of(gamma.realization)
	if gamma.lower > 0 or gamma.upper < 0:
		raise InvalidArgumentError('La ventana debe contener el índice 0')
	ctx.require(base + gamma.lower, base + gamma.upper + 1)
	return base


def check_center(v: VectorLike, n: int, ctx: LPContext) -> np.ndarray:
	"""Return the coordinates of v after checking v ∈ C at index n.

	Raises:
	    NotInCenterError: If v has a non-center component.

	"""
	coords = coordinates(v)
	leak = float(np.linalg.norm(coords - ctx.projection('C', n) @ coords))
	if leak > CENTER_TOLERANCE * max(1.0, float(np.linalg.norm(coords))):
		raise NotInCenterError(f'El vector tiene una componente fuera de C de tamaño {leak:.3e}')
	return coords


def apply_I(v: VectorLike, gamma: SequenceWindow, ctx: LPContext) -> SequenceWindow:
	"""Return I_ω(v, Γ) on the window of Γ.

	Args:
	    v (VectorLike): Center datum in C_ω.
	    gamma (SequenceWindow): Current sequence based at ω.
	    ctx (LPContext): Orbit data.

	Returns:
	    SequenceWindow: The image sequence on the same window.

	Raises:
	    NotInCenterError: If v leaves C_ω.
	    InvalidArgumentError: If the splitting window is too small.

	"""
	base = _prepare(gamma, ctx)
	# ψⁿ amplifies any U component left in v, so only Π_C v enters the sums.
	center = ctx.projection('C', base) @ check_center(v, base, ctx)
	lo, hi = gamma.lower, gamma.upper

	p = _remainders(gamma, base, ctx)
	entries = (
		_center_sums(center, p, base, lo, hi, ctx)
		+ _stable_sums(p, base, lo, hi, ctx)
		+ _unstable_sums(p, base, lo, hi, ctx)
	)
	return gamma.with_entries(entries)


@dataclass
class SolverReport:
	"""Diagnostics of a Picard solve.

	Attributes:
	    iterations (int): Picard updates before the image that met the
	        tolerance; at least 1, so a linear cocycle reports 1.
	    residual (float): Weighted size of the last Picard update.
	    residuals (List[float]): Residual after every update.
	    contraction_ratio (float): Largest ratio of consecutive residuals.
	    norm (float): Weighted norm of the returned Γ.
	    apriori_bound (float): max{F^{C,±1}_ε}‖v‖/(1 − L_ε), ∞ when L_ε ≥ 1.
	    converged (bool): Whether the tolerance was reached.

	"""

	iterations: int
	residual: float
	residuals: List[float] = field(default_factory=list)
	contraction_ratio: float = 0.0
	norm: float = 0.0
	apriori_bound: float = math.inf
	converged: bool = True

	@property
	def bound_respected(self) -> bool:
		"""Return True when the weighted norm obeys the a-priori bound."""
		return self.norm <= self.apriori_bound * (1 + 1e-12) + 1e-300

	def to_dict(self) -> dict:
		"""Return a JSON-ready dictionary."""
		return {
			'iterations': self.iterations,
			'residual': self.residual,
			'contraction_ratio': self.contraction_ratio,
			'norm': self.norm,
			'apriori_bound': self.apriori_bound if math.isfinite(self.apriori_bound) else None,
			'bound_respected': self.bound_respected,
			'converged': self.converged,
		}


def _contraction_ratio(residuals: List[float]) -> float:
	ratios = [
		later / earlier
		for earlier, later in zip(residuals, residuals[1:])
		if earlier > RATIO_FLOOR and later > RATIO_FLOOR
	]
	return max(ratios, default=0.0)


def solve_fixed_point(
	v: VectorLike,
	ctx: LPContext,
	realization: Optional[Realization] = None,
	half_width: Optional[int] = None,
) -> Tuple[SequenceWindow, SolverReport]:
	"""Solve I_ω(v, Γ) = Γ by Picard iteration from Γ = 0.

	Args:
	    v (VectorLike): Center datum in C_ω.
	    ctx (LPContext): Orbit data.
	    realization (Optional[Realization]): Base ω, the anchor if omitted.
	    half_width (Optional[int]): Window half width, cfg.N if omitted.

	Returns:
	    Tuple[SequenceWindow, SolverReport]: Fixed point and diagnostics.

	Raises:
	    FixedPointNotConvergedError: If the tolerance is not reached
	        within the iteration limit.

	"""
	cfg = ctx.config
	realization = realization or ctx.anchor
	gamma = SequenceWindow.zeros(realization, half_width or cfg.N, ctx.dimension, cfg.nu)
	base = ctx.index_of(realization)
	coords = check_center(v, base, ctx)

	residuals: List[float] = []
	iteration = 0
	while True:
		image = apply_I(coords, gamma, ctx)
		residuals.append(weighted_distance(image, gamma))
		logger.debug('Iteración %d: residuo %.3e', iteration, residuals[-1])
		if residuals[-1] < cfg.tolerance:
			# The confirming image is not an update; Γ = 0 still counts one.
			gamma = image
			iteration = max(iteration, 1)
			break
		if iteration >= cfg.max_iterations:
			report = SolverReport(
				iterations=iteration,
				residual=residuals[-1],
				residuals=residuals,
				contraction_ratio=_contraction_ratio(residuals),
				norm=weighted_norm(gamma),
				converged=False,
			)
			raise FixedPointNotConvergedError(
				f'Sin convergencia tras {iteration} iteraciones, residuo {residuals[-1]:.3e}',
				report,
			)
		gamma = image
		iteration += 1

	L = ctx.certificate.L
	center = ctx.constants.at(base)
	bound = math.inf
	if L < 1:
		bound = max(center['C1'], center['C-1']) * float(np.linalg.norm(coords)) / (1 - L)

	report = SolverReport(
		iterations=iteration,
		residual=residuals[-1],
		residuals=residuals,
		contraction_ratio=_contraction_ratio(residuals),
		norm=weighted_norm(gamma),
		apriori_bound=bound,
	)
	return gamma, report


def recover_center(gamma: SequenceWindow, ctx: LPContext) -> np.ndarray:
	"""Return the center datum v of a fixed point Γ.

	v = Π⁰[Γ] + Σ_{j≥1} ψ^{−j} Π_U p_j − Σ_{j≤0} ψ^{−j} Π_S p_j, which
	for a fixed point equals Π_C Π⁰[Γ].
	"""
	base = _prepare(gamma, ctx)
	lo, hi = gamma.lower, gamma.upper
	p = _remainders(gamma, base, ctx)
	stable = _stable_sums(p, base, lo, hi, ctx)
	unstable = _unstable_sums(p, base, lo, hi, ctx)
	return gamma.entry(0) - stable[-lo] - unstable[-lo]


def shift_window(gamma: SequenceWindow) -> SequenceWindow:
	"""Return Γ̃ based at θω with Π^n_{θω}[Γ̃] = Π^{n+1}_ω[Γ].

	The window keeps its entries and moves one index to the left, so it
	covers [lower − 1, upper − 1] and loses the slot at the right edge.
	"""
	return SequenceWindow(
		shift(gamma.realization, 1),
		gamma.lower - 1,
		gamma.upper - 1,
		gamma.entries,
		gamma.nu,
	)


def transported_center(gamma: SequenceWindow, ctx: LPContext) -> np.ndarray:
	"""Return the center datum of the shifted fixed point.

	Equals Π_C Π¹_ω[Γ] = ψ¹v + Π_C P_ρ(Π⁰[Γ]), which is ψ¹v when the
	remainder vanishes.
	"""
	return recover_center(shift_window(gamma), ctx)


def empirical_contraction(
	ctx: LPContext,
	pairs: int = 100,
	seed: int = 0,
	realization: Optional[Realization] = None,
	spread: float = 3.0,
) -> List[float]:
	"""Return ‖I(Γ) − I(Γ̃)‖ / ‖Γ − Γ̃‖ for random pairs of sequences.

	Entries are drawn uniformly in the ball of radius spread·ρ(θ^{n+1}ω),
	which contains the region where the cutoff remainder is active and
	keeps the weighted norms below one.
	"""
	if pairs < 1:
		raise InvalidArgumentError('Se requiere al menos un par')
	realization = realization or ctx.anchor
	base = ctx.index_of(realization)
	N = ctx.config.N
	ctx.require(base - N, base + N + 1)
	radii = np.array([spread * ctx.radius_at(base + n + 1) for n in range(-N, N + 1)])
	rng = np.random.default_rng(seed)
	zero = np.zeros(ctx.dimension)

	def draw() -> SequenceWindow:
		direction = rng.standard_normal((2 * N + 1, ctx.dimension))
		direction /= np.linalg.norm(direction, axis=1, keepdims=True)
		entries = direction * (radii * rng.random(2 * N + 1))[:, None]
		return SequenceWindow(realization, -N, N, entries, ctx.config.nu)

	ratios = []
	for _ in range(pairs):
		first, second = draw(), draw()
		gap = weighted_distance(first, second)
		if gap > 0:
			images = weighted_distance(apply_I(zero, first, ctx), apply_I(zero, second, ctx))
			ratios.append(images / gap)
	return ratios
