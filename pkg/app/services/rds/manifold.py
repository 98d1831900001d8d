"""
Center charts of the cutoff-modified cocycle and their verification.

The chart h^c_ω sends a center vector v to Π⁰_ω[Γ_v], the present
entry of the Lyapunov–Perron fixed point. Sampling it on a grid of C_ω
gives a finite picture of the center manifold. The verification suite
measures, on those samples:

    - invariance:
        distance of the images of chart points to the chart at the
        shifted realization, for the modified cocycle and, inside the
        sets D^n_ω, for the original one;

    - orbit identities:
        variation of constants along modified orbits, and the fact that
        the fixed-point sequence is itself a modified orbit;

    - regularity:
        observed Lipschitz and inverse-Lipschitz constants of the chart
        and the order of tangency to C_ω at zero.

Every check keeps its raw values, so a verdict can be recomputed from
the report alone.

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

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from app.services.rds.cocycle import Cocycle, CutoffSpec, LinearCocycle, StationaryPoint
from app.services.rds.driver import Realization, shift
from app.services.rds.errors import FitFailureError, InvalidArgumentError, RDSError
from app.services.rds.field import VectorLike
from app.services.rds.lp import (
	LPContext,
	SequenceWindow,
	SolverReport,
	apply_I,
	recover_center,
	shift_window,
	solve_fixed_point,
	transported_center,
	weighted_distance,
)

logger = logging.getLogger(__name__)

FIT_CONDITION_LIMIT = 1e10
SYMMETRY_TOLERANCE = 1e-9


def modified_step(
	c: Cocycle,
	Y: StationaryPoint,
	psi: LinearCocycle,
	cutoff: CutoffSpec,
	omega: Realization,
	x: VectorLike,
) -> np.ndarray:
	"""Return φ̃¹_ω(x) = Y_{θω} + ψ¹_ω ξ + δ(‖ξ‖/ρ(θω)) P_ω(ξ), ξ = x − Y_ω.

	Args:
	    c (Cocycle): The cocycle φ.
	    Y (StationaryPoint): Stationary point.
	    psi (LinearCocycle): Linearization along Y.
	    cutoff (CutoffSpec): Radius ρ and bump δ.
	    omega (Realization): Realization ω.
	    x (VectorLike): Point of E_ω.

	Returns:
	    np.ndarray: The image in E_{θω}. It agrees with φ¹_ω(x) (up to
	    the stationarity residual) when ‖ξ‖ ≤ ρ(θω) and with the linear
	    step when ‖ξ‖ ≥ 2ρ(θω).

	"""
	coords = c.fibers.check(omega, x)
	y = Y.at(omega)
	xi = coords - y
	linear = psi.matrix(omega) @ xi
	target = Y.at(shift(omega, 1))

	weight = cutoff.bump(c.norm(omega, xi) / cutoff.rho(shift(omega, 1)))
	if weight == 0.0:
		return target + linear
	return target + linear + weight * (c.step(omega, coords) - c.step(omega, y) - linear)


@dataclass(frozen=True)
class GridSpec:
	"""Grid of center vectors.

	Attributes:
	    radius (Optional[float]): Half side of the grid in center
	        coordinates, min{ρ(ω), ρ(θω)}/2 if unset.
	    points (int): Points per center coordinate, odd so 0 is sampled.
	    workers (Optional[int]): Threads of the parallel map.

	"""

	radius: Optional[float] = None
	points: int = 21
	workers: Optional[int] = None


@dataclass
class CenterChart:
	"""Samples of h^c_ω on a grid of C_ω.

	Attributes:
	    realization (Realization): Base ω.
	    index (int): Orbit index of ω relative to the context anchor.
	    basis (np.ndarray): Orthonormal basis of C_ω, shape (d, dim C).
	    projection (np.ndarray): Π_{C‖S⊕U} at ω.
	    radius (float): Grid radius.
	    coordinates (np.ndarray): Center coordinates t of each sample.
	    vectors (np.ndarray): v = basis @ t.
	    values (np.ndarray): h^c(v) = Π⁰[Γ_v].
	    windows (List[SequenceWindow]): Fixed points Γ_v.
	    reports (List[SolverReport]): Solver diagnostics.
	    failures (List[Dict[str, object]]): Grid points whose solve failed.

	"""

	realization: Realization
	index: int
	basis: np.ndarray
	projection: np.ndarray
	radius: float
	coordinates: np.ndarray
	vectors: np.ndarray
	values: np.ndarray
	windows: List[SequenceWindow] = field(default_factory=list)
	reports: List[SolverReport] = field(default_factory=list)
	failures: List[Dict[str, object]] = field(default_factory=list)

	@property
	def complete(self) -> bool:
		"""Return True when every grid point was solved."""
		return not self.failures

	@property
	def residuals(self) -> np.ndarray:
		"""Return the final solver residual of every sample."""
		return np.array([r.residual for r in self.reports])


def chart(
	v: VectorLike, ctx: LPContext, realization: Optional[Realization] = None
) -> np.ndarray:
	"""Return h^c_ω(v) = Π⁰_ω[Γ_v].

	Raises:
	    FixedPointNotConvergedError: If the solver does not converge.
	    NotInCenterError: If v is not in C_ω.

	"""
	gamma, _ = solve_fixed_point(v, ctx, realization)
	return gamma.entry(0).copy()


def _grid(radius: float, points: int, dimension: int) -> np.ndarray:
	axis = np.linspace(-radius, radius, points) if points > 1 else np.zeros(1)
	return np.array(list(itertools.product(axis, repeat=dimension)), dtype=float)


def default_radius(ctx: LPContext, index: int) -> float:
	"""Return min{ρ(θⁿω), ρ(θ^{n+1}ω)}/2."""
	return min(ctx.radius_at(index), ctx.radius_at(index + 1)) / 2


def sample_manifold(
	grid: GridSpec,
	ctx: LPContext,
	realization: Optional[Realization] = None,
	coordinates: Optional[np.ndarray] = None,
) -> CenterChart:
	"""Evaluate the chart on a grid of center vectors.

	Args:
	    grid (GridSpec): Grid radius, size and worker count.
	    ctx (LPContext): Orbit data.
	    realization (Optional[Realization]): Base ω, the anchor if omitted.
	    coordinates (Optional[np.ndarray]): Explicit center coordinates,
	        one row per sample, replacing the regular grid.

	Returns:
	    CenterChart: Solved samples; failed points are listed in
	    `failures` and left out of the arrays.

	"""
	realization = realization or ctx.anchor
	index = ctx.index_of(realization)
	basis = ctx.splitting.basis('C', index)
	radius = grid.radius if grid.radius is not None else default_radius(ctx, index)
	if coordinates is None:
		if grid.points < 1:
			raise InvalidArgumentError('La malla requiere al menos un punto')
		coordinates = _grid(radius, grid.points, basis.shape[1])
	else:
		radius = float(np.max(np.abs(coordinates), initial=0.0))
	coordinates = np.asarray(coordinates, dtype=float).reshape(-1, basis.shape[1])

	def solve(t: np.ndarray):
		try:
			return solve_fixed_point(basis @ t, ctx, realization)
		except RDSError as exc:
			return exc

	with ThreadPoolExecutor(max_workers=grid.workers) as executor:
		results = list(executor.map(solve, coordinates))

	solved = CenterChart(
		realization=realization,
		index=index,
		basis=basis,
		projection=ctx.projection('C', index),
		radius=radius,
		coordinates=np.zeros((0, basis.shape[1])),
		vectors=np.zeros((0, basis.shape[0])),
		values=np.zeros((0, basis.shape[0])),
	)
	kept = []
	for t, result in zip(coordinates, results):
		if isinstance(result, RDSError):
			solved.failures.append(
				{'coordinates': t.tolist(), 'code': result.code, 'message': str(result)}
			)
			continue
		gamma, report = result
		kept.append(t)
		solved.windows.append(gamma)
		solved.reports.append(report)

	if kept:
		solved.coordinates = np.array(kept)
		solved.vectors = solved.coordinates @ basis.T
		solved.values = np.array([gamma.entry(0) for gamma in solved.windows])

	logger.info(
		'Carta central en el índice %d: %d puntos resueltos, %d fallidos, radio %.3e',
		index,
		len(kept),
		len(solved.failures),
		radius,
	)
	return solved


def in_domain(xi: VectorLike, n: int, ctx: LPContext, index: int = 0) -> bool:
	"""Return True when Y + ξ lies in D^n at orbit index `index`.

	D^n is the set of points whose first n modified iterates
	φ̃^j(Y + ξ), 0 ≤ j ≤ n − 1, stay within ρ(θ^{j+1}ω) of Y_{θ^jω}.
	"""
	ctx.require(index, index + n)
	x = ctx.stationary_at(index) + np.asarray(xi, dtype=float)
	for j in range(n):
		displacement = x - ctx.stationary_at(index + j)
		radius = ctx.radius_at(index + j + 1)
		if ctx.cocycle.norm(ctx.realization(index + j), displacement) > radius:
			return False
		x = ctx.modified_step(index + j, x)
	return True


def modified_orbit(x: np.ndarray, n: int, ctx: LPContext, index: int = 0) -> List[np.ndarray]:
	"""Return [x, φ̃¹(x), …, φ̃ⁿ(x)] starting at orbit index `index`."""
	points = [np.asarray(x, dtype=float)]
	for j in range(n):
		points.append(ctx.modified_step(index + j, points[-1]))
	return points


def manifold_distance(xi: np.ndarray, target: CenterChart, ctx: LPContext) -> float:
	"""Return the distance from Y + ξ to a sampled chart.

	The distance is the minimum over the chart samples, refined for a
	one-dimensional center by minimizing the distance to the quadratic
	through the three samples closest to the center projection of ξ.
	Higher-dimensional centers use the chart point over that projection,
	solved on demand.
	"""
	if target.values.shape[0] == 0:
		return math.inf
	best = float(np.min(np.linalg.norm(target.values - xi, axis=1)))
	t0 = target.basis.T @ (target.projection @ xi)

	if target.basis.shape[1] != 1 or target.values.shape[0] < 3:
		over = chart(target.basis @ t0, ctx, target.realization)
		return min(best, float(np.linalg.norm(over - xi)))

	t = target.coordinates[:, 0]
	nearest = np.argsort(np.abs(t - t0[0]), kind='stable')[:3]
	a, b, c = np.polyfit(t[nearest], target.values[nearest], 2)

	def gap(s: float) -> float:
		return float(np.linalg.norm(a * s * s + b * s + c - xi))

	lo = min(float(t[nearest].min()), float(t0[0]))
	hi = max(float(t[nearest].max()), float(t0[0]))
	result = minimize_scalar(
		gap,
		bounds=(lo, hi),
		method='bounded',
		options={'xatol': 1e-10 * max(hi - lo, 1e-300)},
	)
	return min(best, float(result.fun), gap(float(t0[0])))


@dataclass
class Check:
	"""One verified property.

	A required check with no values fails; an optional one is skipped
	and passes.

	Attributes:
	    name (str): Property name.
	    values (List[float]): Raw measured values.
	    bound (float): Threshold.
	    kind (str): `max` (largest value at most the bound) or `min`
	        (smallest value at least the bound).
	    required (bool): Whether an empty check fails.

	"""

	name: str
	values: List[float]
	bound: float
	kind: str = 'max'
	required: bool = True

	@property
	def skipped(self) -> bool:
		"""Return True when nothing was measured."""
		return not self.values

	@property
	def observed(self) -> float:
		"""Return the extreme value compared with the bound."""
		if not self.values:
			return math.nan
		return max(self.values) if self.kind == 'max' else min(self.values)

	@property
	def passed(self) -> bool:
		"""Return the verdict recomputed from the raw values."""
		if self.skipped:
			return not self.required
		if self.kind == 'max':
			return self.observed <= self.bound
		return self.observed >= self.bound

	def to_dict(self) -> dict:
		"""Return a JSON-ready dictionary."""

		def clean(value: float) -> Optional[float]:
			return value if math.isfinite(value) else None

		return {
			'name': self.name,
			'kind': self.kind,
			'bound': clean(self.bound),
			'observed': clean(self.observed),
			'values': [clean(v) for v in self.values],
			'required': self.required,
			'skipped': self.skipped,
			'passed': self.passed,
		}


@dataclass
class VerificationReport:
	"""Outcome of a group of checks.

	Attributes:
	    checks (List[Check]): Verified properties.
	    counts (Dict[str, int]): Domain membership counts.
	    details (Dict[str, object]): Extra fitted quantities.

	"""

	checks: List[Check] = field(default_factory=list)
	counts: Dict[str, int] = field(default_factory=dict)
	details: Dict[str, object] = field(default_factory=dict)

	@property
	def passed(self) -> bool:
		"""Return True when every check passed."""
		return all(check.passed for check in self.checks)

	def check(self, name: str) -> Check:
		"""Return the check with a given name.

		Raises:
		    InvalidArgumentError: If no check has that name.

		"""
		for check in self.checks:
			if check.name == name:
				return check
		raise InvalidArgumentError(f'Comprobación desconocida: {name}')

	def to_dict(self) -> dict:
		"""Return a JSON-ready dictionary."""
		return {
			'checks': [check.to_dict() for check in self.checks],
			'counts': dict(self.counts),
			'details': dict(self.details),
			'passed': self.passed,
		}


def _orbit_identity_gap(xi: np.ndarray, n: int, ctx: LPContext, index: int) -> float:
	"""Return the worst gap of the variation of constants along a modified orbit.

	φ̃ⁿ(Y+ξ) − Y = ψⁿξ + Σ ψ^{n−1−j} P_ρ(φ̃^j(Y+ξ) − Y)
	"""
	orbit = modified_orbit(ctx.stationary_at(index) + xi, n, ctx, index)
	accumulated = np.asarray(xi, dtype=float)
	worst = 0.0
	for j in range(n):
		displacement = orbit[j] - ctx.stationary_at(index + j)
		accumulated = ctx.splitting.matrix(index + j) @ accumulated
		accumulated = accumulated + ctx.cutoff_remainder(index + j, displacement)
		expected = orbit[j + 1] - ctx.stationary_at(index + j + 1)
		worst = max(worst, float(np.linalg.norm(accumulated - expected)))
	return worst


def verify_invariance(
	chart_data: CenterChart,
	n: int,
	ctx: LPContext,
	tolerance: float = 1e-6,
	identity_tolerance: float = 1e-10,
	workers: Optional[int] = None,
) -> VerificationReport:
	"""Check the invariance of the sampled center manifold.

	The charts at m + 1 and m + n are sampled on the grid of the given
	chart stretched by 1.25 and 1.5, so the images stay inside them.

	Args:
	    chart_data (CenterChart): Chart at orbit index m.
	    n (int): Number of steps of the multi-step check.
	    ctx (LPContext): Orbit data.
	    tolerance (float): Bound of the invariance distances.
	    identity_tolerance (float): Bound of the orbit identities.
	    workers (Optional[int]): Threads used to sample the target charts.

	Returns:
	    VerificationReport: Checks `modified-invariance` (φ̃ image of every
	    point against the chart at m + 1), `invariance` (φ image of the
	    points of the ρ-ball), `multistep-invariance` (φⁿ image of the
	    points of Dⁿ), `local-coincidence`, `orbit-identity`,
	    `fixed-point-orbit` and `transport`; counts of the points inside
	    and outside the domains.

	Raises:
	    InvalidArgumentError: If n < 1.

	"""
	if n < 1:
		raise InvalidArgumentError('La invarianza de varios pasos requiere n >= 1')
	m = chart_data.index
	cfg = ctx.config
	grid = GridSpec(workers=workers)
	following = sample_manifold(grid, ctx, ctx.realization(m + 1), 1.25 * chart_data.coordinates)
	later = following
	if n > 1:
		later = sample_manifold(grid, ctx, ctx.realization(m + n), 1.5 * chart_data.coordinates)

	report = VerificationReport()
	modified, local, multi, coincidence, identity, orbit_gap, transport = ([] for _ in range(7))
	inside, outside, inside_n, outside_n = 0, 0, 0, 0

	for gamma, value in zip(chart_data.windows, chart_data.values):
		y = ctx.stationary_at(m)
		point = y + value
		image = ctx.modified_step(m, point)
		target = ctx.stationary_at(m + 1)
		modified.append(manifold_distance(image - target, following, ctx))

		if ctx.cocycle.norm(ctx.realization(m), value) <= ctx.radius_at(m + 1):
			inside += 1
			original = ctx.cocycle.step(ctx.realization(m), point)
			local.append(manifold_distance(original - target, following, ctx))
			coincidence.append(float(np.linalg.norm(original - image)))
		else:
			outside += 1

		if in_domain(value, n, ctx, m):
			inside_n += 1
			orbit = ctx.cocycle.orbit(ctx.realization(m), point, n)
			multi.append(manifold_distance(orbit[-1] - ctx.stationary_at(m + n), later, ctx))
		else:
			outside_n += 1

		identity.append(_orbit_identity_gap(value, n, ctx, m))

		steps = min(n, gamma.upper)
		path = modified_orbit(point, steps, ctx, m)
		orbit_gap.append(
			max(
				float(np.linalg.norm(path[j] - ctx.stationary_at(m + j) - gamma.entry(j)))
				for j in range(steps + 1)
			)
		)

		shifted = shift_window(gamma)
		image_window = apply_I(transported_center(gamma, ctx), shifted, ctx)
		transport.append(weighted_distance(image_window, shifted))

	report.checks = [
		Check('modified-invariance', modified, tolerance),
		Check('invariance', local, tolerance, required=False),
		Check('multistep-invariance', multi, tolerance, required=False),
		Check('local-coincidence', coincidence, identity_tolerance, required=False),
		Check('orbit-identity', identity, identity_tolerance),
		Check('fixed-point-orbit', orbit_gap, max(1e3 * cfg.tolerance, identity_tolerance)),
		Check('transport', transport, 10 * cfg.tolerance),
	]
	report.counts = {
		'points': len(chart_data.windows),
		'inside_rho_ball': inside,
		'outside_rho_ball': outside,
		'inside_domain': inside_n,
		'outside_domain': outside_n,
		'steps': n,
	}
	logger.info(
		'Invarianza en el índice %d: distancia máxima %.3e, %d/%d puntos en D^%d',
		m,
		max(modified, default=0.0),
		inside_n,
		len(chart_data.windows),
		n,
	)
	return report


def _pairs(count: int) -> Sequence[Tuple[int, int]]:
	return list(itertools.combinations(range(count), 2))


def tangency_ladder(
	ctx: LPContext, index: int, radius: float, rungs: int = 6
) -> Tuple[np.ndarray, np.ndarray]:
	"""Return scales s = 2^{−k} ≤ radius and sup_{‖v‖=s} ‖h^c(v) − v‖/s.

	The supremum runs over ± the basis vectors of C.
	"""
	if radius <= 0:
		raise InvalidArgumentError('El radio de la escalera debe ser positivo')
	realization = ctx.realization(index)
	basis = ctx.splitting.basis('C', index)
	first = max(0, math.ceil(-math.log2(radius)))
	scales = np.array([2.0 ** -(first + k) for k in range(rungs)])
	slopes = np.zeros(rungs)
	for i, s in enumerate(scales):
		worst = 0.0
		for column in basis.T:
			for sign in (1.0, -1.0):
				v = sign * s * column
				worst = max(worst, float(np.linalg.norm(chart(v, ctx, realization) - v)) / s)
		slopes[i] = worst
	return scales, slopes


def verify_chart_regularity(
	chart_data: CenterChart,
	ctx: LPContext,
	rungs: int = 6,
	order_threshold: float = 0.95,
	truncation_widths: Optional[Tuple[int, int]] = None,
) -> VerificationReport:
	"""Check Lipschitz, injectivity and tangency properties of the chart.

	Args:
	    chart_data (CenterChart): Chart with at least three samples.
	    ctx (LPContext): Orbit data.
	    rungs (int): Number of scales of the tangency ladder.
	    order_threshold (float): Minimal fitted tangency order.
	    truncation_widths (Optional[Tuple[int, int]]): Window half widths
	        compared by the truncation check, (N/2, N) if omitted.

	Returns:
	    VerificationReport: Checks `lipschitz`, `fixed-point-lipschitz`,
	    `inverse-lipschitz`, `center-recovery`, `apriori-bound`,
	    `tangency-order` and `truncation-decay`. The ν-constants used by
	    the Lipschitz ceiling are stored in `details`.

	Raises:
	    InvalidArgumentError: If the chart has fewer than three samples.

	"""
	count = len(chart_data.windows)
	if count < 3:
		raise InvalidArgumentError('La regularidad requiere al menos tres puntos de la carta')
	m = chart_data.index
	nu_constants = ctx.constants_nu.at(m)
	ceiling = 2 * max(nu_constants['C1'], nu_constants['C-1'])

	lipschitz, sequence, inverse = [], [], []
	for i, j in _pairs(count):
		step = float(np.linalg.norm(chart_data.vectors[i] - chart_data.vectors[j]))
		image = float(np.linalg.norm(chart_data.values[i] - chart_data.values[j]))
		if step == 0.0:
			continue
		lipschitz.append(image / step)
		sequence.append(weighted_distance(chart_data.windows[i], chart_data.windows[j]) / step)
		inverse.append(step / image if image > 0 else math.inf)

	recovery = [
		float(np.linalg.norm(recover_center(gamma, ctx) - v))
		for gamma, v in zip(chart_data.windows, chart_data.vectors)
	]
	projection = ctx.projection('C', m)
	recovery += [
		float(np.linalg.norm(projection @ value - v))
		for value, v in zip(chart_data.values, chart_data.vectors)
	]
	apriori = [
		report.norm - report.apriori_bound
		for report in chart_data.reports
		if math.isfinite(report.apriori_bound)
	]

	scales, slopes = tangency_ladder(ctx, m, chart_data.radius, rungs)
	if np.all(slopes < 1e-12):
		order = math.inf
	else:
		positive = slopes > 0
		order = float(np.polyfit(np.log(scales[positive]), np.log(slopes[positive]), 1)[0])

	truncation = []
	narrow, wide = truncation_widths or (ctx.config.N // 2, ctx.config.N)
	spectrum = ctx.splitting.spectrum
	gap = min(spectrum.mu_plus, -spectrum.mu_minus) - ctx.config.nu if spectrum else ctx.config.nu
	constants = ctx.constants.at(m)
	scale = max(constants['C1'], constants['C-1'])
	for v in chart_data.vectors[[0, -1]]:
		first, _ = solve_fixed_point(v, ctx, chart_data.realization, narrow)
		second, _ = solve_fixed_point(v, ctx, chart_data.realization, wide)
		change = float(np.linalg.norm(first.entry(0) - second.entry(0)))
		truncation.append(change / max(scale * float(np.linalg.norm(v)), 1e-300))

	report = VerificationReport(
		checks=[
			Check('lipschitz', lipschitz, ceiling),
			Check('fixed-point-lipschitz', sequence, ceiling),
			Check('inverse-lipschitz', inverse, 2.0 + 1e-6),
			Check('center-recovery', recovery, 1e-10),
			Check('apriori-bound', apriori, 0.0, required=False),
			Check('tangency-order', [order], order_threshold, kind='min'),
			Check('truncation-decay', truncation, math.exp(-gap * narrow / 2)),
		],
		counts={'points': count, 'pairs': len(lipschitz)},
		details={
			'nu_constants': nu_constants,
			'tangency_scales': scales.tolist(),
			'tangency_slopes': slopes.tolist(),
			'tangency_order': order if math.isfinite(order) else None,
		},
	)
	logger.info(
		'Regularidad en el índice %d: Lipschitz %.4f (cota %.4f), orden de tangencia %s',
		m,
		max(lipschitz, default=0.0),
		ceiling,
		order,
	)
	return report


@dataclass(frozen=True)
class TaylorFit:
	"""Polynomial fit of the non-center part of the chart.

	Attributes:
	    coefficients (np.ndarray): Shape (d, degree + 1); row i holds the
	        coefficients of coordinate i of (I − Π_C)h^c in powers of t.
	    residual (float): Largest absolute fit residual.
	    condition (float): Condition number of the scaled design matrix.

	"""

	coefficients: np.ndarray
	residual: float
	condition: float

	def coefficient(self, coordinate: int, power: int) -> float:
		"""Return the coefficient of t^power in a coordinate."""
		return float(self.coefficients[coordinate, power])


def taylor_fit(chart_data: CenterChart, degree: int) -> TaylorFit:
	"""Fit (I − Π_C)h^c(t·b) by polynomials in the center coordinate t.

	The center must be one-dimensional and the grid symmetric about 0.
	Coordinates are scaled by the grid radius before the least-squares
	solve and the coefficients are scaled back afterwards.

	Raises:
	    FitFailureError: If the center is not one-dimensional, the grid is
	        not symmetric, the degree is not below the sample count or the
	        scaled design matrix is ill conditioned.

	"""
	if chart_data.basis.shape[1] != 1:
		raise FitFailureError('El ajuste de Taylor requiere un centro unidimensional')
	t = chart_data.coordinates[:, 0]
	if degree < 0 or degree >= t.shape[0]:
		raise FitFailureError(f'El grado {degree} requiere más de {t.shape[0]} puntos')

	scale = float(np.max(np.abs(t))) or 1.0
	ordered = np.sort(t)
	if not np.allclose(ordered, -ordered[::-1], rtol=0.0, atol=SYMMETRY_TOLERANCE * scale):
		raise FitFailureError('El ajuste de Taylor requiere una malla simétrica respecto de 0')
	design = np.vander(t / scale, degree + 1, increasing=True)
	condition = float(np.linalg.cond(design))
	if not condition < FIT_CONDITION_LIMIT:
		raise FitFailureError(f'Ajuste mal condicionado: número de condición {condition:.3e}')

	targets = chart_data.values - chart_data.values @ chart_data.projection.T
	scaled, *_ = np.linalg.lstsq(design, targets, rcond=None)
	residual = float(np.max(np.abs(design @ scaled - targets))) if targets.size else 0.0
	coefficients = (scaled / scale ** np.arange(degree + 1)[:, None]).T
	return TaylorFit(coefficients=coefficients, residual=residual, condition=condition)
