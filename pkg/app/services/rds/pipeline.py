"""
Orchestration of the center-manifold construction shared by every front end.

The construction runs in three stages. Each stage uses the objects of
the previous one and a numerical error stops the run, but the checks
of the stages are all reported together by `verify`: a failed check
never keeps a later stage from running.

    1. Standing assumptions: linearization along the stationary point,
       the remainder modulus and the temperedness of f.
    2. Multiplicative ergodic data: spectrum, zero exponent, splitting,
       projections and growth constants.
    3. Center manifold: contraction certificate, cutoff radius table and
       the Lyapunov–Perron context.

`analyze` stops at the requested stage and returns an `Analysis` with
everything computed so far.

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
from typing import TYPE_CHECKING, Dict, List, Optional

import numpy as np

from app.services.rds.cocycle import AssumptionReport, CutoffSpec, LinearCocycle, verify_assumption
from app.services.rds.driver import Realization, shift
from app.services.rds.errors import InvalidArgumentError
from app.services.rds.lp import (
	Certificate,
	LPConfig,
	LPContext,
	OrbitTable,
	contraction_bound,
	empirical_contraction,
	injectivity_bound,
	radius,
)
from app.services.rds.manifold import (
	CenterChart,
	Check,
	GridSpec,
	VerificationReport,
	sample_manifold,
	taylor_fit,
	verify_chart_regularity,
	verify_invariance,
)
from app.services.rds.met import (
	GrowthConstants,
	LyapunovSpectrum,
	OseledetsSplitting,
	equivariance_angles,
	growth_constants,
	lyapunov_spectrum,
	oseledets_split,
	projection_slopes,
)
from app.services.rds.systems import Benchmark, build_benchmark

if TYPE_CHECKING:
	from app.controllers.rds.schemas import RunConfig

logger = logging.getLogger(__name__)

STAGES = ('system', 'spectrum', 'splitting', 'context')


@dataclass
class Analysis:
	"""Everything computed for one run configuration.

	Attributes:
	    config (RunConfig): The validated configuration.
	    benchmark (Benchmark): Driver, cocycle, stationary point and spec.
	    anchor (Realization): Realization of orbit index 0.
	    linear (LinearCocycle): Linearization along the stationary point.
	    spectrum (Optional[LyapunovSpectrum]): Clustered exponents.
	    splitting (Optional[OseledetsSplitting]): U ⊕ C ⊕ S on the window.
	    lp_config (Optional[LPConfig]): Resolved Lyapunov–Perron settings.
	    constants (Optional[GrowthConstants]): ε-constants.
	    constants_nu (Optional[GrowthConstants]): ν-constants.
	    certificate (Optional[Certificate]): Contraction certificate.
	    context (Optional[LPContext]): Orbit data of the operator.
	    assumption (Optional[AssumptionReport]): Standing-assumption checks.

	"""

	config: 'RunConfig'
	benchmark: Benchmark
	anchor: Realization
	linear: LinearCocycle
	spectrum: Optional[LyapunovSpectrum] = None
	splitting: Optional[OseledetsSplitting] = None
	lp_config: Optional[LPConfig] = None
	constants: Optional[GrowthConstants] = None
	constants_nu: Optional[GrowthConstants] = None
	certificate: Optional[Certificate] = None
	context: Optional[LPContext] = None
	assumption: Optional[AssumptionReport] = None


def half_width(config: 'RunConfig') -> int:
	"""Return the splitting half width W = N + N_F + steps + 2 unless configured."""
	if config.met.N_orbit is not None:
		return config.met.N_orbit
	return config.lp.N + config.met.N_F + config.verify.steps + 2


def lp_settings(config: 'RunConfig') -> LPConfig:
	"""Return the Lyapunov–Perron settings of a configuration."""
	return LPConfig(
		nu=config.lp.nu,
		eps=config.lp.eps,
		N=config.lp.N,
		tolerance=config.lp.tolerance,
		max_iterations=config.lp.max_iterations,
		M=config.lp.M,
		M_tilde=config.lp.M_tilde,
		N_F=config.met.N_F,
	)


def _cutoff(analysis: Analysis) -> CutoffSpec:
	spec = analysis.benchmark.spec
	value = spec.f
	return CutoffSpec(
		f=lambda omega: value,
		h=spec.h,
		validity_radius=analysis.benchmark.cocycle.validity_radius,
	)


def _radius_table(analysis: Analysis, cutoff: CutoffSpec) -> OrbitTable:
	config, splitting = analysis.config, analysis.splitting
	indices = range(splitting.lower, splitting.upper + 1)
	if config.lp.rho_policy == 'fixed':
		values = np.full(len(indices), float(config.lp.rho))
	else:
		values = np.array(
			[
				radius(
					shift(analysis.anchor, n),
					analysis.constants,
					splitting,
					cutoff,
					analysis.lp_config,
					analysis.constants_nu,
				)
				for n in indices
			]
		)
	logger.info(
		'Radio de corte (%s): mínimo %.4e, máximo %.4e',
		config.lp.rho_policy,
		values.min(),
		values.max(),
	)
	return OrbitTable(analysis.anchor, splitting.lower, values)


def analyze(
	config: 'RunConfig', through: str = 'context', benchmark: Optional[Benchmark] = None
) -> Analysis:
	"""Run the construction up to a stage.

	Args:
	    config (RunConfig): Validated configuration.
	    through (str): Last stage: `system`, `spectrum`, `splitting` or
	        `context`.
	    benchmark (Optional[Benchmark]): Prebuilt system used instead of the
	        registry entry named by the configuration.

	Returns:
	    Analysis: The computed objects.

	Raises:
	    InvalidArgumentError: If the stage is unknown.
	    RDSError: Any numerical failure of the construction.

	"""
	if through not in STAGES:
		raise InvalidArgumentError(f'Etapa desconocida: {through}')
	last = STAGES.index(through)

	if benchmark is None:
		benchmark = build_benchmark(config.system.name, config.system.params, config.seed)
	anchor = benchmark.driver.realization(0)
	linear = LinearCocycle.from_cocycle(benchmark.cocycle, benchmark.stationary)
	analysis = Analysis(config=config, benchmark=benchmark, anchor=anchor, linear=linear)
	if last < 1:
		return analysis

	met = config.met
	dimension = benchmark.spec.fibers.dimension_at(anchor)
	analysis.spectrum = lyapunov_spectrum(
		linear, anchor, met.k or dimension, met.n, met.gap, met.period, met.batches
	)
	if last < 2:
		return analysis

	analysis.splitting = oseledets_split(
		linear,
		anchor,
		analysis.spectrum,
		half_width(config),
		met.tolerance,
		seed=config.seed,
	)
	analysis.lp_config = lp_settings(config).resolve(analysis.spectrum)
	cfg = analysis.lp_config
	analysis.constants = growth_constants(
		linear, analysis.splitting, cfg.eps, cfg.N_F, met.safety, analysis.spectrum
	)
	analysis.constants_nu = growth_constants(
		linear, analysis.splitting, cfg.nu, cfg.N_F, met.safety, analysis.spectrum
	)
	if last < 3:
		return analysis

	analysis.certificate = Certificate(
		L=contraction_bound(cfg, analysis.spectrum),
		L_tilde=injectivity_bound(cfg, analysis.spectrum),
		M=cfg.M,
		M_tilde=cfg.M_tilde,
		eps=cfg.eps,
		nu=cfg.nu,
		rho_policy=config.lp.rho_policy,
	)
	cutoff = _cutoff(analysis)
	cutoff = cutoff.with_rho(_radius_table(analysis, cutoff))

	verify = config.verify
	analysis.assumption = verify_assumption(
		benchmark.cocycle,
		benchmark.stationary,
		cutoff,
		min(verify.samples, analysis.splitting.upper - 1),
		anchor,
		linear,
		verify.sample_radius,
		verify.pairs,
		verify.slope_tolerance,
		config.seed,
	)

	analysis.context = LPContext(
		benchmark.cocycle,
		benchmark.stationary,
		linear,
		analysis.splitting,
		analysis.constants,
		analysis.constants_nu,
		cutoff,
		cfg,
		analysis.certificate,
	)
	return analysis


def grid_spec(config: 'RunConfig') -> GridSpec:
	"""Return the chart grid of a configuration."""
	grid = config.grid
	return GridSpec(radius=grid.radius, points=grid.points, workers=grid.workers)


def solve_chart(analysis: Analysis) -> CenterChart:
	"""Sample the center chart at the anchor."""
	return sample_manifold(grid_spec(analysis.config), analysis.context)


def _spectrum_check(analysis: Analysis) -> Optional[Check]:
	spec, spectrum = analysis.benchmark.spec, analysis.spectrum
	if spec.exponents is None:
		return None
	oracle = sorted(spec.exponents(analysis.anchor, spectrum.steps), reverse=True)
	tolerance = analysis.config.verify.spectrum_tolerance
	gaps = []
	for value, expected, error in zip(spectrum.raw, oracle, spectrum.standard_errors):
		gaps.append(abs(value - expected) / max(tolerance, 3 * error))
	return Check('spectrum-oracle', gaps, 1.0)


def _series_checks(analysis: Analysis, chart_data: CenterChart) -> List[Check]:
	"""Compare the fitted chart with the known power series.

	The leading coefficient of every coordinate is held to the tight
	tolerance and the next one to the loose tolerance; later terms are
	below the solver noise on small grids.
	"""
	spec = analysis.benchmark.spec
	verify = analysis.config.verify
	if not spec.series or chart_data.basis.shape[1] != 1 or not chart_data.complete:
		return []
	if chart_data.coordinates.shape[0] <= verify.degree:
		return []
	fit = taylor_fit(chart_data, verify.degree)
	sign = math.copysign(1.0, chart_data.basis[spec.center_coordinate or 0, 0])
	leading, higher = [], []
	for coordinate, terms in sorted(spec.series.items()):
		powers = sorted(p for p in terms if p <= verify.degree)
		for rank, power in enumerate(powers[:2]):
			observed = fit.coefficient(coordinate, power) * sign**power
			(leading if rank == 0 else higher).append(abs(observed - terms[power]))
	checks = [Check('series-leading', leading, verify.series_tolerance, required=False)]
	if higher:
		checks.append(Check('series-next', higher, verify.series_next_tolerance))
	return checks


def verify(analysis: Analysis, chart_data: Optional[CenterChart] = None) -> Dict[str, object]:
	"""Run every verification and return a JSON-ready summary.

	The summary groups the checks by stage: `assumption` (standing
	assumptions), `splitting` (spectrum oracle, equivariance angles and
	projection slopes) and `manifold` (contraction, invariance and
	regularity). `passed` is True when every check passed.
	"""
	config = analysis.config
	ctx = analysis.context
	chart_data = chart_data or solve_chart(analysis)

	splitting_checks: List[Check] = []
	spectrum_check = _spectrum_check(analysis)
	if spectrum_check:
		splitting_checks.append(spectrum_check)
	angles = equivariance_angles(analysis.splitting)
	splitting_checks.append(
		Check(
			'equivariance',
			[angles[name] for name in sorted(angles)],
			config.verify.angle_tolerance,
		)
	)
	slopes = projection_slopes(analysis.splitting)
	splitting_checks.append(
		Check('projection-slope', [abs(s) for s in slopes.values()], config.verify.slope_bound)
	)
	splitting_report = VerificationReport(
		checks=splitting_checks, details={'angles': angles, 'slopes': slopes}
	)

	manifold = VerificationReport()
	if config.lp.rho_policy == 'certified':
		ratios = empirical_contraction(ctx, config.verify.contraction_pairs, config.seed)
		manifold.checks.append(Check('contraction', ratios, min(1.0, 5 * analysis.certificate.L)))
	manifold.checks.append(
		Check('solver-residual', chart_data.residuals.tolist(), config.lp.tolerance)
	)
	manifold.checks.append(Check('solved-points', [float(len(chart_data.failures))], 0.0))

	invariance = verify_invariance(
		chart_data,
		config.verify.steps,
		ctx,
		config.verify.tolerance,
		config.verify.identity_tolerance,
		config.grid.workers,
	)
	regularity = verify_chart_regularity(
		chart_data, ctx, config.verify.rungs, config.verify.order_threshold
	)
	manifold.checks.extend(invariance.checks)
	manifold.checks.extend(regularity.checks)
	manifold.checks.extend(_series_checks(analysis, chart_data))
	manifold.counts = invariance.counts
	manifold.details = regularity.details

	stages = {
		'assumption': analysis.assumption.to_dict(),
		'splitting': splitting_report.to_dict(),
		'manifold': manifold.to_dict(),
	}
	passed = analysis.assumption.passed and splitting_report.passed and manifold.passed
	logger.info('Verificación de %s: %s', config.system.name, 'aprobada' if passed else 'fallida')
	return {
		'system': config.system.name,
		'seed': config.seed,
		'certificate': analysis.certificate.to_dict(),
		'stages': stages,
		'passed': passed,
	}
