"""Define the run configuration shared by the command line and the HTTP API.

A run configuration names a benchmark system, the seed of its driver,
and the settings of every stage of the center-manifold construction.
Pydantic validates types and ranges and rejects unknown keys, so a
misspelled setting is an error and never a silent default.

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

from typing import Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from app.services.rds.systems import REGISTRY


class Section(BaseModel):
	"""Base of every configuration section; unknown keys are rejected."""

	model_config = ConfigDict(extra='forbid')


class SystemSection(Section):
	"""
	Select the benchmark system.

	Attributes:
	    name: Registry name, e.g. "det-2d" or "random-diag".
	    params: Overrides of the system's default parameters.

	"""

	name: str
	params: Dict[str, float] = Field(default_factory=dict)

	@field_validator('name')
	@classmethod
	def _known_system(cls, name: str) -> str:
		if name not in REGISTRY:
			raise ValueError(f'Sistema desconocido: {name}; disponibles: {", ".join(REGISTRY)}')
		return name

	@field_validator('params')
	@classmethod
	def _known_params(cls, params: Dict[str, float], info: ValidationInfo) -> Dict[str, float]:
		name = info.data.get('name')
		if name is None:
			return params
		unknown = sorted(set(params) - set(REGISTRY[name][1]))
		if unknown:
			raise ValueError(f'Parámetros desconocidos para {name}: {", ".join(unknown)}')
		return params


class MetSection(Section):
	"""
	Settings of the spectrum and the splitting.

	Attributes:
	    k: Number of exponents; the fiber dimension when omitted.
	    n: Steps of the QR iteration.
	    gap: Clustering gap of the exponents.
	    N_orbit: Half width of the splitting window, derived when omitted.
	    N_F: Horizon of the growth-constant suprema.
	    safety: Factor applied to the measured growth constants.
	    period: Steps between reorthonormalizations.
	    batches: Batches of the standard-error estimate.
	    tolerance: Convergence tolerance of the pushed subspaces.

	"""

	k: Optional[int] = Field(default=None, ge=1)
	n: int = Field(default=2000, ge=1)
	gap: float = Field(default=0.05, gt=0)
	N_orbit: Optional[int] = Field(default=None, ge=1)
	N_F: int = Field(default=50, ge=1)
	safety: float = Field(default=1.25, ge=1)
	period: int = Field(default=1, ge=1)
	batches: int = Field(default=20, ge=1)
	tolerance: float = Field(default=1e-9, gt=0)


class LPSection(Section):
	"""
	Settings of the Lyapunov–Perron operator.

	Attributes:
	    nu: Weight exponent of the sequence space.
	    eps: Growth-constant exponent, derived from ν when omitted.
	    N: Half width of the truncated window.
	    tolerance: Picard residual tolerance.
	    max_iterations: Picard iteration limit.
	    M: Lipschitz constant M_ε, derived when omitted.
	    M_tilde: Injectivity constant M̃_ε, derived when omitted.
	    rho_policy: "certified" uses the refined radius, "fixed" the constant rho.
	    rho: Radius of the fixed policy.

	"""

	nu: float = Field(default=0.2, gt=0)
	eps: Optional[float] = Field(default=None, gt=0)
	N: int = Field(default=40, ge=1)
	tolerance: float = Field(default=1e-12, gt=0)
	max_iterations: int = Field(default=200, ge=1)
	M: Optional[float] = Field(default=None, gt=0)
	M_tilde: Optional[float] = Field(default=None, gt=0)
	rho_policy: Literal['certified', 'fixed'] = 'certified'
	rho: Optional[float] = Field(default=None, gt=0)

	@model_validator(mode='after')
	def _fixed_needs_rho(self) -> 'LPSection':
		if self.rho_policy == 'fixed' and self.rho is None:
			raise ValueError('La política fixed requiere lp.rho')
		return self


class GridSection(Section):
	"""
	Grid of center coordinates where the chart is sampled.

	Attributes:
	    radius: Half side of the grid; half the smallest ρ when omitted.
	    points: Points per center axis.
	    workers: Thread pool size; the executor default when omitted.

	"""

	radius: Optional[float] = Field(default=None, gt=0)
	points: int = Field(default=21, ge=2)
	workers: Optional[int] = Field(default=None, ge=1)


class VerifySection(Section):
	"""
	Tolerances and sample sizes of the verification stages.

	Attributes:
	    steps: Steps of the multi-step invariance check.
	    tolerance: Invariance distance tolerance.
	    identity_tolerance: Tolerance of the exact orbit identities.
	    samples: Orbit samples of the standing-assumption check.
	    pairs: Pairs per orbit sample of the remainder check.
	    slope_tolerance: Temperedness slope threshold.
	    sample_radius: Radius of the remainder sampling ball.
	    degree: Degree of the Taylor fit.
	    rungs: Rungs of the tangency ladder.
	    order_threshold: Smallest accepted tangency order.
	    angle_tolerance: Largest accepted equivariance angle.
	    slope_bound: Largest accepted projection-norm slope.
	    spectrum_tolerance: Floor of the exponent oracle tolerance.
	    series_tolerance: Tolerance of the leading series coefficients.
	    series_next_tolerance: Tolerance of the next series coefficients.
	    contraction_pairs: Pairs of the empirical contraction check.

	"""

	steps: int = Field(default=5, ge=1)
	tolerance: float = Field(default=1e-6, gt=0)
	identity_tolerance: float = Field(default=1e-10, gt=0)
	samples: int = Field(default=20, ge=1)
	pairs: int = Field(default=20, ge=1)
	slope_tolerance: float = Field(default=0.05, gt=0)
	sample_radius: float = Field(default=0.5, gt=0)
	degree: int = Field(default=6, ge=1)
	rungs: int = Field(default=6, ge=2)
	order_threshold: float = 0.95
	angle_tolerance: float = Field(default=1e-6, gt=0)
	slope_bound: float = Field(default=1e-2, gt=0)
	spectrum_tolerance: float = Field(default=1e-9, gt=0)
	series_tolerance: float = Field(default=1e-2, gt=0)
	series_next_tolerance: float = Field(default=2.0, gt=0)
	contraction_pairs: int = Field(default=100, ge=1)


class OutputSection(Section):
	"""
	Where the artifacts are written.

	Attributes:
	    directory: Output directory; RCM_OUTPUT_DIR overrides it.

	"""

	directory: str = 'out'


class RunConfig(Section):
	"""
	Represent one complete run of the construction.

	Attributes:
	    schema_version: Must be 1.
	    seed: Seed of the driver and of every sampler.
	    system: Benchmark selection.
	    met: Spectrum and splitting settings.
	    lp: Lyapunov–Perron settings.
	    grid: Chart grid.
	    verify: Verification settings.
	    output: Artifact location.

	"""

	schema_version: Literal[1] = 1
	seed: int = 0
	system: SystemSection
	met: MetSection = Field(default_factory=MetSection)
	lp: LPSection = Field(default_factory=LPSection)
	grid: GridSection = Field(default_factory=GridSection)
	verify: VerifySection = Field(default_factory=VerifySection)
	output: OutputSection = Field(default_factory=OutputSection)
