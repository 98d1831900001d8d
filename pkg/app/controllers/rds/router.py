"""
Expose the center-manifold construction over HTTP.

Every endpoint accepts a complete run configuration as its JSON body,
runs the pipeline up to the stage it needs and returns the same data
the command line writes to disk.

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

from fastapi import APIRouter

from app.services.rds import export, pipeline
from app.services.rds.errors import RDSError
from app.services.rds.met import SUBSPACES
from app.services.rds.systems import catalog

from .helpers import http_error
from .schemas import RunConfig

logger = logging.getLogger(__name__)

router = APIRouter(prefix='/rds', tags=['Random Center Manifolds'])


def _run(config: RunConfig, through: str) -> pipeline.Analysis:
	try:
		return pipeline.analyze(config, through)
	except RDSError as e:
		raise http_error(e)


@router.get('/catalog')
async def get_catalog():
	"""List the benchmark systems with their default parameters."""
	return {'systems': catalog()}


@router.post('/spectrum')
def compute_spectrum(config: RunConfig):
	"""Compute the Lyapunov spectrum of the configured system."""
	analysis = _run(config, 'spectrum')
	spectrum = analysis.spectrum
	return export.plain(
		{
			'system': config.system.name,
			'exponents': spectrum.exponents,
			'multiplicities': spectrum.multiplicities,
			'center_index': spectrum.center_index,
			'rows': export.spectrum_rows(spectrum),
			'steps': spectrum.steps,
		}
	)


@router.post('/split')
def compute_splitting(config: RunConfig):
	"""Compute the splitting and the projection norms on the orbit window."""
	analysis = _run(config, 'splitting')
	splitting = analysis.splitting
	indices = list(range(splitting.lower, splitting.upper + 1))
	return export.plain(
		{
			'system': config.system.name,
			'window': [splitting.lower, splitting.upper],
			'dimensions': splitting.dimensions,
			'anchor_bases': {name: splitting.basis(name, 0) for name in SUBSPACES},
			'projection_norms': {
				'n': indices,
				**{name: splitting.projections.norms(name) for name in SUBSPACES},
			},
		}
	)


@router.post('/manifold')
def compute_manifold(config: RunConfig):
	"""Sample the center chart at the anchor and report the solver diagnostics."""
	analysis = _run(config, 'context')
	try:
		chart_data = pipeline.solve_chart(analysis)
	except RDSError as e:
		raise http_error(e)
	return export.plain(
		{
			'system': config.system.name,
			'coordinates': chart_data.coordinates,
			'values': chart_data.values,
			'solver': export.solver_report(analysis.context, chart_data),
		}
	)


@router.post('/verify')
def verify_manifold(config: RunConfig):
	"""Run every verification stage and return the full report."""
	analysis = _run(config, 'context')
	try:
		return export.plain(pipeline.verify(analysis))
	except RDSError as e:
		raise http_error(e)
