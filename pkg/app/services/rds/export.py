"""
Artifact writers of the command-line and HTTP front ends.

Numbers in CSV files use 17 significant digits, so a double survives a
write and read unchanged, and every line ends with LF. JSON documents
are written with sorted keys. Identical analyses therefore produce
byte-identical files.

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

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from app.services.rds.lp import LPContext
from app.services.rds.manifold import CenterChart
from app.services.rds.met import SUBSPACES, LyapunovSpectrum, OseledetsSplitting

logger = logging.getLogger(__name__)


def number(value: float) -> str:
	"""Format a float with 17 significant digits."""
	return format(float(value), '.17g')


def _cell(value) -> str:
	if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
		return str(int(value))
	if isinstance(value, (float, np.floating)):
		return number(value)
	return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
	"""Return a CSV document with LF line endings."""
	buffer = io.StringIO()
	writer = csv.writer(buffer, lineterminator='\n')
	writer.writerow(header)
	for row in rows:
		writer.writerow([_cell(value) for value in row])
	return buffer.getvalue()


def plain(value):
	"""Return a JSON-ready copy with numpy values converted and non-finite floats as None."""
	if isinstance(value, dict):
		return {str(k): plain(v) for k, v in value.items()}
	if isinstance(value, (list, tuple)):
		return [plain(v) for v in value]
	if isinstance(value, np.ndarray):
		return plain(value.tolist())
	if isinstance(value, (np.integer,)):
		return int(value)
	if isinstance(value, (float, np.floating)):
		value = float(value)
		return value if math.isfinite(value) else None
	return value


def json_text(data: dict) -> str:
	"""Return a JSON document with sorted keys and non-finite values as null."""
	return json.dumps(plain(data), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def spectrum_rows(spectrum: LyapunovSpectrum) -> List[Dict[str, object]]:
	"""Return one row per exponent with its cluster and standard error."""
	clustered = [
		value
		for value, count in zip(spectrum.exponents, spectrum.multiplicities)
		for _ in range(count)
	]
	errors = spectrum.standard_errors or (0.0,) * len(spectrum.raw)
	return [
		{'rank': i, 'exponent': raw, 'standard_error': error, 'cluster': cluster}
		for i, (raw, error, cluster) in enumerate(zip(spectrum.raw, errors, clustered))
	]


def spectrum_csv(spectrum: LyapunovSpectrum) -> str:
	"""Return spectrum.csv."""
	header = ('rank', 'exponent', 'standard_error', 'cluster')
	return csv_text(header, ([row[h] for h in header] for row in spectrum_rows(spectrum)))


def _basis_header(splitting: OseledetsSplitting) -> List[str]:
	header = ['n']
	for name in SUBSPACES:
		columns = splitting.basis(name, splitting.lower).shape[1]
		header.extend(
			f'{name}_{row}_{column}'
			for column in range(columns)
			for row in range(splitting.dimension)
		)
	return header


def splitting_csv(splitting: OseledetsSplitting) -> str:
	"""Return splitting.csv: the bases of U, C and S, column-major, per index."""
	rows = []
	for n in range(splitting.lower, splitting.upper + 1):
		row: List[object] = [n]
		for name in SUBSPACES:
			row.extend(splitting.basis(name, n).flatten(order='F'))
		rows.append(row)
	return csv_text(_basis_header(splitting), rows)


def projection_norms_csv(splitting: OseledetsSplitting) -> str:
	"""Return projection_norms.csv: ‖Π_U‖, ‖Π_C‖ and ‖Π_S‖ per index."""
	norms = {name: splitting.projections.norms(name) for name in SUBSPACES}
	rows = [
		[n] + [norms[name][i] for name in SUBSPACES]
		for i, n in enumerate(range(splitting.lower, splitting.upper + 1))
	]
	return csv_text(['n', *SUBSPACES], rows)


def chart_csv(chart_data: CenterChart) -> str:
	"""Return chart.csv: center coordinates, chart value and solver residual."""
	centers = chart_data.coordinates.shape[1]
	dimension = chart_data.basis.shape[0]
	header = [f't_{i}' for i in range(centers)] + [f'x_{i}' for i in range(dimension)]
	header.append('residual')
	rows = [
		[*t, *x, report.residual]
		for t, x, report in zip(chart_data.coordinates, chart_data.values, chart_data.reports)
	]
	return csv_text(header, rows)


def solver_report(ctx: LPContext, chart_data: CenterChart) -> dict:
	"""Return the solver diagnostics of a chart with the certificate."""
	reports = chart_data.reports
	return {
		'certificate': ctx.certificate.to_dict(),
		'rho': {
			'at_anchor': ctx.radius_at(chart_data.index),
			'min': float(ctx.rho.min()),
			'max': float(ctx.rho.max()),
		},
		'window': {'N': ctx.config.N, 'nu': ctx.config.nu, 'tolerance': ctx.config.tolerance},
		'grid': {'radius': chart_data.radius, 'points': len(reports) + len(chart_data.failures)},
		'summary': {
			'max_iterations': max((r.iterations for r in reports), default=0),
			'max_residual': max((r.residual for r in reports), default=0.0),
			'max_contraction_ratio': max((r.contraction_ratio for r in reports), default=0.0),
			'bounds_respected': all(r.bound_respected for r in reports),
		},
		'points': [
			{'coordinates': t.tolist(), **report.to_dict()}
			for t, report in zip(chart_data.coordinates, reports)
		],
		'failures': chart_data.failures,
	}


def write_artifacts(directory: Path, documents: Dict[str, str]) -> List[Path]:
	"""Write text documents into a directory, creating it when needed.

	Args:
	    directory (Path): Output directory.
	    documents (Dict[str, str]): File name to content.

	Returns:
	    List[Path]: Written paths in name order.

	"""
	directory.mkdir(parents=True, exist_ok=True)
	written = []
	for name in sorted(documents):
		path = directory / name
		with open(path, 'w', encoding='utf-8', newline='\n') as handle:
			handle.write(documents[name])
		written.append(path)
		logger.info('Artefacto escrito: %s', path)
	return written


def documents_for(
	command: str,
	spectrum: Optional[LyapunovSpectrum] = None,
	splitting: Optional[OseledetsSplitting] = None,
	ctx: Optional[LPContext] = None,
	chart_data: Optional[CenterChart] = None,
	verification: Optional[dict] = None,
) -> Dict[str, str]:
	"""Return the artifacts of a command keyed by file name."""
	documents: Dict[str, str] = {}
	if command in ('spectrum', 'split', 'manifold', 'verify') and spectrum is not None:
		documents['spectrum.csv'] = spectrum_csv(spectrum)
	if command in ('split', 'manifold', 'verify') and splitting is not None:
		documents['splitting.csv'] = splitting_csv(splitting)
		documents['projection_norms.csv'] = projection_norms_csv(splitting)
	if command in ('manifold', 'verify') and chart_data is not None:
		documents['chart.csv'] = chart_csv(chart_data)
		documents['solver.json'] = json_text(solver_report(ctx, chart_data))
	if verification is not None:
		documents['verification.json'] = json_text(verification)
	return documents
