"""
Command-line front end of the center-manifold construction.

Usage:

    python -m app.cli spectrum configs/det-2d.toml
    python -m app.cli split configs/det-3d.toml --output out/det-3d
    python -m app.cli manifold configs/det-2d.toml
    python -m app.cli verify configs/det-2d.toml --verbose
    python -m app.cli catalog

Artifacts go to `--output`, then `RCM_OUTPUT_DIR`, then the directory
named by the configuration. Exit codes: 0 success, 2 configuration
error, 3 numerical failure, 4 verification failure.

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

import argparse
import logging
import sys
from typing import List, Optional

from app.controllers.rds.helpers import ConfigError, load_config, output_directory
from app.services.rds import export, pipeline
from app.services.rds.errors import RDSError
from app.services.rds.systems import catalog


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERIFICATION = 4

STAGE_OF = {
	'spectrum': 'spectrum',
	'split': 'splitting',
	'manifold': 'context',
	'verify': 'context',
}


def build_parser() -> argparse.ArgumentParser:
	"""Return the argument parser of every command."""
	parser = argparse.ArgumentParser(
		prog='random-center', description='Center manifolds of random dynamical systems'
	)
	parser.add_argument('--verbose', action='store_true', help='Log DEBUG messages to stderr')
	commands = parser.add_subparsers(dest='command', required=True)

	helps = {
		'spectrum': 'Lyapunov spectrum (spectrum.csv)',
		'split': 'Splitting and projection norms (splitting.csv, projection_norms.csv)',
		'manifold': 'Center chart and solver report (chart.csv, solver.json)',
		'verify': 'Every verification stage (verification.json)',
	}
	for name, text in helps.items():
		command = commands.add_parser(name, help=text)
		command.add_argument('config', help='TOML run configuration')
		command.add_argument(
			'--output', default=None, help='Output directory (CLI > env:RCM_OUTPUT_DIR > config)'
		)
	commands.add_parser('catalog', help='List the benchmark systems')
	return parser


def run(command: str, config_path: str, output: Optional[str] = None) -> int:
	"""Run one command and write its artifacts.

	Args:
	    command (str): `spectrum`, `split`, `manifold` or `verify`.
	    config_path (str): Path of the TOML configuration.
	    output (Optional[str]): Output directory override.

	Returns:
	    int: The exit code.

	"""
	try:
		config = load_config(config_path)
	except ConfigError as exc:
		print(f'Error de configuración: {exc}', file=sys.stderr)
		return EXIT_CONFIG

	try:
		analysis = pipeline.analyze(config, STAGE_OF[command])
		chart_data = verification = None
		if command in ('manifold', 'verify'):
			chart_data = pipeline.solve_chart(analysis)
		if command == 'verify':
			verification = pipeline.verify(analysis, chart_data)
	except RDSError as exc:
		print(f'{exc.code}: {exc}', file=sys.stderr)
		return EXIT_NUMERICAL

	documents = export.documents_for(
		command,
		spectrum=analysis.spectrum,
		splitting=analysis.splitting,
		ctx=analysis.context,
		chart_data=chart_data,
		verification=verification,
	)
	directory = output_directory(config, output)
	for path in export.write_artifacts(directory, documents):
		print(path)

	if verification is not None and not verification['passed']:
		return EXIT_VERIFICATION
	return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
	"""Parse the arguments, configure logging and run the command."""
	args = build_parser().parse_args(argv)
	logging.basicConfig(
		level=logging.DEBUG if args.verbose else logging.INFO,
		format='%(asctime)s %(levelname)s %(name)s: %(message)s',
		stream=sys.stderr,
	)
	if args.command == 'catalog':
		sys.stdout.write(export.json_text({'systems': catalog()}))
		return EXIT_OK
	return run(args.command, args.config, args.output)


if __name__ == '__main__':
	raise SystemExit(main())
