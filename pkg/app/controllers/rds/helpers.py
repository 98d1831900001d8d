"""
Provide the loaders and error mappings shared by the front ends.

Read run configurations from TOML files or JSON bodies, report
validation problems with the offending dotted key and its line, and
turn service errors into HTTP responses.

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

import os
import re
import tomllib
from pathlib import Path
from typing import Optional

from fastapi import HTTPException
from pydantic import ValidationError

from app.services.rds.errors import InvalidArgumentError, ParametersInfeasibleError, RDSError

from .schemas import RunConfig

OUTPUT_ENV = 'RCM_OUTPUT_DIR'


class ConfigError(ValueError):
	"""Raised when a run configuration cannot be read or validated.

	Attributes:
	    key (Optional[str]): Dotted key of the offending setting.
	    line (Optional[int]): 1-based line of the key in the file.

	"""

	code = 'config-error'

	def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
		"""Initialize the error with its location."""
		location = ''
		if key:
			location = f' [{key}' + (f', línea {line}' if line else '') + ']'
		super().__init__(message + location)
		self.key = key
		self.line = line


def find_line(text: str, key: str) -> Optional[int]:
	"""Return the 1-based line where a dotted key is set, if it appears literally.

	Both `[section]` tables followed by `name = ...` and dotted
	assignments `section.name = ...` are recognized.
	"""
	parts = key.split('.')
	name = re.escape(parts[-1])
	dotted = re.compile(rf'^\s*{re.escape(key)}\s*=')
	plain = re.compile(rf'^\s*{name}\s*=')
	section = '.'.join(parts[:-1])
	current = ''
	for number, line in enumerate(text.splitlines(), start=1):
		stripped = line.strip()
		table = re.match(r'^\[([^\]]+)\]', stripped)
		if table:
			current = table.group(1).strip()
			if current == key:
				return number
			continue
		if dotted.match(line) and not current:
			return number
		if plain.match(line) and current == section:
			return number
		if current and section.startswith(current + '.'):
			rest = key[len(current) + 1 :]
			if re.match(rf'^\s*{re.escape(rest)}\s*=', line):
				return number
	return None


def _first_error(exc: ValidationError):
	error = exc.errors()[0]
	key = '.'.join(str(part) for part in error['loc']) or None
	return error['msg'], key


def config_from_mapping(data: dict, text: Optional[str] = None) -> RunConfig:
	"""Validate a mapping as a run configuration.

	Args:
	    data (dict): Parsed configuration.
	    text (Optional[str]): Source text used to locate the offending key.

	Returns:
	    RunConfig: The validated configuration.

	Raises:
	    ConfigError: If validation fails.

	"""
	try:
		return RunConfig.model_validate(data)
	except ValidationError as exc:
		message, key = _first_error(exc)
		line = find_line(text, key) if text and key else None
		raise ConfigError(f'Configuración inválida: {message}', key, line) from exc


def load_config(path: Path) -> RunConfig:
	"""Read and validate a TOML run configuration.

	Raises:
	    ConfigError: If the file is missing, malformed or invalid.

	"""
	try:
		text = Path(path).read_text(encoding='utf-8')
	except OSError as exc:
		raise ConfigError(f'No se pudo leer la configuración {path}: {exc.strerror}') from exc
	try:
		data = tomllib.loads(text)
	except tomllib.TOMLDecodeError as exc:
		raise ConfigError(f'TOML inválido: {exc}') from exc
	return config_from_mapping(data, text)


def output_directory(config: RunConfig, override: Optional[str] = None) -> Path:
	"""Return the artifact directory: flag, then RCM_OUTPUT_DIR, then the config."""
	return Path(override or os.environ.get(OUTPUT_ENV) or config.output.directory)


def http_error(exc: Exception) -> HTTPException:
	"""Map a configuration or service error to an HTTP error.

	Args:
	    exc (Exception): The raised error.

	Returns:
	    HTTPException: 400 for invalid input, 422 for numerical failures
	    of a valid request and 500 for anything else.

	"""
	if isinstance(exc, (ConfigError, InvalidArgumentError, ParametersInfeasibleError)):
		code = getattr(exc, 'code', 'config-error')
		return HTTPException(status_code=400, detail={'code': code, 'message': str(exc)})
	if isinstance(exc, RDSError):
		return HTTPException(status_code=422, detail={'code': exc.code, 'message': str(exc)})
	return HTTPException(
		status_code=500, detail={'code': 'internal-error', 'message': 'Error interno del servidor'}
	)
