"""Tests for the command-line front end."""

import json

import pytest

from app import cli
from app.controllers.rds.helpers import OUTPUT_ENV, ConfigError, find_line, load_config

SMALL = """
[system]
name = "det-2d"

[met]
n = 200

[lp]
rho_policy = "fixed"
rho = 0.05
{lp}

[grid]
radius = 0.02
points = 9

[verify]
degree = 4
{verify}

[output]
directory = '{directory}'
"""


def write_config(tmp_path, lp='', verify='', directory=None):
	path = tmp_path / 'run.toml'
	text = SMALL.format(lp=lp, verify=verify, directory=directory or tmp_path / 'out')
	path.write_text(text, encoding='utf-8')
	return path


def test_catalog(capsys):
	assert cli.main(['catalog']) == cli.EXIT_OK
	data = json.loads(capsys.readouterr().out)
	assert len(data['systems']) == 6


def test_spectrum_writes_csv(tmp_path, capsys):
	path = write_config(tmp_path)
	assert cli.main(['spectrum', str(path)]) == cli.EXIT_OK
	written = tmp_path / 'out' / 'spectrum.csv'
	assert written.exists()
	assert str(written) in capsys.readouterr().out
	assert b'\r' not in written.read_bytes()


def test_output_flag_wins(tmp_path, monkeypatch):
	path = write_config(tmp_path)
	monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / 'env'))
	assert cli.main(['spectrum', str(path), '--output', str(tmp_path / 'flag')]) == cli.EXIT_OK
	assert (tmp_path / 'flag' / 'spectrum.csv').exists()
	assert not (tmp_path / 'env').exists()


def test_environment_overrides_config(tmp_path, monkeypatch):
	path = write_config(tmp_path)
	monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / 'env'))
	assert cli.main(['split', str(path)]) == cli.EXIT_OK
	assert (tmp_path / 'env' / 'splitting.csv').exists()
	assert (tmp_path / 'env' / 'projection_norms.csv').exists()
	assert not (tmp_path / 'out').exists()


def test_config_error_reports_the_line(tmp_path, capsys):
	path = write_config(tmp_path, lp='unknown = 1')
	assert cli.main(['spectrum', str(path)]) == cli.EXIT_CONFIG
	err = capsys.readouterr().err
	assert 'lp.unknown' in err
	assert 'línea 11' in err


def test_missing_config(tmp_path):
	assert cli.main(['spectrum', str(tmp_path / 'missing.toml')]) == cli.EXIT_CONFIG


def test_numerical_failure(tmp_path, capsys):
	path = write_config(tmp_path, lp='nu = 0.9')
	assert cli.main(['split', str(path)]) == cli.EXIT_NUMERICAL
	assert 'parameters-infeasible' in capsys.readouterr().err


def test_failed_verification(tmp_path):
	path = write_config(tmp_path, verify='series_tolerance = 1e-12')
	assert cli.main(['verify', str(path)]) == cli.EXIT_VERIFICATION
	report = json.loads((tmp_path / 'out' / 'verification.json').read_text(encoding='utf-8'))
	assert not report['passed']


def test_find_line():
	text = '[lp]\nnu = 0.2\n\n[verify]\nsteps = 3\nmet.n = 1\n'
	assert find_line(text, 'lp.nu') == 2
	assert find_line(text, 'verify.steps') == 5
	assert find_line(text, 'lp.missing') is None


def test_fixed_policy_needs_rho(tmp_path):
	path = tmp_path / 'run.toml'
	path.write_text('[system]\nname = "det-2d"\n\n[lp]\nrho_policy = "fixed"\n', encoding='utf-8')
	with pytest.raises(ConfigError, match='lp.rho'):
		load_config(path)


@pytest.mark.parametrize(
	'text, key, line',
	[
		('[system]\nname = "lorenz"\n', 'system.name', 2),
		('[system]\nname = "det-2d"\n\n[system.params]\nspread = 0.1\n', 'system.params', 4),
	],
)
def test_unknown_system_is_a_config_error(tmp_path, capsys, text, key, line):
	path = tmp_path / 'run.toml'
	path.write_text(text, encoding='utf-8')
	assert cli.main(['spectrum', str(path)]) == cli.EXIT_CONFIG
	err = capsys.readouterr().err
	assert key in err
	assert f'línea {line}' in err


def test_repeated_runs_are_byte_identical(tmp_path):
	path = write_config(tmp_path)
	first, second = tmp_path / 'first', tmp_path / 'second'
	assert cli.main(['manifold', str(path), '--output', str(first)]) == cli.EXIT_OK
	assert cli.main(['manifold', str(path), '--output', str(second)]) == cli.EXIT_OK
	names = sorted(p.name for p in first.iterdir())
	assert names == ['chart.csv', 'solver.json']
	for name in names:
		assert (first / name).read_bytes() == (second / name).read_bytes()
