"""Tests for the staged analysis, the verification summary and the artifact writers."""

import json
import math
from pathlib import Path

import pytest

from app.controllers.rds.helpers import load_config
from app.services.rds import export, pipeline
from app.services.rds.errors import InvalidArgumentError, ParametersInfeasibleError
from app.services.rds.lp import empirical_contraction
from app.services.rds.met import LyapunovSpectrum
from app.services.rds.systems import REGISTRY

from tests.helpers import make_config, oracle_config

CONFIGS = Path(__file__).resolve().parents[1] / 'configs'


def test_stages_stop_where_requested():
	config = make_config('det-2d')
	system = pipeline.analyze(config, 'system')
	assert system.spectrum is None

	spectrum = pipeline.analyze(config, 'spectrum')
	assert spectrum.spectrum is not None
	assert spectrum.splitting is None

	splitting = pipeline.analyze(config, 'splitting')
	assert splitting.constants is not None
	assert splitting.context is None


def test_unknown_stage():
	with pytest.raises(InvalidArgumentError):
		pipeline.analyze(make_config('det-2d'), 'manifold')


def test_half_width():
	assert pipeline.half_width(make_config('det-2d')) == 40 + 50 + 5 + 2
	assert pipeline.half_width(make_config('det-2d', met={'N_orbit': 60})) == 60


def test_infeasible_nu():
	with pytest.raises(ParametersInfeasibleError):
		pipeline.analyze(make_config('det-2d', lp={'nu': 0.9}), 'splitting')


def test_fixed_policy_table(det2d):
	ctx = det2d.context
	assert ctx.certificate.rho_policy == 'fixed'
	assert not ctx.certificate.to_dict()['applies_to_radius']
	assert ctx.radius_at(0) == 0.05
	assert det2d.assumption.passed


def test_det_2d_verification(det2d, det2d_chart):
	result = pipeline.verify(det2d, det2d_chart)
	failed = [
		check['name']
		for stage in result['stages'].values()
		for check in stage.get('checks', [])
		if not check['passed']
	]
	assert result['passed'], failed
	assert set(result['stages']) == {'assumption', 'splitting', 'manifold'}
	names = {check['name'] for check in result['stages']['manifold']['checks']}
	assert {'series-leading', 'series-next', 'invariance', 'tangency-order'} <= names
	assert 'contraction' not in names
	json.loads(export.json_text(result))


def test_documents_are_reproducible():
	config = make_config('det-3d')
	first = pipeline.analyze(config, 'splitting')
	second = pipeline.analyze(config, 'splitting')
	one = export.documents_for('split', first.spectrum, first.splitting)
	two = export.documents_for('split', second.spectrum, second.splitting)
	assert sorted(one) == ['projection_norms.csv', 'spectrum.csv', 'splitting.csv']
	assert one == two


def test_manifold_documents(det2d, det2d_chart):
	documents = export.documents_for(
		'manifold', det2d.spectrum, det2d.splitting, det2d.context, det2d_chart
	)
	assert sorted(documents) == [
		'chart.csv',
		'projection_norms.csv',
		'solver.json',
		'spectrum.csv',
		'splitting.csv',
	]
	header = documents['chart.csv'].splitlines()[0]
	assert header == 't_0,x_0,x_1,residual'
	solver = json.loads(documents['solver.json'])
	assert solver['grid']['points'] == 21
	assert solver['summary']['bounds_respected']
	assert solver['certificate']['rho_policy'] == 'fixed'


def test_spectrum_csv_format():
	spectrum = LyapunovSpectrum(
		(0.0, -math.log(2.0)), (1, 1), raw=(0.0, -math.log(2.0)), standard_errors=(0.0, 0.0)
	)
	text = export.spectrum_csv(spectrum)
	assert text.splitlines()[0] == 'rank,exponent,standard_error,cluster'
	assert '-0.69314718055994529' in text
	assert '\r' not in text
	assert text.endswith('\n')


def test_splitting_csv_columns(det2d):
	text = export.splitting_csv(det2d.splitting)
	header = text.splitlines()[0].split(',')
	assert header == ['n', 'C_0_0', 'C_1_0', 'S_0_0', 'S_1_0']
	assert len(text.splitlines()) == det2d.splitting.upper - det2d.splitting.lower + 2


def test_json_text():
	text = export.json_text({'b': float('nan'), 'a': [1, float('inf')]})
	assert text == '{\n  "a": [\n    1,\n    null\n  ],\n  "b": null\n}\n'


def test_write_artifacts(tmp_path):
	paths = export.write_artifacts(tmp_path / 'out', {'b.csv': 'x\n1\n', 'a.json': '{}\n'})
	assert [p.name for p in paths] == ['a.json', 'b.csv']
	assert (tmp_path / 'out' / 'b.csv').read_bytes() == b'x\n1\n'


def test_oracle_config_helper():
	config = oracle_config('det-3d', verify={'degree': 4})
	assert config.lp.rho_policy == 'fixed'
	assert config.verify.degree == 4
	assert config.grid.radius == 0.02


def _failed(result):
	return [
		check['name']
		for stage in result['stages'].values()
		for check in stage.get('checks', [])
		if not check['passed']
	]


def test_det_3d_verification(det3d, det3d_chart):
	result = pipeline.verify(det3d, det3d_chart)
	assert result['passed'], _failed(result)
	transport = next(
		check
		for check in result['stages']['manifold']['checks']
		if check['name'] == 'transport'
	)
	assert transport['observed'] < 10 * det3d.config.lp.tolerance


@pytest.mark.parametrize(
	'name',
	[
		'det-2d-certified',
		pytest.param('additive-noise', marks=pytest.mark.slow),
		pytest.param('delay-companion', marks=pytest.mark.slow),
		pytest.param('driven-ode', marks=pytest.mark.slow),
		pytest.param('random-diag', marks=pytest.mark.slow),
	],
)
def test_shipped_configuration_verifies(name):
	analysis = pipeline.analyze(load_config(CONFIGS / f'{name}.toml'))
	result = pipeline.verify(analysis)
	assert result['passed'], _failed(result)


def _certified_config(name):
	config = load_config(CONFIGS / f'{name}.toml')
	return config if config.lp.rho_policy == 'certified' else make_config(name)


@pytest.mark.parametrize(
	'name',
	[
		pytest.param(name, marks=pytest.mark.slow) if name == 'random-diag' else name
		for name in sorted(REGISTRY)
	],
)
def test_empirical_contraction_on_every_benchmark(name):
	analysis = pipeline.analyze(_certified_config(name))
	ratios = empirical_contraction(analysis.context, pairs=20, seed=1)
	assert len(ratios) == 20
	assert max(ratios) <= min(1.0, 5 * analysis.certificate.L)
