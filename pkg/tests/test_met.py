"""Tests for the spectrum, the splitting, the projections and the growth constants."""

import math

import numpy as np
import pytest

from app.services.rds import pipeline
from app.services.rds.cocycle import LinearCocycle
from app.services.rds.driver import build_driver
from app.services.rds.errors import (
	InvalidArgumentError,
	NoCenterExponentError,
	NotInvertibleDirectionError,
)
from app.services.rds.met import (
	LyapunovSpectrum,
	OseledetsSplitting,
	cluster,
	equivariance_angles,
	lyapunov_spectrum,
	oseledets_split,
	project,
	projection_slopes,
	restricted_inverse,
)
from app.services.rds.systems import build_benchmark

from tests.helpers import make_config

LN2 = math.log(2.0)
POINT = build_driver('deterministic-point', 1, {}, 0).realization()


def test_cluster():
	exponents, multiplicities = cluster([0.01, -0.7, 0.0], 0.05)
	assert exponents == pytest.approx((0.005, -0.7))
	assert multiplicities == (2, 1)


def test_det_2d_spectrum(det2d):
	spectrum = det2d.spectrum
	assert spectrum.raw == pytest.approx((0.0, -LN2), abs=1e-9)
	assert spectrum.multiplicities == (1, 1)
	assert spectrum.center_index == 0
	assert spectrum.mu_plus == math.inf
	assert spectrum.mu_minus == pytest.approx(-LN2)
	assert spectrum.unstable_dimension == 0
	assert spectrum.center_dimension == 1


def test_det_3d_spectrum(det3d):
	assert det3d.spectrum.raw == pytest.approx((LN2, 0.0, -LN2), abs=1e-9)
	assert det3d.spectrum.center_index == 1
	assert det3d.spectrum.unstable_dimension == 1


def test_delay_companion_spectrum():
	benchmark = build_benchmark('delay-companion')
	psi = LinearCocycle.from_cocycle(benchmark.cocycle, benchmark.stationary)
	spectrum = lyapunov_spectrum(psi, benchmark.driver.realization(0), 2, 4000)
	assert spectrum.raw == pytest.approx((0.0, -LN2), abs=1e-3)


def test_random_diag_spectrum_matches_birkhoff_averages():
	benchmark = build_benchmark('random-diag', seed=7)
	omega = benchmark.driver.realization(0)
	psi = LinearCocycle.from_cocycle(benchmark.cocycle, benchmark.stationary)
	spectrum = lyapunov_spectrum(psi, omega, 3, 20000)
	oracle = benchmark.spec.exponents(omega, spectrum.steps)
	assert spectrum.raw == pytest.approx(oracle, abs=1e-9)
	assert spectrum.center_index == 1
	assert all(error >= 0 for error in spectrum.standard_errors)


@pytest.mark.slow
def test_random_diag_long_run():
	benchmark = build_benchmark('random-diag', seed=7)
	omega = benchmark.driver.realization(0)
	psi = LinearCocycle.from_cocycle(benchmark.cocycle, benchmark.stationary)
	spectrum = lyapunov_spectrum(psi, omega, 3, 100000)
	assert spectrum.raw == pytest.approx((0.6, 0.0, -0.6), abs=0.01)


def test_spectrum_arguments():
	psi = LinearCocycle.constant(np.eye(2))
	with pytest.raises(InvalidArgumentError):
		lyapunov_spectrum(psi, POINT, 3, 10)
	with pytest.raises(InvalidArgumentError):
		lyapunov_spectrum(psi, POINT, 1, 2, period=3)


def test_no_center_exponent():
	psi = LinearCocycle.constant(np.diag([2.0, 0.5]))
	spectrum = lyapunov_spectrum(psi, POINT, 2, 100)
	assert spectrum.center_index is None
	with pytest.raises(NoCenterExponentError):
		_ = spectrum.unstable_dimension
	with pytest.raises(NoCenterExponentError):
		oseledets_split(psi, POINT, spectrum, 5)


def test_empty_unstable_subspace_is_allowed():
	psi = LinearCocycle.constant(np.diag([1.0, 0.5]))
	spectrum = LyapunovSpectrum((0.0, -LN2), (1, 1))
	splitting = oseledets_split(psi, POINT, spectrum, 4)
	assert splitting.dimensions == {'U': 0, 'C': 1, 'S': 1}
	np.testing.assert_allclose(np.abs(splitting.basis('C', 0)[:, 0]), [1.0, 0.0], atol=1e-9)


def test_shear_splitting():
	psi = LinearCocycle.constant(np.array([[2.0, 1.0], [0.0, 1.0]]))
	spectrum = lyapunov_spectrum(psi, POINT, 2, 200)
	assert spectrum.exponents == pytest.approx([LN2, 0.0], abs=1e-9)
	splitting = oseledets_split(psi, POINT, spectrum, 4)
	assert splitting.dimensions == {'U': 1, 'C': 1, 'S': 0}
	np.testing.assert_allclose(np.abs(splitting.basis('U', 0)[:, 0]), [1.0, 0.0], atol=1e-9)
	diagonal = np.array([1.0, -1.0]) / math.sqrt(2.0)
	assert abs(splitting.basis('C', 0)[:, 0] @ diagonal) == pytest.approx(1.0, abs=1e-9)


def test_oblique_projection():
	splitting = OseledetsSplitting.from_bases(
		POINT, -2, 2, np.zeros((2, 0)), [1.0, 0.0], np.array([1.0, 1.0]) / math.sqrt(2.0),
		np.array([[1.0, -0.5], [0.0, 0.5]]),
	)
	np.testing.assert_allclose(project(splitting, 'C', 0, [0.0, 1.0]), [-1.0, 0.0], atol=1e-12)
	np.testing.assert_allclose(project(splitting, 'S', 1, [0.0, 1.0]), [1.0, 1.0], atol=1e-12)


@pytest.mark.parametrize('n', [-10, 0, 7])
def test_projections(det3d, n):
	projections = det3d.splitting.projections
	total = np.zeros((3, 3))
	for name in ('C', 'U', 'S'):
		matrix = projections.matrix(name, n)
		np.testing.assert_allclose(matrix @ matrix, matrix, atol=1e-12)
		total += matrix
	np.testing.assert_allclose(total, np.eye(3), atol=1e-12)
	np.testing.assert_allclose(projections.matrix('C‖S⊕U', n), projections.matrix('C', n))


def test_det_3d_bases(det3d):
	splitting = det3d.splitting
	assert splitting.dimensions == {'U': 1, 'C': 1, 'S': 1}
	for name, axis in (('U', 0), ('C', 1), ('S', 2)):
		np.testing.assert_allclose(splitting.basis(name, 0)[:, 0], np.eye(3)[axis], atol=1e-9)


def test_project_outside_window(det3d):
	with pytest.raises(InvalidArgumentError):
		project(det3d.splitting, 'C', det3d.splitting.upper + 1, [1.0, 0.0, 0.0])


def test_restricted_inverse(det3d):
	v = np.array([1.0, 1.0, 0.0])
	back = restricted_inverse(det3d.linear, det3d.splitting, 0, 3, v)
	np.testing.assert_allclose(back, [0.125, 1.0, 0.0], atol=1e-12)
	np.testing.assert_allclose(det3d.linear.power(det3d.anchor.driver.realization(-3), 3) @ back, v)


def test_restricted_inverse_rejects_stable_vectors(det3d):
	with pytest.raises(NotInvertibleDirectionError):
		restricted_inverse(det3d.linear, det3d.splitting, 0, 1, [0.0, 0.0, 1.0])


def test_equivariance(det3d):
	angles = equivariance_angles(det3d.splitting)
	assert set(angles) == {'U', 'C', 'S', 'S-complement'}
	assert max(angles.values()) < 1e-10
	assert max(abs(s) for s in projection_slopes(det3d.splitting).values()) < 1e-10


def test_random_splitting_is_equivariant():
	analysis = pipeline.analyze(
		make_config('random-diag', met={'n': 2000, 'N_orbit': 30}), 'splitting'
	)
	angles = equivariance_angles(analysis.splitting)
	assert max(angles.values()) < 1e-6


def test_growth_constants(det2d):
	constants = det2d.constants.at(0)
	assert constants['U'] == 1.0
	for name in ('S', 'C1', 'C-1'):
		assert constants[name] == pytest.approx(1.25, abs=1e-9)
	with pytest.raises(InvalidArgumentError):
		det2d.constants.at(det2d.splitting.upper + 1)
