"""Tests for cocycles, linearization, cutoff remainders and the assumption checks."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from app.services.rds.cocycle import (
	Cocycle,
	CutoffSpec,
	LinearCocycle,
	PowerModulus,
	Remainder,
	SmoothstepBump,
	StationaryPoint,
	bump,
	cutoff_remainder,
	estimate_f,
	iterate,
	linearize,
	remainder,
	verify_assumption,
)
from app.services.rds.driver import build_driver, shift
from app.services.rds.errors import (
	InvalidArgumentError,
	LinearizationFailureError,
	OutsideValidityRadiusError,
)
from app.services.rds.field import FiberSchedule, FiberSpec
from app.services.rds.systems import build_benchmark


def _det_2d():
	benchmark = build_benchmark('det-2d')
	omega = benchmark.driver.realization(0)
	psi = LinearCocycle.from_cocycle(benchmark.cocycle, benchmark.stationary)
	return benchmark, omega, psi


def test_cocycle_law():
	benchmark = build_benchmark('random-diag', seed=4)
	omega = benchmark.driver.realization(0)
	x = np.array([0.1, 0.1, 0.1])
	for m, n in [(1, 2), (3, 4), (0, 5)]:
		direct = iterate(benchmark.cocycle, omega, x, m + n)
		middle = iterate(benchmark.cocycle, omega, x, m)
		composed = iterate(benchmark.cocycle, shift(omega, m), middle, n)
		np.testing.assert_allclose(direct, composed, rtol=1e-14, atol=0)


def test_orbit_and_iterate_agree():
	benchmark, omega, _ = _det_2d()
	orbit = benchmark.cocycle.orbit(omega, [0.1, 0.05], 4)
	assert len(orbit) == 5
	np.testing.assert_allclose(orbit[-1], iterate(benchmark.cocycle, omega, [0.1, 0.05], 4))
	with pytest.raises(InvalidArgumentError):
		iterate(benchmark.cocycle, omega, [0.1, 0.05], -1)


def test_additive_noise_stationary_point():
	benchmark = build_benchmark('additive-noise', seed=3)
	omega = benchmark.driver.realization(0)
	for n in range(-5, 5):
		assert benchmark.stationary.residual(benchmark.cocycle, shift(omega, n)) < 1e-12


def test_finite_differences_match_jacobian():
	benchmark, omega, _ = _det_2d()
	numeric = Cocycle(benchmark.cocycle.step, benchmark.cocycle.fibers)
	point = StationaryPoint(lambda omega: np.array([0.1, 0.2]))
	np.testing.assert_allclose(
		linearize(numeric, point, omega),
		benchmark.cocycle.differential(omega, np.array([0.1, 0.2])),
		atol=1e-6,
	)


def test_linearization_rejects_a_kink():
	driver = build_driver('deterministic-point', 1, {}, 0)
	kink = Cocycle(lambda omega, x: np.abs(x), FiberSchedule.euclidean(1))
	with pytest.raises(LinearizationFailureError):
		linearize(kink, StationaryPoint.zero(1), driver.realization())


def test_linear_cocycle_power():
	driver = build_driver('deterministic-point', 1, {}, 0)
	psi = LinearCocycle.constant(np.diag([2.0, 0.5]))
	np.testing.assert_allclose(psi.power(driver.realization(), 3), np.diag([8.0, 0.125]))
	assert not psi.matrix(driver.realization()).flags.writeable


def test_remainder_is_quadratic():
	benchmark, omega, psi = _det_2d()
	xi = np.array([0.1, -0.2])
	np.testing.assert_allclose(
		remainder(benchmark.cocycle, benchmark.stationary, psi, omega, xi),
		[xi[0] * xi[1], xi[0] ** 2],
	)


def test_remainder_outside_validity_radius():
	benchmark = build_benchmark('random-diag')
	omega = benchmark.driver.realization(0)
	psi = LinearCocycle.from_cocycle(benchmark.cocycle, benchmark.stationary)
	P = Remainder(benchmark.cocycle, benchmark.stationary, psi)
	with pytest.raises(OutsideValidityRadiusError):
		P(omega, [1.5, 0.0, 0.0])

	spec = CutoffSpec(rho=lambda omega: 0.1)
	np.testing.assert_array_equal(cutoff_remainder(P, spec, omega, [1.5, 0.0, 0.0]), np.zeros(3))


def test_bump_values():
	assert bump(0.0) == 1.0
	assert bump(1.0) == 1.0
	assert bump(-1.0) == 1.0
	assert bump(1.5) == pytest.approx(0.5)
	assert bump(2.0) == 0.0
	assert bump(3.0) == 0.0


@given(st.floats(min_value=-3, max_value=3), st.floats(min_value=0, max_value=1))
def test_bump_is_monotone_and_bounded(x, step):
	delta = SmoothstepBump()
	assert 0.0 <= delta(x) <= 1.0
	assert abs(delta.derivative(x)) <= 15 / 8 + 1e-12
	assert delta(abs(x) + step) <= delta(abs(x)) + 1e-15


def test_cutoff_remainder_localizes():
	benchmark, omega, psi = _det_2d()
	P = Remainder(benchmark.cocycle, benchmark.stationary, psi)
	spec = CutoffSpec(rho=lambda omega: 0.1)
	inside = np.array([0.05, 0.02])
	np.testing.assert_allclose(cutoff_remainder(P, spec, omega, inside), P(omega, inside))
	np.testing.assert_array_equal(cutoff_remainder(P, spec, omega, [0.3, 0.0]), np.zeros(2))


def test_cutoff_remainder_uses_the_fiber_norm():
	benchmark, omega, psi = _det_2d()
	P = Remainder(benchmark.cocycle, benchmark.stationary, psi)
	spec = CutoffSpec(rho=lambda omega: 0.1)
	xi = np.array([0.09, 0.09])
	sup = FiberSchedule.constant(FiberSpec(2, norm='sup'))
	np.testing.assert_allclose(cutoff_remainder(P, spec, omega, xi, sup), P(omega, xi))
	euclidean = cutoff_remainder(P, spec, omega, xi)
	assert np.linalg.norm(euclidean) < np.linalg.norm(P(omega, xi))


def test_cocycle_norm_follows_the_fibers():
	fibers = FiberSchedule.constant(FiberSpec(2, norm='sup'))
	c = Cocycle(lambda omega, x: x, fibers)
	omega = build_driver('deterministic-point', 1, {}, 0).realization()
	assert c.norm(omega, [0.3, -0.4]) == pytest.approx(0.4)


def test_linear_cocycle_cache_is_bounded():
	driver = build_driver('iid-sequence', 1, {'low': -1.0, 'high': 1.0}, 0)
	psi = LinearCocycle(lambda omega: np.eye(1) * (1 + omega.symbol(0)[0]), cache_size=2)
	omega = driver.realization(0)
	for n in range(3):
		psi.matrix(shift(omega, n))
	assert psi.cache_info().currsize == 2
	np.testing.assert_allclose(psi.matrix(omega), [[1 + omega.symbol(0)[0]]])


def test_power_modulus():
	h = PowerModulus(2.0)
	assert h(3.0) == pytest.approx(9.0)
	assert h.inverse(9.0) == pytest.approx(3.0)
	with pytest.raises(InvalidArgumentError):
		PowerModulus(0.0)


def test_assumptions_hold_for_det_2d():
	benchmark, omega, psi = _det_2d()
	spec = CutoffSpec(rho=lambda omega: 0.05, f=lambda omega: benchmark.spec.f)
	report = verify_assumption(benchmark.cocycle, benchmark.stationary, spec, 10, omega, psi, 0.5)
	assert report.passed
	assert report.violation_ratio <= 1.0
	assert report.log_norm_mean == pytest.approx(0.0)
	assert report.to_dict()['flags'] == []


def test_small_f_is_flagged():
	benchmark, omega, psi = _det_2d()
	spec = CutoffSpec(rho=lambda omega: 0.05, f=lambda omega: 0.01)
	report = verify_assumption(benchmark.cocycle, benchmark.stationary, spec, 5, omega, psi, 0.5)
	assert 'remainder-bound' in report.flags
	assert not report.passed


def test_shrinking_rho_is_flagged():
	benchmark, omega, psi = _det_2d()
	spec = CutoffSpec(rho=lambda omega: math.exp(-0.5 * omega.offset), f=lambda omega: 3.0)
	report = verify_assumption(benchmark.cocycle, benchmark.stationary, spec, 10, omega, psi, 0.5)
	assert 'rho-temperedness' in report.flags


def test_estimated_f_passes_the_remainder_check():
	benchmark, omega, psi = _det_2d()
	P = Remainder(benchmark.cocycle, benchmark.stationary, psi)
	f = estimate_f(P, CutoffSpec(), omega, samples=3, radius=0.5, pairs=50)
	assert 0.0 < f <= 1.25 * 2.0

	spec = CutoffSpec(f=lambda omega: f)
	report = verify_assumption(
		benchmark.cocycle, benchmark.stationary, spec, 3, omega, psi, 0.5, pairs=50
	)
	assert report.violation_ratio <= 1.0


def test_assumption_needs_samples():
	benchmark, omega, psi = _det_2d()
	with pytest.raises(InvalidArgumentError):
		verify_assumption(benchmark.cocycle, benchmark.stationary, CutoffSpec(), 0, omega, psi)
