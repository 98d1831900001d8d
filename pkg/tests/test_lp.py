"""Tests for the contraction constants, the cutoff radius and the Picard solver."""

import math
from dataclasses import replace

import numpy as np
import pytest

from app.services.rds.cocycle import PowerModulus
from app.services.rds.driver import build_driver
from app.services.rds.errors import (
	FixedPointNotConvergedError,
	InvalidArgumentError,
	NotInCenterError,
	ParametersInfeasibleError,
	RadiusFailureError,
)
from app.services.rds.lp import (
	Certificate,
	LPConfig,
	LPContext,
	SequenceWindow,
	apply_I,
	contraction_bound,
	empirical_contraction,
	injectivity_bound,
	radius_from_thresholds,
	rate_sums,
	recover_center,
	shift_window,
	solve_fixed_point,
	thresholds,
	transported_center,
	weighted_distance,
	weighted_norm,
)
from app.services.rds.met import LyapunovSpectrum

LN2 = math.log(2.0)
HYPERBOLIC = LyapunovSpectrum((LN2, 0.0, -LN2), (1, 1, 1))
UNIT = {'S': 1.0, 'U': 1.0, 'C1': 1.0, 'C-1': 1.0}
NORMS = {'C': 1.0, 'U': 1.0, 'S': 1.0}


def test_contraction_constant():
	cfg = LPConfig(nu=0.2, eps=0.05, M=1.0)
	assert contraction_bound(cfg, HYPERBOLIC) == pytest.approx(14.37, abs=0.01)


def test_resolved_constants_certify_the_operator():
	cfg = LPConfig().resolve(HYPERBOLIC)
	assert cfg.eps == pytest.approx(0.05)
	L = contraction_bound(cfg, HYPERBOLIC)
	L_tilde = injectivity_bound(cfg, HYPERBOLIC)
	assert 5 * L == pytest.approx(0.5)
	assert 5 * L_tilde == pytest.approx(1.0)
	certificate = Certificate(L, L_tilde, cfg.M, cfg.M_tilde, cfg.eps, cfg.nu)
	assert certificate.holds
	assert certificate.to_dict()['applies_to_radius']


def test_rate_sums_without_unstable_exponents():
	center, unstable, stable = rate_sums(0.2, 0.05, math.inf, -LN2)
	assert unstable == 0.0
	assert center == pytest.approx(1 / (1 - math.exp(-0.15)))
	assert stable == pytest.approx(1 / (1 - math.exp(0.25 - LN2)))


@pytest.mark.parametrize('nu, eps', [(0.8, None), (0.2, 0.3), (0.0, None)])
def test_infeasible_rates(nu, eps):
	with pytest.raises(ParametersInfeasibleError):
		LPConfig(nu=nu, eps=eps).resolve(HYPERBOLIC)


def test_thresholds():
	T, T_tilde = thresholds(0.00696, 0.00696, 1.0, UNIT, UNIT, NORMS)
	assert T == pytest.approx(0.00696)
	assert T_tilde == pytest.approx(0.00174)
	assert radius_from_thresholds(T, T_tilde, PowerModulus()) == pytest.approx(4.35e-4)


def test_radius_halves_when_f_doubles():
	rho = radius_from_thresholds(
		*thresholds(0.00696, 0.00696, 1.0, UNIT, UNIT, NORMS), PowerModulus()
	)
	doubled = radius_from_thresholds(
		*thresholds(0.00696, 0.00696, 2.0, UNIT, UNIT, NORMS), PowerModulus()
	)
	assert doubled == pytest.approx(rho / 2)


def test_empty_hyperbolic_part_drops_out():
	norms = {'C': 1.0, 'U': 0.0, 'S': 0.0}
	T, T_tilde = thresholds(0.01, 0.02, 1.0, UNIT, UNIT, norms)
	assert T == pytest.approx(0.01)
	assert T_tilde == math.inf


@pytest.mark.parametrize('T, T_tilde', [(0.0, math.inf), (-1.0, 1.0), (1.0, 0.0)])
def test_radius_failure(T, T_tilde):
	with pytest.raises(RadiusFailureError):
		radius_from_thresholds(T, T_tilde, PowerModulus())


def test_weighted_norm():
	omega = build_driver('deterministic-point', 1, {}, 0).realization()
	entries = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 2.0]])
	gamma = SequenceWindow(omega, -1, 1, entries, LN2)
	assert weighted_norm(gamma) == pytest.approx(1.0)
	assert weighted_distance(gamma, gamma) == 0.0
	with pytest.raises(InvalidArgumentError):
		gamma.entry(2)


def test_operator_on_zero_sequence(det2d):
	ctx = det2d.context
	v = np.array([0.01, 0.0])
	gamma = SequenceWindow.zeros(ctx.anchor, 10, 2, ctx.config.nu)
	image = apply_I(v, gamma, ctx)
	np.testing.assert_allclose(image.entries, np.tile(v, (21, 1)), atol=1e-15)


def test_operator_rejects_non_center_data(det2d):
	ctx = det2d.context
	gamma = SequenceWindow.zeros(ctx.anchor, 10, 2, ctx.config.nu)
	with pytest.raises(NotInCenterError):
		apply_I([0.0, 0.01], gamma, ctx)


def test_solver(det2d):
	ctx = det2d.context
	v = np.array([0.01, 0.0])
	gamma, report = solve_fixed_point(v, ctx)
	assert report.converged
	assert report.residual < ctx.config.tolerance
	assert report.iterations >= 1
	assert report.bound_respected
	assert report.contraction_ratio < 1.0
	np.testing.assert_allclose(recover_center(gamma, ctx), v, atol=1e-12)
	assert weighted_distance(apply_I(v, gamma, ctx), gamma) < ctx.config.tolerance


def test_fixed_point_is_a_modified_orbit(det2d):
	ctx = det2d.context
	gamma, _ = solve_fixed_point([0.015, 0.0], ctx)
	for n in range(-5, 5):
		image = ctx.modified_step(n, ctx.stationary_at(n) + gamma.entry(n))
		step = image - ctx.stationary_at(n + 1)
		np.testing.assert_allclose(step, gamma.entry(n + 1), atol=1e-10)


def test_transport(det2d):
	ctx = det2d.context
	gamma, _ = solve_fixed_point([0.02, 0.0], ctx)
	shifted = shift_window(gamma)
	assert shifted.lower == gamma.lower - 1
	center = transported_center(gamma, ctx)
	assert weighted_distance(apply_I(center, shifted, ctx), shifted) < 1e-10


def test_empirical_contraction(det2d_certified):
	ctx = det2d_certified.context
	ratios = empirical_contraction(ctx, pairs=20, seed=1)
	assert len(ratios) == 20
	assert max(ratios) <= min(1.0, 5 * ctx.certificate.L)


def test_certified_radius_is_tabulated(det2d_certified):
	ctx = det2d_certified.context
	assert ctx.certificate.rho_policy == 'certified'
	assert ctx.certificate.holds
	assert np.all(ctx.rho > 0)
	np.testing.assert_allclose(ctx.rho, ctx.rho[0])


def test_non_convergence(det2d):
	ctx = det2d.context
	limited = LPContext(
		ctx.cocycle,
		ctx.stationary,
		ctx.linear,
		ctx.splitting,
		ctx.constants,
		ctx.constants_nu,
		ctx.cutoff,
		replace(ctx.config, max_iterations=1),
		ctx.certificate,
	)
	with pytest.raises(FixedPointNotConvergedError) as error:
		solve_fixed_point([0.01, 0.0], limited)
	assert not error.value.report.converged
	assert len(error.value.report.residuals) == 2


def test_window_must_fit_the_splitting(det2d):
	ctx = det2d.context
	gamma = SequenceWindow.zeros(ctx.anchor, ctx.upper + 5, 2, ctx.config.nu)
	with pytest.raises(InvalidArgumentError):
		apply_I([0.01, 0.0], gamma, ctx)


def test_linear_cocycle_solves_in_one_update(linear):
	gamma, report = solve_fixed_point([0.01, 0.0], linear.context)
	assert report.iterations == 1
	assert len(report.residuals) == 2
	assert report.residuals[-1] < linear.context.config.tolerance


def test_operator_ignores_the_unstable_part_of_the_center_datum(det3d):
	ctx = det3d.context
	v = ctx.splitting.basis('C', 0)[:, 0] * 0.01
	leak = ctx.splitting.basis('U', 0)[:, 0] * 1e-15
	gamma = SequenceWindow.zeros(ctx.anchor, 10, 3, ctx.config.nu)
	clean = apply_I(v, gamma, ctx)
	np.testing.assert_allclose(apply_I(v + leak, gamma, ctx).entries, clean.entries, atol=1e-16)


def test_det_3d_transport(det3d):
	ctx = det3d.context
	v = ctx.splitting.basis('C', 0)[:, 0] * 0.02
	gamma, _ = solve_fixed_point(v, ctx)
	shifted = shift_window(gamma)
	center = transported_center(gamma, ctx)
	assert weighted_distance(apply_I(center, shifted, ctx), shifted) < 10 * ctx.config.tolerance
