import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import solution
from radialspec import eigencurve as ec
from radialspec.errors import OutOfRange, PreconditionViolation
from radialspec.geometry import constant_warp
from radialspec.oracle import fd_lambda1
from radialspec.presets import preset_warp


def test_hook_sine():
    assert ec.dirichlet_lambda1(constant_warp(0.0), 1, 0.0, math.pi).lambda_T == pytest.approx(1.0, rel=1e-12)


def test_hook_translation_invariance():
    point = ec.dirichlet_lambda1(constant_warp(1.0), 1, 1.0, 3.0)
    assert point.lambda_T == pytest.approx((math.pi / 2) ** 2, rel=1e-12)
    assert point.interior_zeros == 0


@pytest.mark.parametrize("T", [1.5, 2.0, 7.0, 30.0])
def test_hook_constant_weight_law(T):
    point = ec.dirichlet_lambda1(constant_warp(1.0), 2, 1.0, T)
    assert point.lambda_T * (T - 1.0) ** 2 == pytest.approx(math.pi**2, rel=1e-8)


def test_bounded_exp_against_fd_oracle(bounded_exp):
    shooting = ec.dirichlet_lambda1(bounded_exp, 2, 1.0, 6.0).lambda_T
    assert fd_lambda1(bounded_exp, 2, 1.0, 6.0, N=10_000) == pytest.approx(shooting, rel=1e-4)


def test_first_eigenfunction_has_no_interior_zero(bounded_exp, cos_tan):
    for w in (bounded_exp, cos_tan):
        for T in (1.5, 5.0, 40.0):
            assert ec.dirichlet_lambda1(w, 2, 1.0, T).interior_zeros == 0


def test_dirichlet_preconditions(bounded_exp):
    with pytest.raises(PreconditionViolation):
        ec.dirichlet_lambda1(bounded_exp, 2, 1.0, 1.0)
    with pytest.raises(PreconditionViolation):
        ec.dirichlet_lambda1(preset_warp("paper-example"), 2, 1.0, 700.0)


def test_sweep_hook_closed_form():
    T_list = [2.0, 3.0, 5.0, 9.0]
    sweep = ec.eigencurve_sweep(constant_warp(1.0), 1, 1.0, T_list)
    assert sweep.strictly_decreasing and sweep.continuity_ok
    for p, T in zip(sweep.points, T_list):
        assert p.lambda_T == pytest.approx(math.pi**2 / (T - 1.0) ** 2, rel=1e-10)


@pytest.mark.parametrize("preset,T_list", [("bounded-exp", [2, 4, 8, 16, 32]), ("paper-example", [2, 4, 8])])
def test_sweep_presets(preset, T_list):
    sweep = ec.eigencurve_sweep(preset_warp(preset), 2, 1.0, T_list)
    assert sweep.strictly_decreasing and sweep.continuity_ok


def test_sweep_rejects_unsorted(bounded_exp):
    with pytest.raises(PreconditionViolation):
        ec.eigencurve_sweep(bounded_exp, 2, 1.0, [4.0, 2.0])


@given(st.floats(1.1, 40.0), st.floats(1.01, 3.0))
def test_strict_monotonicity(T, factor):
    w = preset_warp("bounded-exp")
    a = ec.dirichlet_lambda1(w, 2, 1.0, T).lambda_T
    b = ec.dirichlet_lambda1(w, 2, 1.0, 1.0 + (T - 1.0) * factor).lambda_T
    assert b < a


def test_alpha_bound_equality_on_hook():
    rep = ec.alpha_bound_check(ec.dirichlet_lambda1(constant_warp(1.0), 1, 1.0, 4.0))
    assert rep.alpha == pytest.approx(math.pi / 3.0, rel=1e-13)
    assert rep.bound == pytest.approx(rep.lambda_T, rel=1e-9)
    assert rep.holds


def test_alpha_bound_bounded_exp_strict(bounded_exp):
    rep = ec.alpha_bound_check(ec.dirichlet_lambda1(bounded_exp, 2, 1.0, 8.0))
    assert rep.holds and rep.margin > 0.1
    # the r(T) denominator gives a lower bound instead
    assert rep.lambda_T > rep.bound_at_T


def test_alpha_bound_cos_tan(cos_tan):
    assert ec.alpha_bound_check(ec.dirichlet_lambda1(cos_tan, 2, 1.0, 6.0)).holds


def test_inverse_weight_integral_closed_form(bounded_exp):
    # int dt / (2 - e^-t) = (t + log(2 - e^-t)) / 2 ... evaluated between 1 and 9
    F = lambda t: (t + math.log(2.0 - math.exp(-t))) / 2.0  # noqa: E731
    assert ec.inverse_weight_integral(bounded_exp, 2, 1.0, 9.0) == pytest.approx(F(9.0) - F(1.0), rel=1e-13)


def test_limits_hook():
    rep = ec.lambda_limits_check(constant_warp(1.0), 1, 1.0, k_max=6)
    for T, lam in zip(rep.large_T + rep.small_T, rep.lambda_large + rep.lambda_small):
        assert lam == pytest.approx(math.pi**2 / (T - 1.0) ** 2, rel=1e-9)


def test_limits_bounded_exp(bounded_exp):
    rep = ec.lambda_limits_check(bounded_exp, 2, 1.0, k_max=6)
    assert rep.lambda_large[-1] < 0.01
    assert rep.lambda_small[-1] > 1e3
    assert rep.decreasing_to_zero and rep.increasing_to_infinity


@pytest.mark.parametrize("lam,t0,T", [(1.0, 0.0, math.pi), (4.0, 1.0, 1.0 + math.pi / 2)])
def test_solve_T_hook(lam, t0, T):
    assert ec.solve_T_for_lambda(constant_warp(t0), 1, t0, lam) == pytest.approx(T, rel=1e-10)


@pytest.mark.parametrize("lam", [0.5, 1.0, 5.0])
def test_solve_T_round_trip_and_first_zero(bounded_exp, lam):
    T = ec.solve_T_for_lambda(bounded_exp, 2, 1.0, lam)
    assert ec.dirichlet_lambda1(bounded_exp, 2, 1.0, T).lambda_T == pytest.approx(lam, rel=1e-8)
    assert solution("bounded-exp", 2, lam).zeros[1] == pytest.approx(T, rel=1e-8)


def test_solve_T_out_of_range():
    short = dataclasses.replace(constant_warp(1.0), horizon=20.0)
    with pytest.raises(OutOfRange):
        ec.solve_T_for_lambda(short, 1, 1.0, 1e-3)
    with pytest.raises(PreconditionViolation):
        ec.solve_T_for_lambda(short, 1, 1.0, -1.0)


@pytest.mark.slow
def test_solve_T_out_of_range_cos_tan(cos_tan):
    with pytest.raises(OutOfRange):
        ec.solve_T_for_lambda(cos_tan, 2, 1.0, 1e-6)


def test_eigencurve_rows_column_order(bounded_exp):
    point = ec.dirichlet_lambda1(bounded_exp, 2, 1.0, 3.0)
    (row,) = ec.eigencurve_rows([point])
    assert row == (point.T, point.lambda_T, point.alpha_T, point.bound, point.residual)
    assert np.isfinite(row).all()
