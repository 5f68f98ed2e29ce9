import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import solution
from radialspec import oracle, weyl
from radialspec.eigencurve import dirichlet_lambda1
from radialspec.errors import InsufficientData, PreconditionViolation
from radialspec.geometry import constant_warp


def test_hook_stencil():
    op = oracle.discretize(constant_warp(0.0), 1, 0.0, 1.0, 20)
    h2 = op.h**2
    assert np.allclose(op.d * h2, 2.0, rtol=0, atol=1e-13)
    assert np.allclose(op.e * h2, -1.0, rtol=0, atol=1e-13)
    assert op.size == 19 and len(op.e) == 18


def test_grid_endpoints_exact(bounded_exp):
    op = oracle.discretize(bounded_exp, 2, 1.0, 7.3, 997)
    assert op.t[0] == 1.0 and op.t[-1] == 7.3


def test_operator_is_symmetric_with_negative_couplings(bounded_exp):
    op = oracle.discretize(bounded_exp, 3, 1.0, 9.0, 64)
    A = op.dense()
    assert np.array_equal(A, A.T)
    assert np.all(op.e < 0)


def test_discretize_preconditions(bounded_exp):
    with pytest.raises(PreconditionViolation):
        oracle.discretize(bounded_exp, 2, 1.0, 3.0, 8)
    with pytest.raises(PreconditionViolation):
        oracle.discretize(bounded_exp, 2, 1.0, 1.0, 64)


def test_sturm_count_against_dense_eigensolver(bounded_exp):
    op = oracle.discretize(bounded_exp, 2, 1.0, 12.0, 200)
    dense = np.linalg.eigvalsh(op.dense())
    shifts = np.linspace(dense[0] - 1.0, dense[-1] + 1.0, 57)
    assert oracle.sturm_count(op, shifts).tolist() == [int(np.sum(dense < s)) for s in shifts]
    vals = oracle.eigenvalues_by_index(op, [0, 5, 50, 198])
    assert np.allclose(vals, dense[[0, 5, 50, 198]], rtol=1e-12, atol=op.resolution)


def test_no_missed_or_duplicated_eigenvalues(bounded_exp):
    op = oracle.discretize(bounded_exp, 2, 1.0, 6.0, 400)
    vals = oracle.smallest_eigenvalues(op, 12)
    assert np.all(np.diff(vals) > 0)
    mids = 0.5 * (vals[:-1] + vals[1:])
    assert oracle.sturm_count(op, mids).tolist() == list(range(1, 12))


def test_refinement_keeps_ordering(bounded_exp):
    coarse = oracle.smallest_eigenvalues(oracle.discretize(bounded_exp, 2, 1.0, 6.0, 200), 6)
    fine = oracle.smallest_eigenvalues(oracle.discretize(bounded_exp, 2, 1.0, 6.0, 400), 6)
    # second-order scheme from below: each refined value sits between its coarse value and the next one
    assert np.all(fine > coarse[:6] - 1e-9)
    assert np.all(fine[:-1] < coarse[1:])


def test_hook_first_eigenvalue():
    op = oracle.discretize(constant_warp(0.0), 1, 0.0, math.pi, 10_000)
    assert oracle.smallest_eigenvalues(op, 1)[0] == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(oracle.smallest_eigenvalues(op, 3), [1.0, 4.0, 9.0], rtol=0, atol=1e-5)


def test_hook_matches_discrete_closed_form():
    N = 500
    op = oracle.discretize(constant_warp(0.0), 1, 0.0, math.pi, N)
    k = np.arange(1, 6)
    exact = (2.0 / op.h * np.sin(k * math.pi / (2 * N))) ** 2
    assert np.allclose(oracle.smallest_eigenvalues(op, 5), exact, rtol=1e-12)


def test_richardson_ratio(bounded_exp):
    assert 3.5 <= oracle.richardson_ratio(bounded_exp, 2, 1.0, 6.0) <= 4.5


def test_fd_agrees_with_shooting(bounded_exp, cos_tan):
    for w, T in ((bounded_exp, 6.0), (cos_tan, 4.0)):
        shooting = dirichlet_lambda1(w, 2, 1.0, T).lambda_T
        assert oracle.fd_lambda1(w, 2, 1.0, T) == pytest.approx(shooting, rel=1e-4)


@given(st.floats(0.05, 30.0))
def test_nearest_eigenvalue_is_nearest(x):
    op = oracle.discretize(constant_warp(0.0), 1, 0.0, math.pi, 64)
    dense = np.linalg.eigvalsh(op.dense())
    assert oracle.nearest_eigenvalue(op, x) == pytest.approx(dense[np.argmin(np.abs(dense - x))], rel=1e-11)


# -- finite-difference residual ---------------------------------------------


def test_residual_oracle_zero_function(bounded_exp):
    assert oracle.finite_difference_residual_oracle(lambda t: 0.0 * t, bounded_exp, 2, 1.0, 3.0) == 0.0


def test_residual_oracle_on_solution_ramp():
    sol = solution("bounded-exp", 2, 1.0)
    element = weyl.weyl_quotient(sol.problem, 4, sol)
    scale = float(np.max(np.abs(sol.u(np.linspace(sol.zeros[0], element.t_3p, 2001)))))
    # on the first ramp f differs from u; on the plateau f = u solves the equation
    for t in (0.5 * (sol.zeros[0] + sol.zeros[1]), 0.5 * (element.bump.tp + element.bump.t2p)):
        fd = oracle.finite_difference_residual_oracle(element.f, sol.problem.warp, 2, 1.0, t)
        assert abs(fd - float(weyl.residual(sol, element.bump, t))) <= 1e-5 * scale


def test_residual_oracle_on_sine():
    fd = oracle.finite_difference_residual_oracle(np.sin, constant_warp(0.0), 1, 1.0, 1.0)
    # roundoff floor of a step-1e-5 second difference is about 1e-6
    assert abs(fd) <= 1e-5


def test_residual_oracle_refuses_edge(bounded_exp):
    with pytest.raises(InsufficientData):
        oracle.finite_difference_residual_oracle(np.sin, bounded_exp, 2, 1.0, 1.0 + 1e-5, support=(1.0, 5.0))


# -- spectrum filling --------------------------------------------------------


def test_filling_hook():
    rep = oracle.spectrum_filling_check(constant_warp(0.0), 1, 0.0, [1.0], [10.0, 40.0, 160.0])
    exact = []
    for T in rep.T_list:
        k = round(T / math.pi)
        exact.append(min(abs((j * math.pi / T) ** 2 - 1.0) for j in (k - 1, k, k + 1)))
    assert rep.decreasing
    assert np.allclose([d[0] for d in rep.distances], exact, rtol=0, atol=1e-4)


def test_filling_bounded_exp(bounded_exp):
    rep = oracle.spectrum_filling_check(bounded_exp, 2, 1.0, [0.5, 1.0, 5.0], [20.0, 80.0])
    assert rep.max_gap_distance[1] < rep.max_gap_distance[0]


def test_filling_at_zero_is_first_eigenvalue(bounded_exp):
    rep = oracle.spectrum_filling_check(bounded_exp, 2, 1.0, [0.0], [20.0])
    assert rep.distances[0][0] == pytest.approx(dirichlet_lambda1(bounded_exp, 2, 1.0, 20.0).lambda_T, rel=1e-4)
