import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from radialspec.errors import IntegrationFailure, PreconditionViolation
from radialspec.oracle import quadrature_oracle
from radialspec.quadrature import cumulative_gauss, partition, piecewise_quad, spike_nodes


def test_partition_merges_and_clips():
    nodes = partition(0.0, 1.0, [0.5, 0.25, 2.0, -1.0], np.array([0.5, 0.75]))
    assert nodes.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_piecewise_quad_smooth():
    value, err = piecewise_quad(np.sin, [0.0, math.pi])
    assert value == pytest.approx(2.0, abs=1e-14)
    assert err <= 1e-11 * 2.0  # within the requested relative budget


def test_piecewise_quad_polynomial():
    assert piecewise_quad(lambda x: x**2, [0.0, 1.0])[0] == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_piecewise_quad_resolves_narrow_spike_with_nodes():
    width = 1e-9
    spike = lambda t: 1.0 / (1.0 + ((t - 0.3) / width) ** 2)  # noqa: E731
    nodes = partition(0.0, 1.0, spike_nodes([0.3], 0.0, 1.0))
    expected = width * (math.atan(0.7 / width) + math.atan(0.3 / width))
    assert piecewise_quad(spike, nodes, epsabs=1e-20)[0] == pytest.approx(expected, rel=1e-9)


def test_piecewise_quad_reports_failure():
    with pytest.raises(IntegrationFailure) as info:
        piecewise_quad(lambda t: np.sign(t - 1 / 3) * np.abs(t - 1 / 3) ** -0.9, [0.0, 1.0], max_rounds=8)
    assert info.value.partial is not None


def test_cumulative_gauss_matches_antiderivative():
    nodes = np.linspace(0.0, 3.0, 31)
    assert np.allclose(cumulative_gauss(np.exp, nodes), np.expm1(nodes), rtol=0, atol=1e-13)


def test_spike_nodes_symmetric_and_clipped():
    pts = spike_nodes([0.5, 2.0], 0.0, 1.0, levels=5, ratio=4.0)
    assert 0.5 in pts
    left, right = np.sort(0.5 - pts[pts < 0.5]), np.sort(pts[pts > 0.5] - 0.5)
    assert np.allclose(left, right)
    # the offset 1 falls outside [0, 1]
    assert np.allclose(right, np.sort(4.0 ** -np.arange(1, 5)))


@pytest.mark.parametrize("fn,a,b,exact", [(np.sin, 0.0, math.pi, 2.0), (lambda x: x * x, 0.0, 1.0, 1 / 3)])
def test_simpson_oracle(fn, a, b, exact):
    assert quadrature_oracle(fn, a, b, tol=1e-13) == pytest.approx(exact, abs=1e-12)


def test_simpson_oracle_depth_failure():
    with pytest.raises(IntegrationFailure) as info:
        quadrature_oracle(lambda t: 1.0 / math.sqrt(abs(t - math.pi / 4)) if t != math.pi / 4 else 0.0,
                          0.0, 1.0, tol=1e-15, max_depth=10)
    assert info.value.partial is not None
    with pytest.raises(PreconditionViolation):
        quadrature_oracle(math.sin, 1.0, 0.0)


@given(st.floats(-3, 3), st.floats(0.1, 5), st.integers(0, 6))
def test_two_routes_agree_on_polynomials(a, length, degree):
    b = a + length
    fn = lambda x: (x - 0.3) ** degree  # noqa: E731
    exact = ((b - 0.3) ** (degree + 1) - (a - 0.3) ** (degree + 1)) / (degree + 1)
    scale = max(1.0, abs(exact))
    assert piecewise_quad(fn, [a, b])[0] == pytest.approx(exact, abs=1e-12 * scale)
    assert quadrature_oracle(fn, a, b, tol=1e-12) == pytest.approx(exact, abs=1e-9 * scale)
