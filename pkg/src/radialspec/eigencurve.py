"""First Dirichlet eigenvalue ``lambda_T`` on ``[t0, T]`` by phase shooting.

With ``u(t0) = 0`` the Pruefer phase ``theta(T; lam)`` is strictly
increasing in ``lam``; ``lambda_T`` is the unique ``lam`` with
``theta(T; lam) = pi``.  Substituting ``s = int_{t0}^t dt / v`` turns the
phase equation into ``dtheta/ds = cos^2 + lam v^2 sin^2``, so with
``alpha = pi / int_{t0}^T dt / v`` and ``v`` increasing,

    alpha^2 / v(T)^2 <= lambda_T <= alpha^2 / v(t0)^2.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import OutOfRange, PreconditionViolation, SolverFailure
from .quadrature import partition, piecewise_quad, spike_nodes
from .sturm import SL_ATOL, SL_RTOL, SLProblem, _rhs

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class EigencurvePoint:
    T: float
    lambda_T: float
    alpha_T: float
    residual: float
    interior_zeros: int
    v_t0: float
    v_T: float

    @property
    def bound(self):
        """Upper bound ``alpha^2 / r(t0)^(2(n-1))``."""
        return self.alpha_T**2 / self.v_t0**2

    @property
    def bound_at_T(self):
        """``alpha^2 / r(T)^(2(n-1))``: a lower bound for ``lambda_T``, logged for comparison."""
        return self.alpha_T**2 / self.v_T**2


def _phase_at(warp, n, t0, T, lam, dense=False):
    problem = SLProblem(warp, n, lam, t0)
    sol = solve_ivp(
        _rhs(problem), (t0, T), [0.0, 0.0], method="DOP853", rtol=SL_RTOL, atol=SL_ATOL,
        dense_output=dense,
    )
    if sol.status != 0:
        raise SolverFailure(f"phase integration failed at lambda={lam:.6g}: {sol.message}", bracket=(lam, lam))
    return sol


def inverse_weight_integral(warp, n, t0, T):
    """``int_{t0}^T ds / r(s)^(n-1)``."""
    v = warp.weight(n)
    nodes = partition(t0, T, np.linspace(t0, T, 9), spike_nodes(warp.breakpoints_in(t0, T), t0, T))
    return piecewise_quad(lambda t: 1.0 / (np.asarray(v(t), dtype=float) + 0.0 * t), nodes, epsrel=1e-13)[0]


def dirichlet_lambda1(warp, n, t0, T, max_expansions=60):
    """First Dirichlet eigenvalue on ``[t0, T]`` by bracketed root-finding on the phase."""
    if not T > t0:
        raise PreconditionViolation(f"T={T} must exceed t0={t0}")
    if T > warp.horizon:
        raise PreconditionViolation(f"T={T} beyond the warp horizon {warp.horizon}")
    v = warp.weight(n)
    v0, vT = float(v(t0)), float(v(T))
    alpha = math.pi / inverse_weight_integral(warp, n, t0, T)

    def miss(lam):
        return float(_phase_at(warp, n, t0, T, lam).y[0, -1]) - math.pi

    lo, hi = 0.5 * alpha**2 / vT**2, 2.0 * alpha**2 / v0**2
    f_lo, f_hi = miss(lo), miss(hi)
    for _ in range(max_expansions):
        if f_lo < 0.0 < f_hi:
            break
        if f_lo >= 0.0:
            lo *= 0.5
            f_lo = miss(lo)
        if f_hi <= 0.0:
            hi *= 2.0
            f_hi = miss(hi)
    else:
        raise SolverFailure(f"no sign change in [{lo:.6g}, {hi:.6g}]", bracket=(lo, hi))
    lam = brentq(miss, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
    sol = _phase_at(warp, n, t0, T, lam, dense=True)
    # the phase is increasing, so its last interior sample counts the interior zeros
    theta = sol.sol(np.linspace(t0, T, 513)[1:-1])[0]
    interior = int(math.floor(theta.max() / math.pi))
    return EigencurvePoint(float(T), float(lam), alpha, float(sol.y[0, -1] - math.pi), interior, v0, vT)


@dataclass(frozen=True)
class SweepReport:
    points: tuple
    strictly_decreasing: bool
    continuity_steps: tuple
    continuity_ok: bool


def eigencurve_sweep(warp, n, t0, T_list, refine_levels=4):
    """``lambda_T`` over ``T_list`` with a continuity probe at the first ``T``.

    The probe evaluates ``|lambda_{T+delta} - lambda_T|`` for
    ``delta = 2^-k`` and requires it to shrink monotonically.
    """
    T_list = [float(T) for T in T_list]
    if any(b <= a for a, b in zip(T_list, T_list[1:])):
        raise PreconditionViolation("T_list must be strictly increasing")
    points = [dirichlet_lambda1(warp, n, t0, T) for T in T_list]
    lams = np.array([p.lambda_T for p in points])
    decreasing = bool(np.all(np.diff(lams) < 0.0))
    base = points[0]
    steps = []
    for k in range(1, refine_levels + 1):
        delta = 2.0**-k * (base.T - t0)
        steps.append(abs(dirichlet_lambda1(warp, n, t0, base.T + delta).lambda_T - base.lambda_T))
    continuity_ok = bool(np.all(np.diff(steps) < 0.0))
    return SweepReport(tuple(points), decreasing, tuple(steps), continuity_ok)


@dataclass(frozen=True)
class AlphaBoundReport:
    T: float
    lambda_T: float
    alpha: float
    bound: float
    bound_at_T: float
    holds: bool
    margin: float


def alpha_bound_check(point):
    """``0 < lambda_T <= alpha^2 / r(t0)^(2(n-1))`` with slack; also logs the ``r(T)`` variant."""
    bound = point.bound
    holds = bool(point.lambda_T > 0.0 and point.lambda_T <= bound * (1 + BOUND_SLACK) + BOUND_SLACK)
    return AlphaBoundReport(point.T, point.lambda_T, point.alpha_T, bound, point.bound_at_T, holds,
                            float((bound - point.lambda_T) / bound))


@dataclass(frozen=True)
class LimitsReport:
    large_T: tuple
    lambda_large: tuple
    small_T: tuple
    lambda_small: tuple
    decreasing_to_zero: bool
    increasing_to_infinity: bool


def lambda_limits_check(warp, n, t0, k_max=6, eps_large=0.01, eps_small=1e-3):
    """``lambda_T`` at ``T = t0 + 2^k`` and ``T = t0 + 2^-k`` for ``k = 0..k_max``."""
    large = [t0 + 2.0**k for k in range(k_max + 1)]
    small = [t0 + 2.0**-k for k in range(k_max + 1)]
    lam_large = [dirichlet_lambda1(warp, n, t0, T).lambda_T for T in large]
    lam_small = [dirichlet_lambda1(warp, n, t0, T).lambda_T for T in small]
    down = bool(np.all(np.diff(lam_large) < 0) and lam_large[-1] < eps_large)
    up = bool(np.all(np.diff(lam_small) > 0) and lam_small[-1] > 1.0 / eps_small)
    return LimitsReport(tuple(large), tuple(lam_large), tuple(small), tuple(lam_small), down, up)


def solve_T_for_lambda(warp, n, t0, lam, rtol=1e-8, max_doublings=40):
    """Right endpoint ``T`` with ``lambda_T = lam`` (bracketing on the decreasing curve)."""
    if not lam > 0:
        raise PreconditionViolation(f"lambda must be positive, got {lam}")
    v0 = float(warp.weight(n)(t0))
    width = math.pi / math.sqrt(lam) * min(1.0, v0)
    horizon = warp.horizon

    def excess(T):
        return dirichlet_lambda1(warp, n, t0, T).lambda_T - lam

    width = min(width, 0.5 * (horizon - t0))
    lo = t0 + width
    while excess(lo) <= 0.0:
        width *= 0.5
        lo = t0 + width
        if width < 1e-12:
            raise OutOfRange(f"lambda={lam} too large to bracket")
    hi = lo
    for _ in range(max_doublings):
        hi = t0 + 2.0 * (hi - t0)
        if hi > horizon:
            raise OutOfRange(f"lambda={lam}: no T below the horizon {horizon} brackets it")
        if excess(hi) < 0.0:
            break
    else:
        raise OutOfRange(f"lambda={lam}: bracket not found")
    return brentq(excess, lo, hi, xtol=1e-14 * hi, rtol=4 * np.finfo(float).eps, maxiter=200)


def eigencurve_rows(points):
    """Rows ``T, lambda_T, alpha_T, bound, residual`` for CSV export."""
    return [(p.T, p.lambda_T, p.alpha_T, p.bound, p.residual) for p in points]
