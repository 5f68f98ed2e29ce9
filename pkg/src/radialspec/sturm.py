"""Weighted Sturm-Liouville equation ``(v u')' + lambda v u = 0`` with ``v = r^(n-1)``.

Solutions are integrated in Pruefer variables

    u = rho sin(theta),    v u' = rho cos(theta),
    theta' = cos(theta)^2 / v + lambda v sin(theta)^2,
    (log rho)' = (1/v - lambda v) sin(theta) cos(theta),

so that zeros of ``u`` are the crossings ``theta = k pi`` of a strictly
increasing phase.  The module also carries the oscillation, comparison and
energy checks used by the Weyl construction.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from .errors import (
    HorizonTooShort,
    HypothesisViolation,
    InsufficientData,
    IntegrationFailure,
    PreconditionViolation,
    WrongBranch,
)
from .quadrature import cumulative_gauss, partition, piecewise_quad, spike_nodes

SL_RTOL = 1e-12
SL_ATOL = 1e-12
TIE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SLProblem:
    """``(v u')' + lam v u = 0`` on ``[t0, inf)`` with ``u(t0) = 0``, ``u'(t0) = slope``."""

    warp: object
    n: int
    lam: float
    t0: float
    slope: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise PreconditionViolation(f"lambda must be positive, got {self.lam}")
        hook = self.warp.source == "hook"
        if self.n < (1 if hook else 2):
            raise PreconditionViolation(f"dimension n={self.n} too small")
        if self.t0 < 0 or (self.t0 == 0 and not hook):
            raise PreconditionViolation(f"t0 must be positive, got {self.t0}")
        if not self.slope > 0:
            raise PreconditionViolation("initial slope must be positive")
        if not self.v(self.t0) > 0:
            raise PreconditionViolation(f"weight vanishes at t0={self.t0}")

    @cached_property
    def v(self):
        return self.warp.weight(self.n)

    def with_lambda(self, lam):
        return SLProblem(self.warp, self.n, lam, self.t0, self.slope)


def _rhs(problem):
    v = problem.v
    lam = problem.lam

    def rhs(t, y):
        w = v(t)
        s = math.sin(y[0])
        c = math.cos(y[0])
        return [c * c / w + lam * w * s * s, (1.0 / w - lam * w) * s * c]

    return rhs


@dataclass(frozen=True, eq=False)
class SLSolution:
    """Dense Pruefer solution with its ordered zeros ``t_0 < t_1 < ...``."""

    problem: SLProblem
    t_end: float
    dense: Callable
    nodes: np.ndarray
    zeros: np.ndarray
    du_at_zeros: np.ndarray
    rtol: float = SL_RTOL

    @cached_property
    def rho0(self):
        return self.problem.slope * self.problem.v(self.problem.t0)

    def _split(self, t):
        t = np.asarray(t, dtype=float)
        if t.size and (t.min() < self.problem.t0 - 1e-12 or t.max() > self.t_end + 1e-12):
            raise PreconditionViolation(f"t outside [{self.problem.t0}, {self.t_end}]")
        return self.dense.split(np.clip(t, self.problem.t0, self.t_end))

    def phase(self, t):
        """``(theta, log(rho/rho0))`` at ``t``."""
        base, inc = self._split(t)
        y = base + inc
        return y[0], y[1]

    def _polar(self, t):
        # sin/cos of base + increment by the addition formula: theta grows
        # like k pi and rounding it first would cost ulp(theta) in u
        base, inc = self._split(t)
        sb, cb = np.sin(base[0]), np.cos(base[0])
        si, ci = np.sin(inc[0]), np.cos(inc[0])
        rho = self.rho0 * np.exp(base[1] + inc[1])
        return rho, sb * ci + cb * si, cb * ci - sb * si

    def u(self, t):
        rho, s, _ = self._polar(t)
        out = rho * s
        return float(out) if np.ndim(out) == 0 else out

    def du(self, t):
        rho, _, c = self._polar(t)
        out = rho * c / self.problem.v(t)
        return float(out) if np.ndim(out) == 0 else out

    def u_du(self, t):
        rho, s, c = self._polar(t)
        return rho * s, rho * c / self.problem.v(t)

    def samples(self, count=2001):
        t = np.linspace(self.problem.t0, self.t_end, count)
        u, du = self.u_du(t)
        return t, u, du

    @property
    def zero_count(self):
        return len(self.zeros) - 1


class PhaseInterpolant:
    """DOP853 dense output evaluated as ``(step start value, increment)``.

    Equivalent to :class:`scipy.integrate.OdeSolution` (same polynomial,
    same segment choice) but vectorized over segments and with the large
    step-start value kept apart from the small increment.
    """

    def __init__(self, ode_solution):
        pieces = ode_solution.interpolants
        self.ts = np.asarray(ode_solution.ts, dtype=float)
        self.t_old = np.array([q.t_old for q in pieces])
        self.h = np.array([q.h for q in pieces])
        self.y_old = np.array([q.y_old for q in pieces])
        self.F = np.array([q.F for q in pieces])

    def split(self, t):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t)
        seg = np.clip(np.searchsorted(self.ts, flat, side="left") - 1, 0, len(self.h) - 1)
        x = ((flat - self.t_old[seg]) / self.h[seg])[:, None]
        F = self.F[seg]
        inc = np.zeros((flat.size, F.shape[2]))
        for i in range(F.shape[1]):
            inc += F[:, -1 - i, :]
            inc *= x if i % 2 == 0 else 1.0 - x
        base = self.y_old[seg]
        if t.ndim == 0:
            return base[0], inc[0]
        return base.T, inc.T

    def __call__(self, t):
        base, inc = self.split(t)
        return base + inc


def _locate_zero(dense, rhs, k, a, b):
    target = k * math.pi
    t = brentq(lambda s: dense(s)[0] - target, a, b, xtol=1e-13, rtol=4 * np.finfo(float).eps)
    theta = dense(t)
    slope = rhs(t, theta)[0]
    polished = t - (theta[0] - target) / slope
    if a <= polished <= b:
        t = polished
    return t


def integrate(problem, t_end=None, zeros_wanted=None, rtol=SL_RTOL, atol=SL_ATOL):
    """Integrate ``problem`` to ``t_end`` or until ``zeros_wanted`` zeros past ``t0``.

    With both given, :class:`HorizonTooShort` is raised when ``t_end``
    comes first.
    """
    if t_end is None and zeros_wanted is None:
        raise PreconditionViolation("give t_end or zeros_wanted")
    t0 = problem.t0
    warp = problem.warp
    if t_end is None:
        guess = t0 + 10.0 * (zeros_wanted + 1) * math.pi / math.sqrt(problem.lam)
        t_stop = min(warp.horizon, guess)
    else:
        if t_end <= t0:
            raise PreconditionViolation(f"t_end={t_end} must exceed t0={t0}")
        t_stop = float(t_end)
        if t_stop > warp.horizon:
            raise PreconditionViolation(f"t_end={t_end} beyond the warp horizon {warp.horizon}")
    rhs = _rhs(problem)
    events = None
    if zeros_wanted is not None:
        target = zeros_wanted * math.pi

        def last_zero(t, y):
            return y[0] - target

        last_zero.terminal = True
        last_zero.direction = 1.0
        events = last_zero
    # steps of a fraction of the local wavelength keep dense-output increments small
    max_step = 0.5 / math.sqrt(problem.lam)
    sol = solve_ivp(
        rhs, (t0, t_stop), [0.0, 0.0], method="DOP853", rtol=rtol, atol=atol,
        dense_output=True, events=events, max_step=max_step,
    )
    if sol.status == -1:
        raise IntegrationFailure(
            f"Pruefer integration stopped at t={sol.t[-1]:.6g}: {sol.message}", partial=float(sol.t[-1])
        )
    dense = PhaseInterpolant(sol.sol)
    t_last = float(sol.t[-1])
    theta_nodes = sol.y[0]
    count = int(math.floor(theta_nodes[-1] / math.pi + 1e-12))
    if zeros_wanted is not None:
        count = min(count, zeros_wanted)
    zeros = [t0]
    for k in range(1, count + 1):
        j = int(np.searchsorted(theta_nodes, k * math.pi))
        a = float(sol.t[max(j - 1, 0)])
        b = float(sol.t[min(j, len(sol.t) - 1)])
        if sol.status == 1 and k == zeros_wanted:
            zeros.append(float(sol.t_events[0][0]))
            continue
        zeros.append(_locate_zero(dense, rhs, k, a, b))
    zeros = np.asarray(zeros)
    if zeros_wanted is not None and count < zeros_wanted:
        raise HorizonTooShort(
            f"found {count} of {zeros_wanted} zeros before t={t_last:.6g}", zeros=zeros
        )
    rho0 = problem.slope * problem.v(t0)
    theta_z, logrho_z = dense(zeros)
    signs = np.where(np.arange(len(zeros)) % 2 == 0, 1.0, -1.0)
    du = rho0 * np.exp(logrho_z) * signs / np.asarray([problem.v(float(z)) for z in zeros])
    du[0] = problem.slope
    return SLSolution(problem, t_last, dense, sol.t, zeros, du, rtol)


# -- oscillation ---------------------------------------------------------


@dataclass(frozen=True)
class OscillationReport:
    is_oscillatory_certified: bool
    integral: float
    integral_growth: float
    exponent: float
    constant: float
    pinned: Optional[bool]
    horizon: float


def _weight_integral(problem, grid):
    warp = problem.warp
    a, b = grid[0], grid[-1]
    # r rises steeply across each slope peak; fixed Gauss pieces need the spike refinement
    nodes = partition(a, b, grid, spike_nodes(warp.breakpoints_in(a, b), a, b))
    cum = cumulative_gauss(problem.v, nodes)
    return np.interp(grid, nodes, cum)


def first_time_above_half(warp, t0, t_limit=None):
    """First ``t >= t0`` with ``r(t) > R/2`` (the start of the pinned tail)."""
    half = 0.5 * warp.R
    if warp.r_of_t(t0) > half:
        return float(t0)
    hi = t0 + 1.0
    limit = t_limit if t_limit is not None else min(warp.horizon, 1e6)
    while warp.r_of_t(hi) <= half:
        hi = t0 + 2.0 * (hi - t0)
        if hi > limit:
            raise InsufficientData("r never exceeds R/2 within the horizon")
    return brentq(lambda t: warp.r_of_t(t) - half, t0, hi, xtol=1e-12)


def oscillation_check(problem, horizon, samples=129):
    """Sample the hypotheses of the oscillation criterion up to ``horizon``.

    ``integral`` is the weight integral from ``t0``; ``integral_growth`` its
    mean slope over the second half of the range; ``exponent`` and
    ``constant`` fit ``C t^a`` to the integral on that half.  On a bounded
    end, ``pinned`` records whether ``v`` lies in ``((R/2)^(n-1), R^(n-1)]``
    past the first time ``r > R/2``.
    """
    t0 = problem.t0
    grid = np.linspace(t0, horizon, samples)
    cum = _weight_integral(problem, grid)
    half = samples // 2
    growth = (cum[-1] - cum[half]) / (grid[-1] - grid[half])
    tail_t, tail_i = grid[half:], cum[half:]
    ok = (tail_t > 0) & (tail_i > 0)
    a, logc = np.polyfit(np.log(tail_t[ok]), np.log(tail_i[ok]), 1)
    pinned = None
    warp = problem.warp
    # with n = 1 the weight is identically 1 and the pinning interval is empty
    if warp.bounded and problem.n > 1:
        start = first_time_above_half(warp, t0, t_limit=horizon)
        tail = np.linspace(start, horizon, samples)
        v = np.asarray(problem.v(tail), dtype=float) + 0.0 * tail
        k = problem.n - 1
        lo, hi = (0.5 * warp.R) ** k, warp.R**k
        pinned = bool(np.all(v[1:] > lo) and np.all(v <= hi))
    certified = bool(growth > 0 and np.isfinite(a) and a > 0 and (pinned is not False))
    return OscillationReport(
        certified, float(cum[-1]), float(growth), float(a), float(math.exp(logc)), pinned, float(horizon)
    )


# -- zero gaps -----------------------------------------------------------


@dataclass(frozen=True)
class ZeroGapReport:
    min_gap: float
    bound: float
    passes: bool
    gaps: np.ndarray = field(repr=False)
    tail_start: float = 0.0


def zero_gap_check(sol, tail_start=None):
    """Gaps between tail zeros against ``pi / sqrt(2^(n-1) lambda)``."""
    problem = sol.problem
    warp = problem.warp
    if not warp.bounded:
        raise WrongBranch("zero-gap bound needs a bounded end")
    if tail_start is None:
        tail_start = first_time_above_half(warp, problem.t0, t_limit=sol.t_end)
    tail = sol.zeros[sol.zeros >= tail_start]
    if len(tail) < 2:
        raise InsufficientData(f"{len(tail)} zeros past t={tail_start:.6g}; need at least 2")
    gaps = np.diff(tail)
    bound = math.pi / math.sqrt(2.0 ** (problem.n - 1) * problem.lam)
    return ZeroGapReport(float(gaps.min()), bound, bool(np.all(gaps > bound - 1e-10)), gaps, float(tail_start))


# -- comparison envelopes ------------------------------------------------


@dataclass(frozen=True, eq=False)
class Envelope:
    """Comparison functions around one arch ``(t_k, t_{k+1})`` of ``u``."""

    k: int
    t_k: float
    t_next: float
    t_tilde: float
    lower: Callable
    upper: Callable
    lower_slope: Callable
    inner: Callable


def comparison_envelope(sol, k, nodes=1024):
    """Build the lower envelope ``v_k`` and upper envelope ``w_k`` for arch ``k``.

    Both are sines of the reparametrized time ``I_k(t) = int_{t_k}^t ds / v``,
    evaluated from a cumulative Gauss table with Hermite interpolation.
    ``t_tilde`` is the first zero of ``v_k`` after ``t_k``.
    """
    problem = sol.problem
    warp = problem.warp
    if not warp.bounded:
        raise WrongBranch("envelopes need a bounded end")
    if k + 1 >= len(sol.zeros):
        raise InsufficientData(f"arch {k} needs zero {k + 1}; only {sol.zero_count} found")
    lam = problem.lam
    v = problem.v
    t_k, t_next = float(sol.zeros[k]), float(sol.zeros[k + 1])
    span = t_next - t_k
    hi = min(t_next + 0.25 * span, warp.horizon)
    grid = partition(t_k, hi, np.linspace(t_k, hi, nodes), spike_nodes(warp.breakpoints_in(t_k, hi), t_k, hi))

    def recip(t):
        return 1.0 / np.asarray(v(t), dtype=float)

    cum = cumulative_gauss(recip, grid)
    inner = CubicHermiteSpline(grid, cum, recip(grid))
    big = warp.R ** (problem.n - 1)
    vk = float(v(t_k))
    du_k = float(sol.du_at_zeros[k])
    sq = math.sqrt(lam)
    a_lower = vk * du_k / (big * sq)
    a_upper = du_k / sq

    def lower(t):
        return a_lower * np.sin(sq * big * inner(t))

    def lower_slope(t):
        return vk * du_k / np.asarray(v(t), dtype=float) * np.cos(sq * big * inner(t))

    def upper(t):
        return a_upper * np.sin(sq * vk * inner(t))

    target = math.pi / (sq * big)
    if inner(hi) < target:
        raise IntegrationFailure("lower envelope has no zero within the arch", partial=float(inner(hi)))
    t_tilde = brentq(lambda t: float(inner(t)) - target, t_k, hi, xtol=1e-13)
    return Envelope(k, t_k, t_next, float(t_tilde), lower, upper, lower_slope, inner)


@dataclass(frozen=True)
class EnvelopeReport:
    k: int
    lower_ok: bool
    upper_ok: bool
    lower_margin: float
    upper_margin: float
    amplitude: float
    t_tilde: float


def envelope_check(sol, k, samples=1000, slack=1e-8):
    """Sample ``|v_k| <= |u|`` on ``(t_k, t~_k)`` and ``|u| <= |w_k|`` on ``(t_k, t_{k+1})``.

    Margins are the worst signed differences divided by the arch amplitude
    (negative means a violation beyond ``slack``).
    """
    env = comparison_envelope(sol, k)
    t_low = np.linspace(env.t_k, env.t_tilde, samples + 2)[1:-1]
    t_up = np.linspace(env.t_k, env.t_next, samples + 2)[1:-1]
    u_up = np.abs(sol.u(t_up))
    amp = float(u_up.max())
    low = (np.abs(sol.u(t_low)) - np.abs(env.lower(t_low))) / amp
    up = (np.abs(env.upper(t_up)) - u_up) / amp
    return EnvelopeReport(
        k,
        bool(low.min() >= -slack),
        bool(up.min() >= -slack),
        float(low.min()),
        float(up.min()),
        amp,
        env.t_tilde,
    )


# -- Sturm comparison ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class Oscillator:
    """A solution of ``(p x')' + q x = 0`` with its zero list on ``[a, b]``."""

    p: Callable
    q: Callable
    u: Callable
    du: Callable
    zeros: np.ndarray
    a: float
    b: float


def oscillator(sol):
    """View an :class:`SLSolution` as an :class:`Oscillator` (``p = v``, ``q = lam v``)."""
    v = sol.problem.v
    lam = sol.problem.lam
    return Oscillator(
        p=v,
        q=lambda t: lam * np.asarray(v(t), dtype=float),
        u=sol.u,
        du=sol.du,
        zeros=np.asarray(sol.zeros),
        a=sol.problem.t0,
        b=sol.t_end,
    )


def _check_comparison_hypotheses(x, y, grid):
    p, p1 = np.asarray(x.p(grid), float) + 0 * grid, np.asarray(y.p(grid), float) + 0 * grid
    q, q1 = np.asarray(x.q(grid), float) + 0 * grid, np.asarray(y.q(grid), float) + 0 * grid
    scale = np.maximum(np.abs(p), 1.0)
    bad = np.nonzero((p1 <= 0) | (p - p1 < -1e-12 * scale))[0]
    if bad.size:
        raise HypothesisViolation(f"p >= p1 > 0 fails at t={grid[bad[0]]:.6g}", witness=float(grid[bad[0]]))
    bad = np.nonzero(q1 - q < -1e-12 * np.maximum(np.abs(q), 1.0))[0]
    if bad.size:
        raise HypothesisViolation(f"q1 >= q fails at t={grid[bad[0]]:.6g}", witness=float(grid[bad[0]]))


@dataclass(frozen=True)
class InterleaveReport:
    interleaved: bool
    proportional: bool
    pairs_checked: int
    witness: Optional[tuple]


def sturm_interleave(x, y, samples=2000):
    """Check that ``y`` vanishes between consecutive zeros of ``x``.

    ``x`` solves the equation with the larger ``p`` and smaller ``q``.
    When the Wronskian ``x y' - x' y`` is numerically zero throughout the
    two are proportional and the conclusion holds trivially.
    """
    lo, hi = max(x.a, y.a), min(x.b, y.b)
    if not hi > lo:
        raise PreconditionViolation("the two solutions share no interval")
    grid = np.linspace(lo, hi, samples)
    _check_comparison_hypotheses(x, y, grid)
    xv, xd = np.asarray(x.u(grid), float), np.asarray(x.du(grid), float)
    yv, yd = np.asarray(y.u(grid), float), np.asarray(y.du(grid), float)
    wr = xv * yd - xd * yv
    scale = np.abs(xv).max() * np.abs(yd).max() + np.abs(xd).max() * np.abs(yv).max()
    if np.abs(wr).max() <= 1e-9 * scale:
        return InterleaveReport(True, True, 0, None)
    xz = x.zeros[(x.zeros >= lo - TIE_TOL) & (x.zeros <= hi + TIE_TOL)]
    yz = np.asarray(y.zeros)
    pairs = 0
    for left, right in zip(xz[:-1], xz[1:]):
        pairs += 1
        inside = (yz >= left - TIE_TOL) & (yz <= right + TIE_TOL)
        if not np.any(inside):
            return InterleaveReport(False, False, pairs, (float(left), float(right)))
    return InterleaveReport(True, False, pairs, None)


@dataclass(frozen=True)
class RatioReport:
    lhs: float
    rhs: float
    holds: bool


def derivative_ratio_compare(x, y, c, samples=1000):
    """Compare ``p x'/x`` with ``p1 y'/y`` at ``c`` when both have equally many zeros on ``(a, c)``."""
    a = float(x.zeros[0])
    if not a < c <= min(x.b, y.b):
        raise PreconditionViolation(f"c={c} must lie in ({a}, {min(x.b, y.b)}]")
    _check_comparison_hypotheses(x, y, np.linspace(max(a, y.a), c, samples))
    nx = int(np.sum((x.zeros > a + TIE_TOL) & (x.zeros < c)))
    ny = int(np.sum((np.asarray(y.zeros) > a + TIE_TOL) & (np.asarray(y.zeros) < c)))
    if nx != ny:
        raise PreconditionViolation(f"x has {nx} zeros and y has {ny} zeros on (a, c)")
    xc, yc = float(x.u(c)), float(y.u(c))
    if xc == 0.0 or yc == 0.0:
        raise PreconditionViolation(f"x or y vanishes at c={c}")
    lhs = float(x.p(c)) * float(x.du(c)) / xc
    rhs = float(y.p(c)) * float(y.du(c)) / yc
    scale = max(1.0, abs(lhs), abs(rhs))
    return RatioReport(lhs, rhs, bool(lhs >= rhs - 1e-9 * scale))


# -- derivative bounds and energy ----------------------------------------


@dataclass(frozen=True)
class DuBoundsReport:
    lower_ok: bool
    upper_ok: bool
    lower_margin: float
    upper_margin: float
    lower_bound: float
    upper_bound: float


def du_bounds_check(sol, rel_slack=1e-10):
    """Lower and upper bounds on ``u'(t_k)^2`` in terms of ``u'(t_0)^2``.

    Lower: ``(r(t_0)/R)^(2(n-1)) u'(t_0)^2`` for ``k >= 1``.  Upper:
    ``R^(4(n-1)) / (r(t_0) r(t_1))^(2(n-1)) u'(t_0)^2``.  Margins are
    relative (``ratio - 1``), negative beyond ``rel_slack`` means failure.
    """
    problem = sol.problem
    warp = problem.warp
    if not warp.bounded:
        raise WrongBranch("derivative bounds need a bounded end")
    if len(sol.zeros) < 3:
        raise InsufficientData("need at least two zeros past t0")
    m = problem.n - 1
    R = warp.R
    r0 = float(warp.r_of_t(sol.zeros[0]))
    r1 = float(warp.r_of_t(sol.zeros[1]))
    d0 = sol.du_at_zeros[0] ** 2
    dk = sol.du_at_zeros[1:] ** 2
    lower = (r0 / R) ** (2 * m) * d0
    upper = R ** (4 * m) / (r0 ** (2 * m) * r1 ** (2 * m)) * d0
    lower_margin = float(np.min(dk / lower - 1.0))
    upper_margin = float(np.min(upper / dk - 1.0))
    return DuBoundsReport(
        lower_margin >= -rel_slack, upper_margin >= -rel_slack, lower_margin, upper_margin,
        float(lower), float(upper),
    )


@dataclass(frozen=True)
class EnergyReport:
    k: int
    lhs: float
    rhs: float
    rel_err: float


def energy_identity_check(sol, k):
    """Both sides of ``v(t_k)^2 u'(t_k)^2 - v(t_0)^2 u'(t_0)^2 = 2 lam (n-1) int r^(2n-3) r' u^2``.

    ``rel_err`` is normalised by ``max(|lhs|, |rhs|, v(t_0)^2 u'(t_0)^2)``,
    the energy scale of the arch, so the constant-weight case (both sides
    zero) is well defined.
    """
    problem = sol.problem
    if not 0 <= k < len(sol.zeros):
        raise InsufficientData(f"zero {k} not available ({sol.zero_count} found)")
    warp = problem.warp
    m = problem.n - 1
    v = problem.v
    zeros = sol.zeros
    lhs = (float(v(zeros[k])) * sol.du_at_zeros[k]) ** 2 - (float(v(zeros[0])) * sol.du_at_zeros[0]) ** 2
    if k == 0:
        return EnergyReport(0, 0.0, 0.0, 0.0)
    lam = problem.lam
    r, dr = warp.r_of_t, warp.dr_of_t

    def integrand(t):
        return r(t) ** (2 * m - 1) * dr(t) * sol.u(t) ** 2

    if m == 0:
        rhs = 0.0
    else:
        a, b = zeros[0], zeros[k]
        nodes = partition(a, b, zeros[: k + 1], spike_nodes(warp.breakpoints_in(a, b), a, b))
        rhs = 2.0 * lam * m * piecewise_quad(integrand, nodes)[0]
    scale = max(abs(lhs), abs(rhs), (float(v(zeros[0])) * sol.du_at_zeros[0]) ** 2)
    return EnergyReport(k, float(lhs), float(rhs), float(abs(lhs - rhs) / scale))
