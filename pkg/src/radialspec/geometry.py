"""Radial graph profiles and the warping functions of their model manifolds.

A complete radial graph ``x -> f(|x|)`` over a ball of radius ``R_D`` (or
all of R^n) is isometric to ``[0, inf) x S^{n-1}`` with metric
``dt^2 + r(t)^2 g_S``, where ``t`` is arclength along the profile curve and
``r(t)`` is its inverse.  This module builds ``r(t)`` either from a profile
(by integrating ``dr/dt = (1 + f'(r)^2)^{-1/2}``) or directly from a
user-supplied warp, and checks the hypotheses the rest of the package
relies on: ``0 < r' <= c``, monotonicity and the bounded/unbounded end.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    HypothesisViolation,
    IncompleteSurface,
    IntegrationFailure,
    PreconditionViolation,
    SingularBasePoint,
    WrongBranch,
)

ODE_RTOL = 1e-10
QUAD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Height function ``f`` of a radial graph and its derivative ``df``."""

    f: Callable
    df: Callable
    domain_radius: float = math.inf
    name: str = "profile"
    singular_radii: tuple = ()

    def __post_init__(self):
        if not self.domain_radius > 0:
            raise PreconditionViolation(f"domain radius must be positive, got {self.domain_radius}")

    @property
    def bounded(self):
        return math.isfinite(self.domain_radius)


@dataclass(frozen=True, eq=False)
class WarpingFunction:
    """Warping function ``r(t)`` of a model manifold.

    ``R`` is the supremum of ``r`` (``inf`` for an unbounded end), ``cap``
    the declared bound on ``r'``, ``horizon`` the largest ``t`` at which
    ``r_of_t`` can be evaluated and ``breakpoints`` the locations where
    ``dr_of_t`` has sharp peaks (quadratures split there).
    """

    r_of_t: Callable
    dr_of_t: Callable
    R: float
    cap: float
    t0: float
    source: str
    name: str = "warp"
    horizon: float = math.inf
    breakpoints: np.ndarray = field(default_factory=lambda: np.empty(0))
    profile: Optional[RadialProfile] = None

    @property
    def bounded(self):
        return math.isfinite(self.R)

    @property
    def end(self):
        return f"Bounded({self.R:g})" if self.bounded else "Unbounded"

    def weight(self, n):
        """Return ``v(t) = r(t)^(n-1)``."""
        r = self.r_of_t
        if n == 1:
            return lambda t: 1.0 + 0.0 * np.asarray(t, dtype=float) if np.ndim(t) else 1.0
        if n == 2:
            return r
        k = n - 1
        return lambda t: r(t) ** k

    def breakpoints_in(self, a, b):
        bp = self.breakpoints
        return bp[(bp > a) & (bp < b)]


def _profile_sample_radii(profile, count, rng):
    hi = profile.domain_radius * (1 - 1e-2) if profile.bounded else 10.0
    radii = rng.uniform(0.0, hi, size=4 * count)
    if profile.singular_radii:
        dist = np.min(np.abs(radii[:, None] - np.asarray(profile.singular_radii)[None, :]), axis=1)
        radii = radii[dist > 1e-2 * max(1.0, hi)]
    return radii[:count]


def _richardson_derivative(f, x, h):
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


def validate_profile(profile, samples=64, rng=None, rtol=1e-6):
    """Check ``df`` against a centered difference of ``f`` at random radii.

    Sampling avoids a neighbourhood of each declared singular radius and
    the last percent of a bounded domain.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    for r in _profile_sample_radii(profile, samples, rng):
        h = 1e-4 * max(1.0, abs(r))
        if profile.bounded:
            h *= min(1.0, 10.0 * (profile.domain_radius - r) / profile.domain_radius)
        r = float(max(r, 2 * h))
        fd = _richardson_derivative(profile.f, r, h)
        d = profile.df(r)
        if not (math.isfinite(d) and math.isfinite(fd)):
            raise HypothesisViolation(f"{profile.name}: non-finite derivative at r={r}", witness=r)
        if abs(d - fd) > rtol * max(abs(d), 1.0):
            raise HypothesisViolation(
                f"{profile.name}: df disagrees with finite differences of f at r={r} ({d} vs {fd})",
                witness=r,
            )


def _speed(profile):
    df = profile.df

    def integrand(x):
        d = df(x)
        return math.sqrt(1.0 + d * d)

    return integrand


def _arclength_nodes(profile, r, per_decade=64):
    """Partition of [0, r]: geometric in the gap ``R_D - x`` on a ball."""
    if profile.bounded:
        big = profile.domain_radius
        gap = big - r
        decades = math.log10(big / gap)
        k = np.linspace(0.0, decades, max(2, int(math.ceil(decades * per_decade)) + 1))
        nodes = big - big * 10.0 ** (-k)
        nodes[0], nodes[-1] = 0.0, r
        return nodes
    return np.linspace(0.0, r, max(2, int(math.ceil(r)) + 1))


def arclength(profile, r, tol=QUAD_TOL):
    """Arclength ``t(r)`` of the profile curve from the apex to radius ``r``.

    The interval is split into many short pieces (geometrically refined
    towards a finite domain boundary, where profiles such as
    ``cos(tan(pi r / 2))`` oscillate without bound) and each piece is
    integrated adaptively.
    """
    if not 0.0 <= r < profile.domain_radius:
        raise PreconditionViolation(f"radius {r} outside [0, {profile.domain_radius})")
    if r == 0.0:
        return 0.0
    integrand = _speed(profile)
    nodes = _arclength_nodes(profile, r)
    piece_tol = tol / (len(nodes) - 1)
    total = 0.0
    error = 0.0
    for a, b in zip(nodes[:-1], nodes[1:]):
        if b <= a:
            continue
        value, err, info, *rest = quad(
            integrand, a, b, epsabs=piece_tol, epsrel=1e-13, limit=2000, full_output=1
        )
        total += value
        error += err
        if rest and info["last"] >= 2000:
            raise IntegrationFailure(
                f"arclength quadrature did not converge on [{a}, {b}]", partial=total, achieved=error
            )
    if error > max(tol, 1e-13 * total) * 10:
        raise IntegrationFailure(
            f"arclength error estimate {error:.3g} exceeds tolerance {tol:.3g}",
            partial=total,
            achieved=error,
        )
    return total


def _coarse_arclength(profile, a, b, rtol=1e-3, max_points=2**22):
    """Composite Simpson in log-gap coordinates, refined until stable.

    Only used by the completeness probe, which needs magnitudes over five
    decades of gap where an adaptive rule would need millions of pieces.
    """
    big = profile.domain_radius
    ua, ub = -math.log(big - a), -math.log(big - b)
    m = 4096
    previous = None
    while True:
        u = np.linspace(ua, ub, m + 1)
        gap = np.exp(-u)
        x = big - gap
        with np.errstate(all="ignore"):
            y = np.sqrt(1.0 + np.asarray(profile.df(x), dtype=float) ** 2) * gap
        h = (ub - ua) / m
        value = h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())
        if previous is not None and abs(value - previous) <= rtol * abs(value):
            return value
        if 2 * m > max_points:
            return value
        previous = value
        m *= 2


def completeness_probe(profile, decades=range(2, 7)):
    """Arclength to ``R_D (1 - 10^-k)`` for each ``k``; returns (k list, t list).

    Raises :class:`IncompleteSurface` when the increments between
    consecutive decades shrink faster than halving, i.e. the integral looks
    convergent at the boundary.
    """
    if not profile.bounded:
        return [], []
    big = profile.domain_radius
    ks = list(decades)
    radii = [big * (1 - 10.0 ** (-k)) for k in ks]
    values = [arclength(profile, radii[0], tol=1e-8)]
    for a, b in zip(radii[:-1], radii[1:]):
        values.append(values[-1] + _coarse_arclength(profile, a, b))
    inc = np.diff(values)
    if np.any(inc[1:] < 0.5 * inc[:-1]):
        raise IncompleteSurface(
            f"{profile.name}: arclength increments {inc.tolist()} shrink towards the boundary; "
            "the graph does not look complete"
        )
    return ks, values


def classify_end(r_of_t, horizon=2.0**10, t_start=1.0):
    """Classify ``r`` as bounded (returns its extrapolated limit) or unbounded (``inf``).

    Samples ``r`` at ``t = 2^k`` and looks at the ratio of successive
    increments; a ratio settling below 0.9 means geometric (or faster)
    convergence and the limit is extrapolated by summing the tail.
    """
    ts = [t_start * 2.0**k for k in range(64) if t_start * 2.0**k <= horizon]
    rs = np.array([float(r_of_t(t)) for t in ts])
    inc = np.diff(rs)
    if len(inc) < 3:
        raise PreconditionViolation("horizon too short to classify the end")
    if inc[-1] <= 0.0:
        return float(rs[-1])
    ratios = inc[1:] / np.where(inc[:-1] > 0, inc[:-1], np.nan)
    tail = ratios[-3:]
    if np.all(np.isfinite(tail)) and np.all(tail < 0.9):
        q = float(tail[-1])
        return float(rs[-1] + inc[-1] * q / (1.0 - q))
    if np.any(~np.isfinite(tail)):
        return float(rs[-1])
    return math.inf


def _ode_warp(profile, t_max, rtol):
    g_df = profile.df
    if profile.bounded:
        big = profile.domain_radius

        def rhs(t, y):
            d = g_df(big - y[0])
            return [-1.0 / math.sqrt(1.0 + d * d)]

        y0, atol = [big], 1e-16 * big
    else:

        def rhs(t, y):
            d = g_df(y[0])
            return [1.0 / math.sqrt(1.0 + d * d)]

        y0, atol = [0.0], 1e-12
    sol = solve_ivp(rhs, (0.0, t_max), y0, method="DOP853", rtol=rtol, atol=atol, dense_output=True)
    if sol.status != 0:
        raise IntegrationFailure(
            f"{profile.name}: warp integration stopped at t={sol.t[-1]:.6g}: {sol.message}",
            partial=float(sol.t[-1]),
        )
    return sol


def build_warping(profile, t_max=1024.0, t0=1.0, rtol=ODE_RTOL, check_complete=True, validate=True):
    """Integrate the arclength reparametrization of a radial graph.

    Returns a :class:`WarpingFunction` with ``source='profile'`` and
    ``cap=1``.  On a ball the state variable is the gap ``R_D - r`` so that
    relative tolerance keeps resolving ``r`` as it creeps towards the
    boundary.
    """
    if validate:
        validate_profile(profile)
    if check_complete:
        completeness_probe(profile)
    sol = _ode_warp(profile, t_max, rtol)
    dense = sol.sol
    bounded = profile.bounded
    big = profile.domain_radius
    df = profile.df

    def r_of_t(t):
        if np.ndim(t) == 0:
            t = float(t)
            if t < 0.0 or t > t_max:
                raise PreconditionViolation(f"t={t} outside the warp horizon [0, {t_max}]")
            y = float(dense(t)[0])
            return big - y if bounded else y
        t = np.asarray(t, dtype=float)
        if t.size and (t.min() < 0.0 or t.max() > t_max):
            raise PreconditionViolation(f"t outside the warp horizon [0, {t_max}]")
        y = dense(t)[0]
        return big - y if bounded else y

    def dr_of_t(t):
        d = df(r_of_t(t))
        return 1.0 / np.sqrt(1.0 + d * d) if np.ndim(d) else 1.0 / math.sqrt(1.0 + d * d)

    breakpoints = _slope_peaks(sol.t, r_of_t, df)
    R = big if bounded else classify_end(r_of_t, horizon=t_max)
    w = WarpingFunction(
        r_of_t=r_of_t,
        dr_of_t=dr_of_t,
        R=R,
        cap=1.0,
        t0=t0,
        source="profile",
        name=profile.name,
        horizon=t_max,
        breakpoints=breakpoints,
        profile=profile,
    )
    if validate:
        validate_warp(w, np.linspace(0.0, min(t_max, 64.0), 257)[1:])
    return w


def _slope_peaks(nodes, r_of_t, df):
    """Locate the ``t`` where ``f'(r(t))`` changes sign (peaks of ``r'``)."""
    d = np.asarray(df(r_of_t(nodes)), dtype=float)
    idx = np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]
    peaks = []
    for i in idx:
        a, b = float(nodes[i]), float(nodes[i + 1])
        peaks.append(brentq(lambda t: df(r_of_t(t)), a, b, xtol=1e-14, rtol=1e-15))
    return np.asarray(peaks, dtype=float)


def direct_warping(
    r_of_t,
    dr_of_t,
    cap=1.0,
    t0=1.0,
    R=None,
    name="direct",
    validation_horizon=30.0,
    samples=200,
):
    """Wrap an analytic warp ``r(t)`` with derivative ``dr(t)``.

    ``R=None`` classifies the end by extrapolation; pass ``math.inf`` or a
    number to declare it.  The hypotheses ``0 < r' <= cap`` and strict
    monotonicity are sampled on a log-spaced grid over
    ``[0, validation_horizon]``.
    """
    grid = np.concatenate([[0.0], np.logspace(-3, math.log10(validation_horizon), samples)])
    if R is None:
        R = classify_end(r_of_t)
    w = WarpingFunction(
        r_of_t=r_of_t, dr_of_t=dr_of_t, R=float(R), cap=float(cap), t0=float(t0),
        source="direct", name=name,
    )
    validate_warp(w, grid)
    return w


def validate_warp(w, grid):
    """Sample the warp hypotheses on ``grid``; raise :class:`HypothesisViolation`."""
    grid = np.asarray(grid, dtype=float)
    dr = np.asarray([float(w.dr_of_t(float(t))) for t in grid])
    r = np.asarray([float(w.r_of_t(float(t))) for t in grid])
    for t, d in zip(grid, dr):
        if not d > 0.0:
            raise HypothesisViolation(f"{w.name}: r'({t:g}) = {d:g} is not positive", witness=float(t))
        if d > w.cap * (1 + 1e-12):
            raise HypothesisViolation(
                f"{w.name}: r'({t:g}) = {d:g} exceeds the cap {w.cap:g}", witness=float(t)
            )
    # an isolated zero of r' falls between samples; refine each sampled local minimum
    for i in np.nonzero((dr[1:-1] <= dr[:-2]) & (dr[1:-1] <= dr[2:]))[0] + 1:
        best = minimize_scalar(lambda t: float(w.dr_of_t(t)), bounds=(grid[i - 1], grid[i + 1]),
                               method="bounded", options={"xatol": 1e-10})
        if not best.fun > 0.0:
            raise HypothesisViolation(f"{w.name}: r'({best.x:g}) = {best.fun:g} is not positive",
                                      witness=float(best.x))
    bad = np.nonzero(np.diff(r) <= 0.0)[0]
    if bad.size:
        raise HypothesisViolation(f"{w.name}: r not strictly increasing near t={grid[bad[0] + 1]:g}",
                                  witness=float(grid[bad[0] + 1]))
    if w.bounded:
        over = np.nonzero(r >= w.R)[0]
        if over.size:
            raise HypothesisViolation(f"{w.name}: r({grid[over[0]]:g}) >= R = {w.R:g}",
                                      witness=float(grid[over[0]]))
        gap = w.R - r
        bad = np.nonzero(np.diff(gap) >= 0.0)[0]
        if bad.size:
            raise HypothesisViolation(f"{w.name}: R - r stops decreasing near t={grid[bad[0] + 1]:g}",
                                      witness=float(grid[bad[0] + 1]))


def constant_warp(t0=0.0):
    """Test hook with ``r = 1`` and ``r' = 0``, so ``v = r^(n-1) = 1``.

    This is outside the ``r' > 0`` hypothesis on purpose: it turns every
    equation into ``u'' + lambda u = 0`` with closed-form answers.
    """
    return WarpingFunction(
        r_of_t=lambda t: 1.0 + 0.0 * np.asarray(t, dtype=float) if np.ndim(t) else 1.0,
        dr_of_t=lambda t: 0.0 * np.asarray(t, dtype=float) if np.ndim(t) else 0.0,
        R=1.0,
        cap=1.0,
        t0=t0,
        source="hook",
        name="constant",
    )


def laplacian_of_t(w, n, t):
    """Laplacian of the distance function ``t``: ``(n - 1) r'(t) / r(t)``."""
    r = w.r_of_t(t)
    if np.any(np.asarray(r) == 0.0):
        raise SingularBasePoint(f"r({t}) = 0: the distance function is singular at the apex")
    return (n - 1) * w.dr_of_t(t) / r


@dataclass(frozen=True)
class KumuraReport:
    passes: bool
    sup_tail: float
    t_at_sup: float
    t_max: float


def kumura_check(w, n, t_max=1000.0, eps=0.01, samples=2001):
    """Sup of ``|Laplacian(t)|`` over ``[t_max/2, t_max]`` against ``eps``."""
    if w.bounded:
        raise WrongBranch(f"{w.name} has a bounded end (R={w.R:g}); use the Weyl construction")
    grid = np.linspace(t_max / 2.0, t_max, samples)
    values = np.abs(np.asarray(laplacian_of_t(w, n, grid), dtype=float))
    i = int(np.argmax(values))
    return KumuraReport(bool(values[i] < eps), float(values[i]), float(grid[i]), float(t_max))
