"""Weyl sequences ``f_p = u h_p`` for the radial Laplacian on a bounded end.

``u`` solves the radial eigen-equation with ``u(t_0) = 0`` and ``h_p`` is a
smooth bump that ramps up over ``[t_0, t_p]``, equals one on
``[t_p, t_2p]`` and ramps down over ``[t_2p, t_3p]``.  The ratio
``||Delta f_p + lam f_p|| / ||f_p||`` (weighted by ``r^(n-1) dt``; the
sphere volume cancels) decays like ``1/p``.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import (
    HorizonTooShort,
    InsufficientData,
    IntegrationFailure,
    PreconditionViolation,
    RadialSpecError,
    WrongBranch,
)
from .quadrature import partition, piecewise_quad, spike_nodes
from .sturm import SLSolution, integrate

# 1 / int_0^1 exp(-1/(x(1-x))) dx, and the sups of phi and |phi'|
MOLLIFIER_K = 142.25037577709587
MOLLIFIER_SUP = 2.6054065145200277
MOLLIFIER_SUP_DERIV = 11.035565148994598

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


def _bump_kernel(x):
    x = np.asarray(x, dtype=float)
    inside = (x > 0.0) & (x < 1.0)
    xi = np.where(inside, x, 0.5)
    return np.where(inside, np.exp(-1.0 / (xi * (1.0 - xi))), 0.0)


class Mollifier:
    """``phi(x) = K exp(-1/(x(1-x)))`` on ``(0, 1)``, zero elsewhere.

    The antiderivative is a table of exact cumulative integrals on a uniform
    grid plus a local Gauss-Legendre correction from the nearest node, so
    it is accurate to a few ulps everywhere.
    """

    def __init__(self, table_size=1024):
        self.K = MOLLIFIER_K
        self.sup_phi = MOLLIFIER_SUP
        self.sup_dphi = MOLLIFIER_SUP_DERIV
        self._grid = np.linspace(0.0, 1.0, table_size + 1)
        pieces = np.array([self._gauss(a, b) for a, b in zip(self._grid[:-1], self._grid[1:])])
        table = np.concatenate([[0.0], np.cumsum(pieces)])
        # the pinned K leaves the total an ulp or so off 1; renormalize so h is exactly 1 on the plateau
        self._table_scale = table[-1]
        self._table = table / self._table_scale

    def phi(self, x):
        return self.K * _bump_kernel(x)

    def dphi(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > 0.0) & (x < 1.0)
        xi = np.where(inside, x, 0.5)
        return np.where(inside, self.phi(xi) * (1.0 - 2.0 * xi) / (xi * (1.0 - xi)) ** 2, 0.0)

    def _gauss(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        x = mid[..., None] + half[..., None] * _GL_X
        return half * (self.phi(x) @ _GL_W)

    def antiderivative(self, x):
        """``Phi(x) = int_0^x phi``: 0 for ``x <= 0``, 1 for ``x >= 1``."""
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        m = len(self._grid) - 1
        i = np.clip(np.rint(x * m).astype(int), 0, m)
        out = self._table[i] + self._gauss(self._grid[i], x) / self._table_scale
        out = np.where(x >= 1.0, 1.0, np.clip(out, 0.0, 1.0))
        return float(out) if out.ndim == 0 else out

    def mass(self):
        """``int_0^1 phi`` by adaptive quadrature (should be 1)."""
        return quad(lambda x: float(self.phi(x)), 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, points=[0.5])[0]


@dataclass(frozen=True, eq=False)
class Bump:
    """``h_p`` with ramps ``[t_0, t_p]`` (up) and ``[t_2p, t_3p]`` (down)."""

    t0: float
    tp: float
    t2p: float
    t3p: float
    mollifier: Mollifier

    @property
    def ramps(self):
        return (self.t0, self.tp), (self.t2p, self.t3p)

    def _scaled(self, t):
        t = np.asarray(t, dtype=float)
        a1 = self.tp - self.t0
        a2 = self.t3p - self.t2p
        return (t - self.t0) / a1, (t - self.t2p) / a2, a1, a2

    def h(self, t):
        x1, x2, _, _ = self._scaled(t)
        m = self.mollifier
        return m.antiderivative(x1) - m.antiderivative(x2)

    def dh(self, t):
        x1, x2, a1, a2 = self._scaled(t)
        m = self.mollifier
        out = m.phi(x1) / a1 - m.phi(x2) / a2
        return float(out) if out.ndim == 0 else out

    def d2h(self, t):
        x1, x2, a1, a2 = self._scaled(t)
        m = self.mollifier
        out = m.dphi(x1) / a1**2 - m.dphi(x2) / a2**2
        return float(out) if out.ndim == 0 else out

    @property
    def dh_bound(self):
        return self.mollifier.sup_phi * max(1.0 / (self.tp - self.t0), 1.0 / (self.t3p - self.t2p))

    @property
    def d2h_bound(self):
        return self.mollifier.sup_dphi * max(1.0 / (self.tp - self.t0) ** 2, 1.0 / (self.t3p - self.t2p) ** 2)


@lru_cache(maxsize=None)
def default_mollifier():
    return Mollifier()


def build_bump(zeros, p, mollifier=None):
    """Bump on the zeros ``t_0, t_p, t_2p, t_3p`` of ``zeros``."""
    if p < 1:
        raise PreconditionViolation(f"p must be a positive integer, got {p}")
    if len(zeros) < 3 * p + 1:
        raise InsufficientData(f"p={p} needs {3 * p + 1} zeros, have {len(zeros)}")
    mollifier = default_mollifier() if mollifier is None else mollifier
    z = [float(zeros[j]) for j in (0, p, 2 * p, 3 * p)]
    return Bump(*z, mollifier)


def residual(sol, bump, t):
    """``Delta f + lam f`` for ``f = u h``: ``2 u' h' + u h'' + (n-1)(r'/r) h' u``."""
    problem = sol.problem
    u, du = sol.u_du(t)
    dh = bump.dh(t)
    out = 2.0 * du * dh + u * bump.d2h(t)
    if problem.n > 1:
        warp = problem.warp
        out = out + (problem.n - 1) * warp.dr_of_t(t) / warp.r_of_t(t) * dh * u
    return float(out) if np.ndim(out) == 0 else out


def weighted_norm(g, a, b, warp, n, nodes=(), spikes=False):
    """``(int_a^b g^2 r^(n-1) dt)^(1/2)`` split at ``nodes``.

    With ``spikes`` the partition is also refined around the slope peaks
    of the warp, which integrands containing ``r'`` need.
    """
    if not b > a:
        raise PreconditionViolation(f"need a < b, got [{a}, {b}]")
    v = warp.weight(n)
    peaks = spike_nodes(warp.breakpoints_in(a, b), a, b) if spikes else warp.breakpoints_in(a, b)
    pts = partition(a, b, nodes, peaks)
    value, _ = piecewise_quad(lambda t: g(t) ** 2 * v(t), pts)
    return math.sqrt(max(value, 0.0))


@dataclass(frozen=True, eq=False)
class WeylElement:
    p: int
    sol: SLSolution = field(repr=False)
    bump: Bump = field(repr=False)
    norm_f: float
    norm_residual: float

    @property
    def quotient(self):
        return self.norm_residual / self.norm_f

    @property
    def t_3p(self):
        return self.bump.t3p

    def f(self, t):
        return self.sol.u(t) * self.bump.h(t)


def _require_bounded(problem):
    if not problem.warp.bounded:
        raise WrongBranch(f"{problem.warp.name} has an unbounded end; use the Kumura check")


def _solution_for(problem, p, sol):
    if sol is None or len(sol.zeros) < 3 * p + 1:
        sol = integrate(problem, zeros_wanted=3 * p)
    return sol


def weyl_quotient(problem, p, sol=None, mollifier=None):
    """Build ``f_p = u h_p`` and its residual quotient.

    The residual vanishes on the plateau ``[t_p, t_2p]`` so its norm is
    integrated over the two ramps only.
    """
    _require_bounded(problem)
    sol = _solution_for(problem, p, sol)
    bump = build_bump(sol.zeros, p, mollifier)
    zeros = sol.zeros[: 3 * p + 1]
    warp, n = problem.warp, problem.n
    norm_f = weighted_norm(lambda t: sol.u(t) * bump.h(t), bump.t0, bump.t3p, warp, n, zeros)
    parts = [
        weighted_norm(lambda t: residual(sol, bump, t), a, b, warp, n, zeros, spikes=True) ** 2
        for a, b in bump.ramps
    ]
    return WeylElement(p, sol, bump, norm_f, math.sqrt(sum(parts)))


@dataclass(frozen=True)
class DecayFit:
    lam: float
    beta: float
    C: float
    p_list: tuple
    quotients: tuple
    t_3p: tuple

    @property
    def passes(self):
        return self.beta >= 0.9

    @property
    def p_times_q_spread(self):
        pq = np.asarray(self.p_list) * np.asarray(self.quotients)
        return float(pq.max() / pq.min())


class DecayFitFailure(IntegrationFailure):
    """A quotient evaluation failed part way through a decay fit."""

    def __init__(self, message, elements):
        super().__init__(message)
        self.elements = elements


def decay_fit(problem, p_list, sol=None, mollifier=None):
    """Fit ``log q = log C - beta log p`` over ``p_list``."""
    p_list = [int(p) for p in p_list]
    if len(p_list) < 4 or any(b <= a for a, b in zip(p_list, p_list[1:])):
        raise PreconditionViolation("p_list needs at least 4 strictly increasing entries")
    _require_bounded(problem)
    try:
        sol = _solution_for(problem, p_list[-1], sol)
    except HorizonTooShort:
        # keep the zeros the horizon allows; the fit fails at the first p beyond them
        sol = integrate(problem, t_end=problem.warp.horizon)
    elements = []
    for p in p_list:
        try:
            elements.append(weyl_quotient(problem, p, sol, mollifier))
        except RadialSpecError as exc:
            raise DecayFitFailure(f"decay fit stopped at p={p}: {exc}", elements) from exc
    q = np.array([e.quotient for e in elements])
    slope, intercept = np.polyfit(np.log(p_list), np.log(q), 1)
    return DecayFit(
        float(problem.lam), float(-slope), float(math.exp(intercept)), tuple(p_list),
        tuple(float(x) for x in q), tuple(e.t_3p for e in elements),
    )


@dataclass(frozen=True)
class MassRatio:
    p: int
    full_mass: float
    plateau_mass: float

    @property
    def ratio(self):
        return self.full_mass / self.plateau_mass


def mass_ratio(problem, p, sol=None):
    """``int_{t_0}^{t_3p} u^2 v`` over ``int_{t_p}^{t_2p} u^2 v``."""
    _require_bounded(problem)
    sol = _solution_for(problem, p, sol)
    z = sol.zeros
    warp, n = problem.warp, problem.n
    full = weighted_norm(sol.u, z[0], z[3 * p], warp, n, z[: 3 * p + 1]) ** 2
    plateau = weighted_norm(sol.u, z[p], z[2 * p], warp, n, z[p : 2 * p + 1]) ** 2
    return MassRatio(p, full, plateau)


@dataclass(frozen=True)
class ParsevalReport:
    p: int
    kinetic: float
    potential: float
    rel_err: float


def parseval_identity_check(problem, p, sol=None):
    """``int u'^2 v`` against ``lam int u^2 v`` over ``[t_0, t_3p]`` (both ends are zeros)."""
    sol = _solution_for(problem, p, sol)
    z = sol.zeros
    warp, n = problem.warp, problem.n
    nodes = z[: 3 * p + 1]
    kinetic = weighted_norm(sol.du, z[0], z[3 * p], warp, n, nodes) ** 2
    potential = problem.lam * weighted_norm(sol.u, z[0], z[3 * p], warp, n, nodes) ** 2
    return ParsevalReport(p, kinetic, potential, abs(kinetic - potential) / max(kinetic, potential))
