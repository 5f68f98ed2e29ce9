"""Test-only reference computations that share no code with the package.

The frozen values in ``frozen.py`` were produced by these functions (and
by mpmath, for the profile integrals) independently of the package;
slow tests re-run them to show the freezing is reproducible.
"""

import math


def rk4_zeros(v, lam, t0, count, h):
    """Zeros of ``(v u')' + lam v u = 0``, ``u(t0) = 0``, ``u'(t0) = 1``.

    Classical fixed-step RK4 on ``(u, w = v u')``; each sign change is
    refined by bisection on the cubic Hermite interpolant built from
    ``u`` and ``u' = w / v`` at the step ends.
    """

    def rhs(t, u, w):
        vt = v(t)
        return w / vt, -lam * vt * u

    t, u, w = t0, 0.0, v(t0)
    zeros = [t0]
    while len(zeros) <= count:
        k1u, k1w = rhs(t, u, w)
        k2u, k2w = rhs(t + h / 2, u + h / 2 * k1u, w + h / 2 * k1w)
        k3u, k3w = rhs(t + h / 2, u + h / 2 * k2u, w + h / 2 * k2w)
        k4u, k4w = rhs(t + h, u + h * k3u, w + h * k3w)
        un = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
        wn = w + h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w)
        tn = t + h
        if u != 0.0 and un * u < 0.0:
            zeros.append(_hermite_root(t, tn, u, un, k1u, wn / v(tn)))
        t, u, w = tn, un, wn
    return zeros


def _hermite_root(a, b, ua, ub, da, db):
    h = b - a

    def p(s):
        x = (s - a) / h
        h00 = 2 * x**3 - 3 * x**2 + 1
        h10 = x**3 - 2 * x**2 + x
        h01 = -2 * x**3 + 3 * x**2
        h11 = x**3 - x**2
        return h00 * ua + h10 * h * da + h01 * ub + h11 * h * db

    lo, hi = a, b
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if p(mid) * ua > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def richardson_zeros(v, lam, t0, count, h):
    """Zeros at steps ``h`` and ``h/2`` combined by Richardson (order 4).

    Returns ``(extrapolated, max |z_h - z_{h/2}|)``.
    """
    coarse = rk4_zeros(v, lam, t0, count, h)
    fine = rk4_zeros(v, lam, t0, count, h / 2)
    extrapolated = [f + (f - c) / 15.0 for c, f in zip(coarse, fine)]
    return extrapolated, max(abs(f - c) for c, f in zip(coarse, fine))


def bounded_exp_weight(n):
    return lambda t: (2.0 - math.exp(-t)) ** (n - 1)


def simpson_halving(g, a, b, tol):
    """Composite Simpson doubled until two successive values agree to ``tol``."""
    m = 64
    prev = None
    while True:
        h = (b - a) / m
        total = g(a) + g(b)
        total += 4 * sum(g(a + (2 * i - 1) * h) for i in range(1, m // 2 + 1))
        total += 2 * sum(g(a + 2 * i * h) for i in range(1, m // 2))
        value = total * h / 3
        if prev is not None and abs(value - prev) < tol:
            return value
        prev = value
        m *= 2
