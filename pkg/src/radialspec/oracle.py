"""Independent backends used to cross-check the shooting and quadrature code.

* A second-order finite-difference discretization of ``-(v u')'/v`` with
  Dirichlet ends, symmetrized to a Jacobi matrix and solved by Sturm-count
  bisection.
* Adaptive Simpson quadrature.
* A finite-difference evaluation of ``Delta f + lam f`` for radial ``f``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, IntegrationFailure, PreconditionViolation

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class DiscretizedOperator:
    """Symmetric tridiagonal ``(d, e)`` on the interior nodes ``t_1..t_{N-1}``."""

    t: np.ndarray
    h: float
    v: np.ndarray
    d: np.ndarray
    e: np.ndarray

    @property
    def size(self):
        return len(self.d)

    @property
    def gershgorin(self):
        pad = np.concatenate([[0.0], np.abs(self.e), [0.0]])
        radius = pad[:-1] + pad[1:]
        return float(np.min(self.d - radius)), float(np.max(self.d + radius))

    @property
    def resolution(self):
        """Absolute accuracy floor of Sturm counts in double precision."""
        return 8.0 * _EPS * max(abs(b) for b in self.gershgorin)

    def dense(self):
        return np.diag(self.d) + np.diag(self.e, 1) + np.diag(self.e, -1)


def discretize(warp, n, t0, T, N):
    """Flux-form discretization on ``t_i = t0 + i h``, ``i = 0..N``, conjugated by ``sqrt(v_i)``."""
    if N < 16:
        raise PreconditionViolation(f"N={N} too small (need at least 16)")
    if not T > t0:
        raise PreconditionViolation(f"T={T} must exceed t0={t0}")
    weight = warp.weight(n)
    t = t0 + (T - t0) * np.arange(N + 1) / N
    t[-1] = T
    h = (T - t0) / N

    def w(x):
        return np.asarray(weight(x), dtype=float) + 0.0 * x

    v = w(t)
    half = w(t[:-1] + 0.5 * h)
    inner = v[1:-1]
    d = (half[1:] + half[:-1]) / (h * h * inner)
    e = -half[1:-1] / (h * h * np.sqrt(inner[:-1] * inner[1:]))
    return DiscretizedOperator(t, h, v, d, e)


def sturm_count(op, shifts):
    """Number of eigenvalues strictly below each shift (LDL^T inertia)."""
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    e2 = op.e**2
    pivmin = _EPS**2 * max(1.0, float(np.max(e2)) if e2.size else 1.0)
    q = op.d[0] - shifts
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(int)
    for i in range(1, op.size):
        q = op.d[i] - shifts - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def eigenvalues_by_index(op, indices, tol=1e-12, width=64):
    """Eigenvalues with the given 0-based ``indices`` by multisection on Sturm counts.

    Intervals shrink until ``tol`` or the count resolution
    :attr:`DiscretizedOperator.resolution`, whichever is larger.
    """
    indices = np.asarray(indices, dtype=int)
    if indices.size and (indices.min() < 0 or indices.max() >= op.size):
        raise PreconditionViolation(f"indices must lie in [0, {op.size})")
    lo_g, hi_g = op.gershgorin
    lo = np.full(indices.shape, lo_g - 1.0)
    hi = np.full(indices.shape, hi_g + 1.0)
    floor = max(tol, op.resolution)
    while True:
        active = np.nonzero(hi - lo > floor)[0]
        if not active.size:
            break
        m = max(1, width // active.size)
        frac = np.arange(1, m + 1) / (m + 1)
        probes = lo[active, None] + (hi - lo)[active, None] * frac[None, :]
        counts = sturm_count(op, probes.ravel()).reshape(probes.shape)
        below = counts <= indices[active, None]
        # last probe with count <= index is the new lower end, first with count > index the upper
        new_lo = np.where(below, probes, -np.inf).max(axis=1)
        new_hi = np.where(~below, probes, np.inf).min(axis=1)
        lo_a = np.maximum(lo[active], new_lo)
        hi_a = np.minimum(hi[active], new_hi)
        stalled = (lo_a == lo[active]) & (hi_a == hi[active])
        lo[active], hi[active] = lo_a, hi_a
        if stalled.all():
            break
    return 0.5 * (lo + hi)


def smallest_eigenvalues(op, k, tol=1e-12):
    if not 0 < k < op.size + 1:
        raise PreconditionViolation(f"k={k} must be in [1, {op.size}]")
    return eigenvalues_by_index(op, np.arange(k), tol)


def nearest_eigenvalue(op, x):
    """Eigenvalue of ``op`` nearest to ``x``."""
    c = int(sturm_count(op, [x])[0])
    idx = [i for i in (c - 1, c) if 0 <= i < op.size]
    vals = eigenvalues_by_index(op, idx)
    return float(vals[np.argmin(np.abs(vals - x))])


def quadrature_oracle(g, a, b, tol=1e-10, max_depth=60):
    """Adaptive Simpson with Richardson correction; local test ``|S2 - S1| <= 15 tol``."""
    if not b > a:
        raise PreconditionViolation(f"need a < b, got [{a}, {b}]")
    fa, fm, fb = g(a), g(0.5 * (a + b)), g(b)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = g(lm), g(rm)
        left = (m - a) / 6.0 * (fa + 4 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol or b - a <= 4 * _EPS * max(abs(a), abs(b)):
            total += left + right + delta / 15.0
            continue
        if depth >= max_depth:
            raise IntegrationFailure(
                f"adaptive Simpson exceeded depth {max_depth} near [{a:.6g}, {b:.6g}]", partial=total
            )
        stack.append((m, b, fm, frm, fb, right, 0.5 * tol, depth + 1))
        stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth + 1))
    return total


_STENCIL = np.linspace(-2.0, 2.0, 7)


def finite_difference_residual_oracle(f, warp, n, lam, t, step=1e-5, support=None):
    """``f'' + (n-1)(r'/r) f' + lam f`` from a quintic fit to ``f`` on ``t + [-2, 2] step``.

    ``support`` is the interval where samples of ``f`` are available; the
    stencil must fit inside it.
    """
    if support is not None and not (support[0] + 2 * step <= t <= support[1] - 2 * step):
        raise InsufficientData(f"t={t} closer than two steps to the sample range {support}")
    x = t + step * _STENCIL
    y = np.asarray(f(x), dtype=float) + 0.0 * x
    c = np.polynomial.polynomial.polyfit(_STENCIL, y, 5)
    f0, df, d2f = c[0], c[1] / step, 2.0 * c[2] / step**2
    out = d2f + lam * f0
    if n > 1:
        out += (n - 1) * warp.dr_of_t(t) / warp.r_of_t(t) * df
    return float(out)


@dataclass(frozen=True)
class FillingReport:
    T_list: tuple
    lambda_grid: tuple
    distances: tuple
    max_gap_distance: tuple
    decreasing: bool


def spectrum_filling_check(warp, n, t0, lambda_grid, T_list, N=10_000):
    """Distance from each ``lam`` to the nearest Dirichlet eigenvalue on ``[t0, T]``.

    ``decreasing`` requires every distance to drop strictly from each ``T``
    to the next.
    """
    distances = []
    for T in T_list:
        op = discretize(warp, n, t0, T, N)
        distances.append(tuple(abs(nearest_eigenvalue(op, lam) - lam) for lam in lambda_grid))
    arr = np.array(distances)
    decreasing = bool(np.all(np.diff(arr, axis=0) < 0.0))
    return FillingReport(
        tuple(float(T) for T in T_list), tuple(float(x) for x in lambda_grid), tuple(distances),
        tuple(float(x) for x in arr.max(axis=1)), decreasing,
    )


def fd_lambda1(warp, n, t0, T, N=10_000):
    """Smallest eigenvalue of the discretized operator on ``[t0, T]``."""
    return float(smallest_eigenvalues(discretize(warp, n, t0, T, N), 1)[0])


def richardson_ratio(warp, n, t0, T, N=16):
    """``(l_N - l_2N) / (l_2N - l_4N)``, close to 4 for a second-order scheme."""
    l1, l2, l4 = (fd_lambda1(warp, n, t0, T, m) for m in (N, 2 * N, 4 * N))
    return (l1 - l2) / (l2 - l4)
