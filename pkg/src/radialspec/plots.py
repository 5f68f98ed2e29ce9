"""Report figures.  Rendered off-screen with the Agg canvas, no pyplot state."""

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

STYLE = {
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
    "legend.frameon": False,
}

# PNG text chunks default to the matplotlib version; keep output stable
_METADATA = {"Software": None}


def _figure(ncols=1, width=4.2, height=3.2):
    import matplotlib as mpl

    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(width * ncols, height), layout="constrained")
        FigureCanvasAgg(fig)
        axes = fig.subplots(1, ncols, squeeze=False)[0]
    return fig, axes


def _save(fig, path):
    fig.savefig(path, dpi=120, metadata=_METADATA)
    return path


def decay_figure(path, title, fits):
    """``quotient`` against ``p`` (log-log) for each lambda, with a ``1/p`` guide."""
    fig, (ax,) = _figure()
    for fit in fits:
        p = np.asarray(fit["p_list"], dtype=float)
        q = np.asarray(fit["quotients"], dtype=float)
        ax.loglog(p, q, "o-", ms=3, label=f"λ={fit['lambda']:g}  β={fit['beta']:.3f}")
    if fits:
        p = np.asarray(fits[0]["p_list"], dtype=float)
        q0 = max(f["quotients"][0] for f in fits)
        ax.loglog(p, q0 * p[0] / p, "k--", lw=0.8, label="1/p")
    ax.set_xlabel("p")
    ax.set_ylabel("‖Δf_p + λf_p‖ / ‖f_p‖")
    ax.set_title(title)
    ax.legend()
    return _save(fig, path)


def eigencurve_figure(path, title, rows):
    """``lambda_T`` with its upper bound ``alpha^2 / v(t0)^2`` against ``T``."""
    fig, (ax,) = _figure()
    rows = np.asarray(rows, dtype=float)
    if rows.size:
        ax.loglog(rows[:, 0], rows[:, 1], "o-", ms=3, label="λ_T (shooting)")
        ax.loglog(rows[:, 0], rows[:, 3], "s--", ms=3, label="α²/v(t₀)²")
    ax.set_xlabel("T")
    ax.set_ylabel("first Dirichlet eigenvalue")
    ax.set_title(title)
    ax.legend()
    return _save(fig, path)


def solution_figure(path, title, t, u, zeros):
    """The solution ``u`` with its zeros marked."""
    fig, (ax,) = _figure(width=6.0)
    ax.plot(t, u, lw=0.8)
    ax.plot(zeros, np.zeros_like(zeros), "|", color="C3", ms=6)
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("t")
    ax.set_ylabel("u(t)")
    ax.set_title(title)
    return _save(fig, path)


def filling_figure(path, title, T_list, lambdas, distances):
    """Distance from each lambda to the nearest Dirichlet eigenvalue, per interval length."""
    fig, (ax,) = _figure()
    d = np.asarray(distances, dtype=float)
    for j, lam in enumerate(lambdas):
        ax.semilogy(T_list, d[:, j], "o-", ms=3, label=f"λ={lam:g}")
    ax.set_xlabel("T")
    ax.set_ylabel("distance to nearest eigenvalue")
    ax.set_title(title)
    ax.legend()
    return _save(fig, path)
