"""Experiment runner: config parsing, verification cells, report emission.

A run is a list of *cells*.  Each preset and dimension yields one
eigencurve cell and one cell per lambda; every cell returns its check
results and the table rows behind them.  Cells only exchange plain data,
so they can run in worker processes.
"""

import csv
import hashlib
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib.metadata import PackageNotFoundError, version
from typing import Optional

import numpy as np

from . import eigencurve as ec
from . import oracle, plots, sturm, weyl
from .errors import ConfigError, HypothesisViolation, RadialSpecError
from .geometry import kumura_check
from .presets import check_entry, load_catalog, warp_from_entry

SCHEMA_VERSION = 1

log = logging.getLogger(__name__)

TOLERANCES = {
    "zeros": 40,
    "zero_gap_slack": 1e-10,
    "envelope_k": [0, 5, 10, 20],
    "envelope_samples": 1000,
    "envelope_slack": 1e-8,
    "du_slack": 1e-10,
    "energy_k": [5, 10, 20],
    "energy_rel": 1e-6,
    "parseval_p": [4, 8],
    "parseval_rel": 1e-6,
    "beta_min": 0.9,
    "pq_spread_max": 3.0,
    "ratio_growth_max": 1.2,
    "oscillation_horizon": 100.0,
    "residual_p": 4,
    "residual_points": 100,
    "residual_rel": 1e-5,
    "alpha_slack": 1e-9,
    "roundtrip_rel": 1e-8,
    "limits_k": 6,
    "lambda_large_max": 0.01,
    "lambda_small_min": 1e3,
    "fd_N": 10_000,
    "oracle_rel": 1e-4,
    "filling_T": [20.0, 80.0],
    "filling_lambdas": [0.5, 1.0, 2.0, 5.0],
    "kumura_t_max": 1000.0,
    "kumura_eps": 0.01,
}

LAMBDA_CHECKS = (
    "oscillation", "zero_gap", "envelope", "du_bounds", "energy_identity",
    "weyl_decay", "mass_ratio", "parseval", "residual_oracle",
)
CURVE_CHECKS = (
    "eigencurve_monotone", "alpha_bound", "lambda_limits", "roundtrip",
    "oracle_agreement", "spectrum_filling",
)

PASS, FAIL, SKIP = "pass", "fail", "skip"


# -- configuration ---------------------------------------------------------


def _sorted_grid(data, key, kind=float, positive=True):
    values = data.get(key)
    if not isinstance(values, list) or not values:
        raise ConfigError(f"{key} must be a nonempty list")
    try:
        values = [kind(v) for v in values]
    except (TypeError, ValueError):
        raise ConfigError(f"{key} entries must be numbers") from None
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{key} must be strictly increasing")
    if positive and values[0] <= 0:
        raise ConfigError(f"{key} entries must be positive")
    return tuple(values)


@dataclass(frozen=True)
class ExperimentConfig:
    presets: tuple
    dimensions: tuple
    lambda_grid: tuple
    p_grid: tuple
    T_grid: tuple
    t0: Optional[float] = None
    seed: int = 0
    out: str = "results"
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))
    inline: tuple = ()
    config_hash: str = ""

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        if data.get("schema") != SCHEMA_VERSION:
            raise ConfigError(f"config schema must be {SCHEMA_VERSION}, got {data.get('schema')!r}")
        known = {"schema", "preset", "presets", "profile", "n", "t0", "lambda_grid", "p_grid",
                 "T_grid", "tolerances", "seed", "out"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        inline = []
        if "profile" in data:
            check_entry(data["profile"])
            inline.append(data["profile"])
        names = data.get("presets", [data["preset"]] if "preset" in data else [])
        if isinstance(names, str):
            names = [names]
        names = list(names) + [e["name"] for e in inline if e["name"] not in names]
        if not names:
            raise ConfigError("config names no preset and no inline profile")
        catalog = load_catalog()
        for name in names:
            if name not in catalog and name not in {e["name"] for e in inline}:
                raise ConfigError(f"unknown preset {name!r}; choose from {sorted(catalog)}")
        n = data.get("n", 2)
        dims = tuple(n) if isinstance(n, list) else (n,)
        if not dims or any(not isinstance(d, int) or isinstance(d, bool) or d < 2 for d in dims):
            raise ConfigError(f"n must be an integer >= 2 (or a list of them), got {n!r}")
        lambdas = _sorted_grid(data, "lambda_grid")
        p_grid = _sorted_grid(data, "p_grid", kind=int)
        t0 = data.get("t0")
        if t0 is not None and not (isinstance(t0, (int, float)) and t0 > 0):
            raise ConfigError(f"t0 must be positive, got {t0!r}")
        T_grid = _sorted_grid(data, "T_grid")
        if t0 is not None and T_grid[0] <= t0:
            raise ConfigError("T_grid entries must exceed t0")
        tolerances = dict(TOLERANCES)
        overrides = data.get("tolerances", {})
        if not isinstance(overrides, dict):
            raise ConfigError("tolerances must be an object")
        bad = set(overrides) - set(TOLERANCES)
        if bad:
            raise ConfigError(f"unknown tolerance keys {sorted(bad)}")
        tolerances.update(overrides)
        seed = data.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError(f"seed must be an integer, got {seed!r}")
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return cls(
            presets=tuple(names), dimensions=dims, lambda_grid=lambdas, p_grid=p_grid,
            T_grid=T_grid, t0=None if t0 is None else float(t0), seed=seed,
            out=str(data.get("out", "results")), tolerances=tolerances, inline=tuple(inline),
            config_hash=hashlib.sha256(canonical.encode()).hexdigest(),
        )

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)

    def entry(self, name):
        for e in self.inline:
            if e["name"] == name:
                return e
        return load_catalog()[name]


# -- results ---------------------------------------------------------------


@dataclass
class CheckResult:
    check: str
    preset: str
    n: int
    lam: Optional[float]
    status: str
    metrics: dict = field(default_factory=dict)
    witness: Optional[object] = None
    reason: str = ""
    seconds: float = 0.0


@dataclass
class CellOutput:
    key: tuple
    results: list
    tables: dict


@dataclass
class RunReport:
    config: ExperimentConfig
    results: list
    tables: dict
    provenance: dict
    stages: dict
    aborted: bool = False

    @property
    def passed(self):
        return all(r.status != FAIL for r in self.results) and not self.aborted

    def counts(self):
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for r in self.results:
            out[r.status] += 1
        return out


def _clean(value):
    """JSON-safe plain Python values."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


def _run_check(name, preset, n, lam, fn, results):
    start = time.perf_counter()
    try:
        passed, metrics, witness = fn()
        status, reason = (PASS if passed else FAIL), ""
    except RadialSpecError as exc:
        status, metrics, reason = FAIL, {}, f"{type(exc).__name__}: {exc}"
        witness = getattr(exc, "witness", None)
    except (ArithmeticError, ValueError) as exc:
        status, metrics, witness, reason = FAIL, {}, None, f"{type(exc).__name__}: {exc}"
    results.append(CheckResult(name, preset, n, lam, status, _clean(metrics), _clean(witness), reason,
                               time.perf_counter() - start))


def _skip(names, preset, n, lam, reason, results):
    for name in names:
        results.append(CheckResult(name, preset, n, lam, SKIP, reason=reason))


@lru_cache(maxsize=None)
def _warp(entry_json, t0):
    return warp_from_entry(json.loads(entry_json), t0=t0)


def _warp_for(entry, t0):
    return _warp(json.dumps(entry, sort_keys=True), t0)


# -- cells -----------------------------------------------------------------


def lambda_cell(entry, n, lam, t0, p_grid, tol, seed, cell_index):
    """All per-lambda checks of the bounded branch for one (preset, n, lambda)."""
    name = entry["name"]
    results, tables = [], {}
    warp = _warp_for(entry, t0)
    t0 = warp.t0
    if not warp.bounded:
        _skip(LAMBDA_CHECKS, name, n, lam, "unbounded end: covered by the Kumura check", results)
        return CellOutput((name, n, lam), results, tables)
    problem = sturm.SLProblem(warp, n, lam, t0)
    need = max(tol["zeros"], 3 * max(p_grid), 3 * max(tol["parseval_p"]), 3 * tol["residual_p"],
               max(tol["envelope_k"]) + 1, max(tol["energy_k"]))
    start = time.perf_counter()
    try:
        sol = sturm.integrate(problem, zeros_wanted=need)
    except RadialSpecError as exc:
        for check in LAMBDA_CHECKS:
            results.append(CheckResult(check, name, n, lam, FAIL, reason=f"integration: {exc}",
                                       witness=_clean(getattr(exc, "witness", None))))
        return CellOutput((name, n, lam), results, tables)
    integrate_seconds = time.perf_counter() - start
    k_max = tol["zeros"]
    head = sturm.SLSolution(problem, sol.t_end, sol.dense, sol.nodes, sol.zeros[: k_max + 1],
                            sol.du_at_zeros[: k_max + 1])

    t, u, du = sol.samples(2001)
    tables["solution"] = [(float(a), float(b), float(c)) for a, b, c in zip(t, u, du)]
    tables["zeros"] = [(k, float(z), float(d)) for k, (z, d) in enumerate(zip(sol.zeros, sol.du_at_zeros))]

    def oscillation():
        horizon = min(tol["oscillation_horizon"], warp.horizon)
        rep = sturm.oscillation_check(problem, horizon)
        return rep.is_oscillatory_certified, asdict(rep), None

    def zero_gap():
        rep = sturm.zero_gap_check(head)
        ok = bool(np.all(rep.gaps > rep.bound - tol["zero_gap_slack"]))
        i = int(np.argmin(rep.gaps))
        tail = head.zeros[head.zeros >= rep.tail_start]
        return ok, {"min_gap": rep.min_gap, "bound": rep.bound, "tail_start": rep.tail_start,
                    "gaps_checked": len(rep.gaps)}, float(tail[i])

    def envelope():
        rows, worst, witness = [], math.inf, None
        ok = True
        for k in tol["envelope_k"]:
            rep = sturm.envelope_check(sol, k, samples=tol["envelope_samples"], slack=tol["envelope_slack"])
            rows.append((lam, k, float(sol.zeros[k]), rep.t_tilde, rep.lower_margin, rep.upper_margin,
                         rep.amplitude))
            margin = min(rep.lower_margin, rep.upper_margin)
            if margin < worst:
                worst, witness = margin, k
            ok &= rep.lower_ok and rep.upper_ok
        tables["envelope"] = rows
        return ok, {"worst_margin": worst, "k_list": list(tol["envelope_k"])}, witness

    def du_bounds():
        rep = sturm.du_bounds_check(head, rel_slack=tol["du_slack"])
        return rep.lower_ok and rep.upper_ok, asdict(rep), None

    def energy():
        reps = [sturm.energy_identity_check(sol, k) for k in tol["energy_k"]]
        worst = max(reps, key=lambda r: r.rel_err)
        return worst.rel_err <= tol["energy_rel"], {"max_rel_err": worst.rel_err}, worst.k

    fit_holder = {}

    def decay():
        fit = weyl.decay_fit(problem, p_grid, sol)
        fit_holder["fit"] = fit
        elements = [weyl.weyl_quotient(problem, p, sol) for p in p_grid]
        tables["decay"] = [(lam, e.p, e.t_3p, e.norm_f, e.norm_residual, e.quotient) for e in elements]
        tables["fit"] = {"lambda": lam, "beta": fit.beta, "C": fit.C, "p_list": list(fit.p_list),
                         "quotients": list(fit.quotients)}
        spread = fit.p_times_q_spread
        ok = fit.beta >= tol["beta_min"] and spread <= tol["pq_spread_max"]
        pq = np.asarray(fit.p_list) * np.asarray(fit.quotients)
        return ok, {"beta": fit.beta, "C": fit.C, "p_times_q_spread": spread}, int(fit.p_list[int(np.argmax(pq))])

    def ratio():
        ratios = [weyl.mass_ratio(problem, p, sol).ratio for p in p_grid]
        ref = ratios[1] if len(ratios) > 1 else ratios[0]
        ok = all(math.isfinite(r) for r in ratios) and ratios[-1] <= tol["ratio_growth_max"] * ref
        return ok, {"ratios": ratios, "p_list": list(p_grid)}, int(p_grid[-1])

    def parseval():
        reps = [weyl.parseval_identity_check(problem, p, sol) for p in tol["parseval_p"]]
        worst = max(reps, key=lambda r: r.rel_err)
        return worst.rel_err <= tol["parseval_rel"], {"max_rel_err": worst.rel_err}, worst.p

    def residual_oracle():
        p = tol["residual_p"]
        element = weyl.weyl_quotient(problem, p, sol)
        bump = element.bump
        rng = np.random.default_rng([seed, cell_index])
        margin = 1e-3
        ts = np.sort(rng.uniform(bump.t0 + margin, bump.t3p - margin, tol["residual_points"]))
        scale = float(np.max(np.abs(sol.u(np.linspace(bump.t0, bump.t3p, 4001))))) * max(1.0, lam)
        analytic = np.asarray(weyl.residual(sol, bump, ts))
        fd = np.array([oracle.finite_difference_residual_oracle(element.f, warp, n, lam, float(s),
                                                                support=(bump.t0, bump.t3p)) for s in ts])
        err = np.abs(analytic - fd) / scale
        i = int(np.argmax(err))
        return bool(err[i] <= tol["residual_rel"]), {"max_rel_err": float(err[i]), "scale": scale}, float(ts[i])

    checks = [("oscillation", oscillation), ("zero_gap", zero_gap), ("envelope", envelope),
              ("du_bounds", du_bounds), ("energy_identity", energy), ("weyl_decay", decay),
              ("mass_ratio", ratio), ("parseval", parseval), ("residual_oracle", residual_oracle)]
    for check, fn in checks:
        _run_check(check, name, n, lam, fn, results)
    results[0].seconds += integrate_seconds
    return CellOutput((name, n, lam), results, tables)


def curve_cell(entry, n, t0, lambdas, T_grid, tol):
    """Eigencurve, oracle and branch checks for one (preset, n)."""
    name = entry["name"]
    results, tables = [], {}
    warp = _warp_for(entry, t0)
    t0 = warp.t0
    if not warp.bounded:

        def kumura():
            rep = kumura_check(warp, n, t_max=tol["kumura_t_max"], eps=tol["kumura_eps"])
            return rep.passes, asdict(rep), rep.t_at_sup

        _run_check("kumura", name, n, None, kumura, results)
        _skip(CURVE_CHECKS, name, n, None, "unbounded end: covered by the Kumura check", results)
        return CellOutput((name, n, None), results, tables)
    _skip(("kumura",), name, n, None, "bounded end: Weyl construction applies", results)
    if T_grid[0] <= t0:
        for check in CURVE_CHECKS:
            results.append(CheckResult(check, name, n, None, FAIL, reason=f"T_grid must exceed t0={t0}"))
        return CellOutput((name, n, None), results, tables)
    holder = {}

    def monotone():
        sweep = ec.eigencurve_sweep(warp, n, t0, T_grid)
        holder["points"] = sweep.points
        tables["eigencurve"] = ec.eigencurve_rows(sweep.points)
        lams = [p.lambda_T for p in sweep.points]
        bad = [T_grid[i + 1] for i in range(len(lams) - 1) if not lams[i + 1] < lams[i]]
        ok = sweep.strictly_decreasing and sweep.continuity_ok and all(p.interior_zeros == 0 for p in sweep.points)
        return ok, {"lambda_T": lams, "continuity_steps": list(sweep.continuity_steps)}, (bad[0] if bad else None)

    def alpha():
        points = holder.get("points") or [ec.dirichlet_lambda1(warp, n, t0, T) for T in T_grid]
        reps = [ec.alpha_bound_check(p) for p in points]
        failing = [r.T for r in reps if not r.lambda_T <= r.bound * (1 + tol["alpha_slack"]) + tol["alpha_slack"]]
        return not failing, {
            "margins": [r.margin for r in reps],
            "bound_at_T_exceeded": [r.lambda_T > r.bound_at_T for r in reps],
        }, (failing[0] if failing else None)

    def limits():
        rep = ec.lambda_limits_check(warp, n, t0, k_max=tol["limits_k"], eps_large=tol["lambda_large_max"],
                                     eps_small=1.0 / tol["lambda_small_min"])
        return rep.decreasing_to_zero and rep.increasing_to_infinity, {
            "lambda_at_large_T": rep.lambda_large[-1], "lambda_at_small_T": rep.lambda_small[-1],
        }, None

    def roundtrip():
        errs, gaps, worst, witness = [], [], 0.0, None
        for lam in lambdas:
            T = ec.solve_T_for_lambda(warp, n, t0, lam)
            back = ec.dirichlet_lambda1(warp, n, t0, T).lambda_T
            first = sturm.integrate(sturm.SLProblem(warp, n, lam, t0), zeros_wanted=1).zeros[1]
            err = abs(back - lam) / lam
            gap = abs(first - T) / (1.0 + T)
            errs.append(err)
            gaps.append(gap)
            if max(err, gap) > worst:
                worst, witness = max(err, gap), lam
        ok = worst <= tol["roundtrip_rel"]
        return ok, {"rel_err": errs, "first_zero_gap": gaps}, witness

    def agreement():
        rows, worst, witness = [], 0.0, None
        points = holder.get("points") or [ec.dirichlet_lambda1(warp, n, t0, T) for T in T_grid]
        for p in points:
            fd = oracle.fd_lambda1(warp, n, t0, p.T, N=tol["fd_N"])
            rel = abs(fd - p.lambda_T) / p.lambda_T
            rows.append((p.T, p.lambda_T, fd, rel))
            if rel > worst:
                worst, witness = rel, p.T
        tables["oracle"] = rows
        return worst <= tol["oracle_rel"], {"max_rel_diff": worst}, witness

    def filling():
        rep = oracle.spectrum_filling_check(warp, n, t0, tol["filling_lambdas"], tol["filling_T"], N=tol["fd_N"])
        tables["filling"] = [(T, lam, d) for T, row in zip(rep.T_list, rep.distances)
                             for lam, d in zip(rep.lambda_grid, row)]
        arr = np.array(rep.distances)
        bad = [lam for j, lam in enumerate(rep.lambda_grid) if not np.all(np.diff(arr[:, j]) < 0)]
        return rep.decreasing, {"max_gap_distance": list(rep.max_gap_distance)}, (bad[0] if bad else None)

    for check, fn in [("eigencurve_monotone", monotone), ("alpha_bound", alpha), ("lambda_limits", limits),
                      ("roundtrip", roundtrip), ("oracle_agreement", agreement), ("spectrum_filling", filling)]:
        _run_check(check, name, n, None, fn, results)
    return CellOutput((name, n, None), results, tables)


def _dispatch(task):
    kind, args = task
    return (lambda_cell if kind == "lambda" else curve_cell)(*args)


# -- run -------------------------------------------------------------------


class StrictAbort(RadialSpecError):
    """Raised by :func:`run` in strict mode after the first failing cell."""

    def __init__(self, report):
        super().__init__("strict mode: a check failed")
        self.report = report


def _tasks(config):
    tasks = []
    tol = config.tolerances
    index = 0
    for name in config.presets:
        entry = config.entry(name)
        for n in config.dimensions:
            tasks.append(("curve", (entry, n, config.t0, config.lambda_grid, config.T_grid, tol)))
            for lam in config.lambda_grid:
                tasks.append(("lambda", (entry, n, lam, config.t0, config.p_grid, tol, config.seed, index)))
                index += 1
    return tasks


def _provenance(config):
    try:
        pkg = version("artifact")
    except PackageNotFoundError:
        pkg = "unknown"
    presets = {}
    for name in config.presets:
        e = config.entry(name)
        presets[name] = {"version": e.get("version", 1), "kind": e["kind"]}
    return {
        "config_hash": config.config_hash,
        "schema": SCHEMA_VERSION,
        "package_version": pkg,
        "numpy": np.__version__,
        "tolerances": _clean(config.tolerances),
        "presets": presets,
        "seed": config.seed,
    }


def run(config, strict=False, jobs=1):
    """Execute every cell of ``config``; fail-soft unless ``strict``."""
    tasks = _tasks(config)
    outputs, stages, aborted = [], {}, False

    def consume(iterator):
        nonlocal aborted
        for task, out in zip(tasks, iterator):
            outputs.append(out)
            stages[_stage_name(out.key)] = round(sum(r.seconds for r in out.results), 3)
            log.info("%s: %s", _stage_name(out.key), ", ".join(f"{r.check}={r.status}" for r in out.results))
            if strict and any(r.status == FAIL for r in out.results):
                aborted = True
                return

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            consume(pool.map(_dispatch, tasks))
            if aborted:
                pool.shutdown(cancel_futures=True)
    else:
        consume(_dispatch(t) for t in tasks)
    results = [r for out in outputs for r in out.results]
    tables = {out.key: out.tables for out in outputs}
    report = RunReport(config, results, tables, _provenance(config), stages, aborted)
    if aborted:
        raise StrictAbort(report)
    return report


def _stage_name(key):
    name, n, lam = key
    return f"{name}/n={n}" + ("" if lam is None else f"/lambda={lam:g}")


# -- emission --------------------------------------------------------------


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    if x is None:
        return ""
    return str(x)


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    return path


def _slug(name, n, lam=None):
    s = f"{name}_n{n}"
    return s if lam is None else f"{s}_lambda{lam:g}"


def verdict_table(report):
    lines = [f"{'check':<22}{'preset':<16}{'n':>3}  {'lambda':>8}  {'status':<7}witness / reason"]
    for r in report.results:
        lam = "" if r.lam is None else f"{r.lam:g}"
        note = r.reason
        if r.status == FAIL and r.witness is not None:
            note = f"witness={r.witness}" + (f"; {note}" if note else "")
        lines.append(f"{r.check:<22}{r.preset:<16}{r.n:>3}  {lam:>8}  {r.status:<7}{note}".rstrip())
    c = report.counts()
    verdict = "PASS" if report.passed else "FAIL"
    lines.append(f"\n{verdict}: {c[PASS]} passed, {c[FAIL]} failed, {c[SKIP]} skipped")
    return "\n".join(lines) + "\n"


def emit(report, out_dir=None, figures=True):
    """Write summary JSON, CSVs, the verdict table and figures into ``out_dir``."""
    out_dir = out_dir or report.config.out
    os.makedirs(out_dir, exist_ok=True)
    written = []
    grouped = {}
    for (name, n, lam), tables in report.tables.items():
        grouped.setdefault((name, n), []).append((lam, tables))
    for (name, n), cells in grouped.items():
        cells.sort(key=lambda c: (-1.0 if c[0] is None else c[0]))
        decay, envelope, fits = [], [], []
        for lam, tables in cells:
            if lam is None:
                if "eigencurve" in tables:
                    written.append(_write_csv(os.path.join(out_dir, f"eigencurve_{_slug(name, n)}.csv"),
                                              ["T", "lambda_T", "alpha_T", "bound", "residual"], tables["eigencurve"]))
                if "oracle" in tables:
                    written.append(_write_csv(os.path.join(out_dir, f"oracle_{_slug(name, n)}.csv"),
                                              ["T", "lambda_shooting", "lambda_fd", "rel_diff"], tables["oracle"]))
                if "filling" in tables:
                    written.append(_write_csv(os.path.join(out_dir, f"filling_{_slug(name, n)}.csv"),
                                              ["T", "lambda", "distance"], tables["filling"]))
                continue
            if "zeros" in tables:
                written.append(_write_csv(os.path.join(out_dir, f"zeros_{_slug(name, n, lam)}.csv"),
                                          ["k", "t_k", "du_k"], tables["zeros"]))
                written.append(_write_csv(os.path.join(out_dir, f"solution_{_slug(name, n, lam)}.csv"),
                                          ["t", "u", "du"], tables["solution"]))
            decay += tables.get("decay", [])
            envelope += tables.get("envelope", [])
            if "fit" in tables:
                fits.append(tables["fit"])
        if decay:
            written.append(_write_csv(os.path.join(out_dir, f"decay_{_slug(name, n)}.csv"),
                                      ["lambda", "p", "t_3p", "norm_f", "norm_residual", "quotient"], decay))
        if envelope:
            written.append(_write_csv(os.path.join(out_dir, f"envelope_{_slug(name, n)}.csv"),
                                      ["lambda", "k", "t_k", "t_tilde", "lower_margin", "upper_margin", "amplitude"],
                                      envelope))
        if fits:
            path = os.path.join(out_dir, f"fits_{_slug(name, n)}.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump([{k: f[k] for k in ("lambda", "beta", "C", "p_list")} for f in fits], fh, indent=2)
                fh.write("\n")
            written.append(path)
        if figures:
            written += _figures(out_dir, name, n, cells, fits)
    written.append(_write_csv(
        os.path.join(out_dir, "checks.csv"), ["check", "preset", "n", "lambda", "status", "witness", "reason"],
        [(r.check, r.preset, r.n, r.lam, r.status, json.dumps(r.witness) if r.witness is not None else None, r.reason)
         for r in report.results],
    ))
    summary = {
        "schema": SCHEMA_VERSION,
        "verdict": "pass" if report.passed else "fail",
        "aborted": report.aborted,
        "counts": report.counts(),
        "provenance": report.provenance,
        "stage_seconds": report.stages,
        "checks": [
            {"check": r.check, "preset": r.preset, "n": r.n, "lambda": r.lam, "status": r.status,
             "metrics": r.metrics, "witness": r.witness, "reason": r.reason, "seconds": round(r.seconds, 3)}
            for r in report.results
        ],
    }
    path = os.path.join(out_dir, "summary.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(path)
    path = os.path.join(out_dir, "verdict.txt")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(verdict_table(report))
    written.append(path)
    return written


def _figures(out_dir, name, n, cells, fits):
    paths = []
    title = f"{name}, n={n}"
    if fits:
        paths.append(plots.decay_figure(os.path.join(out_dir, f"decay_{_slug(name, n)}.png"), title, fits))
    for lam, tables in cells:
        if lam is None and "eigencurve" in tables:
            paths.append(plots.eigencurve_figure(os.path.join(out_dir, f"eigencurve_{_slug(name, n)}.png"),
                                                 title, tables["eigencurve"]))
        if lam is None and "filling" in tables:
            rows = np.asarray(tables["filling"], dtype=float)
            T_list = sorted(set(rows[:, 0]))
            lams = sorted(set(rows[:, 1]))
            dist = rows[:, 2].reshape(len(T_list), len(lams))
            paths.append(plots.filling_figure(os.path.join(out_dir, f"filling_{_slug(name, n)}.png"),
                                              title, T_list, lams, dist))
    solved = [(lam, t) for lam, t in cells if lam is not None and "solution" in t]
    if solved:
        lam, tables = solved[0]
        sol = np.asarray(tables["solution"], dtype=float)
        zeros = np.asarray([z for _, z, _ in tables["zeros"]])
        paths.append(plots.solution_figure(os.path.join(out_dir, f"solution_{_slug(name, n, lam)}.png"),
                                           f"{title}, λ={lam:g}", sol[:, 0], sol[:, 1], zeros))
    return paths


__all__ = [
    "ExperimentConfig", "RunReport", "CheckResult", "StrictAbort", "TOLERANCES", "run", "emit",
    "verdict_table", "lambda_cell", "curve_cell", "HypothesisViolation",
]
