"""Preset catalog: JSON entries describing profiles or direct warps.

An entry has ``name``, ``kind`` (``"graph"`` or ``"direct"``), expression
strings (``f``/``df`` in the variable ``r`` for graphs, ``r``/``dr`` in
``t`` for direct warps), ``R_D`` (``null`` for all of R^n) or ``end``
(``"auto"``, ``"unbounded"`` or a number), ``c``, ``t0`` and
``singular_radii``.  Graph entries may set ``horizon``, the largest ``t``
the warp is integrated to.
"""

import functools
import json
import math
from importlib import resources

from .errors import ConfigError
from .expr import compile_expression
from .geometry import RadialProfile, build_warping, direct_warping

GRAPH_KEYS = {"f", "df"}
DIRECT_KEYS = {"r", "dr"}


def _builtin_text():
    return resources.files("radialspec").joinpath("presets.json").read_text(encoding="utf-8")


def load_catalog(path=None):
    """Return ``{name: entry}`` from ``path`` or the built-in catalog."""
    if path is None:
        text = _builtin_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"preset catalog is not valid JSON: {exc}") from None
    entries = data.get("presets", data) if isinstance(data, dict) else data
    catalog = {}
    for entry in entries:
        check_entry(entry)
        catalog[entry["name"]] = entry
    return catalog


def check_entry(entry):
    if not isinstance(entry, dict) or "name" not in entry:
        raise ConfigError(f"preset entry must be an object with a name: {entry!r}")
    kind = entry.get("kind")
    need = {"graph": GRAPH_KEYS, "direct": DIRECT_KEYS}.get(kind)
    if need is None:
        raise ConfigError(f"preset {entry['name']!r}: kind must be 'graph' or 'direct'")
    missing = need - entry.keys()
    if missing:
        raise ConfigError(f"preset {entry['name']!r}: missing {sorted(missing)}")
    for key in need:
        compile_expression(entry[key], "r" if kind == "graph" else "t")


def builtin_names():
    return sorted(load_catalog())


def get_entry(name):
    catalog = load_catalog()
    if name not in catalog:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(catalog)}")
    return catalog[name]


def profile_from_entry(entry):
    if entry["kind"] != "graph":
        raise ConfigError(f"preset {entry['name']!r} is not a graph")
    radius = entry.get("R_D")
    return RadialProfile(
        f=compile_expression(entry["f"], "r"),
        df=compile_expression(entry["df"], "r"),
        domain_radius=math.inf if radius is None else float(radius),
        name=entry["name"],
        singular_radii=tuple(float(x) for x in entry.get("singular_radii", [])),
    )


def warp_from_entry(entry, t0=None):
    """Build the :class:`~radialspec.geometry.WarpingFunction` of an entry."""
    check_entry(entry)
    t0 = float(entry.get("t0", 1.0) if t0 is None else t0)
    if entry["kind"] == "graph":
        return build_warping(
            profile_from_entry(entry), t_max=float(entry.get("horizon", 1024.0)), t0=t0
        )
    end = entry.get("end", "auto")
    if end == "auto":
        R = None
    elif end == "unbounded":
        R = math.inf
    else:
        R = float(end)
    return direct_warping(
        compile_expression(entry["r"], "t"),
        compile_expression(entry["dr"], "t"),
        cap=float(entry.get("c", 1.0)),
        t0=t0,
        R=R,
        name=entry["name"],
    )


@functools.lru_cache(maxsize=None)
def _cached_builtin(name, t0):
    return warp_from_entry(get_entry(name), t0=t0)


def preset_warp(name, t0=None):
    """Warp of a built-in preset (cached: building a graph warp integrates an ODE)."""
    entry = get_entry(name)
    return _cached_builtin(name, float(entry.get("t0", 1.0) if t0 is None else t0))
