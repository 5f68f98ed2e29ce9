import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from radialspec.errors import ConfigError, HypothesisViolation
from radialspec.expr import compile_expression
from radialspec.presets import (
    builtin_names,
    check_entry,
    get_entry,
    load_catalog,
    preset_warp,
    profile_from_entry,
    warp_from_entry,
)


def test_expression_scalar_and_array_agree():
    f = compile_expression("cos(tan(pi*r/2)) + r^2 - sqrt(1 + r)", "r")
    xs = np.linspace(0.0, 0.9, 17)
    assert np.allclose(f(xs), [f(float(x)) for x in xs], rtol=0, atol=1e-14)
    assert f(0.5) == pytest.approx(math.cos(math.tan(math.pi / 4)) + 0.25 - math.sqrt(1.5), abs=1e-15)


@pytest.mark.parametrize(
    "source",
    ["__import__('os')", "r.real", "lambda: 1", "open('x')", "r if r else 1", "sin(r, r)", "[r]", "s + 1", "1 +"],
)
def test_expression_rejects_outside_grammar(source):
    with pytest.raises(ConfigError):
        compile_expression(source, "r")


def test_expression_needs_string():
    with pytest.raises(ConfigError):
        compile_expression(3.0, "r")


@given(st.floats(min_value=-50, max_value=50, allow_nan=False))
def test_expression_matches_python(x):
    f = compile_expression("exp(-abs(t)) * sinh(t / 10) - t**3 / 7", "t")
    assert f(x) == pytest.approx(math.exp(-abs(x)) * math.sinh(x / 10) - x**3 / 7, rel=1e-13, abs=1e-13)


def test_catalog_lists_all_presets():
    assert builtin_names() == ["bounded-exp", "cone", "paper-example", "paraboloid", "plane"]
    for name, entry in load_catalog().items():
        assert entry["version"] >= 1
        check_entry(entry)


def test_unknown_preset_is_config_error():
    with pytest.raises(ConfigError, match="unknown preset"):
        get_entry("torus")


@pytest.mark.parametrize(
    "entry",
    [
        {"name": "x", "kind": "graph", "f": "r"},
        {"name": "x", "kind": "polar", "f": "r", "df": "1"},
        {"name": "x", "kind": "direct", "r": "t", "dr": "import os"},
        {"kind": "direct"},
    ],
)
def test_malformed_entries(entry):
    with pytest.raises(ConfigError):
        check_entry(entry)


def test_profile_derivatives_consistent():
    for name in ("plane", "cone", "paraboloid", "paper-example"):
        profile_from_entry(get_entry(name))


@pytest.mark.parametrize("name,bounded", [("plane", False), ("cone", False), ("paraboloid", False),
                                          ("bounded-exp", True), ("paper-example", True)])
def test_preset_branches(name, bounded):
    w = preset_warp(name)
    assert w.bounded is bounded
    assert w.t0 == 1.0


def test_inline_direct_entry_validates_cap():
    entry = {"name": "steep", "kind": "direct", "r": "3 - 2*exp(-t)", "dr": "2*exp(-t)", "c": 1.0}
    with pytest.raises(HypothesisViolation):
        warp_from_entry(entry)
    entry["c"] = 2.0
    w = warp_from_entry(entry)
    assert w.R == pytest.approx(3.0, rel=1e-6)
