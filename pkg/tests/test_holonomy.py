import json

import numpy as np
import pytest

from holofock.connection import ClosedFormSource, NumericSource, closed_form
from holofock.curvature import closed_form_curvature
from holofock.fock import build_space
from holofock.holonomy import (
    Loop,
    holonomy_algebra_estimate,
    load_loop,
    loop_from_dict,
    loop_to_dict,
    save_loop,
    square_loop,
    square_loop_prediction,
    transport,
)
from holofock.operators import ParamPoint

SRC = ClosedFormSource("one_mode")
BASE = ParamPoint("one_mode", (0j, 0.5 + 0j))


def test_loop_validation():
    with pytest.raises(ValueError):
        Loop("one_mode", (BASE,))
    with pytest.raises(ValueError):
        Loop("one_mode", (BASE, BASE.shift("alpha", 0.1)))  # not closed
    with pytest.raises(ValueError):
        Loop("one_mode", (BASE, BASE), interpolation="cubic")


def test_constant_loop_identity():
    res = transport(Loop("one_mode", (BASE, BASE), "linear", 4), SRC)
    assert res.unitarity_defect < 1e-12
    assert np.abs(res.gamma - np.eye(2)).max() < 1e-12


def test_forward_backward_identity():
    wp = (BASE, BASE.shift("alpha", 0.3), BASE.shift("beta", 0.2j), BASE)
    loop = Loop("one_mode", wp + tuple(reversed(wp))[1:], "linear", 64)
    res = transport(loop, SRC)
    assert np.abs(res.gamma - np.eye(2)).max() < 1e-8


def test_reversed_loop_inverse():
    wp = (BASE, BASE.shift("alpha", 0.4 + 0.2j), BASE.shift("beta", -0.3j), BASE)
    loop = Loop("one_mode", wp, "trigonometric", 64)
    f = transport(loop, SRC).gamma
    r = transport(loop.reversed(), SRC).gamma
    assert np.abs(r @ f - np.eye(2)).max() < 1e-9


def test_concatenation_product():
    a = (BASE, BASE.shift("alpha", 0.3), BASE)
    b = (BASE, BASE.shift("beta", 0.25j), BASE)
    ga = transport(Loop("one_mode", a, "linear", 64), SRC).gamma
    gb = transport(Loop("one_mode", b, "linear", 64), SRC).gamma
    gab = transport(Loop("one_mode", a + b[1:], "linear", 64), SRC).gamma
    # later segments multiply on the left
    assert np.abs(gab - gb @ ga).max() < 1e-9


def test_small_square_curvature_decay():
    conn = closed_form(BASE)
    tf = closed_form_curvature(BASE)
    pred = square_loop_prediction(BASE, "alpha", conn, tf)
    errs = []
    for eps in (0.08, 0.04, 0.02):
        g = transport(square_loop(BASE, "alpha", eps, steps=96), SRC).gamma
        errs.append(np.linalg.norm(g - np.eye(2) - eps**2 * pred))
    for i in range(2):
        assert 6.0 <= errs[i] / errs[i + 1] <= 10.0


def test_integrator_convergence_order():
    loop = Loop("one_mode",
                (BASE, BASE.shift("alpha", 0.4 + 0.1j), BASE.shift("beta", 0.3j), BASE),
                "trigonometric", 8)
    fine = transport(loop, SRC, steps=512).gamma
    errs = [np.linalg.norm(transport(loop, SRC, steps=n).gamma - fine)
            for n in (8, 16, 32)]
    order = min(np.log2(errs[0] / errs[1]), np.log2(errs[1] / errs[2]))
    assert order >= 3.5


def test_refinement_loop():
    loop = Loop("one_mode", (BASE, BASE.shift("alpha", 0.5), BASE), "linear", 4)
    res = transport(loop, SRC, refine_tol=1e-10)
    assert res.meta["refinements"] >= 1
    assert res.unitarity_defect < 1e-12
    with pytest.raises(RuntimeError):
        transport(loop, SRC, refine_tol=1e-30, max_steps=16)


def test_midpoint_integrator_lower_order():
    # without the commutator correction the stepper drops to second order;
    # complex shifts keep the connection values non-commuting along the path
    loop = Loop("one_mode",
                (BASE, BASE.shift("alpha", 0.5 + 0.4j), BASE.shift("beta", 0.3j), BASE),
                "trigonometric", 4)
    fine = transport(loop, SRC, steps=512).gamma
    orders = []
    for integ in ("midpoint", "magnus4"):
        errs = [np.linalg.norm(transport(loop, SRC, steps=n, integrator=integ).gamma - fine)
                for n in (4, 16)]
        orders.append(np.log2(errs[0] / errs[1]) / 2.0)
    assert orders[1] > orders[0]
    assert orders[0] >= 1.5
    assert orders[1] >= 3.5


def test_closed_vs_numeric_source():
    small = square_loop(BASE, "beta", 0.1, steps=24)
    g_cf = transport(small, SRC).gamma
    g_num = transport(small, NumericSource("one_mode", build_space(1, 48))).gamma
    assert np.abs(g_cf - g_num).max() < 1e-4


def test_algebra_estimate():
    rng = np.random.default_rng(4)
    loops = []
    for _ in range(12):
        b = ParamPoint("one_mode", (complex(*rng.uniform(-0.4, 0.4, 2)),
                                    complex(*rng.uniform(-0.4, 0.4, 2))))
        loops.append(square_loop(b, str(rng.choice(["alpha", "beta"])), 0.3, steps=32))
    est = holonomy_algebra_estimate(loops, SRC)
    assert est["rank"] == 4
    const = Loop("one_mode", (BASE, BASE), "linear", 2)
    assert holonomy_algebra_estimate([const], SRC)["rank"] == 0


def test_algebra_estimate_rejects_large_loops():
    big = square_loop(BASE, "alpha", 1.5, steps=64)
    with pytest.raises(ValueError):
        holonomy_algebra_estimate([big], SRC)


def test_loop_file_roundtrip(tmp_path):
    wp = (BASE, BASE.shift("alpha", 0.1 + 0.3j), BASE.shift("beta", 1e-17j), BASE)
    loop = Loop("one_mode", wp, "trigonometric", 17)
    path = tmp_path / "loop.json"
    save_loop(loop, path)
    back = load_loop(path)
    assert back == loop  # full double precision round-trip
    data = json.loads(path.read_text())
    assert data["model"] == "one_mode"
    assert data["steps"] == 17


def test_extended_loop_file_roundtrip(tmp_path):
    base = ParamPoint.origin("extended")
    wp = (base, base.shift("u", 0.25), base)
    loop = Loop("extended", wp, "linear", 8)
    save_loop(loop, tmp_path / "ext.json")
    back = load_loop(tmp_path / "ext.json")
    assert back == loop
    assert loop_from_dict(loop_to_dict(loop)) == loop
