import numpy as np
import pytest

from holofock.connection import (
    ClosedFormSource,
    closed_form,
    closed_form_batch,
    compare_modes,
    numeric_component,
    numeric_connection,
    pullback_coefficients,
)
from holofock.fock import build_space
from holofock.frames import base_matrices_1mode
from holofock.operators import MODEL_INFO, ParamPoint


def _rdisc(rng, scale):
    r = scale * np.sqrt(rng.uniform())
    th = rng.uniform(0, 2 * np.pi)
    return complex(r * np.cos(th), r * np.sin(th))


def test_one_mode_closed_form_shape():
    b = base_matrices_1mode()
    p = ParamPoint("one_mode", (0j, 0.5 + 0j))
    conn = closed_form(p)
    # A_alpha has zero diagonal when alpha = 0
    assert np.abs(np.diag(conn.components["alpha"])).max() == 0.0
    expect = np.cosh(0.5) * b["F"] + np.sinh(0.5) * b["E"]
    assert np.allclose(conn.components["alpha"], expect, atol=1e-14)
    # A_beta is diagonal everywhere
    p2 = ParamPoint("one_mode", (0.4 - 0.2j, 0.3 + 0.6j))
    a_beta = closed_form(p2).components["beta"]
    assert np.abs(a_beta - np.diag(np.diag(a_beta))).max() == 0.0


def test_one_mode_known_coefficient():
    # A_beta at real beta: coefficient of (K + L/2) is b(cosh(2b)-1)/(4b^2)
    beta = 0.5
    p = ParamPoint("one_mode", (0j, beta + 0j))
    a_beta = closed_form(p).components["beta"]
    b = base_matrices_1mode()
    coeff = beta * (np.cosh(2 * beta) - 1.0) / (4.0 * beta**2)
    assert np.allclose(a_beta, coeff * (b["K"] + 0.5 * b["L"]), atol=1e-14)


def test_one_mode_matches_oracle():
    rng = np.random.default_rng(0)
    space = build_space(1, 64)
    worst = 0.0
    for _ in range(6):
        p = ParamPoint("one_mode", (_rdisc(rng, 1.0), _rdisc(rng, 1.0)))
        nc = numeric_connection(p, space=space)
        cf = closed_form(p)
        for k in cf.components:
            worst = max(worst, np.abs(cf.components[k] - nc.components[k]).max())
    assert worst < 1e-6


def test_beta_to_zero_limit():
    p = ParamPoint("one_mode", (0.3 + 0j, 1e-9 + 0j))
    a_beta = closed_form(p).components["beta"]
    assert np.abs(a_beta).max() < 1e-8
    nc = numeric_component(ParamPoint("one_mode", (0.3 + 0j, 0j)), "beta",
                           build_space(1, 32))
    assert np.abs(nc).max() < 1e-8


def test_two_mode_closed_form_limits():
    # A_xi at xi -> 0 tends to cosh(2|zeta|) F^
    from holofock.frames import base_matrices_2mode

    b = base_matrices_2mode()
    p = ParamPoint("two_mode", (1e-10 + 0j, 0.4 + 0j))
    a_xi = closed_form(p).components["xi"]
    assert np.allclose(a_xi, np.cosh(0.8) * b["F^"], atol=1e-8)


def test_two_mode_matches_oracle():
    rng = np.random.default_rng(1)
    space = build_space(2, 40)
    worst = 0.0
    for _ in range(4):
        p = ParamPoint("two_mode", (_rdisc(rng, 0.8), _rdisc(rng, 0.6)))
        nc = numeric_connection(p, space=space)
        cf = closed_form(p)
        for k in cf.components:
            worst = max(worst, np.abs(cf.components[k] - nc.components[k]).max())
    assert worst < 1e-6


def test_full_model_validated_matches_oracle():
    rng = np.random.default_rng(2)
    space = build_space(2, 48)
    worst = 0.0
    for _ in range(2):
        p = ParamPoint("full", tuple(_rdisc(rng, 0.4) for _ in range(6)))
        nc = numeric_connection(p, space=space)
        cf = closed_form(p, "validated")
        for k in cf.components:
            worst = max(worst, np.abs(cf.components[k] - nc.components[k]).max())
    assert worst < 1e-5


def test_full_model_reduces_to_one_mode():
    # xi = zeta = alpha2 = beta2 = 0 embeds the one-mode forms via B1
    rng = np.random.default_rng(3)
    a1c, b1c = _rdisc(rng, 0.6), _rdisc(rng, 0.6)
    pf = ParamPoint("full", (a1c, b1c, 0j, 0j, 0j, 0j))
    p1 = ParamPoint("one_mode", (a1c, b1c))
    cf_full = closed_form(pf)
    cf_one = closed_form(p1)
    from holofock.frames import hatted_family

    fam = hatted_family()
    embed = {"L": fam["I"], "E": fam["B1"], "F": fam["B1d"],
             "K": fam["B1dB1"]}
    b = base_matrices_1mode()
    # A_alpha1 = (abar/2) I + cosh B1d + sh B1  (the one-mode form with E->B1)
    a1_expected = sum(
        coeff * embed[name]
        for name, coeff in [
            ("L", 0.5 * np.conj(a1c)),
            ("F", np.cosh(abs(b1c))),
            ("E", np.conj(b1c) * np.sinh(abs(b1c)) / abs(b1c)),
        ]
    )
    assert np.allclose(cf_full.components["alpha1"], a1_expected, atol=1e-12)
    # and the embedded one-mode A_beta reappears on the B1-block
    coeff = (cf_one.components["beta"][1, 1] - cf_one.components["beta"][0, 0])
    full_beta = cf_full.components["beta1"]
    assert np.allclose(full_beta[2, 2] - full_beta[0, 0], coeff, atol=1e-12)


def test_pullback_coefficients_origin_and_values():
    c = pullback_coefficients(0j, 0j, 0j, 0j)
    assert (c["c0"], c["c1"], c["c2"], c["c3"], c["c4"]) == (0, 1, 0, 0, 0)
    assert (c["d1"], c["d2"]) == (1, 0)
    c2 = pullback_coefficients(0j, 0j, 0j, 0.4 + 0j)
    assert c2["d2"] == pytest.approx(np.sinh(0.4))
    assert c2["d1"] == pytest.approx(np.cosh(0.4))
    # paper variant differs in c3 once zeta is on (sin vs sinh)
    cp = pullback_coefficients(0.3 + 0j, 0.2j, 0j, 0j, mode="paper")
    cv = pullback_coefficients(0.3 + 0j, 0.2j, 0j, 0j, mode="validated")
    assert cp["c3"] != cv["c3"]
    assert abs(cv["c3"] - np.sin(0.3) * 0.2j * np.sinh(0.2) / 0.2) < 1e-14


def test_full_alpha2_component_display():
    from holofock.frames import hatted_family

    fam = hatted_family()
    p = ParamPoint("full", (0j, 0j, 0j, 0j, 0j, 0.5 + 0j))
    a2 = closed_form(p).components["alpha2"]
    expect = np.cosh(0.5) * fam["B2d"] + np.sinh(0.5) * fam["B2"]
    assert np.allclose(a2, expect, atol=1e-14)


def test_connection_assembly_anti_hermitian():
    rng = np.random.default_rng(4)
    p = ParamPoint("full", tuple(_rdisc(rng, 0.5) for _ in range(6)))
    conn = closed_form(p)
    zero = conn.contract(np.zeros(12))
    assert np.abs(zero).max() == 0.0
    for _ in range(5):
        t = rng.standard_normal(12)
        a = conn.contract(t)
        assert np.abs(a + a.conj().T).max() < 1e-12
    # R-linearity
    t1, t2 = rng.standard_normal(12), rng.standard_normal(12)
    lhs = conn.contract(2.0 * t1 - 0.5 * t2)
    rhs = 2.0 * conn.contract(t1) - 0.5 * conn.contract(t2)
    assert np.abs(lhs - rhs).max() < 1e-12


def test_one_mode_alpha_axis_contraction():
    p = ParamPoint("one_mode", (0.2 + 0.1j, 0.4 + 0j))
    conn = closed_form(p)
    t = np.array([1.0, 0.0, 0.0, 0.0])
    a = conn.components["alpha"]
    assert np.allclose(conn.contract(t), a - a.conj().T, atol=1e-14)


def test_components_stable_under_cutoff_growth():
    p = ParamPoint("two_mode", (0.3 + 0.2j, 0.25 - 0.1j))
    n1 = numeric_connection(p, space=build_space(2, 24))
    n2 = numeric_connection(p, space=build_space(2, 48))
    worst = max(np.abs(n1.components[k] - n2.components[k]).max()
                for k in n1.components)
    assert worst < 1e-8


def test_extended_numeric_components():
    rng = np.random.default_rng(5)
    space = build_space(2, 20)
    coords = tuple(_rdisc(rng, 0.3) for _ in range(6))
    phases = tuple(rng.uniform(-0.3, 0.3, 6))
    p = ParamPoint("extended", coords, phases)
    conn = numeric_connection(p, space=space)
    assert set(conn.components) == set(MODEL_INFO["extended"].coords) | set(
        MODEL_INFO["extended"].phases)
    t = rng.standard_normal(18)
    a = conn.contract(t)
    assert np.abs(a + a.conj().T).max() < 1e-8


def test_origin_gauge_consistency():
    # closed-form series branches at the exact origin agree with the oracle
    space = build_space(2, 16)
    p = ParamPoint.origin("full")
    cf = closed_form(p)
    nc = numeric_connection(p, space=space)
    for k in cf.components:
        assert np.all(np.isfinite(cf.components[k]))
        assert np.abs(cf.components[k] - nc.components[k]).max() < 1e-9
    from holofock.frames import hatted_family

    fam = hatted_family()
    assert np.allclose(cf.components["alpha1"], fam["B1d"], atol=1e-14)
    assert np.abs(cf.components["beta1"]).max() < 1e-14


def test_doubled_first_leg_matches_full_closed_form():
    # d(Z2 Z1) along first-leg coordinates is Z1^{-1} dZ1 untouched by Z2,
    # so those components must equal the full-model closed forms exactly
    rng = np.random.default_rng(9)
    space = build_space(2, 20)
    leg1 = tuple(_rdisc(rng, 0.3) for _ in range(6))
    leg2 = tuple(_rdisc(rng, 0.3) for _ in range(6))
    pd = ParamPoint("doubled", leg1 + leg2)
    nd = numeric_connection(pd, space=space)
    cf = closed_form(ParamPoint("full", leg1), "validated")
    for name in MODEL_INFO["full"].coords:
        # cutoff-20 truncation of the twelve-factor composite caps accuracy
        assert np.abs(nd.components[name + "_1"] - cf.components[name]).max() < 1e-4
    # and the assembled one-form stays anti-Hermitian on the 24-dim tangent
    t = rng.standard_normal(24)
    a = nd.contract(t)
    assert np.abs(a + a.conj().T).max() < 1e-8


def test_numeric_step_validation():
    p = ParamPoint("one_mode", (0j, 0.1 + 0j))
    with pytest.raises(ValueError):
        numeric_component(p, "beta", build_space(1, 16), h=1e-9)


def test_compare_modes_flags_paper_slips():
    rng = np.random.default_rng(6)
    p = ParamPoint("full", tuple(_rdisc(rng, 0.4) for _ in range(6)))
    rep = compare_modes(p, build_space(2, 48))
    assert rep["modes"]["validated"]["pass"]
    assert not rep["modes"]["paper"]["pass"]
    comps = {e["component"] for e in rep["modes"]["paper"]["mismatches"]}
    assert "zeta" in comps  # the dropped-half rows


def test_closed_form_batch_matches_single():
    rng = np.random.default_rng(7)
    coords = np.array([[_rdisc(rng, 0.5) for _ in range(6)] for _ in range(5)])
    batch = closed_form_batch("full", coords)
    for k in range(5):
        single = closed_form(ParamPoint("full", tuple(coords[k])))
        for name, stack in batch.items():
            assert np.abs(stack[k] - single.components[name]).max() < 1e-14


def test_closed_form_source_contract_batch():
    src = ClosedFormSource("one_mode")
    rng = np.random.default_rng(8)
    reals = rng.uniform(-0.5, 0.5, (4, 4))
    tangents = rng.standard_normal((4, 4))
    batch = src.contract_batch(reals, tangents)
    for k in range(4):
        p = ParamPoint.from_real_vector("one_mode", reals[k])
        single = closed_form(p).contract(tangents[k])
        assert np.abs(batch[k] - single).max() < 1e-13
