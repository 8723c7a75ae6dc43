import numpy as np
import pytest

from holofock.connection import ClosedFormSource
from holofock.curvature import (
    TwoForm,
    closed_form_curvature,
    numeric_two_form,
    plane_contractions,
    span_report,
    wirtinger_indices,
)
from holofock.frames import base_matrices_1mode, base_matrices_2mode
from holofock.operators import ParamPoint


def _rdisc(rng, scale):
    r = scale * np.sqrt(rng.uniform())
    th = rng.uniform(0, 2 * np.pi)
    return complex(r * np.cos(th), r * np.sin(th))


def test_index_order():
    assert wirtinger_indices("one_mode") == ["alpha", "alpha_bar", "beta", "beta_bar"]
    assert wirtinger_indices("extended")[-6:] == ["s1", "t1", "u", "v", "s2", "t2"]


def test_constant_component():
    b = base_matrices_1mode()
    rng = np.random.default_rng(0)
    for _ in range(5):
        p = ParamPoint("one_mode", (_rdisc(rng, 0.8), _rdisc(rng, 0.8)))
        f = closed_form_curvature(p).components[("alpha", "alpha_bar")]
        assert np.abs(f + 2.0 * b["K"]).max() < 1e-12


def test_one_mode_beta_betabar_display():
    b = base_matrices_1mode()
    p = ParamPoint("one_mode", (0.2 + 0j, 0.5 + 0j))
    f = closed_form_curvature(p).components[("beta", "beta_bar")]
    expect = -(np.sinh(1.0) / 1.0) * (b["K"] + 0.5 * b["L"])
    assert np.allclose(f, expect, atol=1e-13)


def test_two_mode_zeta_zetabar_display():
    b = base_matrices_2mode()
    p = ParamPoint("two_mode", (0.1 + 0j, 0.3 + 0j))
    f = closed_form_curvature(p).components[("zeta", "zeta_bar")]
    expect = -(np.sinh(0.6) / 0.3) * (2.0 * b["B^"] - np.eye(4))
    assert np.allclose(f, expect, atol=1e-13)


def test_two_mode_xi_xibar_h_coefficient():
    # the printed display's H^ coefficient carries the uncorrected sign
    b = base_matrices_2mode()
    xi, zeta = 0.2, 0.1
    p = ParamPoint("two_mode", (xi + 0j, zeta + 0j))
    f = closed_form_curvature(p).components[("xi", "xi_bar")]
    h_coeff = np.sum(f * b["H^"]).real / np.sum(b["H^"] * b["H^"]).real
    expect = (np.sin(2 * xi) / xi) * (1.0 + np.cosh(2 * zeta) ** 2)
    assert h_coeff == pytest.approx(expect, rel=1e-10)


@pytest.mark.parametrize("model,mode", [("one_mode", "paper"), ("two_mode", "paper")])
def test_reference_displays_match_numeric(model, mode):
    rng = np.random.default_rng(1)
    src = ClosedFormSource(model, mode)
    worst = 0.0
    for _ in range(4):
        p = ParamPoint(model, (_rdisc(rng, 0.8), _rdisc(rng, 0.8)))
        tf_c = closed_form_curvature(p)
        tf_n = numeric_two_form(p, src)
        for k, v in tf_c.components.items():
            worst = max(worst, np.abs(v - tf_n.components[k]).max())
    assert worst < 1e-4


def test_numeric_two_form_antisymmetric_storage():
    p = ParamPoint("one_mode", (0.2 + 0.1j, 0.3 + 0j))
    tf = numeric_two_form(p, ClosedFormSource("one_mode"))
    a = tf.component("alpha", "beta")
    b = tf.component("beta", "alpha")
    assert np.array_equal(a, -b)
    with pytest.raises(KeyError):
        tf.component("alpha", "nope")


def test_dagger_pairing_of_barred_components():
    # F_{chi_bar psi_bar} = -(F_{chi psi})†, the barred-pair dagger rule
    p = ParamPoint("one_mode", (0.3 + 0.1j, 0.4 - 0.2j))
    tf = numeric_two_form(p, ClosedFormSource("one_mode"))
    lhs = tf.components[("alpha_bar", "beta_bar")]
    rhs = -tf.components[("alpha", "beta")].conj().T
    assert np.abs(lhs - rhs).max() < 1e-6


def test_finite_at_origin():
    p = ParamPoint.origin("one_mode")
    tf = numeric_two_form(p, ClosedFormSource("one_mode"))
    for v in tf.components.values():
        assert np.all(np.isfinite(v))


def test_plane_contractions_count():
    p = ParamPoint("one_mode", (0.2 + 0j, 0.3 + 0j))
    tf = numeric_two_form(p, ClosedFormSource("one_mode"))
    planes = plane_contractions(tf)
    assert len(planes) == 6  # C(4, 2) real coordinate planes


def test_span_ranks():
    rng = np.random.default_rng(2)
    pts1 = [ParamPoint("one_mode", (_rdisc(rng, 0.8), _rdisc(rng, 0.8)))
            for _ in range(6)]
    rep1 = span_report(pts1, "one_mode")
    assert rep1["rank"] == 4
    pts2 = [ParamPoint("two_mode", (_rdisc(rng, 0.8), _rdisc(rng, 0.8)))
            for _ in range(6)]
    rep2 = span_report(pts2, "two_mode")
    assert rep2["rank"] == 4
    assert rep2["centre_dim"] == 1
    assert rep2["derived_rank"] == 3
    assert rep2["direct_sum"]


def test_span_monotone_in_samples():
    rng = np.random.default_rng(3)
    pts = [ParamPoint("one_mode", (_rdisc(rng, 0.6), _rdisc(rng, 0.6)))
           for _ in range(4)]
    r1 = span_report(pts[:1], "one_mode")["rank"]
    r4 = span_report(pts, "one_mode")["rank"]
    assert 1 <= r1 <= r4 <= 4


def test_span_single_origin_sample():
    rep = span_report([ParamPoint.origin("one_mode")], "one_mode")
    assert rep["rank"] >= 1
