"""Curvature two-form F = dA + A∧A.

Components are indexed by ordered pairs of Wirtinger coordinates: each
complex coordinate ``chi`` contributes the holomorphic index ``chi`` and
the anti-holomorphic index ``chi_bar`` (with A_{chi_bar} = -A_chi†), and
phase coordinates contribute themselves.  For indices mu < nu in this
canonical order,

    F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu].

The closed-form one- and two-mode expressions evaluate the reference
displays verbatim; the numeric construction differentiates any connection
source.  Contractions with real coordinate 2-planes use the fixed
convention ``d chi ∧ d chi_bar (e_x, e_y) = -2i`` uniformly on both
paths, so comparisons and span ranks are convention-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .connection import (
    ClosedFormSource,
    _bx,
    _cosh_sq,
    _ratio_m1,
    _sinhc_sq,
)
from .frames import base_matrices_1mode, base_matrices_2mode
from .linalg import anti_hermitian_part, comm, lie_closure, real_rank
from .operators import MODEL_INFO, ParamPoint

__all__ = [
    "TwoForm",
    "wirtinger_indices",
    "numeric_two_form",
    "closed_form_curvature",
    "plane_contractions",
    "span_report",
]


def wirtinger_indices(model: str) -> list[str]:
    """Canonical index order: chi, chi_bar per complex coordinate, then
    the real phases."""
    info = MODEL_INFO[model]
    out = []
    for name in info.coords:
        out.append(name)
        out.append(name + "_bar")
    out.extend(info.phases)
    return out


@dataclass
class TwoForm:
    """Antisymmetric curvature components over ordered Wirtinger pairs."""

    model: str
    point: ParamPoint
    components: dict[tuple[str, str], np.ndarray]
    source: str = "numeric"
    meta: dict = field(default_factory=dict)

    def component(self, mu: str, nu: str) -> np.ndarray:
        if (mu, nu) in self.components:
            return self.components[(mu, nu)]
        if (nu, mu) in self.components:
            return -self.components[(nu, mu)]
        raise KeyError(f"no component ({mu}, {nu})")


def _component_value(conn, name: str) -> np.ndarray:
    if name.endswith("_bar"):
        return -conn.components[name[:-4]].conj().T
    return conn.components[name]


def _axis_shifts(model: str):
    """Real axes of the model with their coordinate name and direction.

    Yields (axis_label, coord_name, delta_unit) where shifting the point by
    ``h * delta_unit`` moves along that real axis.
    """
    info = MODEL_INFO[model]
    for name in info.coords:
        yield (name + ":x", name, 1.0)
        yield (name + ":y", name, 1.0j)
    for name in info.phases:
        yield (name, name, 1.0)


def numeric_two_form(
    point: ParamPoint,
    source,
    h: float = 1e-4,
    richardson: bool = True,
) -> TwoForm:
    """F = dA + A∧A by central differences of a connection source.

    ``source`` provides ``.at(point) -> Connection``.  Axis derivatives of
    every component are combined into Wirtinger derivatives; one Richardson
    level is applied by default since second-derivative noise is the
    accuracy limit here.
    """
    model = point.model
    names = wirtinger_indices(model)
    base = source.at(point)

    def axis_derivatives(step: float) -> dict[str, dict[str, np.ndarray]]:
        out: dict[str, dict[str, np.ndarray]] = {}
        for label, coord, unit in _axis_shifts(model):
            plus = source.at(point.shift(coord, step * unit))
            minus = source.at(point.shift(coord, -step * unit))
            out[label] = {
                n: (_component_value(plus, n) - _component_value(minus, n))
                / (2.0 * step)
                for n in names
            }
        return out

    def wirtinger(ax: dict, mu: str, name: str) -> np.ndarray:
        if mu.endswith("_bar"):
            chi = mu[:-4]
            return 0.5 * (ax[chi + ":x"][name] + 1j * ax[chi + ":y"][name])
        if mu in MODEL_INFO[model].phases:
            return ax[mu][name]
        return 0.5 * (ax[mu + ":x"][name] - 1j * ax[mu + ":y"][name])

    ax = axis_derivatives(h)
    if richardson:
        ax_half = axis_derivatives(h / 2.0)

    comps: dict[tuple[str, str], np.ndarray] = {}
    for i, mu in enumerate(names):
        for nu in names[i + 1:]:
            d = wirtinger(ax, mu, nu) - wirtinger(ax, nu, mu)
            if richardson:
                d_half = wirtinger(ax_half, mu, nu) - wirtinger(ax_half, nu, mu)
                d = (4.0 * d_half - d) / 3.0
            val = d + comm(_component_value(base, mu), _component_value(base, nu))
            comps[(mu, nu)] = val
    return TwoForm(model, point, comps, source=f"numeric[{source!r}]",
                   meta={"h": h, "richardson": richardson})


# ---------------------------------------------------------------------------
# printed closed forms
# ---------------------------------------------------------------------------

def _closed_one_mode_curvature(point: ParamPoint) -> dict[tuple[str, str], np.ndarray]:
    beta = point.coords[1]
    b = base_matrices_1mode()
    E, F, K, L = b["E"], b["F"], b["K"], b["L"]
    r2 = abs(beta) ** 2
    ch = _cosh_sq(r2)                      # cosh|b|
    shc = _sinhc_sq(r2)                    # sinh|b|/|b|
    s2 = _sinhc_sq(4.0 * r2)               # sinh(2|b|)/(2|b|)
    ratio = _ratio_m1(r2)                  # (s2 - 1)/|b|²
    bbar, bb = np.conj(beta), beta
    comps = {
        ("alpha", "beta"):
            _bx(0.5 * bbar**2 * ch * ratio, E) - _bx(0.5 * bbar * shc * (1 + s2), F),
        ("alpha", "alpha_bar"): -2.0 * K,
        ("alpha", "beta_bar"):
            -(_bx(0.5 * ch * (1 + s2), E) - _bx(0.5 * bb * shc * (s2 - 1), F)),
        ("beta", "alpha_bar"):
            -(_bx(-0.5 * bbar * shc * (s2 - 1), E) + _bx(0.5 * ch * (1 + s2), F)),
        ("beta", "beta_bar"): _bx(-s2, K + 0.5 * L),
        ("alpha_bar", "beta_bar"):
            -(_bx(-0.5 * bb * shc * (1 + s2), E) + _bx(0.5 * bb**2 * ch * ratio, F)),
    }
    return {k: np.asarray(v[0] if v.ndim == 3 else v, dtype=complex) for k, v in comps.items()}


def _closed_two_mode_curvature(point: ParamPoint) -> dict[tuple[str, str], np.ndarray]:
    xi, zeta = point.coords
    b = base_matrices_2mode()
    E, F, H, A, C, B = b["E^"], b["F^"], b["H^"], b["A^"], b["C^"], b["B^"]
    xbar, zbar = np.conj(xi), np.conj(zeta)
    rx2, rz2 = abs(xi) ** 2, abs(zeta) ** 2
    s2x = _sinhc_sq(-4.0 * rx2)            # sin(2|xi|)/(2|xi|)
    c2z = _cosh_sq(4.0 * rz2)              # cosh(2|zeta|)
    s2zc = _sinhc_sq(4.0 * rz2)            # sinh(2|zeta|)/(2|zeta|)
    # (-1 + cos 2|xi|)/|xi|² and (-1 + sin(2|xi|)/(2|xi|))/|xi|²
    cosm1 = -2.0 * _sinhc_sq(-rx2) ** 2
    sinm1 = -_ratio_m1(-rx2)
    zb_sh = zbar * s2zc                    # conj(zeta) sinh(2|zeta|)/(2|zeta|)
    z_sh = zeta * s2zc
    comps = {
        ("xi", "zeta"):
            -(_bx((1 + s2x) * zb_sh, F) + _bx(xbar**2 * sinm1 * zb_sh, E)),
        ("xi", "xi_bar"):
            -(_bx(xi * cosm1 * c2z, F)
              - _bx(2.0 * s2x * (1.0 + c2z**2), H)
              + _bx(xbar * cosm1 * c2z, E)),
        ("xi", "zeta_bar"):
            -(_bx((1 + s2x) * z_sh, F) + _bx(xbar**2 * sinm1 * z_sh, E)),
        ("zeta", "xi_bar"):
            -(_bx((1 + s2x) * zb_sh, E) + _bx(xi**2 * sinm1 * zb_sh, F)),
        ("zeta", "zeta_bar"): _bx(-2.0 * s2zc, 2.0 * B - np.eye(4)),
        ("xi_bar", "zeta_bar"):
            _bx((1 + s2x) * z_sh, E) + _bx(xi**2 * sinm1 * z_sh, F),
    }
    return {k: np.asarray(v[0] if np.asarray(v).ndim == 3 else v, dtype=complex)
            for k, v in comps.items()}


def closed_form_curvature(point: ParamPoint) -> TwoForm:
    """The reference curvature displays (one- and two-mode models).

    Kept verbatim: they are self-consistent with the ``paper``-mode
    connection, whose Cartan-coefficient sign the two-mode display inherits
    in its d xi ∧ d xi_bar block.
    """
    if point.model == "one_mode":
        comps = _closed_one_mode_curvature(point)
    elif point.model == "two_mode":
        comps = _closed_two_mode_curvature(point)
    else:
        raise ValueError(f"no closed-form curvature for model {point.model!r}")
    # normalise printed pair order to the canonical index order
    order = {name: k for k, name in enumerate(wirtinger_indices(point.model))}
    canon = {}
    for (mu, nu), val in comps.items():
        if order[mu] < order[nu]:
            canon[(mu, nu)] = val
        else:
            canon[(nu, mu)] = -val
    return TwoForm(point.model, point, canon, source="closed_form")


# ---------------------------------------------------------------------------
# plane contractions and holonomy-algebra span
# ---------------------------------------------------------------------------

def _real_axis_forms(model: str) -> list[dict[str, complex]]:
    """d(index)/d(axis) for each real coordinate axis of the model."""
    info = MODEL_INFO[model]
    forms = []
    for name in info.coords:
        forms.append({name: 1.0, name + "_bar": 1.0})
        forms.append({name: 1.0j, name + "_bar": -1.0j})
    for name in info.phases:
        forms.append({name: 1.0})
    return forms


def plane_contractions(two_form: TwoForm) -> list[np.ndarray]:
    """F contracted with every real coordinate 2-plane (e_a, e_b), a < b."""
    axes = _real_axis_forms(two_form.model)
    names = wirtinger_indices(two_form.model)
    out = []
    m = MODEL_INFO[two_form.model].fiber_dim
    for a in range(len(axes)):
        for bidx in range(a + 1, len(axes)):
            da, db = axes[a], axes[bidx]
            val = np.zeros((m, m), dtype=complex)
            for i, mu in enumerate(names):
                for nu in names[i + 1:]:
                    wa, wb = da.get(mu, 0.0), db.get(nu, 0.0)
                    wa2, wb2 = db.get(mu, 0.0), da.get(nu, 0.0)
                    weight = wa * wb - wa2 * wb2
                    if weight != 0.0:
                        val += weight * two_form.components[(mu, nu)]
            out.append(val)
    return out


def span_report(
    points: list[ParamPoint],
    model: str,
    mode: str = "validated",
    tol: float = 1e-8,
    h: float = 1e-4,
) -> dict:
    """Rank (and basis) of the Lie algebra generated by curvature values.

    Curvature is differenced from the closed-form connection at each sample
    point, contracted with all real coordinate 2-planes, projected to the
    anti-Hermitian part and closed under commutators.  For the two-mode
    model the closure structure (one-dimensional centre plus a simple part
    closed under brackets) is reported alongside the rank.
    """
    if not points:
        raise ValueError("span_report needs at least one sample point")
    src = ClosedFormSource(model, mode)
    values = []
    for p in points:
        tf = numeric_two_form(p, src, h=h, richardson=False)
        values.extend(anti_hermitian_part(v) for v in plane_contractions(tf))
    basis = lie_closure(values, anti_hermitian_projection=True, tol=tol)
    rank = len(basis)
    report = {"model": model, "samples": len(points), "rank": rank, "basis": basis}
    if model == "two_mode":
        report.update(_direct_sum_structure(basis, tol))
    return report


def _direct_sum_structure(basis: list[np.ndarray], tol: float) -> dict:
    """Centre / derived-subalgebra ranks of a closure basis."""
    k = len(basis)
    rows = []
    for j in range(k):
        cols = []
        for b in basis:
            c = comm(basis[j], b)
            cols.append(np.concatenate([c.real.ravel(), c.imag.ravel()]))
        rows.append(np.concatenate(cols))
    ad = np.array(rows)  # row j = action of basis[j] on everything
    svals = np.linalg.svd(ad, compute_uv=False)
    centre_dim = int(np.sum(svals <= tol * max(svals[0], 1.0))) if k else 0
    derived = [comm(a, b) for i, a in enumerate(basis) for b in basis[i + 1:]]
    derived_rank = real_rank(derived, tol) if derived else 0
    both_rank = real_rank(derived + basis, tol)
    return {
        "centre_dim": centre_dim,
        "derived_rank": derived_rank,
        "direct_sum": bool(centre_dim + derived_rank == both_rank == k),
    }
