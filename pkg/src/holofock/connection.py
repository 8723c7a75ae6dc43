"""Berry connection components A_chi = <vac| Z^{-1} d_chi Z |vac>.

Two evaluation routes:

* closed forms -- scalar coefficient functions multiplying the constant
  vacuum-sandwich matrices.  ``mode='validated'`` evaluates the structurally
  derived coefficients (cross-checked against the finite-difference oracle
  and the affine adjoint-table product); ``mode='paper'`` evaluates the
  uncorrected variant kept for comparison, which differs in the
  trig/hyperbolic choice inside c0 and c3, in the sign of the compact
  family's Cartan coefficient, and in three factor-of-two slips in the
  zeta component.
* a numeric oracle -- Wirtinger central differences of the composite
  unitary, sandwiched over the vacuum frame.

Conventions: the Wirtinger derivative is (d_x - i d_y)/2; anti-holomorphic
components are obtained from the holomorphic ones as -A_chi†; real phase
coordinates carry plain central differences and their components are
already anti-Hermitian.

Closed forms evaluate batched: coordinate arrays of shape (n,) produce
component stacks of shape (n, m, m), which is what the loop integrator
consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import FockSpace, build_space
from .frames import (
    base_matrices_1mode,
    base_matrices_2mode,
    frame,
    hatted_family,
    vacuum_gram,
)
from .operators import MODEL_INFO, ParamPoint, composite_columns

__all__ = [
    "Connection",
    "closed_form",
    "closed_form_batch",
    "numeric_component",
    "numeric_connection",
    "pullback_coefficients",
    "compare_modes",
    "default_space",
    "ClosedFormSource",
    "NumericSource",
    "DEFAULT_STEP",
]

DEFAULT_STEP = 1e-5
_DEFAULT_CUTOFF = {1: 64, 2: 24}


# ---------------------------------------------------------------------------
# vectorised scalar helpers (entire in z = kappa^2, so trig and hyperbolic
# branches share code; z >= 0 hyperbolic, z < 0 trigonometric)
# ---------------------------------------------------------------------------

def _sinhc_sq(z):
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-8
    zp = np.where(z > 0, z, 1.0)
    zn = np.where(z < 0, -z, 1.0)
    out = np.where(
        z > 0,
        np.sinh(np.sqrt(zp)) / np.sqrt(zp),
        np.sin(np.sqrt(zn)) / np.sqrt(zn),
    )
    series = 1.0 + z / 6.0 + z * z / 120.0 + z**3 / 5040.0
    return np.where(small, series, out)


def _cosh_sq(z):
    z = np.asarray(z, dtype=float)
    zp = np.where(z > 0, z, 0.0)
    zn = np.where(z <= 0, -z, 0.0)
    return np.where(z > 0, np.cosh(np.sqrt(zp)), np.cos(np.sqrt(zn)))


def _ratio_m1(z):
    """``(sinh(2k)/(2k) - 1)/k²`` as a function of z = k² (entire, 2/3 at 0)."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-7
    zsafe = np.where(small, 1.0, z)
    out = (_sinhc_sq(4.0 * zsafe) - 1.0) / zsafe
    series = 2.0 / 3.0 + 2.0 * z / 15.0 + 4.0 * z * z / 315.0
    return np.where(small, series, out)


def _pqr(param, hyperbolic: bool):
    """The three coefficient functions of the squeeze-type derivative expansion:
    ``X^{-1} dX = p·(raising block) + q·(Cartan block) + r·(lowering block)``.

    Hyperbolic family: p = (1 + sinh(2r)/(2r))/2, q = conj(β)(cosh2r - 1)/(2r²),
    r = conj(β)²(sinh(2r)/(2r) - 1)/(2r²).  The compact (beamsplitter) family
    replaces sinh/cosh by sin/cos; its Cartan coefficient additionally picks
    up a minus sign from the flipped su(2) structure constant — the derivative
    expansion gives q = conj(ξ)(cos(2r) - 1)/(2r²), confirmed by the
    finite-difference oracle (the uncorrected printed variant has +).
    """
    param = np.asarray(param, dtype=complex)
    mod2 = np.abs(param) ** 2
    z = mod2 if hyperbolic else -mod2
    p = 0.5 * (1.0 + _sinhc_sq(4.0 * z))
    q = np.conj(param) * _sinhc_sq(z) ** 2
    if not hyperbolic:
        q = -q
    sign = 1.0 if hyperbolic else -1.0
    r = np.conj(param) ** 2 * 0.5 * sign * _ratio_m1(z)
    return p, q, r


def _bx(coeff, mat):
    """Broadcast a (n,) coefficient onto a constant matrix."""
    return np.asarray(coeff, dtype=complex)[..., None, None] * mat


# ---------------------------------------------------------------------------
# connection container
# ---------------------------------------------------------------------------

@dataclass
class Connection:
    """Holomorphic (and real-phase) connection components at one point."""

    model: str
    point: ParamPoint
    components: dict[str, np.ndarray]
    source: str = "closed_form"
    meta: dict = field(default_factory=dict)

    @property
    def fiber_dim(self) -> int:
        return MODEL_INFO[self.model].fiber_dim

    def component(self, name: str, bar: bool = False) -> np.ndarray:
        a = self.components[name]
        return -a.conj().T if bar else a

    def contract(self, tangent: np.ndarray) -> np.ndarray:
        """Anti-Hermitian value of the one-form on a real tangent vector.

        ``tangent`` uses the model's real layout: (x, y) per complex
        coordinate followed by the real phases.
        """
        info = MODEL_INFO[self.model]
        tangent = np.asarray(tangent, dtype=float)
        expected = 2 * len(info.coords) + len(info.phases)
        if tangent.size != expected:
            raise ValueError(f"tangent needs {expected} entries, got {tangent.size}")
        m = self.fiber_dim
        out = np.zeros((m, m), dtype=complex)
        for i, name in enumerate(info.coords):
            dchi = tangent[2 * i] + 1j * tangent[2 * i + 1]
            if dchi != 0.0:
                a = self.components[name]
                out += a * dchi - a.conj().T * np.conj(dchi)
        for j, name in enumerate(info.phases):
            t = tangent[2 * len(info.coords) + j]
            if t != 0.0:
                out += self.components[name] * t
        return out


def default_space(model: str, cutoff: int | None = None) -> FockSpace:
    modes = MODEL_INFO[model].modes
    return build_space(modes, cutoff if cutoff is not None else _DEFAULT_CUTOFF[modes])


# ---------------------------------------------------------------------------
# closed forms (batched over the leading axis)
# ---------------------------------------------------------------------------

_B1 = base_matrices_1mode()
_B2 = base_matrices_2mode()
_GRAM = vacuum_gram()
_FAM = hatted_family()
_E1 = np.array([0, 1, 0, 0, 0], dtype=complex)
_E2 = np.array([0, 0, 1, 0, 0], dtype=complex)
_E1D = np.array([0, 0, 0, 1, 0], dtype=complex)
_E2D = np.array([0, 0, 0, 0, 1], dtype=complex)


def _quad(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``<vac| (u·M)(v·M) |vac>`` over the monomial basis (1,a1,a2,a1†,a2†);
    u, v have shape (n, 5), the result (n, 4, 4)."""
    return np.einsum("nm,nk,mkij->nij", u, v, _GRAM)


def _sandwich_vec(u: np.ndarray) -> np.ndarray:
    return np.einsum("nm,mij->nij", u, _GRAM[0])


def _pull_batch(xi, zeta, alpha2, beta2, mode: str):
    sx = xi * _sinhc_sq(-np.abs(xi) ** 2)
    cx = _cosh_sq(-np.abs(xi) ** 2)
    sz = zeta * _sinhc_sq(np.abs(zeta) ** 2)
    cz = _cosh_sq(np.abs(zeta) ** 2)
    d1 = _cosh_sq(np.abs(beta2) ** 2) + 0j
    d2 = beta2 * _sinhc_sq(np.abs(beta2) ** 2)
    sz0 = zeta * _sinhc_sq(-np.abs(zeta) ** 2) if mode == "paper" else sz
    return {
        "c0": sx * cz * alpha2 + cx * sz0 * np.conj(alpha2),
        "c1": cx * cz + 0j,
        "c2": sx * cz * d1 + cx * sz * np.conj(d2),
        "c3": sx * sz0,
        "c4": sx * cz * d2 + cx * sz * np.conj(d1),
        "d1": d1,
        "d2": d2,
    }


def pullback_coefficients(
    xi: complex, zeta: complex, alpha2: complex, beta2: complex, mode: str = "validated"
) -> dict[str, complex]:
    """Expansion coefficients of the conjugated mode-1 annihilator and the
    conjugated mode-2 annihilator:

    ``O2⁻¹W⁻¹ a1 W O2 = c0 + c1 a1 + c2 a2 + c3 a1† + c4 a2†`` and
    ``O2⁻¹ a2 O2 = alpha2 + d1 a2 + d2 a2†``.

    ``mode='paper'`` evaluates the uncorrected variant in which the
    zeta-dependent factor of c0's second term and of c3 is trigonometric
    instead of hyperbolic; 'validated' is fixed by the affine adjoint-table
    product and the numeric oracle.
    """
    if mode not in ("validated", "paper"):
        raise ValueError(f"unknown closed-form mode {mode!r}")
    out = _pull_batch(
        np.asarray(xi, dtype=complex),
        np.asarray(zeta, dtype=complex),
        np.asarray(alpha2, dtype=complex),
        np.asarray(beta2, dtype=complex),
        mode,
    )
    return {k: complex(v) for k, v in out.items()}


def _closed_one_mode(alpha, beta) -> dict[str, np.ndarray]:
    ch = _cosh_sq(np.abs(beta) ** 2)
    shb = np.conj(beta) * _sinhc_sq(np.abs(beta) ** 2)
    a_alpha = (
        _bx(0.5 * np.conj(alpha), _B1["L"])
        + _bx(ch, _B1["F"])
        + _bx(shb, _B1["E"])
    )
    _, q, _ = _pqr(beta, hyperbolic=True)
    a_beta = _bx(0.5 * q, _B1["K"] + 0.5 * _B1["L"])
    return {"alpha": a_alpha, "beta": a_beta}


def _closed_two_mode(xi, zeta, mode: str) -> dict[str, np.ndarray]:
    c2z = _cosh_sq(4.0 * np.abs(zeta) ** 2)  # cosh(2|zeta|)
    px, qx, rx = _pqr(xi, hyperbolic=False)
    if mode == "paper":
        qx = -qx
    # the Cartan block sandwiches to -H^, hence the relative minus
    a_xi = _bx(px * c2z, _B2["F^"]) - _bx(qx, _B2["H^"]) + _bx(rx * c2z, _B2["E^"])
    pz, qz, rz = _pqr(zeta, hyperbolic=True)
    a_zeta = _bx(pz, _B2["C^"]) + _bx(qz, _B2["B^"]) + _bx(rz, _B2["A^"])
    return {"xi": a_xi, "zeta": a_zeta}


def _closed_full(coords: np.ndarray, mode: str) -> dict[str, np.ndarray]:
    a1c, b1c, xi, zeta, a2c, b2c = (coords[:, i] for i in range(6))
    c = _pull_batch(xi, zeta, a2c, b2c, mode)
    x = np.stack([c["c0"], c["c1"], c["c2"], c["c3"], c["c4"]], axis=1)
    xd = np.stack(
        [np.conj(c["c0"]), np.conj(c["c3"]), np.conj(c["c4"]),
         np.conj(c["c1"]), np.conj(c["c2"])], axis=1
    )
    zero = np.zeros_like(a2c)
    y = np.stack([a2c, zero, c["d1"], zero, c["d2"]], axis=1)
    yd = np.stack(
        [np.conj(a2c), zero, np.conj(c["d2"]), zero, np.conj(c["d1"])], axis=1
    )
    n = coords.shape[0]
    e1 = np.broadcast_to(_E1, (n, 5))
    e2 = np.broadcast_to(_E2, (n, 5))
    e1d = np.broadcast_to(_E1D, (n, 5))
    e2d = np.broadcast_to(_E2D, (n, 5))
    eye = _FAM["I"]

    ch1 = _cosh_sq(np.abs(b1c) ** 2)
    sh1 = np.conj(b1c) * _sinhc_sq(np.abs(b1c) ** 2)
    a_alpha1 = (
        _bx(0.5 * np.conj(a1c), eye)
        + ch1[:, None, None] * _sandwich_vec(xd)
        + sh1[:, None, None] * _sandwich_vec(x)
    )

    p1, q1, r1 = _pqr(b1c, hyperbolic=True)
    a_beta1 = (
        p1[:, None, None] * 0.5 * _quad(xd, xd)
        + q1[:, None, None] * 0.5 * (_quad(xd, x) + 0.5 * eye)
        + r1[:, None, None] * 0.5 * _quad(x, x)
    )

    c2z = _cosh_sq(4.0 * np.abs(zeta) ** 2)
    s2z = _sinhc_sq(4.0 * np.abs(zeta) ** 2)  # sinh(2|zeta|)/(2|zeta|)
    px, qx, rx = _pqr(xi, hyperbolic=False)
    if mode == "paper":
        qx = -qx
    a_xi = (
        px[:, None, None] * (
            (c2z * np.ones_like(px))[:, None, None] * _quad(e1d, y)
            + (zeta * s2z)[:, None, None] * _quad(e1d, e1d)
            + (np.conj(zeta) * s2z)[:, None, None] * _quad(y, y)
        )
        + qx[:, None, None] * 0.5 * (_quad(e1d, e1) - _quad(yd, y))
        + rx[:, None, None] * (
            (c2z * np.ones_like(px))[:, None, None] * _quad(yd, e1)
            + (np.conj(zeta) * s2z)[:, None, None] * _quad(e1, e1)
            + (zeta * s2z)[:, None, None] * _quad(yd, yd)
        )
    )

    pz, qz, rz = _pqr(zeta, hyperbolic=True)
    cartan = _quad(e1d, e1) + _quad(yd, y) + eye
    if mode == "paper":
        # the uncorrected variant drops the 1/2 on the Cartan-derived rows
        a_zeta = (
            pz[:, None, None] * _quad(e1d, yd)
            + qz[:, None, None] * cartan
            + rz[:, None, None] * _quad(e1, y)
        )
    else:
        a_zeta = (
            pz[:, None, None] * _quad(e1d, yd)
            + qz[:, None, None] * 0.5 * cartan
            + rz[:, None, None] * _quad(e1, y)
        )

    ch2 = _cosh_sq(np.abs(b2c) ** 2)
    sh2 = np.conj(b2c) * _sinhc_sq(np.abs(b2c) ** 2)
    a_alpha2 = (
        _bx(0.5 * np.conj(a2c), eye)
        + _bx(ch2, _FAM["B2d"])
        + _bx(sh2, _FAM["B2"])
    )

    p2, q2, r2 = _pqr(b2c, hyperbolic=True)
    a_beta2 = (
        p2[:, None, None] * 0.5 * _quad(e2d, e2d)
        + q2[:, None, None] * 0.5 * (_quad(e2d, e2) + 0.5 * eye)
        + r2[:, None, None] * 0.5 * _quad(e2, e2)
    )

    return {
        "alpha1": a_alpha1,
        "beta1": a_beta1,
        "xi": a_xi,
        "zeta": a_zeta,
        "alpha2": a_alpha2,
        "beta2": a_beta2,
    }


def closed_form_batch(model: str, coords: np.ndarray, mode: str = "validated") -> dict:
    """Closed-form components for a batch of points.

    ``coords`` has shape (n, n_coords) complex; each returned component has
    shape (n, m, m).
    """
    if mode not in ("validated", "paper"):
        raise ValueError(f"unknown closed-form mode {mode!r}")
    coords = np.atleast_2d(np.asarray(coords, dtype=complex))
    if model == "one_mode":
        return _closed_one_mode(coords[:, 0], coords[:, 1])
    if model == "two_mode":
        return _closed_two_mode(coords[:, 0], coords[:, 1], mode)
    if model == "full":
        return _closed_full(coords, mode)
    raise ValueError(
        f"model {model!r} has no closed-form connection; use the numeric source"
    )


def closed_form(point: ParamPoint, mode: str = "validated") -> Connection:
    """Closed-form connection at ``point`` (models with printed forms only)."""
    comps = closed_form_batch(point.model, np.array([point.coords]), mode)
    comps = {k: v[0] for k, v in comps.items()}
    return Connection(point.model, point, comps, source=f"closed_form/{mode}")


# ---------------------------------------------------------------------------
# numeric (finite-difference) oracle
# ---------------------------------------------------------------------------

def numeric_component(
    point: ParamPoint,
    name: str,
    space: FockSpace | None = None,
    h: float = DEFAULT_STEP,
    base: np.ndarray | None = None,
    richardson: bool = False,
) -> np.ndarray:
    """One connection component by central differences.

    Complex coordinates use the Wirtinger combination (d_x - i d_y)/2 of
    axis derivatives; real phase coordinates use a plain central
    difference.  ``base`` may carry precomputed ``Z(point) @ frame``.
    """
    if not 1e-7 <= h <= 1e-3:
        raise ValueError(f"step {h} outside the supported range [1e-7, 1e-3]")
    if space is None:
        space = default_space(point.model)
    if richardson:
        coarse = numeric_component(point, name, space, h, base)
        fine = numeric_component(point, name, space, h / 2.0, base)
        return (4.0 * fine - coarse) / 3.0
    fr = frame(space)
    if base is None:
        base = composite_columns(point, space, fr)
    info = MODEL_INFO[point.model]

    def dcols(delta: complex) -> np.ndarray:
        plus = composite_columns(point.shift(name, delta), space, fr)
        minus = composite_columns(point.shift(name, -delta), space, fr)
        return (plus - minus) / (2.0 * abs(delta))

    if name in info.phases:
        d = dcols(h)
    else:
        d = 0.5 * (dcols(h) - 1j * dcols(1j * h))
    out = base.conj().T @ d
    if not np.all(np.isfinite(out)):
        raise ValueError(f"non-finite derivative for {name}; adjust the step")
    return out


def numeric_connection(
    point: ParamPoint,
    space: FockSpace | None = None,
    h: float = DEFAULT_STEP,
    richardson: bool = False,
) -> Connection:
    """All components at ``point`` from the finite-difference oracle."""
    if space is None:
        space = default_space(point.model)
    fr = frame(space)
    base = composite_columns(point, space, fr)
    info = MODEL_INFO[point.model]
    comps = {}
    for name in (*info.coords, *info.phases):
        comps[name] = numeric_component(point, name, space, h, base, richardson)
    return Connection(
        point.model, point, comps, source="numeric",
        meta={"h": h, "cutoff": space.cutoff, "richardson": richardson},
    )


# ---------------------------------------------------------------------------
# sources for loop transport / curvature differencing
# ---------------------------------------------------------------------------

class ClosedFormSource:
    """Batched closed-form connection provider."""

    def __init__(self, model: str, mode: str = "validated"):
        if model not in ("one_mode", "two_mode", "full"):
            raise ValueError(f"no closed form for model {model!r}")
        self.model = model
        self.mode = mode
        self.info = MODEL_INFO[model]

    def __repr__(self):
        return f"ClosedFormSource({self.model!r}, {self.mode!r})"

    def at(self, point: ParamPoint) -> Connection:
        return closed_form(point, self.mode)

    def contract_batch(self, reals: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        """Values of the one-form on tangents at a batch of points.

        ``reals``/``tangents`` have shape (n, d) in the model's real layout;
        the result is (n, m, m) anti-Hermitian.
        """
        reals = np.atleast_2d(reals)
        tangents = np.atleast_2d(tangents)
        nc = len(self.info.coords)
        coords = reals[:, 0:2 * nc:2] + 1j * reals[:, 1:2 * nc:2]
        comps = closed_form_batch(self.model, coords, self.mode)
        m = self.info.fiber_dim
        out = np.zeros((reals.shape[0], m, m), dtype=complex)
        for i, name in enumerate(self.info.coords):
            dchi = tangents[:, 2 * i] + 1j * tangents[:, 2 * i + 1]
            a = comps[name]
            out += a * dchi[:, None, None]
            out -= np.conj(np.swapaxes(a, -1, -2)) * np.conj(dchi)[:, None, None]
        return out


class NumericSource:
    """Finite-difference connection provider (slow path; any model)."""

    def __init__(self, model: str, space: FockSpace | None = None, h: float = DEFAULT_STEP):
        self.model = model
        self.space = space if space is not None else default_space(model)
        self.h = h
        self.info = MODEL_INFO[model]

    def __repr__(self):
        return f"NumericSource({self.model!r}, cutoff={self.space.cutoff})"

    def at(self, point: ParamPoint) -> Connection:
        return numeric_connection(point, self.space, self.h)

    def contract_batch(self, reals: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        reals = np.atleast_2d(reals)
        tangents = np.atleast_2d(tangents)
        m = self.info.fiber_dim
        out = np.zeros((reals.shape[0], m, m), dtype=complex)
        for k in range(reals.shape[0]):
            point = ParamPoint.from_real_vector(self.model, reals[k])
            out[k] = self.at(point).contract(tangents[k])
        return out


# ---------------------------------------------------------------------------
# discrepancy protocol
# ---------------------------------------------------------------------------

def compare_modes(
    point: ParamPoint,
    space: FockSpace | None = None,
    h: float = DEFAULT_STEP,
    tol: float = 1e-5,
) -> dict:
    """Machine-readable discrepancy report: closed forms vs the oracle.

    The numeric oracle is authoritative.  When a closed-form component
    disagrees beyond ``tol`` the oracle is re-run with one Richardson level
    before the entry is recorded, so finite-difference noise cannot be
    mistaken for a formula slip.
    """
    numeric = numeric_connection(point, space)
    report: dict = {
        "model": point.model,
        "point": {"coords": list(map(complex, point.coords)),
                  "phases": list(point.phases)},
        "tolerance": tol,
        "modes": {},
    }
    for mode in ("paper", "validated"):
        try:
            closed = closed_form(point, mode=mode)
        except ValueError:
            continue
        entries = []
        worst = 0.0
        for name, mat in closed.components.items():
            diff = np.abs(mat - numeric.components[name])
            dmax = float(diff.max())
            if dmax > 10.0 * tol:
                refined = numeric_component(point, name, space, h, richardson=True)
                diff = np.abs(mat - refined)
                dmax = float(diff.max())
            worst = max(worst, dmax)
            if dmax > tol:
                i, j = np.unravel_index(int(diff.argmax()), diff.shape)
                ref = numeric.components[name][i, j]
                entries.append({
                    "component": name,
                    "entry": [int(i), int(j)],
                    "closed_value": complex(mat[i, j]),
                    "oracle_value": complex(ref),
                    "abs_diff": dmax,
                })
        report["modes"][mode] = {
            "max_abs_diff": worst,
            "mismatches": entries,
            "pass": not entries,
        }
    return report
