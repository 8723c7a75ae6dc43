"""Unitary coherent-operator families on truncated Fock spaces.

Four families, each with an optional real phase parameter that reduces to
the plain family at phase zero:

=================  ====  =======================================  =========
kind               modes generator                                phase term
=================  ====  =======================================  =========
displacement       1     ``alpha a† - conj(alpha) a``             ``i s N``
squeeze            1     ``beta K+ - conj(beta) K-``              ``2i t K3``
beamsplitter       2     ``xi J+ - conj(xi) J-``                  ``2i u J3``
two_mode_squeeze   2     ``zeta K+ - conj(zeta) K-``              ``2i v K3``
=================  ====  =======================================  =========

Every family can be built either by direct matrix exponentiation or as a
Gauss-decomposed product ``scalar * e^{c+ R} e^{c0 C} e^{c- L}`` of raising,
Cartan and lowering factors.  Both constructions agree on the guarded
subblock away from the truncation boundary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .fock import FockSpace, build_space
from .linalg import expm_apply, expm_chain

__all__ = [
    "ParamPoint",
    "MODEL_INFO",
    "DisentangleScalars",
    "disentangle_scalars",
    "operator",
    "displacement",
    "squeeze",
    "beamsplitter",
    "two_mode_squeeze",
    "composite",
    "composite_columns",
    "truncation_leakage",
    "SINGULAR_MARGIN",
]

# Gauss-decomposed beamsplitter factors blow up at lam = pi/2 (the middle
# factor's 2x2 determinant entry d vanishes there); reject a safety margin
# before the pole.  Direct exponentiation carries no such restriction.
SINGULAR_MARGIN = 0.05

_SERIES_EPS = 1e-8  # |z| below this uses the 4-term Taylor branches


# ---------------------------------------------------------------------------
# scalar helpers (entire functions of z = kappa^2, safe for negative z)
# ---------------------------------------------------------------------------

def sinhc_sq(z: float) -> float:
    """``sinh(sqrt(z))/sqrt(z)`` continued through z <= 0 (where it equals
    ``sin(sqrt(-z))/sqrt(-z)``)."""
    if abs(z) < _SERIES_EPS:
        return 1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0
    if z > 0:
        r = math.sqrt(z)
        return math.sinh(r) / r
    r = math.sqrt(-z)
    return math.sin(r) / r


def cosh_sq(z: float) -> float:
    """``cosh(sqrt(z))`` continued through z <= 0 (= ``cos(sqrt(-z))``)."""
    if abs(z) < _SERIES_EPS:
        return 1.0 + z / 2.0 + z * z / 24.0 + z * z * z / 720.0
    if z > 0:
        return math.cosh(math.sqrt(z))
    return math.cos(math.sqrt(-z))


def tanhc(r: float) -> float:
    """``tanh(r)/r`` with its series limit 1 at r = 0."""
    if abs(r) < 1e-4:
        r2 = r * r
        return 1.0 - r2 / 3.0 + 2.0 * r2 * r2 / 15.0
    return math.tanh(r) / r


def f_phase(s: float) -> complex:
    """``(e^{is} - 1)/(is)``; equals 1 at s = 0."""
    if abs(s) < 1e-4:
        x = 1j * s
        return 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0
    return (cmath.exp(1j * s) - 1.0) / (1j * s)


def g_phase(s: float) -> complex:
    """``(e^{is} - 1 - is)/s**2``; equals -1/2 at s = 0."""
    if abs(s) < 1e-4:
        x = 1j * s
        return -(0.5 + x / 6.0 + x * x / 24.0 + x * x * x / 120.0)
    return (cmath.exp(1j * s) - (1.0 + 1j * s)) / (s * s)


# ---------------------------------------------------------------------------
# parameter points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelInfo:
    coords: tuple[str, ...]
    phases: tuple[str, ...]
    modes: int
    fiber_dim: int


MODEL_INFO: dict[str, ModelInfo] = {
    "one_mode": ModelInfo(("alpha", "beta"), (), 1, 2),
    "two_mode": ModelInfo(("xi", "zeta"), (), 2, 4),
    "full": ModelInfo(
        ("alpha1", "beta1", "xi", "zeta", "alpha2", "beta2"), (), 2, 4
    ),
    "extended": ModelInfo(
        ("alpha1", "beta1", "xi", "zeta", "alpha2", "beta2"),
        ("s1", "t1", "u", "v", "s2", "t2"),
        2,
        4,
    ),
    "doubled": ModelInfo(
        (
            "alpha1_1", "beta1_1", "xi_1", "zeta_1", "alpha2_1", "beta2_1",
            "alpha1_2", "beta1_2", "xi_2", "zeta_2", "alpha2_2", "beta2_2",
        ),
        (),
        2,
        4,
    ),
}


@dataclass(frozen=True)
class ParamPoint:
    """A point of a model's parameter manifold.

    ``coords`` are the complex coordinates in the model's declared order;
    ``phases`` the real phase coordinates (extended model only).
    """

    model: str
    coords: tuple[complex, ...]
    phases: tuple[float, ...] = ()

    def __post_init__(self):
        info = MODEL_INFO.get(self.model)
        if info is None:
            raise ValueError(f"unknown model {self.model!r}")
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        if len(self.coords) != len(info.coords):
            raise ValueError(
                f"model {self.model!r} needs {len(info.coords)} complex "
                f"coordinates, got {len(self.coords)}"
            )
        if len(self.phases) != len(info.phases):
            raise ValueError(
                f"model {self.model!r} needs {len(info.phases)} phase "
                f"coordinates, got {len(self.phases)}"
            )

    @property
    def info(self) -> ModelInfo:
        return MODEL_INFO[self.model]

    def coord(self, name: str) -> complex:
        info = self.info
        if name in info.coords:
            return self.coords[info.coords.index(name)]
        if name in info.phases:
            return self.phases[info.phases.index(name)]
        raise KeyError(f"coordinate {name!r} not in model {self.model!r}")

    def replace(self, name: str, value: complex) -> "ParamPoint":
        info = self.info
        if name in info.coords:
            i = info.coords.index(name)
            coords = self.coords[:i] + (complex(value),) + self.coords[i + 1:]
            return ParamPoint(self.model, coords, self.phases)
        if name in info.phases:
            i = info.phases.index(name)
            phases = self.phases[:i] + (float(value.real),) + self.phases[i + 1:]
            return ParamPoint(self.model, self.coords, phases)
        raise KeyError(f"coordinate {name!r} not in model {self.model!r}")

    def shift(self, name: str, delta: complex) -> "ParamPoint":
        return self.replace(name, self.coord(name) + delta)

    def as_real_vector(self) -> np.ndarray:
        """Real coordinates: (re, im) per complex coordinate, then phases."""
        parts = []
        for c in self.coords:
            parts.extend([c.real, c.imag])
        parts.extend(self.phases)
        return np.array(parts)

    @classmethod
    def from_real_vector(cls, model: str, vec: np.ndarray) -> "ParamPoint":
        info = MODEL_INFO[model]
        nc = len(info.coords)
        vec = np.asarray(vec, dtype=float)
        if vec.size != 2 * nc + len(info.phases):
            raise ValueError(
                f"model {model!r} needs {2 * nc + len(info.phases)} real "
                f"coordinates, got {vec.size}"
            )
        coords = tuple(complex(vec[2 * i], vec[2 * i + 1]) for i in range(nc))
        return cls(model, coords, tuple(vec[2 * nc:]))

    @classmethod
    def origin(cls, model: str) -> "ParamPoint":
        info = MODEL_INFO[model]
        return cls(model, (0j,) * len(info.coords), (0.0,) * len(info.phases))


# ---------------------------------------------------------------------------
# disentangling scalars
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DisentangleScalars:
    """Coefficients of the Gauss-decomposed product
    ``scalar * e^{upper R} e^{mid C} e^{lower L}``."""

    upper: complex
    mid: complex
    lower: complex
    scalar: complex = 1.0


def _check_beamsplitter_domain(lam: float):
    if lam >= math.pi / 2 - SINGULAR_MARGIN:
        raise ValueError(
            f"beamsplitter parameter lambda={lam:.4f} is inside the singular "
            f"margin of pi/2; use the direct construction instead"
        )


def disentangle_scalars(kind: str, param: complex, phase: float = 0.0) -> DisentangleScalars:
    """Scalar factor coefficients of the Gauss decomposition for one family.

    For the compact beamsplitter family the decomposition has a pole at
    ``sqrt(|param|^2 + phase^2) = pi/2``; parameters within
    :data:`SINGULAR_MARGIN` of it are rejected.  Squeeze-type families hit
    the analogous pole only when the phase dominates the modulus.
    """
    param = complex(param)
    phase = float(phase)
    if kind == "displacement":
        f = f_phase(phase)
        g = g_phase(phase)
        return DisentangleScalars(
            upper=f * param,
            mid=1j * phase,
            lower=-f * param.conjugate(),
            scalar=cmath.exp(g * abs(param) ** 2),
        )
    if kind in ("squeeze", "two_mode_squeeze"):
        z = abs(param) ** 2 - phase**2
        if z < 0 and math.sqrt(-z) >= math.pi / 2 - SINGULAR_MARGIN:
            raise ValueError(
                f"{kind} parameters (|param|={abs(param):.4f}, phase={phase:.4f}) "
                f"are inside the singular margin of the decomposition"
            )
        sc = sinhc_sq(z)
        d = cosh_sq(z) - 1j * phase * sc
        return DisentangleScalars(
            upper=param * sc / d,
            mid=-2.0 * cmath.log(d),
            lower=-param.conjugate() * sc / d,
        )
    if kind == "beamsplitter":
        lam = math.sqrt(abs(param) ** 2 + phase**2)
        _check_beamsplitter_domain(lam)
        z = -(lam**2)
        sc = sinhc_sq(z)  # sin(lam)/lam
        d = cosh_sq(z) - 1j * phase * sc  # cos(lam) - i u sin(lam)/lam
        return DisentangleScalars(
            upper=param * sc / d,
            mid=-2.0 * cmath.log(d),
            lower=-param.conjugate() * sc / d,
        )
    raise ValueError(f"unknown operator kind {kind!r}")


# ---------------------------------------------------------------------------
# operator construction
# ---------------------------------------------------------------------------

_KIND_MODES = {
    "displacement": 1,
    "squeeze": 1,
    "beamsplitter": 2,
    "two_mode_squeeze": 2,
}


def _triple(space: FockSpace, kind: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(raising, Cartan, lowering) generators of a family on this space."""
    g = space.generators()
    if kind == "displacement":
        return space.adag(1), space.n(1), space.a(1)
    if kind == "squeeze":
        return g["K+"], g["K3"], g["K-"]
    if kind == "beamsplitter":
        return g["J+"], g["J3"], g["J-"]
    if kind == "two_mode_squeeze":
        return g["K+"], g["K3"], g["K-"]
    raise ValueError(f"unknown operator kind {kind!r}")


def _generator(space: FockSpace, kind: str, param: complex, phase: float) -> np.ndarray:
    raise_, cartan, lower = _triple(space, kind)
    gen = param * raise_ - np.conjugate(param) * lower
    if phase != 0.0:
        factor = 1j if kind == "displacement" else 2j
        gen = gen + factor * phase * cartan
    return gen


def operator(
    space: FockSpace,
    kind: str,
    param: complex,
    phase: float = 0.0,
    method: str = "direct",
    keep: np.ndarray | None = None,
) -> np.ndarray:
    """Build one coherent-operator family member.

    ``method='direct'`` exponentiates the full generator; ``'disentangled'``
    multiplies the three Gauss factors.  ``keep`` restricts the result to a
    row/column index set, computed blockwise so large two-mode operators
    never materialise in full.
    """
    wanted = _KIND_MODES[kind]
    if space.modes != wanted:
        raise ValueError(f"{kind} needs a {wanted}-mode space, got {space.modes}")
    if method == "direct":
        return expm_chain([_generator(space, kind, param, phase)], keep=keep)
    if method == "disentangled":
        sc = disentangle_scalars(kind, param, phase)
        raise_, cartan, lower = _triple(space, kind)
        return expm_chain(
            [sc.upper * raise_, sc.mid * cartan, sc.lower * lower],
            keep=keep,
            prefactor=sc.scalar,
        )
    raise ValueError(f"unknown method {method!r}")


def apply_operator(
    space: FockSpace,
    kind: str,
    param: complex,
    phase: float,
    cols: np.ndarray,
    method: str = "direct",
) -> np.ndarray:
    """``operator(...) @ cols`` computed sector-wise, never materialising
    the full operator (the hot path for finite-difference oracles)."""
    wanted = _KIND_MODES[kind]
    if space.modes != wanted:
        raise ValueError(f"{kind} needs a {wanted}-mode space, got {space.modes}")
    if method == "direct":
        return expm_apply([_generator(space, kind, param, phase)], cols)
    if method == "disentangled":
        sc = disentangle_scalars(kind, param, phase)
        raise_, cartan, lower = _triple(space, kind)
        return expm_apply(
            [sc.upper * raise_, sc.mid * cartan, sc.lower * lower],
            cols,
            prefactor=sc.scalar,
        )
    raise ValueError(f"unknown method {method!r}")


def displacement(space: FockSpace, alpha: complex, phase: float = 0.0, **kw) -> np.ndarray:
    return operator(space, "displacement", alpha, phase, **kw)


def squeeze(space: FockSpace, beta: complex, phase: float = 0.0, **kw) -> np.ndarray:
    return operator(space, "squeeze", beta, phase, **kw)


def beamsplitter(space: FockSpace, xi: complex, phase: float = 0.0, **kw) -> np.ndarray:
    return operator(space, "beamsplitter", xi, phase, **kw)


def two_mode_squeeze(space: FockSpace, zeta: complex, phase: float = 0.0, **kw) -> np.ndarray:
    return operator(space, "two_mode_squeeze", zeta, phase, **kw)


def truncation_leakage(op: np.ndarray, space: FockSpace, levels: int | None = None) -> float:
    """``||(O†O - I)|_guard||_F``, the unitarity defect on the guarded block."""
    idx = space.guarded_indices(levels if levels is not None else space.guard_default())
    defect = op.conj().T @ op - np.eye(op.shape[0])
    return float(np.linalg.norm(defect[np.ix_(idx, idx)]))


# ---------------------------------------------------------------------------
# composites  O = D S,  W = U V,  Z = O1 W O2 (and the phase-extended chain)
# ---------------------------------------------------------------------------

def _one_mode_factor(cutoff: int, alpha, beta, s=0.0, t=0.0, method="direct") -> np.ndarray:
    sub = build_space(1, cutoff)
    d = operator(sub, "displacement", alpha, s, method=method)
    sq = operator(sub, "squeeze", beta, t, method=method)
    return d @ sq


def _apply_mode(op1: np.ndarray, mode: int, cols: np.ndarray, cutoff: int) -> np.ndarray:
    """Apply a one-mode operator to one tensor factor of a column block."""
    c = cols.shape[1]
    x = cols.reshape(cutoff, cutoff, c)
    if mode == 1:
        y = np.einsum("ij,jkc->ikc", op1, x)
    else:
        y = np.einsum("kj,ijc->ikc", op1, x)
    return y.reshape(cutoff * cutoff, c)


def _factor_chain(point: ParamPoint, space: FockSpace, method: str) -> list:
    """Z as an ordered factor list [(how, payload), ...], leftmost first.

    ``how`` is 'mode1'/'mode2' for one-mode factors (payload: the one-mode
    matrix, applied via a tensor-leg contraction) or 'two' for genuine
    two-mode factors (payload: the (kind, param, phase) triple, applied
    sector-wise without materialising the operator).
    """
    model = point.model
    N = space.cutoff
    if model == "one_mode":
        raise ValueError("one_mode composites act on a 1-mode space; use composite()")

    def leg(coords, phases):
        a1, b1, xi, zt, a2, b2 = coords
        s1, t1, u, v, s2, t2 = phases
        return [
            ("mode1", _one_mode_factor(N, a1, b1, s1, t1, method)),
            ("two", ("beamsplitter", xi, u)),
            ("two", ("two_mode_squeeze", zt, v)),
            ("mode2", _one_mode_factor(N, a2, b2, s2, t2, method)),
        ]

    if model == "two_mode":
        xi, zt = point.coords
        return [
            ("two", ("beamsplitter", xi, 0.0)),
            ("two", ("two_mode_squeeze", zt, 0.0)),
        ]
    if model == "full":
        return leg(point.coords, (0.0,) * 6)
    if model == "extended":
        return leg(point.coords, point.phases)
    if model == "doubled":
        first = leg(point.coords[:6], (0.0,) * 6)
        second = leg(point.coords[6:], (0.0,) * 6)
        return second + first
    raise ValueError(f"unknown model {model!r}")


def composite_columns(
    point: ParamPoint, space: FockSpace, cols: np.ndarray, method: str = "direct"
) -> np.ndarray:
    """``Z(point) @ cols`` without forming the full composite matrix."""
    if point.model == "one_mode":
        return composite(point, space, method) @ cols
    out = np.asarray(cols, dtype=complex)
    for how, payload in reversed(_factor_chain(point, space, method)):
        if how == "two":
            kind, param, phase = payload
            out = apply_operator(space, kind, param, phase, out, method)
        else:
            out = _apply_mode(payload, 1 if how == "mode1" else 2, out, space.cutoff)
    return out


def composite(point: ParamPoint, space: FockSpace, method: str = "direct") -> np.ndarray:
    """The model's full unitary at ``point`` (identity at the origin)."""
    if point.model == "one_mode":
        if space.modes != 1:
            raise ValueError("one_mode composite needs a 1-mode space")
        alpha, beta = point.coords
        d = operator(space, "displacement", alpha, method=method)
        s = operator(space, "squeeze", beta, method=method)
        return d @ s
    if space.modes != 2:
        raise ValueError(f"{point.model} composite needs a 2-mode space")
    return composite_columns(point, space, np.eye(space.total_dim, dtype=complex), method)
