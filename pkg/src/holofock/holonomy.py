"""Loops in parameter space and path-ordered transport.

A :class:`Loop` is a closed piecewise path through waypoints with a fixed
interpolation rule; :func:`transport` integrates the connection one-form
along it with a fourth-order Magnus stepper (two-point Gauss nodes with a
commutator correction), producing the holonomy unitary acting on vacuum
fiber columns as ``x -> Gamma x``.

Ordering convention: later steps multiply on the LEFT,
``Gamma = E_n ... E_2 E_1`` in traversal order (the evolution reading of
the path-ordering symbol).  Under this ordering a small counterclockwise
square of side eps in the (x, y) plane of one complex coordinate obeys

    Gamma = I + eps² (dA_xy - [A_x, A_y]) + O(eps³),

whereas the curvature module's plane contraction C carries the opposite
commutator sign, C = dA_xy + [A_x, A_y] (that sign pairs with the
right-multiplied ordering).  The bridge between the two conventions is

    Gamma = I + eps² (C - 2 [A_x, A_y]) + O(eps³),

with A_x, A_y the connection one-form contracted with the plane's axis
vectors at the base point; :func:`square_loop_prediction` evaluates it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .linalg import lie_closure, unitarity_defect
from .operators import MODEL_INFO, ParamPoint

__all__ = [
    "Loop",
    "HolonomyResult",
    "transport",
    "holonomy_algebra_estimate",
    "square_loop",
    "square_loop_prediction",
    "loop_to_dict",
    "loop_from_dict",
    "save_loop",
    "load_loop",
]

_GAUSS_OFFSETS = (0.5 - np.sqrt(3.0) / 6.0, 0.5 + np.sqrt(3.0) / 6.0)


@dataclass(frozen=True)
class Loop:
    """Closed piecewise path: first waypoint equals the last one exactly."""

    model: str
    waypoints: tuple[ParamPoint, ...]
    interpolation: str = "linear"
    steps: int = 256

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ValueError("a loop needs at least two waypoints")
        if any(w.model != self.model for w in self.waypoints):
            raise ValueError("waypoint model mismatch")
        first, last = self.waypoints[0], self.waypoints[-1]
        if first.coords != last.coords or first.phases != last.phases:
            raise ValueError("loop is not closed (first waypoint != last)")
        if self.interpolation not in ("linear", "trigonometric"):
            raise ValueError(f"unknown interpolation {self.interpolation!r}")
        if self.steps < 1:
            raise ValueError("steps per segment must be positive")

    @property
    def segments(self) -> int:
        return len(self.waypoints) - 1

    def base_point(self) -> ParamPoint:
        return self.waypoints[0]

    def reversed(self) -> "Loop":
        return Loop(self.model, tuple(reversed(self.waypoints)),
                    self.interpolation, self.steps)

    def nodes(self, steps: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Gauss nodes along the whole loop.

        Returns (points, tangents), both of shape (segments*steps*2, d) in
        the model's real coordinate layout; tangents are d(path)/d(local
        step time), so each integration step has unit length.
        """
        n = self.steps if steps is None else steps
        reals = np.array([w.as_real_vector() for w in self.waypoints])
        pts, tans = [], []
        for s in range(self.segments):
            p0, p1 = reals[s], reals[s + 1]
            delta = p1 - p0
            for k in range(n):
                for c in _GAUSS_OFFSETS:
                    tau = (k + c) / n
                    if self.interpolation == "linear":
                        w, dw = tau, 1.0
                    else:
                        w = 0.5 * (1.0 - np.cos(np.pi * tau))
                        dw = 0.5 * np.pi * np.sin(np.pi * tau)
                    pts.append(p0 + w * delta)
                    tans.append(delta * (dw / n))
        return np.array(pts), np.array(tans)


@dataclass
class HolonomyResult:
    gamma: np.ndarray
    steps: int
    unitarity_defect: float
    integrator: str
    meta: dict = field(default_factory=dict)


def _expm_antiherm_batch(omega: np.ndarray) -> np.ndarray:
    """Batched exponentials of anti-Hermitian (n, m, m) matrices."""
    w, v = np.linalg.eigh(-1j * omega)
    phase = np.exp(1j * w)
    return np.einsum("nij,nj,nkj->nik", v, phase, v.conj())


def _transport_once(loop: Loop, source, steps: int, integrator: str) -> np.ndarray:
    pts, tans = loop.nodes(steps)
    a = source.contract_batch(pts, tans)  # (2*nsteps, m, m), tangent-weighted
    a1, a2 = a[0::2], a[1::2]
    if integrator == "magnus4":
        omega = 0.5 * (a1 + a2) + (np.sqrt(3.0) / 12.0) * (a2 @ a1 - a1 @ a2)
    elif integrator == "midpoint":
        omega = 0.5 * (a1 + a2)
    else:
        raise ValueError(f"unknown integrator {integrator!r}")
    # symmetrise away rounding: omega must be exactly anti-Hermitian for eigh
    omega = 0.5 * (omega - np.conj(np.swapaxes(omega, -1, -2)))
    exps = _expm_antiherm_batch(omega)
    m = exps.shape[-1]
    gamma = np.eye(m, dtype=complex)
    for k in range(exps.shape[0]):
        gamma = exps[k] @ gamma
    return gamma


def transport(
    loop: Loop,
    source,
    integrator: str = "magnus4",
    steps: int | None = None,
    refine_tol: float | None = None,
    max_steps: int = 1 << 16,
) -> HolonomyResult:
    """Path-ordered exponential of the connection around ``loop``.

    With ``refine_tol`` set, the step count per segment doubles until two
    successive results differ by less than the tolerance (or the cap is
    reached, which raises).
    """
    n = loop.steps if steps is None else steps
    gamma = _transport_once(loop, source, n, integrator)
    refinements = 0
    if refine_tol is not None:
        while True:
            if n * 2 > max_steps:
                raise RuntimeError(
                    f"transport did not stabilise to {refine_tol:g} within "
                    f"{max_steps} steps per segment"
                )
            nxt = _transport_once(loop, source, n * 2, integrator)
            delta = float(np.linalg.norm(nxt - gamma))
            gamma, n = nxt, n * 2
            refinements += 1
            if delta < refine_tol:
                break
    return HolonomyResult(
        gamma=gamma,
        steps=n,
        unitarity_defect=unitarity_defect(gamma),
        integrator=integrator,
        meta={"segments": loop.segments, "refinements": refinements},
    )


def holonomy_algebra_estimate(
    loops: list[Loop],
    source,
    tol: float = 1e-8,
    **transport_kw,
) -> dict:
    """Empirical lower bound on the holonomy algebra dimension.

    Principal logarithms of the loop holonomies are closed under
    commutators.  Loops must stay close enough to the identity for the
    principal branch to be unambiguous (``||Gamma - I||_2 < 1``).
    """
    if not loops:
        raise ValueError("holonomy_algebra_estimate needs at least one loop")
    logs = []
    for loop in loops:
        res = transport(loop, source, **transport_kw)
        dist = float(np.linalg.norm(res.gamma - np.eye(res.gamma.shape[0]), 2))
        if dist >= 1.0:
            raise ValueError(
                f"holonomy too far from the identity (|Γ-I| = {dist:.3f}); "
                f"shrink the loop"
            )
        logs.append(scipy.linalg.logm(res.gamma))
    basis = lie_closure(logs, anti_hermitian_projection=True, tol=tol)
    return {"rank": len(basis), "basis": basis, "loops": len(loops)}


def square_loop(
    base: ParamPoint,
    coord: str,
    eps: float,
    steps: int = 64,
) -> Loop:
    """Counterclockwise square of side ``eps`` in the (x, y) plane of one
    complex coordinate, anchored at ``base``."""
    corners = [0.0, eps, eps + 1j * eps, 1j * eps, 0.0]
    way = tuple(base.shift(coord, c) for c in corners)
    return Loop(base.model, way, "linear", steps)


def square_loop_prediction(
    base: ParamPoint,
    coord: str,
    connection,
    two_form,
) -> np.ndarray:
    """Leading (eps²) holonomy coefficient of a counterclockwise square.

    Combines the curvature plane contraction with the ordering bridge of
    this module's convention: ``C - 2 [A_x, A_y]`` where C is the (x, y)
    plane contraction of ``two_form`` at ``base`` and A_x, A_y the values
    of ``connection`` on the plane's axis vectors.
    """
    info = MODEL_INFO[base.model]
    d = 2 * len(info.coords) + len(info.phases)
    i = info.coords.index(coord)
    ex = np.zeros(d)
    ey = np.zeros(d)
    ex[2 * i] = 1.0
    ey[2 * i + 1] = 1.0
    ax = connection.contract(ex)
    ay = connection.contract(ey)
    c = -2j * two_form.component(coord, coord + "_bar")
    return c - 2.0 * (ax @ ay - ay @ ax)


# ---------------------------------------------------------------------------
# loop file format (JSON): complex coordinates as [re, im] pairs, phases raw
# ---------------------------------------------------------------------------

def loop_to_dict(loop: Loop) -> dict:
    return {
        "model": loop.model,
        "interpolation": loop.interpolation,
        "steps": loop.steps,
        "waypoints": [
            [[c.real, c.imag] for c in w.coords] for w in loop.waypoints
        ],
        "phases": [list(w.phases) for w in loop.waypoints]
        if MODEL_INFO[loop.model].phases
        else None,
    }


def loop_from_dict(data: dict) -> Loop:
    model = data["model"]
    phases = data.get("phases")
    waypoints = []
    for i, wp in enumerate(data["waypoints"]):
        coords = tuple(complex(re, im) for re, im in wp)
        ph = tuple(phases[i]) if phases else ()
        waypoints.append(ParamPoint(model, coords, ph))
    return Loop(model, tuple(waypoints), data.get("interpolation", "linear"),
                int(data.get("steps", 256)))


def save_loop(loop: Loop, path) -> None:
    with open(path, "w") as fh:
        json.dump(loop_to_dict(loop), fh, indent=1)


def load_loop(path) -> Loop:
    with open(path) as fh:
        return loop_from_dict(json.load(fh))
