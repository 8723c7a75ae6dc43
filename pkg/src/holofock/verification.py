"""Named verification suites with machine-readable pass/fail checks.

Each suite returns ``{"suite": name, "checks": [...], "passed": bool}``
where every check carries its measured value and frozen tolerance.  The
CLI ``verify`` command and the acceptance test module both run these, so
the gate criteria live in exactly one place.
"""

from __future__ import annotations

import numpy as np

from .adjoint import conjugation_check, product_coefficients, table
from .connection import (
    ClosedFormSource,
    NumericSource,
    closed_form,
    numeric_connection,
    pullback_coefficients,
)
from .curvature import closed_form_curvature, numeric_two_form, span_report
from .fock import build_space
from .frames import base_matrices_1mode
from .gates import dimension_audit, span_audit
from .holonomy import (
    Loop,
    holonomy_algebra_estimate,
    square_loop,
    square_loop_prediction,
    transport,
)
from .linalg import lie_closure
from .operators import MODEL_INFO, ParamPoint, operator

__all__ = ["run_suite", "SUITES"]


def _rng_disc(rng, scale):
    r = scale * np.sqrt(rng.uniform())
    th = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(th), r * np.sin(th))


def _check(name, measured, tolerance, extra=None, mode="leq"):
    if mode == "leq":
        ok = bool(measured <= tolerance)
    elif mode == "eq":
        ok = bool(measured == tolerance)
    elif mode == "geq":
        ok = bool(measured >= tolerance)
    elif mode == "range":
        ok = bool(tolerance[0] <= measured <= tolerance[1])
    else:
        raise ValueError(mode)
    out = {"name": name, "measured": measured, "tolerance": tolerance,
           "comparison": mode, "passed": ok}
    if extra:
        out.update(extra)
    return out


def _suite(name, checks, extra=None):
    out = {"suite": name, "checks": checks,
           "passed": all(c["passed"] for c in checks)}
    if extra:
        out.update(extra)
    return out


# ---------------------------------------------------------------------------

def suite_disentangle(seed=0, cutoff=64, draws=20, guard=12, tol=1e-8):
    """Gauss-decomposed vs directly exponentiated family members.

    The guard (12 lowest levels per mode) is calibrated so that both the
    squeeze-family occupancy spreading and the float cancellation inside
    large-sector Gauss products stay below the tolerance at moduli 0.8.
    """
    rng = np.random.default_rng(seed)
    checks = []
    for kind, modes in [("displacement", 1), ("squeeze", 1),
                        ("beamsplitter", 2), ("two_mode_squeeze", 2)]:
        space = build_space(modes, cutoff)
        keep = space.guarded_indices(guard)
        for phased in (False, True):
            worst = 0.0
            for _ in range(draws):
                param = _rng_disc(rng, 0.8)
                phase = rng.uniform(-0.8, 0.8) if phased else 0.0
                if kind == "beamsplitter":
                    lam = np.hypot(abs(param), phase)
                    if lam >= np.pi / 2 - 0.06:
                        param *= (np.pi / 2 - 0.06) / lam
                        phase *= (np.pi / 2 - 0.06) / lam
                d = operator(space, kind, param, phase, method="direct", keep=keep)
                g = operator(space, kind, param, phase, method="disentangled", keep=keep)
                worst = max(worst, float(np.linalg.norm(d - g)))
            label = f"{kind}{'+phase' if phased else ''}"
            checks.append(_check(f"disentangle/{label}", worst, tol,
                                 {"cutoff": cutoff, "draws": draws, "guard": guard}))
    return _suite("disentangle", checks)


def suite_connection(seed=0):
    """Closed-form connections against the finite-difference oracle."""
    rng = np.random.default_rng(seed)
    checks = []
    discrepancies = []

    # moduli up to 1 squeeze the vacuum states far enough that cutoff 64
    # leaves ~1e-6 truncation residue in the oracle; 96 is comfortable
    space1 = build_space(1, 96)
    worst = 0.0
    for _ in range(20):
        p = ParamPoint("one_mode", (_rng_disc(rng, 1.0), _rng_disc(rng, 1.0)))
        nc = numeric_connection(p, space=space1)
        cf = closed_form(p, "validated")
        worst = max(worst, max(np.abs(cf.components[k] - nc.components[k]).max()
                               for k in cf.components))
    checks.append(_check("connection/one_mode_vs_oracle", worst, 1e-6,
                         {"points": 20, "cutoff": 96}))

    space2 = build_space(2, 56)
    worst = 0.0
    for _ in range(20):
        p = ParamPoint("two_mode", (_rng_disc(rng, 1.0), _rng_disc(rng, 0.8)))
        nc = numeric_connection(p, space=space2)
        cf = closed_form(p, "validated")
        worst = max(worst, max(np.abs(cf.components[k] - nc.components[k]).max()
                               for k in cf.components))
    checks.append(_check("connection/two_mode_vs_oracle", worst, 1e-6,
                         {"points": 20, "cutoff": 56}))

    worst_v = 0.0
    for _ in range(10):
        p = ParamPoint("full", tuple(_rng_disc(rng, 0.5) for _ in range(6)))
        nc = numeric_connection(p, space=space2)
        cfv = closed_form(p, "validated")
        cfp = closed_form(p, "paper")
        for k in cfv.components:
            worst_v = max(worst_v, np.abs(cfv.components[k] - nc.components[k]).max())
            dp = np.abs(cfp.components[k] - nc.components[k])
            if dp.max() > 1e-5:
                i, j = np.unravel_index(int(dp.argmax()), dp.shape)
                discrepancies.append({
                    "component": k,
                    "entry": [int(i), int(j)],
                    "paper_value": complex(cfp.components[k][i, j]),
                    "oracle_value": complex(nc.components[k][i, j]),
                    "abs_diff": float(dp.max()),
                })
    checks.append(_check("connection/full_validated_vs_oracle", worst_v, 1e-5,
                         {"points": 10, "cutoff": 56}))
    checks.append(_check(
        "connection/full_paper_mismatches_reported",
        1.0 if discrepancies else 0.0, 1.0, {"entries": len(discrepancies)},
        mode="geq",
    ))
    return _suite("connection", checks, {"paper_discrepancies": discrepancies[:24]})


def suite_curvature(seed=0):
    """Printed curvature displays against numeric dA + A∧A.

    The displays are algebraically derived from the uncorrected printed
    connection, so the numeric construction differentiates that same
    ('paper' mode) connection — curvature is a function of the connection.
    """
    rng = np.random.default_rng(seed)
    checks = []
    for model, scale in (("one_mode", 0.8), ("two_mode", 0.8)):
        src = ClosedFormSource(model, "paper")
        worst = 0.0
        for _ in range(10):
            p = ParamPoint(model, (_rng_disc(rng, scale), _rng_disc(rng, scale)))
            tf_c = closed_form_curvature(p)
            tf_n = numeric_two_form(p, src)
            worst = max(worst, max(np.abs(v - tf_n.components[k]).max()
                                   for k, v in tf_c.components.items()))
        checks.append(_check(f"curvature/{model}_vs_numeric", worst, 1e-4,
                             {"points": 10}))
    k_const = base_matrices_1mode()["K"]
    worst = 0.0
    for _ in range(5):
        p = ParamPoint("one_mode", (_rng_disc(rng, 0.8), _rng_disc(rng, 0.8)))
        f = closed_form_curvature(p).components[("alpha", "alpha_bar")]
        worst = max(worst, float(np.abs(f + 2.0 * k_const).max()))
    checks.append(_check("curvature/constant_component", worst, 1e-6, {"points": 5}))
    return _suite("curvature", checks)


def suite_span(seed=0):
    """Holonomy-algebra ranks from curvature values (irreducibility)."""
    rng = np.random.default_rng(seed)
    checks = []
    pts1 = [ParamPoint("one_mode", (_rng_disc(rng, 0.8), _rng_disc(rng, 0.8)))
            for _ in range(10)]
    rep1 = span_report(pts1, "one_mode")
    checks.append(_check("span/one_mode_rank", rep1["rank"], 4, mode="eq"))
    pts2 = [ParamPoint("two_mode", (_rng_disc(rng, 0.8), _rng_disc(rng, 0.8)))
            for _ in range(10)]
    rep2 = span_report(pts2, "two_mode")
    checks.append(_check("span/two_mode_rank", rep2["rank"], 4, mode="eq"))
    checks.append(_check("span/two_mode_centre", rep2["centre_dim"], 1, mode="eq"))
    checks.append(_check("span/two_mode_simple_part", rep2["derived_rank"], 3, mode="eq"))
    checks.append(_check("span/two_mode_direct_sum",
                         1.0 if rep2["direct_sum"] else 0.0, 1.0, mode="geq"))
    return _suite("span", checks)


def suite_basis():
    """Integer rank counting of the vacuum-sandwich direction set."""
    audit = span_audit()
    completion_exact = bool(
        np.array_equal(audit["completion"], np.diag([1, -1, -1, 1]).astype(complex))
    )
    checks = [
        _check("basis/rank_before", audit["rank_before"], 15, mode="eq"),
        _check("basis/rank_after", audit["rank_after"], 16, mode="eq"),
        _check("basis/completion_exact", 1.0 if completion_exact else 0.0, 1.0,
               mode="geq"),
    ]
    for model, expect in (("full", 12), ("doubled", 24), ("extended", 18)):
        got = dimension_audit(model)["dim_parameters"]
        checks.append(_check(f"basis/dim_{model}", got, expect, mode="eq"))
    return _suite("basis", checks)


def suite_adjoint(seed=0):
    """Adjoint-action tables against products and brute-force conjugation."""
    rng = np.random.default_rng(seed)
    checks = []
    worst = 0.0
    for _ in range(10):
        xi, zeta = _rng_disc(rng, 0.8), _rng_disc(rng, 0.8)
        printed = table("mixing", dict(xi=xi, zeta=zeta))
        prod = table("two_mode_squeeze", dict(zeta=zeta)) @ table(
            "beamsplitter", dict(xi=xi))
        worst = max(worst, float(np.abs(printed - prod).max()))
    checks.append(_check("adjoint/mixing_equals_product", worst, 1e-12,
                         {"points": 10}))

    params = dict(xi=0.4 + 0.1j, zeta=0.3 - 0.2j, alpha2=0.3 + 0.2j,
                  beta2=0.2 - 0.3j)
    space32, space48 = build_space(2, 32), build_space(2, 48)
    for kind in ("beamsplitter", "two_mode_squeeze", "mixing", "displaced_mode2"):
        d32 = conjugation_check(kind, params, space32)["max_deviation"]
        d48 = conjugation_check(kind, params, space48)["max_deviation"]
        checks.append(_check(f"adjoint/conjugation_{kind}_cut32", d32, 1e-8))
        # 'improves' is meaningful only above the float floor
        checks.append(_check(f"adjoint/conjugation_{kind}_improves",
                             d48, max(d32, 1e-12), mode="leq"))
    dprod48 = conjugation_check("product", params, space48)["max_deviation"]
    checks.append(_check("adjoint/conjugation_product_cut48", dprod48, 1e-8))

    worst = 0.0
    for _ in range(10):
        args = dict(xi=_rng_disc(rng, 0.5), zeta=_rng_disc(rng, 0.5),
                    alpha2=_rng_disc(rng, 0.5), beta2=_rng_disc(rng, 0.5))
        a = product_coefficients(**args)
        b = pullback_coefficients(args["xi"], args["zeta"], args["alpha2"],
                                  args["beta2"], mode="validated")
        worst = max(worst, max(abs(a[k] - b[k]) for k in a))
    checks.append(_check("adjoint/pullback_coefficients_consistent", worst, 1e-10,
                         {"points": 10}))
    return _suite("adjoint", checks)


def suite_holonomy(seed=0):
    """Integrator behaviour: identity loops, inverses, curvature squares,
    empirical convergence order and source cross-validation."""
    rng = np.random.default_rng(seed)
    checks = []
    src = ClosedFormSource("one_mode")
    base = ParamPoint("one_mode", (0j, 0.5 + 0j))

    const = Loop("one_mode", (base, base), "linear", 8)
    res = transport(const, src)
    checks.append(_check("holonomy/constant_loop_defect",
                         float(np.abs(res.gamma - np.eye(2)).max()), 1e-12))

    wp = (base, base.shift("alpha", 0.3), base.shift("alpha", 0.3 + 0.2j),
          base.shift("beta", 0.1j), base)
    closed = Loop("one_mode", wp + tuple(reversed(wp))[1:], "linear", 64)
    res = transport(closed, src)
    checks.append(_check("holonomy/forward_backward_identity",
                         float(np.abs(res.gamma - np.eye(2)).max()), 1e-8))

    conn = closed_form(base)
    pred = square_loop_prediction(base, "alpha", conn, closed_form_curvature(base))
    errs = []
    for eps in (0.08, 0.04, 0.02):
        g = transport(square_loop(base, "alpha", eps, steps=96), src).gamma
        errs.append(float(np.linalg.norm(g - np.eye(2) - eps**2 * pred)))
    ratios = [errs[i] / errs[i + 1] for i in range(2)]
    for i, r in enumerate(ratios):
        checks.append(_check(f"holonomy/square_decay_ratio_{i}", r, (6.0, 10.0),
                             {"errors": errs}, mode="range"))

    loop = Loop("one_mode",
                (base, base.shift("alpha", 0.4 + 0.1j), base.shift("beta", 0.3j), base),
                "trigonometric", 8)
    fine = transport(loop, src, steps=512).gamma
    e8 = float(np.linalg.norm(transport(loop, src, steps=8).gamma - fine))
    e16 = float(np.linalg.norm(transport(loop, src, steps=16).gamma - fine))
    e32 = float(np.linalg.norm(transport(loop, src, steps=32).gamma - fine))
    order = min(np.log2(e8 / e16), np.log2(e16 / e32))
    checks.append(_check("holonomy/convergence_order", float(order), 3.5,
                         {"errors": [e8, e16, e32]}, mode="geq"))

    num_src = NumericSource("one_mode", build_space(1, 48))
    small = square_loop(base, "beta", 0.1, steps=24)
    g_cf = transport(small, src).gamma
    g_num = transport(small, num_src).gamma
    checks.append(_check("holonomy/closed_vs_numeric_source",
                         float(np.abs(g_cf - g_num).max()), 1e-4))

    loops = []
    for _ in range(20):
        b = ParamPoint("one_mode", (_rng_disc(rng, 0.4), _rng_disc(rng, 0.4)))
        loops.append(square_loop(b, str(rng.choice(["alpha", "beta"])), 0.3, steps=32))
    est = holonomy_algebra_estimate(loops, src)
    checks.append(_check("holonomy/one_mode_loop_rank", est["rank"], 4, mode="eq"))

    # Two-mode loop logs span MORE than the pointwise curvature span: the
    # connection's own values close to a 7-dimensional algebra (the pair
    # [A^, C^] leaves the 4-dimensional curvature span), and path-conjugated
    # curvature fills it.  The loop-log estimate and the curvature span are
    # therefore reported as the bracket [span rank, value-closure rank].
    src2 = ClosedFormSource("two_mode")
    loops2 = []
    for _ in range(20):
        b = ParamPoint("two_mode", (_rng_disc(rng, 0.4), _rng_disc(rng, 0.4)))
        loops2.append(square_loop(b, str(rng.choice(["xi", "zeta"])), 0.3, steps=32))
    est2 = holonomy_algebra_estimate(loops2, src2)
    values = []
    for _ in range(30):
        p = ParamPoint("two_mode", (_rng_disc(rng, 0.6), _rng_disc(rng, 0.6)))
        conn = src2.at(p)
        values.append(conn.contract(rng.standard_normal(4)))
    value_rank = len(lie_closure(values, anti_hermitian_projection=True))
    checks.append(_check("holonomy/two_mode_loop_rank_lower", est2["rank"], 4,
                         {"note": "loop-log estimate bounds the curvature span"},
                         mode="geq"))
    checks.append(_check("holonomy/two_mode_loop_rank_upper", est2["rank"],
                         value_rank,
                         {"value_closure_rank": value_rank}, mode="leq"))
    return _suite("holonomy", checks)


def suite_extended(seed=0, points=5, cutoff=64):
    """Numeric connection on the phase-extended parameter space.

    Cutoff 64: draws compounding three squeeze factors near moduli 0.5
    leave ~3e-6 oracle truncation at cutoff 56, above the slice tolerance.
    """
    rng = np.random.default_rng(seed)
    space = build_space(2, cutoff)
    checks = []
    worst_ah = 0.0
    worst_slice = 0.0
    for _ in range(points):
        coords = tuple(_rng_disc(rng, 0.5) for _ in range(6))
        phases = tuple(rng.uniform(-0.5, 0.5) for _ in range(6))
        pe = ParamPoint("extended", coords, phases)
        nc = numeric_connection(pe, space=space)
        for _ in range(3):
            tangent = rng.standard_normal(18)
            a = nc.contract(tangent)
            worst_ah = max(worst_ah, float(np.abs(a + a.conj().T).max()))
        pz = ParamPoint("extended", coords, (0.0,) * 6)
        nz = numeric_connection(pz, space=space)
        cf = closed_form(ParamPoint("full", coords), "validated")
        for name in MODEL_INFO["full"].coords:
            worst_slice = max(worst_slice,
                              float(np.abs(nz.components[name]
                                           - cf.components[name]).max()))
    checks.append(_check("extended/anti_hermitian_assembly", worst_ah, 1e-8,
                         {"points": points, "cutoff": cutoff}))
    checks.append(_check("extended/phase_zero_slice", worst_slice, 1e-6,
                         {"points": points, "cutoff": cutoff}))
    return _suite("extended", checks)


SUITES = {
    "disentangle": suite_disentangle,
    "connection": suite_connection,
    "curvature": suite_curvature,
    "span": suite_span,
    "basis": suite_basis,
    "adjoint": suite_adjoint,
    "holonomy": suite_holonomy,
    "extended": suite_extended,
}

# alternate CLI tokens accepted for the audit suites
ALIASES = {"appendixA": "adjoint", "section4": "basis"}


def run_suite(name: str, **kw) -> dict:
    """Run one named suite (aliases accepted)."""
    key = ALIASES.get(name, name)
    if key not in SUITES:
        raise ValueError(f"unknown suite {name!r}; "
                         f"one of {sorted(SUITES)} (+ aliases {sorted(ALIASES)})")
    fn = SUITES[key]
    import inspect

    accepted = {k: v for k, v in kw.items()
                if k in inspect.signature(fn).parameters}
    return fn(**accepted)
