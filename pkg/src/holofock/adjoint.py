"""Adjoint-action coefficient tables for the two-mode operator families.

Conjugating the ladder operators by a beamsplitter, two-mode squeezer or
their product re-expands them over (a1, a2, a1†, a2†):

    (X⁻¹ a1 X, X⁻¹ a2 X, X⁻¹ a1† X, X⁻¹ a2† X) = (a1, a2, a1†, a2†) · M

The displaced mode-2 factor O2 = D(α2)S(β2) adds a constant term, so its
table is affine (5x5 over the basis (1, a1, a2, a1†, a2†)).  The product
of the affine tables yields the pullback coefficients c0..c4 consumed by
the connection module, and :func:`conjugation_check` verifies every table
against brute-force conjugation on a truncated space.
"""

from __future__ import annotations

import numpy as np

from .connection import _cosh_sq, _sinhc_sq
from .fock import FockSpace
from .operators import operator

__all__ = ["table", "product_coefficients", "conjugation_check", "KINDS"]

KINDS = (
    "beamsplitter",
    "two_mode_squeeze",
    "mixing",
    "mixing_affine",
    "displaced_mode2",
    "product",
)


def _trig(xi: complex) -> tuple[float, complex]:
    c = float(_cosh_sq(-abs(xi) ** 2))      # cos|xi|
    s = complex(xi * _sinhc_sq(-abs(xi) ** 2))  # xi sin|xi|/|xi|
    return c, s


def _hyper(zeta: complex) -> tuple[float, complex]:
    c = float(_cosh_sq(abs(zeta) ** 2))     # cosh|zeta|
    s = complex(zeta * _sinhc_sq(abs(zeta) ** 2))  # zeta sinh|zeta|/|zeta|
    return c, s


def _beamsplitter_table(xi: complex) -> np.ndarray:
    c, s = _trig(xi)
    sb = np.conj(s)
    return np.array([
        [c, -sb, 0, 0],
        [s, c, 0, 0],
        [0, 0, c, -s],
        [0, 0, sb, c],
    ], dtype=complex)


def _pair_table(zeta: complex) -> np.ndarray:
    c, s = _hyper(zeta)
    sb = np.conj(s)
    return np.array([
        [c, 0, 0, sb],
        [0, c, sb, 0],
        [0, s, c, 0],
        [s, 0, 0, c],
    ], dtype=complex)


def _mixing_table(xi: complex, zeta: complex) -> np.ndarray:
    """The printed closed form of the combined table (entry by entry).

    Must equal ``_pair_table(zeta) @ _beamsplitter_table(xi)`` to rounding;
    the product identity is an acceptance check, so both routes exist.
    """
    cx, sx = _trig(xi)
    cz, sz = _hyper(zeta)
    sxb, szb = np.conj(sx), np.conj(sz)
    return np.array([
        [cz * cx, -cz * sxb, szb * sxb, szb * cx],
        [cz * sx, cz * cx, szb * cx, -szb * sx],
        [sz * sx, sz * cx, cz * cx, -cz * sx],
        [sz * cx, -sz * sxb, cz * sxb, cz * cx],
    ], dtype=complex)


def _displaced_table(alpha2: complex, beta2: complex) -> np.ndarray:
    c, s = _hyper(beta2)
    sb = np.conj(s)
    a, ab = complex(alpha2), complex(np.conj(alpha2))
    return np.array([
        [1, 0, a, 0, ab],
        [0, 1, 0, 0, 0],
        [0, 0, c, 0, sb],
        [0, 0, 0, 1, 0],
        [0, 0, s, 0, c],
    ], dtype=complex)


def _affine(m4: np.ndarray) -> np.ndarray:
    out = np.eye(5, dtype=complex)
    out[1:, 1:] = m4
    return out


def table(kind: str, params: dict) -> np.ndarray:
    """One adjoint table.

    ``params`` uses the coordinate names: xi, zeta, alpha2, beta2 (those a
    given kind needs).  All tables are the identity at zero parameters.
    """
    if kind == "beamsplitter":
        return _beamsplitter_table(params["xi"])
    if kind == "two_mode_squeeze":
        return _pair_table(params["zeta"])
    if kind == "mixing":
        return _mixing_table(params["xi"], params["zeta"])
    if kind == "mixing_affine":
        return _affine(_mixing_table(params["xi"], params["zeta"]))
    if kind == "displaced_mode2":
        return _displaced_table(params["alpha2"], params["beta2"])
    if kind == "product":
        return _displaced_table(params["alpha2"], params["beta2"]) @ _affine(
            _mixing_table(params["xi"], params["zeta"])
        )
    raise ValueError(f"unknown table kind {kind!r}; one of {KINDS}")


def product_coefficients(
    xi: complex, zeta: complex, alpha2: complex, beta2: complex
) -> dict[str, complex]:
    """c0..c4 read off the affine product table's a1 column, and d1, d2 off
    the displaced factor's a2 column.

    Single source of truth cross-check for the connection module's
    pullback coefficients.
    """
    prod = table("product", dict(xi=xi, zeta=zeta, alpha2=alpha2, beta2=beta2))
    col = prod[:, 1]  # image of a1 over (1, a1, a2, a1†, a2†)
    disp = table("displaced_mode2", dict(alpha2=alpha2, beta2=beta2))
    return {
        "c0": complex(col[0]),
        "c1": complex(col[1]),
        "c2": complex(col[2]),
        "c3": complex(col[3]),
        "c4": complex(col[4]),
        "d1": complex(disp[2, 2]),
        "d2": complex(disp[4, 2]),
    }


def _apply_conjugator(kind: str, params: dict, space: FockSpace, cols: np.ndarray) -> np.ndarray:
    """``X @ cols`` for the conjugating unitary of a table kind, applied
    factor by factor (sector-wise) so no dense operator is formed."""
    from .operators import _apply_mode, _one_mode_factor, apply_operator

    out = np.asarray(cols, dtype=complex)
    if kind in ("displaced_mode2", "product"):
        o2 = _one_mode_factor(space.cutoff, params["alpha2"], params["beta2"])
        out = _apply_mode(o2, 2, out, space.cutoff)
        if kind == "displaced_mode2":
            return out
    if kind in ("mixing", "mixing_affine", "product", "two_mode_squeeze"):
        out = apply_operator(space, "two_mode_squeeze", params["zeta"], 0.0, out)
    if kind in ("mixing", "mixing_affine", "product", "beamsplitter"):
        out = apply_operator(space, "beamsplitter", params["xi"], 0.0, out)
    return out


def conjugation_check(
    kind: str,
    params: dict,
    space: FockSpace,
    guard_levels: int = 4,
) -> dict:
    """Conjugate the ladder basis numerically and compare with the table.

    The guarded block of ``X⁻¹ b X`` is computed from ``X @ (guard
    columns)`` only, expanded over the operator basis by least squares, and
    the maximal entrywise deviation from the closed-form table is reported
    together with the expansion residual (truncation leakage made visible).

    The deviation decays like ``tanh(|squeeze|)^(cutoff - 2*guard_levels)``
    because squeeze factors spread guarded occupancies towards the
    truncation boundary, so the guard defaults to a small block; widen it
    only together with the cutoff.
    """
    if space.modes != 2:
        raise ValueError("conjugation tables live on two-mode spaces")
    affine = kind in ("mixing_affine", "displaced_mode2", "product")
    ops = [space.a(1), space.a(2), space.adag(1), space.adag(2)]
    if affine:
        import scipy.sparse as sp

        ops = [sp.identity(space.total_dim, dtype=complex, format="csr")] + ops
    guard = space.guarded_indices(guard_levels)
    cols = np.zeros((space.total_dim, guard.size), dtype=complex)
    cols[guard, np.arange(guard.size)] = 1.0
    xcols = _apply_conjugator(kind, params, space, cols)
    basis_flat = np.column_stack(
        [np.asarray(op[guard][:, guard].todense()).ravel() for op in ops]
    )
    tab = table(kind, params)
    coeffs = np.zeros_like(tab)
    residual = 0.0
    for j, op in enumerate(ops):
        conj_block = xcols.conj().T @ (op @ xcols)
        rhs = conj_block.ravel()
        sol, res, *_ = np.linalg.lstsq(basis_flat, rhs, rcond=None)
        coeffs[:, j] = sol
        residual = max(residual, float(np.linalg.norm(basis_flat @ sol - rhs)))
    deviation = float(np.abs(coeffs - tab).max())
    return {
        "kind": kind,
        "cutoff": space.cutoff,
        "guard_levels": int(np.sqrt(guard.size)),
        "max_deviation": deviation,
        "lstsq_residual": residual,
        "coefficients": coeffs,
        "table": tab,
    }
