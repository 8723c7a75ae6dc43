"""Degenerate-vacuum frames, vacuum sandwiches and the projector family.

The frame is the ordered orthonormal basis of the Kerr Hamiltonian's zero
eigenspace: ``(|0>, |1>)`` for one mode and ``(|00>, |01>, |10>, |11>)``
for two.  Sandwiching an operator between frame kets yields the m x m
matrices every connection component expands over; the printed constant
matrices live here as exact integer/half-integer arrays.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .fock import FockSpace
from .operators import ParamPoint, composite_columns

__all__ = [
    "frame",
    "sandwich",
    "projector",
    "base_matrices_1mode",
    "base_matrices_2mode",
    "hatted_family",
    "vacuum_gram",
]


def frame(space: FockSpace) -> np.ndarray:
    """Vacuum frame as a (total_dim, m) column matrix in the frozen order.

    The ordering (|0>,|1>) / (|00>,|01>,|10>,|11>) is a contract: every
    downstream m x m matrix depends on it.
    """
    if space.modes == 1:
        idx = [space.index(0), space.index(1)]
    else:
        idx = [space.index(0, 0), space.index(0, 1), space.index(1, 0), space.index(1, 1)]
    h = space.hamiltonian
    diag = h.diagonal() if sp.issparse(h) else np.diag(h)
    for i in idx:
        if diag[i] != 0.0:
            raise ValueError(f"Hamiltonian does not annihilate frame ket {i}")
    v = np.zeros((space.total_dim, len(idx)), dtype=complex)
    for col, i in enumerate(idx):
        v[i, col] = 1.0
    return v


def sandwich(op, fr: np.ndarray) -> np.ndarray:
    """m x m matrix with entries ``<v_i| op |v_j>``."""
    if op.shape[1] != fr.shape[0]:
        raise ValueError(
            f"operator dim {op.shape} incompatible with frame dim {fr.shape}"
        )
    return fr.conj().T @ (op @ fr)


def projector(point: ParamPoint, space: FockSpace) -> np.ndarray:
    """Rank-m projector ``Z (sum_j v_j v_j†) Z†`` of the isospectral family."""
    v = frame(space)
    zv = composite_columns(point, space, v)
    return zv @ zv.conj().T


# ---------------------------------------------------------------------------
# printed constant matrices (frozen contracts, exact entries)
# ---------------------------------------------------------------------------

def base_matrices_1mode() -> dict[str, np.ndarray]:
    """The 2x2 set {E, F, K, L}: sandwiches of a, a†, a†a and 1."""
    return {
        "E": np.array([[0, 1], [0, 0]], dtype=complex),
        "F": np.array([[0, 0], [1, 0]], dtype=complex),
        "K": np.array([[0, 0], [0, 1]], dtype=complex),
        "L": np.eye(2, dtype=complex),
    }


def base_matrices_2mode() -> dict[str, np.ndarray]:
    """The 4x4 sets {E^, F^, H^} (beamsplitter block) and {A^, C^, B^}
    (two-mode-squeeze block)."""
    e = np.zeros((4, 4), dtype=complex); e[1, 2] = 1
    f = np.zeros((4, 4), dtype=complex); f[2, 1] = 1
    h = np.diag([0, 0.5, -0.5, 0]).astype(complex)
    a = np.zeros((4, 4), dtype=complex); a[0, 3] = 1
    c = np.zeros((4, 4), dtype=complex); c[3, 0] = 1
    b = np.diag([0.5, 1, 1, 1.5]).astype(complex)
    return {"E^": e, "F^": f, "H^": h, "A^": a, "C^": c, "B^": b}


def hatted_family() -> dict[str, np.ndarray]:
    """Vacuum sandwiches of 1, a_i, a_i† and their quadratic products.

    ``B1 = <vac|a1|vac>`` and ``B2 = <vac|a2|vac>`` generate the family;
    products are literal matrix products of those two and their daggers.
    """
    b1 = np.zeros((4, 4), dtype=complex)
    b1[0, 2] = b1[1, 3] = 1
    b2 = np.zeros((4, 4), dtype=complex)
    b2[0, 1] = b2[2, 3] = 1
    b1d, b2d = b1.conj().T, b2.conj().T
    return {
        "I": np.eye(4, dtype=complex),
        "B1": b1,
        "B1d": b1d,
        "B2": b2,
        "B2d": b2d,
        "B1B2": b1 @ b2,
        "B1dB2d": b1d @ b2d,
        "B1dB1": b1d @ b1,
        "B1B2d": b1 @ b2d,
        "B1dB2": b1d @ b2,
        "B2dB2": b2d @ b2,
    }


# order of the monomial basis used for quadratic sandwiches
MONOMIALS = ("1", "a1", "a2", "a1d", "a2d")

# <vac| M_m M_n |vac> for the ordered monomial pairs, exact on levels <= 1.
# Derived once from the ladder algebra; entries are small integers.
def vacuum_gram() -> np.ndarray:
    """(5, 5) array of 4x4 matrices: ``G[m, n] = <vac| M_m M_n |vac>``
    over the monomial order ``(1, a1, a2, a1†, a2†)``."""
    fam = hatted_family()
    eye, b1, b2 = fam["I"], fam["B1"], fam["B2"]
    b1d, b2d = fam["B1d"], fam["B2d"]
    single = {"1": eye, "a1": b1, "a2": b2, "a1d": b1d, "a2d": b2d}
    # sandwiches of ordered quadratic monomials; commutators fix the order
    quad = {
        ("a1", "a1"): np.zeros((4, 4), dtype=complex),
        ("a2", "a2"): np.zeros((4, 4), dtype=complex),
        ("a1d", "a1d"): np.zeros((4, 4), dtype=complex),
        ("a2d", "a2d"): np.zeros((4, 4), dtype=complex),
        ("a1", "a2"): fam["B1B2"],
        ("a2", "a1"): fam["B1B2"],
        ("a1d", "a2d"): fam["B1dB2d"],
        ("a2d", "a1d"): fam["B1dB2d"],
        ("a1d", "a1"): fam["B1dB1"],
        ("a1", "a1d"): fam["B1dB1"] + eye,
        ("a2d", "a2"): fam["B2dB2"],
        ("a2", "a2d"): fam["B2dB2"] + eye,
        ("a1", "a2d"): fam["B1B2d"],
        ("a2d", "a1"): fam["B1B2d"],
        ("a1d", "a2"): fam["B1dB2"],
        ("a2", "a1d"): fam["B1dB2"],
    }
    g = np.zeros((5, 5, 4, 4), dtype=complex)
    for i, m in enumerate(MONOMIALS):
        for j, n in enumerate(MONOMIALS):
            if m == "1" and n == "1":
                g[i, j] = eye
            elif m == "1":
                g[i, j] = single[n]
            elif n == "1":
                g[i, j] = single[m]
            else:
                g[i, j] = quad[(m, n)]
    return g
