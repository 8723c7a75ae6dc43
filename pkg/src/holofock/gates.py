"""Target gates, the basis-completion audit and the dimension audit.

The vacuum-sandwich family spans only 15 of the 16 real directions of
u(4); one nested commutator completes it.  :func:`span_audit` reproduces
that counting exactly (integer matrices, machine-exact arithmetic) and
:func:`gate_distance` provides the phase-invariant metric used by the
loop-synthesis objective.
"""

from __future__ import annotations

import numpy as np

from .frames import hatted_family
from .linalg import comm, real_rank
from .operators import MODEL_INFO

__all__ = [
    "x_gate",
    "cnot_gate",
    "hadamard",
    "hadamard_conjugation",
    "gate_distance",
    "span_audit",
    "dimension_audit",
]


def x_gate() -> np.ndarray:
    """diag(1, 1, 1, -1): flips the phase of |11>."""
    return np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def cnot_gate() -> np.ndarray:
    """Controlled-NOT on the frozen basis order (|00>, |01>, |10>, |11>)."""
    m = np.eye(4, dtype=complex)
    m[2, 2] = m[3, 3] = 0.0
    m[2, 3] = m[3, 2] = 1.0
    return m


def hadamard() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def hadamard_conjugation(g: np.ndarray) -> np.ndarray:
    """``(I ⊗ H) g (I ⊗ H)``: maps the phase gate to C-NOT and back."""
    ih = np.kron(np.eye(2, dtype=complex), hadamard())
    return ih @ g @ ih


def gate_distance(g: np.ndarray, target: np.ndarray, unitarity_tol: float = 1e-6) -> float:
    """Phase-invariant distance ``sqrt(1 - |tr(g† t)| / m)``.

    Vanishes exactly on the phase orbit ``g = e^{i phi} t``; both arguments
    must be unitary to ``unitarity_tol``.
    """
    g = np.asarray(g, dtype=complex)
    target = np.asarray(target, dtype=complex)
    if g.shape != target.shape or g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"gate shapes differ: {g.shape} vs {target.shape}")
    m = g.shape[0]
    for mat, name in ((g, "gate"), (target, "target")):
        defect = np.linalg.norm(mat @ mat.conj().T - np.eye(m))
        if defect > unitarity_tol:
            raise ValueError(f"{name} is not unitary (defect {defect:.2e})")
    overlap = abs(np.trace(g.conj().T @ target)) / m
    return float(np.sqrt(max(0.0, 1.0 - overlap)))


def span_audit(tol: float = 1e-8) -> dict:
    """Real-span counting of the vacuum-sandwich direction set.

    Builds the 15 listed matrices (the sandwich family, four single
    commutators), checks their real rank is exactly 15, then adjoins the
    nested commutator ``[B1, [B1†B2, B2†]]`` and checks rank 16 = dim u(4).
    The counting treats the matrices as real-span generators of directions
    ("directional count"), not as elements of u(4) themselves.

    Raises on any rank mismatch: that signals a mis-assembled basis.
    """
    f = hatted_family()
    b1, b1d, b2, b2d = f["B1"], f["B1d"], f["B2"], f["B2d"]
    listed = [
        f["I"], b1, b1d, b2, b2d,
        f["B1B2"], f["B1dB2"], f["B1B2d"], f["B1dB1"], f["B2dB2"], f["B1dB2d"],
        comm(b1, f["B1dB2"]),
        comm(b2, f["B1B2d"]),
        comm(f["B1B2d"], b1d),
        comm(f["B1dB2"], b2d),
    ]
    rank_before = real_rank(listed, tol)
    completion = comm(b1, comm(f["B1dB2"], b2d))
    rank_after = real_rank(listed + [completion], tol)
    product_identity = comm(b1, b1d) @ comm(b2, b2d)
    if rank_before != 15:
        raise RuntimeError(f"direction count before completion is {rank_before}, expected 15")
    if rank_after != 16:
        raise RuntimeError(f"direction count after completion is {rank_after}, expected 16")
    if not np.array_equal(completion, product_identity):
        raise RuntimeError("nested commutator does not equal the product of single commutators")
    return {
        "count": len(listed),
        "rank_before": rank_before,
        "rank_after": rank_after,
        "completion": completion,
        "completion_is_commutator_product": True,
        "kind": "directional count",
    }


def dimension_audit(model: str) -> dict:
    """Real dimension of a model's parameter space against dim_R U(4) = 16."""
    if model not in MODEL_INFO:
        raise ValueError(f"unknown model {model!r}")
    info = MODEL_INFO[model]
    dim = 2 * len(info.coords) + len(info.phases)
    gate_group_dim = info.fiber_dim**2
    return {
        "model": model,
        "dim_parameters": dim,
        "dim_gate_group": gate_group_dim,
        "sufficient": dim >= gate_group_dim,
    }
