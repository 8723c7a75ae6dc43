"""Dense complex linear algebra: matrix exponentials, commutators, real
spans and Lie-algebra closure.

Everything here is a pure function of its inputs; returned arrays are
freshly allocated and never aliased to the arguments.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

__all__ = [
    "expm",
    "expm_chain",
    "expm_apply",
    "comm",
    "real_rank",
    "lie_closure",
    "frobenius",
    "unitarity_defect",
    "anti_hermitian_part",
]

# Dense matrices above this size are probed for a block (connected-component)
# structure before exponentiating; below it, plain dense routines win.
_COMPONENT_THRESHOLD = 192

# expm rejects inputs whose norm would exhaust scaling-and-squaring accuracy.
_NORM_BUDGET = 1e6


def frobenius(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def unitarity_defect(m: np.ndarray) -> float:
    """``||m @ m.conj().T - I||_F``, zero for exactly unitary m."""
    n = m.shape[0]
    return frobenius(m @ m.conj().T - np.eye(n))


def anti_hermitian_part(m: np.ndarray) -> np.ndarray:
    """Projection onto the anti-Hermitian subspace, ``(m - m†)/2``."""
    return 0.5 * (m - m.conj().T)


def _check_generator(g, name: str = "matrix"):
    if sp.issparse(g):
        if g.shape[0] != g.shape[1]:
            raise ValueError(f"{name} must be square, got shape {g.shape}")
        if g.nnz and not np.all(np.isfinite(g.data)):
            raise ValueError(f"{name} contains non-finite entries")
        return g.tocsr()
    g = np.asarray(g, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"{name} must be square, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError(f"{name} contains non-finite entries")
    return g


def _expm_shift_chain(m: np.ndarray) -> np.ndarray | None:
    """Exact Taylor exponential for nilpotent 'shift' matrices.

    Raising/lowering generators restricted to a symmetry sector have at most
    one nonzero per row and per column and no diagonal, so every entry of
    every power is a single path product: the series has no cancellation
    and terminates.  Returns None when the structure does not apply.
    """
    n = m.shape[0]
    nz = m != 0.0
    if nz.diagonal().any():
        return None
    if nz.sum(axis=0).max(initial=0) > 1 or nz.sum(axis=1).max(initial=0) > 1:
        return None
    out = np.eye(n, dtype=complex)
    term = m.copy()
    k = 1
    while term.any():
        if k > n:
            return None  # cyclic, not nilpotent
        out += term
        k += 1
        term = (term @ m) / k
    return out


def _expm_dense(m: np.ndarray) -> np.ndarray:
    """expm of a dense block; eigendecomposition for (anti-)Hermitian input,
    stable closed forms for diagonal and shift-chain blocks."""
    n = m.shape[0]
    if n == 1:
        return np.exp(m)
    offdiag = m - np.diag(np.diag(m))
    if not offdiag.any():
        return np.diag(np.exp(np.diag(m)))
    chain = _expm_shift_chain(m)
    if chain is not None:
        return chain
    scale = np.abs(m).max()
    tol = 1e-13 * max(scale, 1.0)
    if np.abs(m + m.conj().T).max() <= tol:
        # anti-Hermitian: m = i h with h Hermitian, exactly unitary result
        w, v = np.linalg.eigh(-1j * m)
        return (v * np.exp(1j * w)) @ v.conj().T
    if np.abs(m - m.conj().T).max() <= tol:
        w, v = np.linalg.eigh(m)
        return (v * np.exp(w)) @ v.conj().T
    return scipy.linalg.expm(m)


def _pattern(g) -> sp.csr_matrix:
    if sp.issparse(g):
        p = g.copy().tocsr()
        p.data = np.ones_like(p.data, dtype=np.int8)
        return p
    return sp.csr_matrix((np.abs(g) > 0.0).astype(np.int8))


def _block(g, idx: np.ndarray) -> np.ndarray:
    if sp.issparse(g):
        return g[idx][:, idx].toarray()
    return g[np.ix_(idx, idx)]


def expm(m) -> np.ndarray:
    """Matrix exponential ``e^m`` of a square complex matrix (dense or sparse).

    (Anti-)Hermitian inputs go through an eigendecomposition, so the result
    of an anti-Hermitian input is unitary to machine rounding.  Large inputs
    whose sparsity graph splits into several connected components (ladder
    operators conserving a quantum number do) are exponentiated block by
    block, which is exact.

    Raises
    ------
    ValueError
        for non-square or non-finite input, or when the norm exceeds the
        scaling budget.
    """
    return expm_chain([m])


def expm_chain(
    generators: list,
    keep: np.ndarray | None = None,
    prefactor: complex = 1.0,
) -> np.ndarray:
    """Ordered product ``prefactor * e^{G_0} e^{G_1} ... e^{G_k}``.

    When the union sparsity graph of all generators splits into connected
    components the product is assembled component-wise, which turns the
    O(n^3) product of two-mode exponentials into many small dense products.
    ``keep`` restricts rows and columns of the result to the given index
    set (in the given order) without materialising the full matrix.
    """
    gens = [_check_generator(g, "generator") for g in generators]
    if not gens:
        raise ValueError("empty generator chain")
    n = gens[0].shape[0]
    if any(g.shape[0] != n for g in gens):
        raise ValueError("generator dimensions differ")
    for g in gens:
        norm1 = sp.linalg.norm(g, 1) if sp.issparse(g) else np.linalg.norm(g, 1)
        if norm1 > _NORM_BUDGET:
            raise ValueError(
                f"generator 1-norm {norm1:.3e} exceeds the expm scaling "
                f"budget {_NORM_BUDGET:.0e}"
            )

    def dense_product(blocks: list[np.ndarray]) -> np.ndarray:
        out = _expm_dense(blocks[0])
        for b in blocks[1:]:
            out = out @ _expm_dense(b)
        return out

    if n <= _COMPONENT_THRESHOLD:
        full = [g.toarray() if sp.issparse(g) else g for g in gens]
        out = prefactor * dense_product(full)
        return out if keep is None else out[np.ix_(keep, keep)]

    union = _pattern(gens[0])
    for g in gens[1:]:
        union = union + _pattern(g)
    ncomp, labels = connected_components(union + union.T, directed=False)
    if ncomp == 1:
        full = [g.toarray() if sp.issparse(g) else g for g in gens]
        out = prefactor * dense_product(full)
        return out if keep is None else out[np.ix_(keep, keep)]

    if keep is None:
        out = np.zeros((n, n), dtype=complex)
        targets = range(ncomp)
    else:
        keep = np.asarray(keep)
        out = np.zeros((keep.size, keep.size), dtype=complex)
        pos = {int(i): p for p, i in enumerate(keep)}
        targets = sorted(set(labels[keep]))
    for c in targets:
        idx = np.flatnonzero(labels == c)
        block = prefactor * dense_product([_block(g, idx) for g in gens])
        if keep is None:
            out[np.ix_(idx, idx)] = block
        else:
            sel = [k for k, i in enumerate(idx) if int(i) in pos]
            rows = [pos[int(idx[k])] for k in sel]
            out[np.ix_(rows, rows)] = block[np.ix_(sel, sel)]
    return out


def expm_apply(
    generators: list,
    cols: np.ndarray,
    prefactor: complex = 1.0,
) -> np.ndarray:
    """``prefactor * e^{G_0} e^{G_1} ... e^{G_k} @ cols`` without forming
    the full exponentials.

    The product is applied column-block by column-block over the connected
    components of the generators' union sparsity graph, so the cost is set
    by the largest symmetry sector, not by the space dimension.
    """
    gens = [_check_generator(g, "generator") for g in generators]
    if not gens:
        raise ValueError("empty generator chain")
    n = gens[0].shape[0]
    cols = np.asarray(cols, dtype=complex)
    if cols.ndim == 1:
        cols = cols[:, None]
    if cols.shape[0] != n:
        raise ValueError(f"column block has {cols.shape[0]} rows, generators {n}")

    if n <= _COMPONENT_THRESHOLD:
        out = cols
        for g in reversed(gens):
            gd = g.toarray() if sp.issparse(g) else g
            out = _expm_dense(gd) @ out
        return prefactor * out

    union = _pattern(gens[0])
    for g in gens[1:]:
        union = union + _pattern(g)
    ncomp, labels = connected_components(union + union.T, directed=False)
    out = np.empty_like(cols)
    if ncomp == 1:
        tmp = cols
        for g in reversed(gens):
            gd = g.toarray() if sp.issparse(g) else g
            tmp = _expm_dense(gd) @ tmp
        return prefactor * tmp
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        tmp = cols[idx]
        for g in reversed(gens):
            tmp = _expm_dense(_block(g, idx)) @ tmp
        out[idx] = prefactor * tmp
    return out


def comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Commutator ``a@b - b@a``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def _flatten_real(mats: list[np.ndarray]) -> np.ndarray:
    """Each complex matrix becomes one real row vector (re and im stacked)."""
    rows = [np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in mats]
    return np.array(rows)


def real_rank(mats: list[np.ndarray], tol: float = 1e-8) -> int:
    """Dimension of the real linear span of a set of complex matrices.

    Matrices are flattened to real vectors of doubled length; the rank is
    the number of singular values above ``tol`` times the largest one.
    """
    if not mats:
        raise ValueError("real_rank of an empty set")
    dims = {m.shape for m in mats}
    if len(dims) != 1:
        raise ValueError(f"mixed matrix shapes in span set: {dims}")
    stack = _flatten_real([np.asarray(m, dtype=complex) for m in mats])
    svals = np.linalg.svd(stack, compute_uv=False)
    if svals[0] == 0.0:
        return 0
    return int(np.sum(svals > tol * svals[0]))


class _RealSpan:
    """Incrementally maintained orthonormal real basis of matrices."""

    def __init__(self, shape: tuple[int, int], tol: float):
        self.shape = shape
        self.tol = tol
        self.vectors: list[np.ndarray] = []
        self.mats: list[np.ndarray] = []
        self.scale = 0.0

    def add(self, m: np.ndarray) -> bool:
        v = np.concatenate([m.real.ravel(), m.imag.ravel()])
        nv = np.linalg.norm(v)
        self.scale = max(self.scale, nv)
        if nv <= self.tol * max(self.scale, 1.0):
            return False
        for q in self.vectors:
            v = v - np.dot(q, v) * q
        # second Gram-Schmidt pass for numerical orthogonality
        for q in self.vectors:
            v = v - np.dot(q, v) * q
        r = np.linalg.norm(v)
        if r <= self.tol * max(self.scale, 1.0):
            return False
        v /= r
        self.vectors.append(v)
        half = self.shape[0] * self.shape[1]
        self.mats.append((v[:half] + 1j * v[half:]).reshape(self.shape))
        return True

    def __len__(self) -> int:
        return len(self.vectors)


def lie_closure(
    mats: list[np.ndarray],
    anti_hermitian_projection: bool = False,
    max_dim: int | None = None,
    tol: float = 1e-8,
) -> list[np.ndarray]:
    """Real basis of the Lie algebra generated by ``mats`` under commutation.

    Commutators of current basis members are adjoined and re-orthogonalised
    over the reals until the rank stabilises or reaches ``max_dim``.  With
    ``anti_hermitian_projection`` the inputs are first projected onto their
    anti-Hermitian parts (holonomy algebras are real subalgebras of u(m)).

    Returns an orthonormal (under ``Re tr(A†B)``) list of matrices.
    """
    if not mats:
        raise ValueError("lie_closure of an empty set")
    mats = [np.asarray(m, dtype=complex) for m in mats]
    shape = mats[0].shape
    if any(m.shape != shape for m in mats) or shape[0] != shape[1]:
        raise ValueError("lie_closure needs square matrices of equal shape")
    if max_dim is None:
        max_dim = 2 * shape[0] * shape[1]

    span = _RealSpan(shape, tol)
    for m in mats:
        span.add(anti_hermitian_part(m) if anti_hermitian_projection else m)

    frontier = list(range(len(span)))
    while frontier and len(span) < max_dim:
        new_frontier = []
        snapshot = len(span)
        for i in frontier:
            for j in range(snapshot):
                if j == i:
                    continue
                c = comm(span.mats[i], span.mats[j])
                if span.add(c):
                    new_frontier.append(len(span) - 1)
                    if len(span) >= max_dim:
                        break
            if len(span) >= max_dim:
                break
        frontier = new_frontier
    return list(span.mats)
