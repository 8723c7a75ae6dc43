"""Truncated single- and two-mode Fock spaces.

A :class:`FockSpace` carries ladder operators, the su(1,1)/su(2) generator
sets built from them, and the Kerr-type Hamiltonian whose degenerate vacuum
defines the qubit space.  Two-mode operators are Kronecker products with
mode 1 as the slow index, so the basis order is ``|n1 n2> -> n1*cutoff + n2``;
they are stored sparse (CSR) because two-mode dimensions reach 4096.

All arrays are immutable by convention: nothing here mutates a constructed
space, and spaces may be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

__all__ = ["FockSpace", "build_space", "vacuum_degeneracy_check"]


def _ladder(cutoff: int) -> np.ndarray:
    """Annihilation operator, a|n> = sqrt(n)|n-1>."""
    a = np.zeros((cutoff, cutoff), dtype=complex)
    ns = np.arange(1, cutoff)
    a[ns - 1, ns] = np.sqrt(ns)
    return a


@dataclass(frozen=True)
class FockSpace:
    """A truncated bosonic Fock space with 1 or 2 modes.

    One-mode operators are dense ndarrays; two-mode operators are
    ``scipy.sparse`` matrices (use :meth:`dense` when a full array is
    genuinely needed).
    """

    modes: int
    cutoff: int
    hbar_chi: float = 1.0
    _ops: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def total_dim(self) -> int:
        return self.cutoff**self.modes

    # -- ladder operators -------------------------------------------------
    def a(self, mode: int = 1):
        return self._ops[f"a{mode}"]

    def adag(self, mode: int = 1):
        return self._ops[f"ad{mode}"]

    def n(self, mode: int = 1):
        return self._ops[f"n{mode}"]

    @property
    def hamiltonian(self):
        return self._ops["h0"]

    def generators(self) -> dict:
        """Quadratic generator sets.

        One mode: ``K+ = (a†)²/2, K- = a²/2, K3 = (a†a + 1/2)/2``.
        Two modes additionally the Schwinger set
        ``J+ = a1†a2, J- = a2†a1, J3 = (n1 - n2)/2`` and the pair set
        ``K+ = a1†a2†, K- = a2 a1, K3 = (n1 + n2 + 1)/2``.
        """
        return dict(self._ops["gens"])

    def dense(self, op) -> np.ndarray:
        return op.toarray() if sp.issparse(op) else np.asarray(op)

    def index(self, *levels: int) -> int:
        """Flat index of the basis ket with the given per-mode levels."""
        if len(levels) != self.modes:
            raise ValueError(f"need {self.modes} levels, got {len(levels)}")
        idx = 0
        for lv in levels:
            if not 0 <= lv < self.cutoff:
                raise ValueError(f"level {lv} outside cutoff {self.cutoff}")
            idx = idx * self.cutoff + lv
        return idx

    def basis_ket(self, *levels: int) -> np.ndarray:
        v = np.zeros(self.total_dim, dtype=complex)
        v[self.index(*levels)] = 1.0
        return v

    def guarded_indices(self, levels: int) -> np.ndarray:
        """Indices of basis kets with every mode occupation below ``levels``.

        Operator identities corrupted at the truncation boundary are tested
        on this subblock only.
        """
        if not 0 < levels <= self.cutoff:
            raise ValueError(f"guard levels {levels} outside 1..{self.cutoff}")
        if self.modes == 1:
            return np.arange(levels)
        base = np.arange(levels)
        return (base[:, None] * self.cutoff + base[None, :]).ravel()

    def guard_default(self) -> int:
        """Default guard: lowest 3/8 of the levels per mode."""
        return max(2, (3 * self.cutoff) // 8)


def _build_ops(modes: int, cutoff: int, hbar_chi: float) -> dict:
    nvec = np.arange(cutoff, dtype=float)
    kerr = hbar_chi * nvec * (nvec - 1.0)
    ops: dict = {}
    if modes == 1:
        a = _ladder(cutoff)
        ad = a.conj().T
        ops.update(a1=a, ad1=ad, n1=ad @ a)
        ops["h0"] = np.diag(kerr).astype(complex)
        ops["gens"] = {
            "K+": 0.5 * (ad @ ad),
            "K-": 0.5 * (a @ a),
            "K3": 0.5 * (ad @ a + 0.5 * np.eye(cutoff)),
        }
        return ops

    a = sp.csr_matrix(_ladder(cutoff))
    eye = sp.identity(cutoff, dtype=complex, format="csr")
    a1 = sp.kron(a, eye, format="csr")
    a2 = sp.kron(eye, a, format="csr")
    a1d = a1.conj().T.tocsr()
    a2d = a2.conj().T.tocsr()
    ops.update(a1=a1, a2=a2, ad1=a1d, ad2=a2d, n1=(a1d @ a1).tocsr(), n2=(a2d @ a2).tocsr())
    ops["h0"] = sp.diags(np.add.outer(kerr, kerr).ravel()).astype(complex).tocsr()
    eye2 = sp.identity(cutoff * cutoff, dtype=complex, format="csr")
    ops["gens"] = {
        "J+": (a1d @ a2).tocsr(),
        "J-": (a2d @ a1).tocsr(),
        "J3": (0.5 * (ops["n1"] - ops["n2"])).tocsr(),
        "K+": (a1d @ a2d).tocsr(),
        "K-": (a2 @ a1).tocsr(),
        "K3": (0.5 * (ops["n1"] + ops["n2"] + eye2)).tocsr(),
    }
    return ops


@lru_cache(maxsize=16)
def _cached_space(modes: int, cutoff: int, hbar_chi: float) -> FockSpace:
    return FockSpace(modes, cutoff, hbar_chi, _build_ops(modes, cutoff, hbar_chi))


def build_space(modes: int, cutoff: int, hbar_chi: float = 1.0) -> FockSpace:
    """Construct a truncated Fock space with its operators.

    ``cutoff`` is the number of retained levels per mode (at least 4);
    the two-mode Hilbert space has dimension ``cutoff**2``.
    """
    if modes not in (1, 2):
        raise ValueError(f"modes must be 1 or 2, got {modes}")
    if cutoff < 4:
        raise ValueError(f"cutoff must be at least 4, got {cutoff}")
    if modes == 2 and cutoff > 96:
        raise ValueError(f"two-mode cutoff {cutoff} exceeds the memory budget")
    return _cached_space(modes, cutoff, float(hbar_chi))


def vacuum_degeneracy_check(space: FockSpace, expected: int) -> list[int]:
    """Indices of kets annihilated by the Hamiltonian.

    The Hamiltonian must be diagonal in the Fock basis; raises when the
    zero eigenvalue multiplicity differs from ``expected`` (which signals
    a mis-assembled Hamiltonian).
    """
    h = space.hamiltonian
    if sp.issparse(h):
        diag = h.diagonal()
        off_max = np.abs((h - sp.diags(diag)).toarray()).max() if h.nnz else 0.0
    else:
        diag = np.diag(h)
        off_max = np.abs(h - np.diag(diag)).max()
    if off_max > 0.0:
        raise ValueError("Hamiltonian is not diagonal in the Fock basis")
    kets = [int(i) for i in np.flatnonzero(diag.real == 0.0)]
    if len(kets) != expected:
        raise ValueError(
            f"vacuum degeneracy {len(kets)} does not match expected {expected}"
        )
    return kets
