import numpy as np
import pytest

from holofock.linalg import (
    comm,
    expm,
    expm_apply,
    expm_chain,
    lie_closure,
    real_rank,
    unitarity_defect,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_expm_zero_is_identity():
    assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))


def test_expm_diagonal_scalars():
    out = expm(np.diag([1j * np.pi, 0.0]))
    assert np.allclose(out, np.diag([-1.0, 1.0]), atol=1e-14)


def test_expm_su2_closed_form():
    # exp of [[iu, xi], [-conj(xi), -iu]] = cos(lam) I + sinc(lam) * A
    u, xi = 0.4, 0.3 - 0.2j
    a = np.array([[1j * u, xi], [-np.conj(xi), -1j * u]])
    lam = np.sqrt(u**2 + abs(xi) ** 2)
    expect = np.cos(lam) * np.eye(2) + np.sin(lam) / lam * a
    assert np.allclose(expm(a), expect, atol=1e-14)


def test_expm_anti_hermitian_unitary():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    g = m - m.conj().T
    assert unitarity_defect(expm(g)) < 1e-12 * 12


def test_expm_inverse_pairing():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    m *= 10.0 / np.linalg.norm(m)
    assert np.linalg.norm(expm(m) @ expm(-m) - np.eye(9)) < 1e-10 * 9


def test_expm_rejects_bad_input():
    with pytest.raises(ValueError):
        expm(np.ones((2, 3)))
    with pytest.raises(ValueError):
        expm(np.array([[np.inf, 0], [0, 0]]))
    with pytest.raises(ValueError):
        expm(np.eye(2) * 1e9)


def test_expm_block_structure_matches_dense():
    # block-diagonal sparsity at large dimension goes through components
    rng = np.random.default_rng(2)
    blocks = []
    for _ in range(40):
        b = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        blocks.append(b - b.conj().T)
    import scipy.linalg

    g = np.zeros((240, 240), dtype=complex)
    expect = np.zeros_like(g)
    for i, b in enumerate(blocks):
        g[6 * i:6 * i + 6, 6 * i:6 * i + 6] = b
        expect[6 * i:6 * i + 6, 6 * i:6 * i + 6] = scipy.linalg.expm(b)
    assert np.abs(expm(g) - expect).max() < 1e-12


def test_expm_chain_keep_restriction():
    rng = np.random.default_rng(3)
    g1 = np.zeros((220, 220), dtype=complex)
    g2 = np.zeros_like(g1)
    for i in range(0, 220, 11):
        b = rng.standard_normal((11, 11)) * 0.2
        g1[i:i + 11, i:i + 11] = b - b.T
        b2 = rng.standard_normal((11, 11)) * 0.2
        g2[i:i + 11, i:i + 11] = b2 - b2.T
    keep = np.arange(0, 220, 7)
    full = expm(g1) @ expm(g2)
    sub = expm_chain([g1, g2], keep=keep)
    assert np.abs(sub - full[np.ix_(keep, keep)]).max() < 1e-13


def test_expm_apply_matches_chain():
    rng = np.random.default_rng(4)
    g = np.zeros((210, 210), dtype=complex)
    for i in range(0, 210, 10):
        b = rng.standard_normal((10, 10)) * 0.3
        g[i:i + 10, i:i + 10] = b - b.T
    cols = rng.standard_normal((210, 3)) + 0j
    assert np.abs(expm_apply([g], cols) - expm(g) @ cols).max() < 1e-13


def test_comm_basics():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.array_equal(comm(np.eye(4), a), np.zeros((4, 4)))
    # antisymmetry is exact up to floating negation
    assert np.array_equal(comm(a, b), -comm(b, a))
    with pytest.raises(ValueError):
        comm(a, np.eye(3))


def test_real_rank_identity_and_recombination():
    assert real_rank([np.eye(4, dtype=complex)]) == 1
    rng = np.random.default_rng(6)
    mats = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            for _ in range(4)]
    r = real_rank(mats)
    mix = np.array([[1, 2, 0, 0], [0, 1, 0, 0], [1, 0, 3, 0], [0, -1, 0, 1.0]])
    mixed = [sum(mix[i, j] * mats[j] for j in range(4)) for i in range(4)]
    assert real_rank(mixed) == r


def test_real_rank_empty_raises():
    with pytest.raises(ValueError):
        real_rank([])


def test_lie_closure_su2():
    basis = lie_closure([1j * SX, 1j * SY])
    assert len(basis) == 3


def test_lie_closure_monotone_in_input():
    small = lie_closure([1j * SZ])
    large = lie_closure([1j * SZ, 1j * SX])
    assert len(large) >= len(small)


def test_lie_closure_projection_flag():
    # a Hermitian input dies under projection, leaving nothing
    with_proj = lie_closure([SZ + 0j, 1j * SZ], anti_hermitian_projection=True)
    assert len(with_proj) == 1
