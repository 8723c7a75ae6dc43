import numpy as np
import pytest

from holofock.fock import build_space, vacuum_degeneracy_check


def _dense(space, op):
    return space.dense(op)


def test_ladder_entries():
    sp = build_space(1, 4)
    a = _dense(sp, sp.a(1))
    assert a[0, 1] == 1.0
    assert a[1, 2] == pytest.approx(np.sqrt(2))
    assert a[2, 3] == pytest.approx(np.sqrt(3))


def test_canonical_commutator_guarded():
    sp = build_space(1, 16)
    a = _dense(sp, sp.a(1))
    c = a @ a.conj().T - a.conj().T @ a
    # machine-precision identity below the top level; the top diagonal
    # entry is corrupted by the truncation
    assert np.allclose(c[:15, :15], np.eye(15), atol=1e-13)
    assert c[15, 15] == pytest.approx(-15.0)


def test_number_operator_is_adag_a():
    sp = build_space(1, 12)
    n = _dense(sp, sp.n(1))
    assert np.allclose(n, np.diag(np.arange(12.0)), atol=1e-13)


def test_two_mode_cross_commutators_vanish():
    sp = build_space(2, 8)
    a1, a2 = sp.a(1), sp.a(2)
    z = (a1 @ a2.conj().T - a2.conj().T @ a1).toarray()
    assert np.abs(z).max() == 0.0
    z2 = (a1 @ a2 - a2 @ a1).toarray()
    assert np.abs(z2).max() == 0.0


@pytest.mark.parametrize("cutoff", [8, 16])
def test_single_mode_algebra_relations(cutoff):
    sp = build_space(1, cutoff)
    g = sp.generators()
    guard = sp.guarded_indices(cutoff - cutoff // 4)
    ix = np.ix_(guard, guard)

    def gv(x):
        return x if isinstance(x, np.ndarray) else x.toarray()

    kp, km, k3 = gv(g["K+"]), gv(g["K-"]), gv(g["K3"])
    assert np.abs((k3 @ kp - kp @ k3 - kp)[ix]).max() < 1e-12
    assert np.abs((kp @ km - km @ kp + 2 * k3)[ix]).max() < 1e-12


def test_two_mode_algebra_relations():
    sp = build_space(2, 12)
    g = {k: v.toarray() for k, v in sp.generators().items()}
    guard = sp.guarded_indices(8)
    ix = np.ix_(guard, guard)
    assert np.abs((g["J3"] @ g["J+"] - g["J+"] @ g["J3"] - g["J+"])[ix]).max() < 1e-12
    assert np.abs((g["J+"] @ g["J-"] - g["J-"] @ g["J+"] - 2 * g["J3"])[ix]).max() < 1e-12
    assert np.abs((g["K3"] @ g["K+"] - g["K+"] @ g["K3"] - g["K+"])[ix]).max() < 1e-12
    assert np.abs((g["K+"] @ g["K-"] - g["K-"] @ g["K+"] + 2 * g["K3"])[ix]).max() < 1e-12


def test_kerr_hamiltonian_spectrum():
    sp = build_space(1, 8)
    h = _dense(sp, sp.hamiltonian)
    ket = np.zeros(8)
    ket[2] = 1.0
    assert np.abs(h[:, 0]).max() == 0.0
    assert np.abs(h[:, 1]).max() == 0.0
    assert np.allclose(h @ ket, 2.0 * ket)


def test_vacuum_degeneracy():
    sp1 = build_space(1, 8)
    assert vacuum_degeneracy_check(sp1, 2) == [0, 1]
    sp2 = build_space(2, 6)
    assert vacuum_degeneracy_check(sp2, 4) == [0, 1, 6, 7]
    with pytest.raises(ValueError):
        vacuum_degeneracy_check(sp1, 3)


def test_build_space_validation():
    with pytest.raises(ValueError):
        build_space(3, 8)
    with pytest.raises(ValueError):
        build_space(1, 3)
    with pytest.raises(ValueError):
        build_space(2, 128)


def test_guarded_indices_two_mode():
    sp = build_space(2, 6)
    idx = sp.guarded_indices(2)
    assert list(idx) == [0, 1, 6, 7]
