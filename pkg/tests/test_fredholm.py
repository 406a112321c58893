import numpy as np
import pytest

from superko import fredholm as fr
from superko.fredholm import FredholmError, NumericModule, SpectralWindow
from superko.suites import _base_operator, continuity_checks, membership_checks, retract_checks

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def _plain_swap_operator(values):
    """Block-diagonal odd operator on (k|k), evens first, one swap per value."""
    k = len(values)
    F = np.zeros((2 * k, 2 * k))
    for i, v in enumerate(values):
        F[i, k + i] = F[k + i, i] = v
    return F, NumericModule.plain(k, k)


def test_window_constant():
    F0, mod = _plain_swap_operator([0.0, 2.0, 5.0])
    w = SpectralWindow(F0, mod)
    assert w.c == pytest.approx(0.5)


def test_window_needs_positive_eigenvalue():
    with pytest.raises(FredholmError):
        SpectralWindow(np.zeros((2, 2)))


def test_base_operator_gives_kernel():
    F0, mod = _plain_swap_operator([0.0, 0.0, 4.0])
    w = SpectralWindow(F0, mod)
    p = fr.spectral_projection(w, F0)
    ev, vec = np.linalg.eigh(F0)
    ker = vec[:, np.abs(ev) < 1e-12]
    assert np.allclose(p, ker @ ker.T)
    assert np.allclose(F0 @ p, 0)


def test_diagonal_operator_coordinate_projector():
    F0 = np.diag([0.0, 4.0, -4.0, 8.0])
    w = SpectralWindow(F0)
    F = np.diag([0.3, 4.2, -3.9, 8.0])
    assert np.allclose(fr.spectral_projection(w, F), np.diag([1.0, 0.0, 0.0, 0.0]))


def test_projection_outside_ball(rng):
    F0, mod = _plain_swap_operator([0.0, 4.0])
    w = SpectralWindow(F0, mod)
    with pytest.raises(FredholmError):
        fr.spectral_projection(w, F0 + 2 * w.c * np.eye(4) * 0 + fr.random_admissible(rng, mod) * 10)


def test_edge_eigenvalue_rejected():
    F0 = np.diag([0.0, 4.0, -4.0])
    w = SpectralWindow(F0)
    with pytest.raises(FredholmError):
        fr.spectral_projection(w, np.diag([1.0, 4.0, -4.0]) - np.diag([1.0 - w.c, 0, 0]), check=False)


def test_non_admissible_rejected():
    F0, mod = _plain_swap_operator([0.0, 4.0])
    w = SpectralWindow(F0, mod)
    bad = F0 + 0.1 * np.diag([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(FredholmError):
        fr.spectral_projection(w, bad)


def test_projection_is_graded_submodule(rng):
    for n in (1, -1, 2):
        mod = fr.standard_module(n, 16)
        F0 = _base_operator(rng, mod)
        w = SpectralWindow(F0, mod)
        E = fr.random_admissible(rng, mod)
        F = F0 + E * (0.5 * w.c / fr.opnorm(E))
        p = fr.spectral_projection(w, F)
        assert np.allclose(p @ p, p) and np.allclose(p, p.T)
        for e in mod.generators + [mod.grading]:
            assert np.allclose(e @ p, p @ e)


def test_continuity_trivial_case():
    F0, mod = _plain_swap_operator([0.0, 4.0])
    w = SpectralWindow(F0, mod)
    assert fr.projection_continuity_check(w, F0, F0, 0.01)


def test_continuity_and_rank(rng):
    cont, adv, rank = continuity_checks(rng, pairs=60, paths=8)
    assert cont.passed and rank.passed
    assert adv.failed == 0


def test_retract_examples():
    F0, mod = _plain_swap_operator([0.0, 4.0, 6.0])
    w = SpectralWindow(F0, mod)
    pf = fr.spectral_projection(w, F0)
    # V containing V_F
    big = np.diag([1.0, 1.0, 0.0, 1.0, 1.0, 0.0])
    assert np.allclose(fr.retract(big, F0, w), big)
    # V orthogonal to V_F
    far = np.diag([0.0, 0.0, 1.0, 0.0, 0.0, 1.0])
    assert np.allclose(fr.retract(far, F0, w), far + pf)


def test_retract_requires_invariance():
    F0, mod = _plain_swap_operator([0.0, 4.0])
    w = SpectralWindow(F0, mod)
    with pytest.raises(FredholmError):
        fr.retract(np.diag([0.0, 1.0, 0.0, 0.0]), F0, w)


def test_retract_matches_oracle(rng):
    assert retract_checks(rng, 10).passed


def test_subspace_sum():
    a = np.diag([1.0, 0.0, 0.0])
    v = np.array([[1.0], [1.0], [0.0]]) / np.sqrt(2)
    s = fr.subspace_sum(a, v @ v.T)
    assert np.allclose(s, np.diag([1.0, 1.0, 0.0]))


def test_membership_degree_zero(rng):
    F = fr.random_admissible(rng, fr.standard_module(0, 8))
    assert fr.fredn_membership(F, 0)


def test_membership_definite_fails():
    mod = NumericModule(-1, [SWAP], np.diag([1.0, -1.0]))
    assert not fr.fredn_membership(2 * SWAP, 1, mod)


def test_membership_mixed_signs_degree_five(rng):
    m5 = fr.standard_module(5, 16)
    F = fr.random_admissible(rng, m5)
    both = NumericModule(m5.degree, [np.kron(np.eye(2), g) for g in m5.generators], np.kron(np.eye(2), m5.grading))
    assert fr.fredn_membership(np.kron(np.diag([1.0, -1.0]), F), 5, both)


def test_membership_needs_module():
    with pytest.raises(FredholmError):
        fr.fredn_membership(SWAP, 1)


def test_block_map(rng):
    mem, btx = membership_checks(rng, 10)
    assert mem.passed and btx.passed


def test_block_map_degrees(rng):
    for n in (1, 2, 3, 4, 5):
        mod = fr.standard_module(n, 16)
        F = fr.random_admissible(rng, mod)
        Fp, out = fr.btx_map(F, n, mod)
        k = -(-n // 4)
        assert out.degree == 4 * k + (4 * k - n)
        assert not fr.admissibility_violations(Fp, out)
        assert np.allclose(np.sort(np.abs(np.linalg.eigvalsh(Fp))), np.sort(np.repeat(np.abs(np.linalg.eigvalsh(F)), Fp.shape[0] // F.shape[0])))
    with pytest.raises(FredholmError):
        fr.btx_map(SWAP, 0, NumericModule.plain(1, 1))


def test_random_admissible_is_admissible(rng):
    for n in (0, 1, -2, 3):
        mod = fr.standard_module(n, 16)
        assert not fr.admissibility_violations(fr.random_admissible(rng, mod), mod)


def test_standard_module_dimension():
    with pytest.raises(FredholmError):
        fr.standard_module(3, 6)
