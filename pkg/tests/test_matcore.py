import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from cvsep.errors import (
    MalformedHermitianError,
    NonFiniteError,
    NotSPDError,
    NotSymmetricError,
    SingularMatrixError,
)
from cvsep.matcore import (
    HermitianPair,
    determinant,
    inverse,
    is_psd_hermitian,
    norm_inf,
    scale_of,
    spd_inverse_sqrt,
    sym_eigen,
)
from cvsep.symplectic import OMEGA, two_mode_squeeze4


def tmsv_cov(r):
    s = two_mode_squeeze4(r)
    return s @ (np.eye(4) / 2.0) @ s.T


def test_norm_inf_and_scale():
    assert norm_inf(np.array([[1.0, -3.0], [2.0, 0.5]])) == 3.0
    assert scale_of(np.array([[0.1, 0.0], [0.0, 0.2]])) == 1.0
    assert scale_of(np.array([[7.0, 0.0], [0.0, 0.2]])) == 7.0


def test_determinant_small_cases():
    assert determinant(np.eye(2)) == 1.0
    assert determinant(np.array([[0.0, 1.0], [-1.0, 0.0]])) == 1.0
    assert_allclose(determinant(np.eye(4) / 2.0), 1.0 / 16.0, rtol=1e-14)


@pytest.mark.parametrize("r", [0.2, 0.7, 1.3])
def test_determinant_symplectic_congruence_preserves_det(r):
    # det S = 1 for symplectic S, so the squeezed vacuum keeps det = 1/16.
    assert_allclose(determinant(tmsv_cov(r)), 1.0 / 16.0, rtol=1e-12)


def test_determinant_rejects_other_sizes():
    with pytest.raises(ValueError):
        determinant(np.eye(3))


def test_inverse_diagonal_and_vacuum():
    assert_allclose(inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))
    assert_allclose(inverse(np.eye(4) / 2.0), 2.0 * np.eye(4))


def test_inverse_random_roundtrip():
    rng = np.random.default_rng(0)
    for _ in range(50):
        m = rng.normal(size=(4, 4)) + 5.0 * np.eye(4)
        assert_allclose(m @ inverse(m), np.eye(4), atol=1e-12)


def test_inverse_singular_raises():
    with pytest.raises(SingularMatrixError):
        inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_inverse_non_finite_raises():
    with pytest.raises(NonFiniteError):
        inverse(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_sym_eigen_diagonal():
    w, q = sym_eigen(np.diag([4.0, 1.0, 3.0, 2.0]))
    assert_allclose(w, [1.0, 2.0, 3.0, 4.0])
    assert_allclose(np.abs(q), np.eye(4)[:, [1, 3, 2, 0]], atol=1e-14)


@pytest.mark.parametrize("r", [0.3, 1.0])
def test_sym_eigen_squeezed_vacuum_spectrum(r):
    # The (q1 +- q2) and (p1 -+ p2) directions diagonalize the two-mode
    # squeezed covariance with doubly degenerate eigenvalues exp(-+2r)/2.
    w, _ = sym_eigen(tmsv_cov(r))
    expected = np.sort([np.exp(-2 * r) / 2] * 2 + [np.exp(2 * r) / 2] * 2)
    assert_allclose(w, expected, rtol=1e-12)


def test_sym_eigen_rejects_asymmetric():
    with pytest.raises(NotSymmetricError):
        sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sym_eigen_reconstructs(seed):
    rng = np.random.default_rng(seed)
    m = rng.uniform(-5.0, 5.0, size=(4, 4))
    m = m + m.T
    w, q = sym_eigen(m)
    assert_allclose(q @ np.diag(w) @ q.T, m, atol=1e-9 * scale_of(m))
    assert_allclose(q.T @ q, np.eye(4), atol=1e-12)


def test_hermitian_pair_validation():
    HermitianPair(np.eye(4), OMEGA / 2.0)
    with pytest.raises(MalformedHermitianError):
        HermitianPair(np.triu(np.ones((4, 4))), OMEGA / 2.0)
    with pytest.raises(MalformedHermitianError):
        HermitianPair(np.eye(4), np.eye(4))


def test_is_psd_hermitian_vacuum_saturates():
    res = is_psd_hermitian(HermitianPair(np.eye(4) / 2.0, OMEGA / 2.0))
    assert res.psd
    assert abs(res.min_eig) < 1e-12


def test_is_psd_hermitian_known_margins():
    # v I + (i/2) Omega has per-mode eigenvalues v -+ 1/2.
    res = is_psd_hermitian(HermitianPair(0.4 * np.eye(4), OMEGA / 2.0))
    assert not res.psd
    assert_allclose(res.min_eig, -0.1, atol=1e-12)
    res = is_psd_hermitian(HermitianPair(np.eye(4), OMEGA / 2.0))
    assert res.psd
    assert_allclose(res.min_eig, 0.5, atol=1e-12)


def test_is_psd_hermitian_agrees_with_complex_solver():
    # Independent route: complex Hermitian eigensolver on re + i*im.
    rng = np.random.default_rng(1)
    for _ in range(500):
        re = rng.uniform(-2.0, 2.0, size=(4, 4))
        re = re + re.T
        im = rng.uniform(-2.0, 2.0, size=(4, 4))
        im = im - im.T
        res = is_psd_hermitian(HermitianPair(re, im))
        direct = np.linalg.eigvalsh(re + 1j * im)[0]
        assert_allclose(res.min_eig, direct, atol=1e-10)


def test_spd_inverse_sqrt_identity_and_diagonal():
    assert_allclose(spd_inverse_sqrt(np.eye(2)), np.eye(2))
    assert_allclose(spd_inverse_sqrt(np.diag([4.0, 1.0])), np.diag([0.5, 1.0]))


def test_spd_inverse_sqrt_coupled():
    m = np.array([[2.0, 1.0], [1.0, 2.0]])
    # Eigenvalues 1 and 3 shared with m, so P = Q diag(1, 1/sqrt(3)) Q.T.
    expected = np.array(
        [[0.7886751345948129, -0.21132486540518708],
         [-0.21132486540518708, 0.7886751345948129]]
    )
    p = spd_inverse_sqrt(m)
    assert_allclose(p, expected, atol=1e-14)
    assert_allclose(p @ m @ p, np.eye(2), atol=1e-14)
    assert_allclose(p, p.T, atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(0.1, 10.0),
    st.floats(0.1, 10.0),
    st.floats(-0.95, 0.95),
)
def test_spd_inverse_sqrt_properties(l1, l2, corr):
    off = corr * np.sqrt(l1 * l2)
    m = np.array([[l1, off], [off, l2]])
    p = spd_inverse_sqrt(m)
    assert_allclose(p @ m @ p, np.eye(2), atol=1e-10)
    assert_allclose(p @ m, m @ p, atol=1e-10 * scale_of(m))


def test_spd_inverse_sqrt_rejects_indefinite():
    with pytest.raises(NotSPDError):
        spd_inverse_sqrt(np.diag([1.0, -1.0]))
    with pytest.raises(NotSPDError):
        spd_inverse_sqrt(np.diag([1.0, 0.0]))
