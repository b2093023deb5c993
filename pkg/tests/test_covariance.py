import numpy as np
import pytest
from numpy.testing import assert_allclose

from cvsep.covariance import (
    CovarianceMatrix,
    from_matrix,
    invariants,
    is_physical_invariant,
    is_physical_psd,
    mirror_reflect,
    ppt_invariant,
    ppt_psd,
    ppt_psd_tilde,
    standard_inequalities,
    to_standard_form,
    transform,
    uncertainty_sum,
)
from cvsep.errors import (
    NonFiniteError,
    NotSPDError,
    NotSymmetricError,
    NotSymplecticError,
)
from cvsep.matcore import scale_of
from cvsep.states import random_physical, two_mode_squeezed, vacuum
from cvsep.symplectic import OMEGA, random_symplectic, two_mode_squeeze4


def standard_matrix(a, b, c1, c2):
    m = np.diag([a, a, b, b])
    m[0, 2] = m[2, 0] = c1
    m[1, 3] = m[3, 1] = c2
    return CovarianceMatrix(m)


def symplectic_nus(v):
    """Independent route to the symplectic eigenvalues: |eig(i OMEGA V)|."""
    m = v.matrix if isinstance(v, CovarianceMatrix) else np.asarray(v)
    return np.sort(np.abs(np.linalg.eigvals(1j * OMEGA @ m)))[::2]


# ---------------------------------------------------------------- validation


def test_covariance_matrix_validation():
    cm = CovarianceMatrix(np.eye(4) / 2.0)
    assert cm.matrix.shape == (4, 4)
    with pytest.raises(ValueError):
        CovarianceMatrix(np.eye(3))
    with pytest.raises(NonFiniteError):
        CovarianceMatrix(np.full((4, 4), np.inf))
    with pytest.raises(NotSymmetricError):
        m = np.eye(4)
        m[0, 1] = 0.5
        CovarianceMatrix(m)


def test_covariance_matrix_symmetrizes_roundoff():
    m = np.eye(4)
    m[0, 1] = 1e-13
    cm = CovarianceMatrix(m)
    assert cm.matrix[0, 1] == cm.matrix[1, 0]


def test_covariance_matrix_is_read_only():
    cm = CovarianceMatrix(np.eye(4))
    with pytest.raises(ValueError):
        cm.matrix[0, 0] = 9.0


def test_blocks():
    m = np.arange(16.0).reshape(4, 4)
    m = (m + m.T) / 2.0
    cm = from_matrix(m)
    assert_allclose(cm.a, m[:2, :2])
    assert_allclose(cm.b, m[2:, 2:])
    assert_allclose(cm.c, m[:2, 2:])


# ---------------------------------------------------------------- invariants


def test_vacuum_invariants_exact():
    inv = invariants(vacuum().cov)
    assert inv.i1 == 0.25
    assert inv.i2 == 0.25
    assert inv.i3 == 0.0
    assert inv.i4 == 0.0
    assert_allclose(inv.det_v, 0.0625, rtol=1e-14)


@pytest.mark.parametrize("r", [0.1, 0.5, 1.2])
def test_tmsv_invariants_closed_form(r):
    c2r, s2r = np.cosh(2 * r), np.sinh(2 * r)
    inv = invariants(two_mode_squeezed(r).cov)
    assert_allclose(inv.i1, c2r**2 / 4.0, rtol=1e-12)
    assert_allclose(inv.i2, c2r**2 / 4.0, rtol=1e-12)
    assert_allclose(inv.i3, -(s2r**2) / 4.0, rtol=1e-12)
    assert_allclose(inv.i4, (c2r * s2r) ** 2 / 8.0, rtol=1e-12)
    assert_allclose(inv.det_v, 1.0 / 16.0, rtol=1e-11)


def test_invariant_determinant_identity_random():
    rng = np.random.default_rng(3)
    for _ in range(200):
        m = rng.uniform(-2.0, 2.0, (4, 4))
        m = m + m.T
        inv = invariants(m)
        lhs = inv.i1 * inv.i2 + inv.i3**2 - inv.i4
        assert abs(inv.det_v - lhs) <= 1e-10 * scale_of(m) ** 4


def test_residual_matches_symplectic_spectrum():
    # The scalar residual factorizes over the symplectic spectrum as
    # (nu+^2 - 1/4)(nu-^2 - 1/4); check against an eigenvalue route that
    # shares no code with the invariant computation.
    for seed in range(50):
        v = random_physical(seed).cov
        lo, hi = symplectic_nus(v)
        res = is_physical_invariant(v).residual
        expected = (hi**2 - 0.25) * (lo**2 - 0.25)
        assert_allclose(res, expected, rtol=1e-8, atol=1e-10)
        inv = invariants(v)
        assert_allclose(inv.i1 + inv.i2 + 2 * inv.i3, hi**2 + lo**2, rtol=1e-9)


# ------------------------------------------------------------- physicality


def test_vacuum_physical_saturated():
    check = is_physical_psd(vacuum().cov)
    assert check.ok
    assert abs(check.margin) < 1e-12
    det = is_physical_invariant(vacuum().cov)
    assert det.ok
    assert det.residual == 0.0


def test_scaled_vacuum_below_cone():
    v = CovarianceMatrix(0.4 * np.eye(4))
    psd = is_physical_psd(v)
    assert not psd.ok
    assert_allclose(psd.margin, -0.1, atol=1e-12)
    det = is_physical_invariant(v)
    assert not det.ok
    # The residual alone is useless here: it comes back positive (0.0081)
    # because both symplectic eigenvalues sit below 1/2 and the two negative
    # factors cancel.  The supplementary trace condition is what fails.
    assert_allclose(det.residual, 0.0081, rtol=1e-12)
    inv = invariants(v)
    assert inv.i1 + inv.i2 + 2 * inv.i3 == pytest.approx(0.32)


def test_both_nus_below_half_counterexample():
    # a = b = 0.6, c1 = -c2 = 0.4 has nu+ = nu- = sqrt(0.2) < 1/2, positive
    # residual 0.0025, and trace invariant 0.40 < 1/2.
    v = standard_matrix(0.6, 0.6, 0.4, -0.4)
    lo, hi = symplectic_nus(v)
    assert_allclose([lo, hi], [np.sqrt(0.2)] * 2, rtol=1e-12)
    det = is_physical_invariant(v)
    assert_allclose(det.residual, 0.0025, rtol=1e-10)
    assert not det.ok
    assert not is_physical_psd(v).ok


def test_indefinite_counterexamples_rejected():
    # Indefinite matrices can satisfy every scalar inequality; the leading
    # principal minors are what rules them out.
    for v in (np.diag([1.0, 1.0, -1.0, -1.0]), standard_matrix(1.0, 1.0, 2.0, 2.0).matrix):
        det = is_physical_invariant(v)
        assert det.residual > 0.0
        assert not det.ok
        assert not is_physical_psd(v).ok


@pytest.mark.parametrize("r", [0.0, 0.4, 1.5])
def test_tmsv_physical_and_pure(r):
    v = two_mode_squeezed(r).cov
    assert is_physical_psd(v).ok
    det = is_physical_invariant(v)
    assert det.ok
    assert abs(det.residual) <= 1e-9 * scale_of(v.matrix) ** 4


# -------------------------------------------------------------------- mirror


def test_mirror_reflect_is_exact_involution():
    v = random_physical(11).cov
    back = mirror_reflect(mirror_reflect(v))
    assert np.array_equal(back.matrix, v.matrix)


def test_mirror_flips_only_i3():
    for seed in range(20):
        v = random_physical(seed).cov
        a = invariants(v)
        b = invariants(mirror_reflect(v))
        assert b.i3 == pytest.approx(-a.i3, abs=1e-14)
        assert b.i1 == a.i1
        assert b.i2 == a.i2
        assert_allclose(b.i4, a.i4, rtol=1e-12, atol=1e-14)
        assert_allclose(b.det_v, a.det_v, rtol=1e-10, atol=1e-14)


def test_ppt_two_forms_share_margin():
    # Reflecting V or reflecting the symplectic form inside the Hermitian
    # test are congruent by the same orthogonal matrix, so the full spectra
    # agree, not only the signs.
    for seed in range(50):
        v = random_physical(seed).cov
        m1 = ppt_psd(v).margin
        m2 = ppt_psd_tilde(v).margin
        assert_allclose(m1, m2, rtol=1e-10, atol=1e-12)


def test_ppt_matches_mirrored_physicality():
    for seed in range(30):
        v = random_physical(seed).cov
        assert ppt_psd(v).ok == is_physical_psd(mirror_reflect(v)).ok
        assert ppt_invariant(v).ok == is_physical_invariant(mirror_reflect(v)).ok


def test_ppt_residual_closed_form_on_tmsv():
    for r in (0.1, 0.5, 1.0, 2.0):
        v = two_mode_squeezed(r).cov
        expected = -0.25 * np.sinh(2 * r) ** 2
        assert_allclose(ppt_invariant(v).residual, expected, rtol=1e-12)
        assert not ppt_psd(v).ok


def test_nonnegative_i3_makes_ppt_follow_physicality():
    # With det C >= 0 the mirrored residual coincides with the physical one,
    # so PPT can only fail where physicality already fails.
    for seed in range(40):
        v = random_physical(seed).cov
        if invariants(v).i3 < 0.0:
            continue
        assert ppt_invariant(v).residual == is_physical_invariant(v).residual
        assert ppt_psd(v).ok == is_physical_psd(v).ok


# ----------------------------------------------------------------- transform


def test_transform_requires_symplectic():
    with pytest.raises(NotSymplecticError):
        transform(vacuum().cov, 2.0 * np.eye(4))
    with pytest.raises(ValueError):
        transform(vacuum().cov, np.eye(3))


def test_transform_reaches_tmsv():
    v = transform(vacuum().cov, two_mode_squeeze4(0.8))
    assert_allclose(v.matrix, two_mode_squeezed(0.8).cov.matrix, atol=1e-14)


def test_transform_preserves_det_and_margin_sign():
    rng = np.random.default_rng(5)
    for _ in range(25):
        seed = int(rng.integers(0, 2**32))
        v = random_physical(seed).cov
        s = random_symplectic(seed + 1)
        w = transform(v, s)
        assert_allclose(
            np.linalg.det(w.matrix), np.linalg.det(v.matrix), rtol=1e-9
        )
        assert is_physical_psd(w).ok == is_physical_psd(v).ok


def test_local_transform_preserves_invariants():
    rng = np.random.default_rng(6)
    for _ in range(25):
        seed = int(rng.integers(0, 2**32))
        v = random_physical(seed).cov
        loc = random_symplectic(seed + 1, local_only=True)
        a = invariants(v)
        b = invariants(transform(v, loc))
        for x, y in zip(a, b):
            assert abs(x - y) <= 1e-8 * max(1.0, abs(x), abs(y))


# ------------------------------------------------------------- standard form


def test_standard_form_fixed_point():
    sf = to_standard_form(standard_matrix(1.0, 0.8, 0.3, -0.2))
    assert_allclose([sf.a, sf.b, sf.c1, sf.c2], [1.0, 0.8, 0.3, -0.2], atol=1e-14)
    assert_allclose(sf.to_standard.s1, np.eye(2), atol=1e-12)
    assert_allclose(sf.to_standard.s2, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("r", [0.3, 1.0])
def test_standard_form_of_tmsv(r):
    sf = to_standard_form(two_mode_squeezed(r).cov)
    assert_allclose(sf.a, np.cosh(2 * r) / 2.0, rtol=1e-12)
    assert_allclose(sf.b, np.cosh(2 * r) / 2.0, rtol=1e-12)
    assert_allclose(sf.c1, np.sinh(2 * r) / 2.0, rtol=1e-12)
    assert_allclose(sf.c2, -np.sinh(2 * r) / 2.0, rtol=1e-12)


def test_standard_form_scalars_absorb_local_rotations():
    # The four scalars are local invariants, so pre-rotating the state must
    # not change them.
    base = to_standard_form(two_mode_squeezed(0.7).cov)
    for seed in (1, 2, 3):
        loc = random_symplectic(seed, local_only=True)
        moved = transform(two_mode_squeezed(0.7).cov, loc)
        sf = to_standard_form(moved)
        assert_allclose(
            [sf.a, sf.b, sf.c1, sf.c2],
            [base.a, base.b, base.c1, base.c2],
            rtol=1e-9,
            atol=1e-11,
        )


def test_standard_form_round_trip_and_conventions():
    for seed in range(200):
        v = random_physical(seed).cov
        sf = to_standard_form(v)
        rebuilt = transform(v, sf.to_standard)
        assert_allclose(
            rebuilt.matrix,
            sf.matrix().matrix,
            atol=1e-9 * scale_of(v.matrix),
        )
        inv = invariants(v)
        assert_allclose(sf.a, np.sqrt(inv.i1), atol=1e-10)
        assert_allclose(sf.b, np.sqrt(inv.i2), atol=1e-10)
        assert sf.c1 >= abs(sf.c2)
        assert_allclose(sf.c1 * sf.c2, inv.i3, rtol=1e-8, atol=1e-12)


def test_standard_form_snaps_tiny_c2():
    v = standard_matrix(1.0, 1.0, 0.3, 1e-13)
    sf = to_standard_form(v)
    assert sf.c2 == 0.0
    assert_allclose(sf.c1, 0.3, atol=1e-12)


def test_standard_form_zero_cross_block():
    sf = to_standard_form(np.diag([1.0, 1.0, 0.7, 0.7]))
    assert sf.c1 == 0.0
    assert sf.c2 == 0.0


def test_standard_form_requires_positive_blocks():
    with pytest.raises(NotSPDError):
        to_standard_form(np.diag([1.0, -1.0, 1.0, 1.0]))


# ------------------------------------------------- standard-form inequalities


def test_standard_inequalities_frozen_example():
    sf = to_standard_form(standard_matrix(1.0, 1.0, 0.9, 0.9))
    res = standard_inequalities(sf)
    assert_allclose(res.physical_residual, -3.2256, rtol=1e-12)
    assert_allclose(res.ppt_residual, -3.2256, rtol=1e-12)


def test_standard_inequalities_are_four_times_invariant_residuals():
    for seed in range(100):
        v = random_physical(seed).cov
        sf = to_standard_form(v)
        res = standard_inequalities(sf)
        sm = sf.matrix()
        s4 = scale_of(sm.matrix) ** 4
        assert_allclose(
            res.physical_residual,
            4.0 * is_physical_invariant(sm).residual,
            atol=1e-9 * s4,
        )
        assert_allclose(
            res.ppt_residual,
            4.0 * ppt_invariant(sm).residual,
            atol=1e-9 * s4,
        )


# ------------------------------------------------------------ variance sums


def test_uncertainty_sum_epr_pair_on_tmsv():
    d = [1.0, 0.0, -1.0, 0.0]
    dp = [0.0, 1.0, 0.0, 1.0]
    for r in (0.0, 0.5, 1.0):
        check = uncertainty_sum(two_mode_squeezed(r).cov, d, dp)
        assert_allclose(check.sum, 2.0 * np.exp(-2.0 * r), rtol=1e-12)
        assert check.omega_bound == 0.0
        assert check.omega_tilde_bound == 2.0
        assert check.separable_bound == 2.0


def test_uncertainty_sum_bound_ordering():
    rng = np.random.default_rng(9)
    v = random_physical(4).cov
    for _ in range(100):
        d, dp = rng.normal(size=(2, 4))
        check = uncertainty_sum(v, d, dp)
        assert check.separable_bound >= check.omega_bound - 1e-14
        assert check.separable_bound >= check.omega_tilde_bound - 1e-14
        assert check.separable_bound <= check.omega_bound + check.omega_tilde_bound + 1e-14


def test_uncertainty_sum_physical_floor():
    # Every physical state obeys sum >= |w1 + w2|.
    rng = np.random.default_rng(10)
    for seed in range(30):
        v = random_physical(seed).cov
        for _ in range(20):
            d, dp = rng.normal(size=(2, 4))
            check = uncertainty_sum(v, d, dp)
            assert check.sum >= check.omega_bound - 1e-10


def test_uncertainty_sum_rejects_non_finite():
    with pytest.raises(NonFiniteError):
        uncertainty_sum(vacuum().cov, [np.nan, 0, 0, 0], [0, 1, 0, 0])
