"""Covariance matrices of two-mode Gaussian states and their invariants.

A state is described by the 4x4 symmetric matrix ``V`` of symmetrized second
moments in the ordering ``(q1, p1, q2, p2)`` with hbar = 1, so the vacuum is
``V = I/2``.  In block form

    V = [[A, C], [C.T, B]]

with 2x2 blocks.  The quantities

    I1 = det A,  I2 = det B,  I3 = det C,
    I4 = tr(A J C J B J C.T J)

are invariant under local symplectic transformations, and
``det V = I1*I2 + I3**2 - I4`` identically.

Two physicality tests are provided and must agree:

* :func:`is_physical_psd` checks the uncertainty principle directly as
  positive-semidefiniteness of the Hermitian matrix ``V + (i/2) OMEGA``.
* :func:`is_physical_invariant` is determinant-only.  The scalar residual

    I1*I2 + (1/4 - I3)**2 - I4 - (I1 + I2)/4

  equals ``(nu_+**2 - 1/4) * (nu_-**2 - 1/4)`` in terms of the symplectic
  eigenvalues of ``V``, so it is non-negative *both* when the state is
  physical (both nu >= 1/2) and when both nu < 1/2.  The residual sign alone
  therefore cannot decide physicality; the check additionally requires
  ``I1 + I2 + 2*I3 >= 1/2`` (which fails whenever both nu < 1/2, since the
  left side equals ``nu_+**2 + nu_-**2``) and positive definiteness of ``V``
  via its leading principal minors.  With those supplements the two routes
  agree exactly for every symmetric input.

The mirror reflection ``V -> MIRROR V MIRROR`` flips the sign of I3 and leaves
I1, I2, I4 and the minors unchanged; partial transposition acts on covariance
matrices exactly this way, which is why the positivity-under-partial-transpose
(PPT) test is physicality of the mirrored matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import symplectic
from .errors import CvsepError, NonFiniteError, NotSymmetricError, NotSymplecticError
from .matcore import (
    DEFAULT_TOL,
    HermitianPair,
    is_psd_hermitian,
    norm_inf,
    scale_of,
    spd_inverse_sqrt,
)
from .symplectic import J2, LocalSymplectic, embed_local, is_symplectic


class CovarianceMatrix:
    """Validated 4x4 symmetric matrix of second moments.

    The constructor accepts anything array-like, symmetrizes inputs whose
    asymmetry is below ``tol * scale`` and rejects everything else.  No
    physicality requirement is imposed here: unphysical matrices are valid
    inputs for the classification routines.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        m = np.array(matrix, dtype=float, copy=True)
        if m.shape != (4, 4):
            raise ValueError(f"covariance matrix must be 4x4, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NonFiniteError("covariance matrix contains non-finite entries")
        if norm_inf(m - m.T) > tol * scale_of(m):
            raise NotSymmetricError("covariance matrix is not symmetric to tolerance")
        m = (m + m.T) / 2.0
        m.setflags(write=False)
        self._m = m

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def a(self) -> np.ndarray:
        """Upper-left block: second moments of mode 1."""
        return self._m[:2, :2]

    @property
    def b(self) -> np.ndarray:
        """Lower-right block: second moments of mode 2."""
        return self._m[2:, 2:]

    @property
    def c(self) -> np.ndarray:
        """Upper-right block: cross correlations between the modes."""
        return self._m[:2, 2:]

    def __repr__(self) -> str:
        return f"CovarianceMatrix({self._m.tolist()!r})"


def from_matrix(raw, tol: float = DEFAULT_TOL) -> CovarianceMatrix:
    """Build a :class:`CovarianceMatrix` from a raw 4x4 array."""
    return CovarianceMatrix(raw, tol)


def _coerce(v, tol: float = DEFAULT_TOL) -> CovarianceMatrix:
    if isinstance(v, CovarianceMatrix):
        return v
    cov = getattr(v, "cov", None)
    if isinstance(cov, CovarianceMatrix):
        return cov
    return CovarianceMatrix(v, tol)


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


class Invariants(NamedTuple):
    i1: float
    i2: float
    i3: float
    i4: float
    det_v: float


def invariants(v, tol: float = DEFAULT_TOL) -> Invariants:
    """Local symplectic invariants I1..I4 together with det V.

    The identity ``det V = I1*I2 + I3**2 - I4`` is asserted within
    ``1e-10 * scale**4`` (both sides are degree-4 polynomials in the entries);
    a violation indicates a broken build and raises :class:`CvsepError`.
    """
    v = _coerce(v, tol)
    a, b, c = v.a, v.b, v.c
    i1 = _det2(a)
    i2 = _det2(b)
    i3 = _det2(c)
    i4 = float(np.trace(a @ J2 @ c @ J2 @ b @ J2 @ c.T @ J2))
    det_v = float(np.linalg.det(v.matrix))
    s4 = scale_of(v.matrix) ** 4
    if abs(det_v - (i1 * i2 + i3 * i3 - i4)) > 1e-10 * s4:
        raise CvsepError("invariant identity det V = I1*I2 + I3^2 - I4 violated")
    return Invariants(i1, i2, i3, i4, det_v)


class PhysicalityCheck(NamedTuple):
    ok: bool
    margin: float


class ResidualCheck(NamedTuple):
    ok: bool
    residual: float


def is_physical_psd(v, tol: float = DEFAULT_TOL) -> PhysicalityCheck:
    """Uncertainty principle as a PSD test on ``V + (i/2) OMEGA``.

    ``margin`` is the smallest eigenvalue of that Hermitian matrix; the state
    is physical iff ``margin >= -tol * scale``.
    """
    v = _coerce(v, tol)
    pair = HermitianPair(v.matrix, symplectic.OMEGA / 2.0, tol)
    return PhysicalityCheck(*is_psd_hermitian(pair, tol))


def _leading_minors(m: np.ndarray) -> tuple[float, float, float]:
    """First three leading principal minors (the fourth is det V)."""
    d1 = float(m[0, 0])
    d2 = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    d3 = float(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )
    return d1, d2, d3


def _residual(inv: Invariants, i3: float) -> float:
    return inv.i1 * inv.i2 + (0.25 - i3) ** 2 - inv.i4 - 0.25 * (inv.i1 + inv.i2)


def _invariant_physical(inv: Invariants, minors, mirrored: bool, tol: float, s: float) -> bool:
    """Physicality of V (or of MIRROR V MIRROR) from scalar data alone.

    Mirroring flips the sign of I3 and changes nothing else that appears
    here, including the leading principal minors.
    """
    i3 = -inv.i3 if mirrored else inv.i3
    s2 = s * s
    s4 = s2 * s2
    d1, d2, d3 = minors
    return (
        _residual(inv, i3) >= -tol * s4
        and inv.i1 + inv.i2 + 2.0 * i3 >= 0.5 - tol * s2
        and inv.i1 >= 0.25 - tol * s2
        and inv.i2 >= 0.25 - tol * s2
        and d1 > -tol * s
        and d2 > -tol * s2
        and d3 > -tol * s2 * s
        and inv.det_v > -tol * s4
    )


def is_physical_invariant(v, tol: float = DEFAULT_TOL) -> ResidualCheck:
    """Determinant-only physicality test; agrees with :func:`is_physical_psd`.

    ``residual`` is the scalar uncertainty residual described in the module
    docstring.  ``ok`` requires in addition ``I1, I2 >= 1/4``,
    ``I1 + I2 + 2*I3 >= 1/2`` and positive definiteness of ``V`` through its
    leading principal minors, each at the tolerance scaled to its polynomial
    degree.  Without the supplements the residual sign alone misclassifies
    matrices whose symplectic eigenvalues are both below 1/2, as well as
    indefinite matrices with large block determinants.
    """
    v = _coerce(v, tol)
    inv = invariants(v, tol)
    minors = _leading_minors(v.matrix)
    s = scale_of(v.matrix)
    ok = _invariant_physical(inv, minors, False, tol, s)
    return ResidualCheck(ok, _residual(inv, inv.i3))


def mirror_reflect(v) -> CovarianceMatrix:
    """Congruence by ``MIRROR = diag(1, 1, 1, -1)``: flips mode 2's momentum.

    An exact involution (entries only change sign), and the covariance-level
    action of partial transposition on the second mode.
    """
    v = _coerce(v)
    lam = symplectic.MIRROR
    return CovarianceMatrix(lam @ v.matrix @ lam)


def ppt_psd(v, tol: float = DEFAULT_TOL) -> PhysicalityCheck:
    """PPT test: physicality of the mirror-reflected matrix, as a PSD check."""
    v = _coerce(v, tol)
    lam = symplectic.MIRROR
    pair = HermitianPair(lam @ v.matrix @ lam, symplectic.OMEGA / 2.0, tol)
    return PhysicalityCheck(*is_psd_hermitian(pair, tol))


def ppt_psd_tilde(v, tol: float = DEFAULT_TOL) -> PhysicalityCheck:
    """PPT test in the equivalent form ``V + (i/2) MIRROR OMEGA MIRROR >= 0``.

    The two PPT formulations are congruent by the orthogonal MIRROR, so their
    spectra (and margins) are identical, not just their verdicts.
    """
    v = _coerce(v, tol)
    lam = symplectic.MIRROR
    pair = HermitianPair(v.matrix, lam @ symplectic.OMEGA @ lam / 2.0, tol)
    return PhysicalityCheck(*is_psd_hermitian(pair, tol))


def ppt_invariant(v, tol: float = DEFAULT_TOL) -> ResidualCheck:
    """Determinant-only PPT test; agrees with :func:`ppt_psd` for any input.

    ``residual`` replaces I3 by |I3| in the scalar uncertainty residual:

        I1*I2 + (1/4 - |I3|)**2 - I4 - (I1 + I2)/4

    For a physical matrix this is negative exactly when the mirror image is
    unphysical.  ``ok`` is computed as invariant-form physicality of the
    mirror image (I3 -> -I3, minors unchanged), so that the verdict also
    matches :func:`ppt_psd` on unphysical inputs, where the residual sign
    carries no information.  For ``I3 >= 0`` the residual coincides exactly
    with the :func:`is_physical_invariant` residual.
    """
    v = _coerce(v, tol)
    inv = invariants(v, tol)
    minors = _leading_minors(v.matrix)
    s = scale_of(v.matrix)
    ok = _invariant_physical(inv, minors, True, tol, s)
    return ResidualCheck(ok, _residual(inv, abs(inv.i3)))


def transform(v, s, tol: float = DEFAULT_TOL) -> CovarianceMatrix:
    """Congruence ``V -> S V S.T`` by a symplectic ``S``.

    ``s`` may be a 4x4 matrix or a :class:`LocalSymplectic` pair.  Symplectic
    invariants and physicality are preserved; the membership test runs first
    and raises :class:`NotSymplecticError` on failure.
    """
    v = _coerce(v, tol)
    if isinstance(s, LocalSymplectic):
        s = embed_local(s, tol)
    else:
        s = np.asarray(s, dtype=float)
        if s.shape != (4, 4):
            raise ValueError(f"symplectic factor must be 4x4, got shape {s.shape}")
        if not is_symplectic(s, tol):
            raise NotSymplecticError("transform requires a symplectic matrix")
    return CovarianceMatrix(s @ v.matrix @ s.T, tol)


@dataclass(frozen=True)
class StandardForm:
    """Scalars ``(a, b, c1, c2)`` of the local standard form, plus the locals.

    ``to_standard`` maps the original matrix onto
    ``[[a I, diag(c1, c2)], [diag(c1, c2), b I]]`` by congruence.  The
    convention is ``c1 >= |c2|`` with ``sign(c1 * c2) = sign(det C)``; ``c2``
    is exactly 0.0 when the second singular value of the rotated cross block
    falls below tolerance.
    """

    a: float
    b: float
    c1: float
    c2: float
    to_standard: LocalSymplectic

    def matrix(self) -> CovarianceMatrix:
        """The standard-form matrix built from the four scalars."""
        m = np.diag([self.a, self.a, self.b, self.b])
        m[0, 2] = m[2, 0] = self.c1
        m[1, 3] = m[3, 1] = self.c2
        return CovarianceMatrix(m)


def to_standard_form(v, tol: float = DEFAULT_TOL) -> StandardForm:
    """Reduce a covariance matrix to its local standard form.

    The diagonal blocks are whitened to multiples of the identity by the
    symmetric unit-determinant factors ``(det A)**(1/4) A**(-1/2)`` (and
    likewise for B), then the cross block is diagonalized by a pair of proper
    rotations from its singular value decomposition.  Requires ``V > 0``
    (both diagonal blocks positive definite); raises :class:`NotSPDError`
    otherwise.
    """
    v = _coerce(v, tol)
    s = scale_of(v.matrix)
    s1 = _det2(v.a) ** 0.25 * spd_inverse_sqrt(v.a, tol)
    s2 = _det2(v.b) ** 0.25 * spd_inverse_sqrt(v.b, tol)
    c_rot = s1 @ v.c @ s2
    u, sing, vh = np.linalg.svd(c_rot)
    c1, c2 = float(sing[0]), float(sing[1])
    if np.linalg.det(u) < 0.0:
        u = u @ np.diag([1.0, -1.0])
        c2 = -c2
    if np.linalg.det(vh) < 0.0:
        vh = np.diag([1.0, -1.0]) @ vh
        c2 = -c2
    if c1 <= tol * s:
        c1, c2 = 0.0, 0.0
    elif abs(c2) <= tol * s:
        c2 = 0.0
    local = LocalSymplectic(u.T @ s1, vh @ s2)
    return StandardForm(
        a=float(np.sqrt(_det2(v.a))),
        b=float(np.sqrt(_det2(v.b))),
        c1=c1,
        c2=c2,
        to_standard=local,
    )


class StandardResiduals(NamedTuple):
    physical_residual: float
    ppt_residual: float


def standard_inequalities(sf: StandardForm) -> StandardResiduals:
    """Residuals of the standard-form uncertainty and PPT inequalities.

    ``physical_residual`` is the left minus right side of

        4 (a b - c1**2)(a b - c2**2) >= a**2 + b**2 + 2 c1 c2 - 1/4

    and ``ppt_residual`` the same with ``2 |c1 c2|``.  On standard-form
    scalars these equal exactly 4 times the corresponding invariant-form
    residuals (I1 = a**2, I2 = b**2, I3 = c1*c2, I4 = a*b*(c1**2 + c2**2)).
    """
    a, b, c1, c2 = sf.a, sf.b, sf.c1, sf.c2
    lhs = 4.0 * (a * b - c1 * c1) * (a * b - c2 * c2)
    base = a * a + b * b - 0.25
    return StandardResiduals(
        physical_residual=lhs - base - 2.0 * c1 * c2,
        ppt_residual=lhs - base - 2.0 * abs(c1 * c2),
    )


class UncertaintySum(NamedTuple):
    sum: float
    omega_bound: float
    omega_tilde_bound: float
    separable_bound: float


def uncertainty_sum(v, d, dp) -> UncertaintySum:
    """Variance sum ``d.T V d + dp.T V dp`` with its three lower bounds.

    With the mode-wise wedge products ``w1 = d1*dp2 - d2*dp1`` and
    ``w2 = d3*dp4 - d4*dp3``:

    * ``omega_bound = |w1 + w2|`` holds for every physical state,
    * ``omega_tilde_bound = |w1 - w2|`` holds for every PPT state,
    * ``separable_bound = |w1| + |w2|`` (the larger of the two) holds for
      every separable state, and a violation witnesses entanglement.
    """
    v = _coerce(v)
    d = np.asarray(d, dtype=float).reshape(4)
    dp = np.asarray(dp, dtype=float).reshape(4)
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(dp))):
        raise NonFiniteError("test vectors must be finite")
    total = float(d @ v.matrix @ d + dp @ v.matrix @ dp)
    w1 = d[0] * dp[1] - d[1] * dp[0]
    w2 = d[2] * dp[3] - d[3] * dp[2]
    return UncertaintySum(
        sum=total,
        omega_bound=abs(w1 + w2),
        omega_tilde_bound=abs(w1 - w2),
        separable_bound=abs(w1) + abs(w2),
    )
