"""Symplectic structure on two-mode phase space.

Phase-space coordinates are ordered ``(q1, p1, q2, p2)`` with hbar = 1, so
the symplectic form is ``OMEGA = blockdiag(J, J)`` with ``J = [[0, 1], [-1, 0]]``.
``MIRROR`` is the reflection ``diag(1, 1, 1, -1)`` that flips the second
mode's momentum; it implements partial transposition at the level of
covariance matrices and is *not* symplectic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotSymplecticError
from .matcore import as_square, norm_inf, scale_of

MEMBERSHIP_TOL = 1e-10

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = np.block([[J2, np.zeros((2, 2))], [np.zeros((2, 2)), J2]])
MIRROR = np.diag([1.0, 1.0, 1.0, -1.0])
OMEGA_TILDE = MIRROR @ OMEGA @ MIRROR  # blockdiag(J, -J)
SIGMA3 = np.diag([1.0, -1.0])

for _c in (J2, OMEGA, MIRROR, OMEGA_TILDE, SIGMA3):
    _c.setflags(write=False)
del _c


def _form_for(n: int) -> np.ndarray:
    if n == 2:
        return J2
    if n == 4:
        return OMEGA
    raise ValueError(f"no symplectic form for {n}x{n} matrices")


def is_symplectic(s, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff ``s @ form @ s.T == form`` within ``tol * scale``.

    Accepts 2x2 (form J) and 4x4 (form OMEGA) matrices.
    """
    s = as_square(s)
    form = _form_for(s.shape[0])
    return norm_inf(s @ form @ s.T - form) <= tol * scale_of(s)


def rotation2(theta: float) -> np.ndarray:
    """Single-mode phase rotation, an element of SO(2) = Sp(2) ∩ O(2)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def squeeze2(x: float) -> np.ndarray:
    """Single-mode squeeze ``diag(x, 1/x)`` for ``x > 0``."""
    if not (x > 0.0 and np.isfinite(x)):
        raise ValueError(f"squeeze scale must be a positive finite number, got {x}")
    return np.diag([x, 1.0 / x])


def equal_rotation4(theta: float) -> np.ndarray:
    """Simultaneous rotation by ``theta`` in the (q1, q2) and (p1, p2) planes.

    This is both orthogonal and symplectic, and it mixes the two modes:
    ``equal_rotation4(pi/2)`` swaps them.
    """
    c, s = np.cos(theta), np.sin(theta)
    eye2 = np.eye(2)
    return np.block([[c * eye2, s * eye2], [-s * eye2, c * eye2]])


def two_mode_squeeze4(r: float) -> np.ndarray:
    """Two-mode squeeze: exp of ``r * K`` with ``K = [[0, SIGMA3], [SIGMA3, 0]]``.

    Since ``K @ K = I`` the exponential closes to ``cosh(r) I + sinh(r) K``.
    """
    ch, sh = np.cosh(r), np.sinh(r)
    return np.block([[ch * np.eye(2), sh * SIGMA3], [sh * SIGMA3, ch * np.eye(2)]])


@dataclass(frozen=True)
class LocalSymplectic:
    """Pair of single-mode symplectic matrices acting as ``blockdiag(s1, s2)``."""

    s1: np.ndarray
    s2: np.ndarray


def embed_local(local: LocalSymplectic, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """Embed a local pair as a 4x4 block-diagonal symplectic matrix.

    Raises
    ------
    NotSymplecticError
        If either 2x2 factor fails the membership test.
    """
    out = np.zeros((4, 4))
    for idx, fac in ((0, local.s1), (2, local.s2)):
        fac = as_square(fac, dim=2, name="local factor")
        if not is_symplectic(fac, tol):
            raise NotSymplecticError(f"local factor {1 + idx // 2} is not symplectic")
        out[idx : idx + 2, idx : idx + 2] = fac
    return out


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _random_local_factor(rng: np.random.Generator, max_log_squeeze: float) -> np.ndarray:
    u = rng.uniform(-max_log_squeeze, max_log_squeeze)
    t1, t2 = rng.uniform(0.0, 2.0 * np.pi, size=2)
    return rotation2(t1) @ squeeze2(np.exp(u)) @ rotation2(t2)


def random_symplectic(seed, local_only: bool = False, max_log_squeeze: float = 1.0):
    """Random symplectic matrix, reproducible from ``seed``.

    Built from three factors per mode (rotation, squeeze with log-scale
    uniform in ``[-max_log_squeeze, max_log_squeeze]``, rotation) plus, when
    ``local_only`` is false, an equal-plane rotation on each side that mixes
    the modes.

    Returns
    -------
    LocalSymplectic when ``local_only`` is true, else a 4x4 ndarray.
    """
    rng = _as_rng(seed)
    local = LocalSymplectic(
        _random_local_factor(rng, max_log_squeeze),
        _random_local_factor(rng, max_log_squeeze),
    )
    if local_only:
        return local
    pre, post = rng.uniform(0.0, 2.0 * np.pi, size=2)
    return equal_rotation4(pre) @ embed_local(local) @ equal_rotation4(post)
