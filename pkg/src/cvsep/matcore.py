"""Small dense linear algebra used by the rest of the package.

Everything here operates on 2x2 or 4x4 real matrices (the only sizes the
package needs) and delegates the numerics to numpy's LAPACK bindings.
Results are plain ``float64`` arrays.

Tolerance policy
----------------
Absolute comparisons are scaled by the problem scale

    scale = max(1, max abs entry of the input).

Quantities that are degree-d polynomials in the input entries (determinants,
invariant residuals) are compared at ``tol * scale**d`` by the callers.
The package-wide default tolerance is :data:`DEFAULT_TOL`.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    MalformedHermitianError,
    NonFiniteError,
    NotSPDError,
    NotSymmetricError,
    SingularMatrixError,
)

DEFAULT_TOL = 1e-9


def norm_inf(m) -> float:
    """Largest absolute entry of ``m`` (0.0 for an empty array)."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def scale_of(m) -> float:
    """Problem scale ``max(1, norm_inf(m))`` used to scale tolerances."""
    return max(1.0, norm_inf(m))


def as_square(m, dim: int | None = None, name: str = "matrix") -> np.ndarray:
    """Coerce to a float64 square matrix, checking shape and finiteness."""
    out = np.array(m, dtype=float, copy=True)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValueError(f"{name} must be square, got shape {out.shape}")
    if dim is not None and out.shape[0] != dim:
        raise ValueError(f"{name} must be {dim}x{dim}, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return out


def is_symmetric(m, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    return norm_inf(m - m.T) <= tol * scale_of(m)


def determinant(m) -> float:
    """Determinant of a 2x2 (cofactor formula) or 4x4 (LU) matrix."""
    m = as_square(m)
    n = m.shape[0]
    if n == 2:
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if n == 4:
        return float(np.linalg.det(m))
    raise ValueError(f"only 2x2 and 4x4 matrices are supported, got {n}x{n}")


def inverse(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Matrix inverse with an explicit singularity guard.

    Raises
    ------
    SingularMatrixError
        If ``|det m| <= tol * scale**n`` for an ``n x n`` input.
    """
    m = as_square(m)
    n = m.shape[0]
    det = float(np.linalg.det(m))
    if abs(det) <= tol * scale_of(m) ** n:
        raise SingularMatrixError(f"matrix is singular to tolerance (det={det:.3e})")
    return np.linalg.inv(m)


def sym_eigen(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns
    -------
    (w, q)
        Eigenvalues ``w`` in ascending order and an orthonormal matrix ``q``
        whose columns are the matching eigenvectors, so ``m == q @ diag(w) @ q.T``.

    Raises
    ------
    NotSymmetricError
        If ``m`` is not symmetric within ``tol * scale``.
    """
    m = as_square(m)
    if not is_symmetric(m, tol):
        raise NotSymmetricError("sym_eigen requires a symmetric matrix")
    w, q = np.linalg.eigh((m + m.T) / 2.0)
    return w, q


class HermitianPair:
    """Hermitian matrix ``H = re + i*im`` stored as two real matrices.

    ``re`` must be symmetric and ``im`` antisymmetric (within ``tol * scale``),
    which is exactly the condition for ``H`` to be Hermitian.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im, tol: float = DEFAULT_TOL):
        re = as_square(re, name="re")
        im = as_square(im, dim=re.shape[0], name="im")
        s = max(scale_of(re), scale_of(im))
        if norm_inf(re - re.T) > tol * s:
            raise MalformedHermitianError("re part must be symmetric")
        if norm_inf(im + im.T) > tol * s:
            raise MalformedHermitianError("im part must be antisymmetric")
        self.re = (re + re.T) / 2.0
        self.im = (im - im.T) / 2.0

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"HermitianPair(re={self.re!r}, im={self.im!r})"


class PsdResult(NamedTuple):
    psd: bool
    min_eig: float


def is_psd_hermitian(h: HermitianPair, tol: float = DEFAULT_TOL) -> PsdResult:
    """Positive-semidefiniteness of a Hermitian matrix given as a real pair.

    Works entirely in real arithmetic via the doubled embedding

        E = [[re, -im], [im, re]],

    whose spectrum is that of ``re + i*im`` with every eigenvalue doubled,
    so the smallest eigenvalue (and hence the PSD verdict) is unchanged.
    """
    return PsdResult(*_psd_embedding(h.re, h.im, tol))


def _psd_embedding(re: np.ndarray, im: np.ndarray, tol: float) -> tuple[bool, float]:
    n = re.shape[0]
    emb = np.empty((2 * n, 2 * n))
    emb[:n, :n] = re
    emb[n:, n:] = re
    emb[:n, n:] = -im
    emb[n:, :n] = im
    min_eig = float(np.linalg.eigvalsh(emb)[0])
    s = max(scale_of(re), scale_of(im))
    return min_eig >= -tol * s, min_eig


def spd_inverse_sqrt(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Inverse square root of a symmetric positive definite 2x2 matrix.

    Returns the symmetric ``P`` with ``P @ m @ P == I``.

    Raises
    ------
    NotSPDError
        If ``m`` is not symmetric or has an eigenvalue ``<= tol * scale``.
    """
    m = as_square(m, dim=2)
    if not is_symmetric(m, tol):
        raise NotSPDError("spd_inverse_sqrt requires a symmetric matrix")
    w, q = np.linalg.eigh((m + m.T) / 2.0)
    if w[0] <= tol * scale_of(m):
        raise NotSPDError(f"matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    return (q * (1.0 / np.sqrt(w))) @ q.T
