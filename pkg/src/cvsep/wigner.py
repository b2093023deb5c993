"""Wigner functions of Gaussian states and Monte-Carlo moment checks.

For mean ``mu`` and covariance ``V`` the Wigner function is the normalized
Gaussian

    W(xi) = exp(-(xi - mu).T V^{-1} (xi - mu) / 2) / (4 pi^2 sqrt(det V)),

so the vacuum peak value is ``1 / pi^2``.  Partial transposition of the
second mode acts on phase space as the mirror reflection of the argument.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import symplectic
from .covariance import _coerce
from .errors import SingularMatrixError
from .matcore import DEFAULT_TOL, scale_of, sym_eigen


def _mean_cov(state) -> tuple[np.ndarray, np.ndarray]:
    cov = _coerce(state)
    # Raw matrices carry no displacement; a bare ndarray's ``mean`` attribute
    # is its reduction method, not data, so it must not be picked up here.
    mean = getattr(state, "mean", None)
    if mean is None or callable(mean):
        mean = np.zeros(4)
    return np.asarray(mean, dtype=float).reshape(4), cov.matrix


def wigner_eval(state, xi):
    """Wigner density at phase-space point(s) ``xi``.

    ``xi`` may be a single 4-vector or an array of shape ``(..., 4)``; the
    result is a float or an array of the leading shape.

    Raises
    ------
    SingularMatrixError
        If ``det V`` is below ``tol * scale**4``.
    """
    mean, m = _mean_cov(state)
    det = float(np.linalg.det(m))
    if det <= DEFAULT_TOL * scale_of(m) ** 4:
        raise SingularMatrixError(f"covariance is singular (det {det:.3e})")
    prec = np.linalg.inv(m)
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1:] != (4,):
        raise ValueError(f"phase-space points must have a trailing axis of 4, got {xi.shape}")
    squeeze_out = xi.ndim == 1
    pts = xi.reshape(-1, 4) - mean
    norm = 1.0 / (4.0 * np.pi**2 * np.sqrt(det))
    vals = norm * np.exp(-0.5 * np.einsum("ni,ij,nj->n", pts, prec, pts))
    return float(vals[0]) if squeeze_out else vals.reshape(xi.shape[:-1])


def partial_transpose_eval(state, xi):
    """Wigner density of the partially transposed state: ``W(MIRROR xi)``.

    Equal to evaluating the mirror-reflected state at ``xi``; for unphysical
    mirror images this is still a well-defined Gaussian function, it just no
    longer describes a state.
    """
    xi = np.asarray(xi, dtype=float)
    return wigner_eval(state, xi @ symplectic.MIRROR.T)


class MomentEstimate(NamedTuple):
    empirical_cov: np.ndarray
    stderr: np.ndarray


def sample_moments(state, n: int, seed, batches: int = 20) -> MomentEstimate:
    """Draw ``n`` phase-space samples and estimate the covariance matrix.

    Sampling uses the symmetric square root of ``V`` from its
    eigendecomposition.  The samples are split into ``batches`` groups; the
    estimate is the mean of the per-batch (ddof=1) covariance matrices and
    ``stderr`` the entrywise standard error across batches, so
    ``|empirical_cov - V|`` should be within a few ``stderr`` of zero.
    """
    if n < 10:
        raise ValueError(f"need at least 10 samples, got {n}")
    mean, m = _mean_cov(state)
    w, q = sym_eigen(m)
    if w[0] < 0.0:
        raise SingularMatrixError("covariance must be positive semidefinite to sample")
    root = (q * np.sqrt(w)) @ q.T
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    draws = rng.standard_normal((n, 4)) @ root.T + mean
    batches = max(2, min(batches, n // 5))
    batch_covs = np.stack(
        [np.cov(chunk, rowvar=False, ddof=1) for chunk in np.array_split(draws, batches)]
    )
    est = batch_covs.mean(axis=0)
    err = batch_covs.std(axis=0, ddof=1) / np.sqrt(batches)
    return MomentEstimate(empirical_cov=est, stderr=err)
