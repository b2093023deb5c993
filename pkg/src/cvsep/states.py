"""Catalog of two-mode Gaussian states and seeded random state generators.

All constructors return :class:`GaussianState` objects with a physical
covariance matrix.  Conventions: hbar = 1, ordering ``(q1, p1, q2, p2)``,
vacuum variance 1/2 per quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariance import CovarianceMatrix, is_physical_psd, transform
from .errors import NonFiniteError, NotPhysicalError
from .matcore import DEFAULT_TOL
from .symplectic import random_symplectic, rotation2, squeeze2, two_mode_squeeze4


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of a two-mode Gaussian state."""

    mean: np.ndarray
    cov: CovarianceMatrix

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(4)
        if not np.all(np.isfinite(mean)):
            raise NonFiniteError("mean vector must be finite")
        mean.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        if not isinstance(self.cov, CovarianceMatrix):
            object.__setattr__(self, "cov", CovarianceMatrix(self.cov))

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        """Raise :class:`NotPhysicalError` unless the covariance is physical."""
        check = is_physical_psd(self.cov, tol)
        if not check.ok:
            raise NotPhysicalError(
                f"covariance violates the uncertainty principle (margin {check.margin:.3e})"
            )


_ZERO_MEAN = np.zeros(4)


def vacuum() -> GaussianState:
    """Two-mode vacuum: zero mean, covariance I/2."""
    return GaussianState(_ZERO_MEAN, CovarianceMatrix(np.eye(4) / 2.0))


def thermal(n1: float, n2: float) -> GaussianState:
    """Product of thermal states with mean occupations ``n1, n2 >= 0``."""
    for name, n in (("n1", n1), ("n2", n2)):
        if not (np.isfinite(n) and n >= 0.0):
            raise ValueError(f"occupation {name} must be >= 0, got {n}")
    diag = [n1 + 0.5, n1 + 0.5, n2 + 0.5, n2 + 0.5]
    return GaussianState(_ZERO_MEAN, CovarianceMatrix(np.diag(diag)))


def two_mode_squeezed(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with squeeze parameter ``r``.

    Built by applying the two-mode squeeze symplectic to the vacuum, which
    gives the blocks ``A = B = cosh(2r)/2 I`` and ``C = sinh(2r)/2 SIGMA3``.
    Entangled for every ``r != 0``.
    """
    if not np.isfinite(r):
        raise ValueError(f"squeeze parameter must be finite, got {r}")
    cov = transform(vacuum().cov, two_mode_squeeze4(r))
    return GaussianState(_ZERO_MEAN, cov)


def random_physical(seed, mixedness: float = 1.0) -> GaussianState:
    """Random physical state: symplectic eigenvalues ``1/2 + U(0, mixedness)``
    pushed through a random (generally non-local) symplectic.

    ``mixedness = 0`` gives random pure states.
    """
    if not (np.isfinite(mixedness) and mixedness >= 0.0):
        raise ValueError(f"mixedness must be >= 0, got {mixedness}")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    nu = 0.5 + rng.uniform(0.0, mixedness, size=2) if mixedness > 0.0 else np.full(2, 0.5)
    s = random_symplectic(rng)
    d = np.diag([nu[0], nu[0], nu[1], nu[1]])
    return GaussianState(_ZERO_MEAN, CovarianceMatrix(s @ d @ s.T))


def _random_single_mode_cov(rng: np.random.Generator) -> np.ndarray:
    """Physical single-mode covariance with squeezing bounded by |log| <= 1."""
    nu = 0.5 + rng.uniform(0.0, 0.5)
    u = rng.uniform(-1.0, 1.0)
    t1, t2 = rng.uniform(0.0, 2.0 * np.pi, size=2)
    s = rotation2(t1) @ squeeze2(np.exp(u)) @ rotation2(t2)
    return nu * (s @ s.T)


def random_separable(seed, k: int = 3, mean_spread: float = 1.0) -> GaussianState:
    """Separable-by-construction state from a ``k``-component product mixture.

    Each component is a product of two random physical single-mode Gaussians
    displaced by a random mean; the mixture weights are flat-Dirichlet.  The
    returned state carries the mixture's total mean and covariance (component
    covariances plus the spread of the component means), which satisfies
    every separability criterion the package tests.  ``k = 1`` gives a plain
    product state with a zero cross block.
    """
    if k < 1:
        raise ValueError(f"component count must be >= 1, got {k}")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    weights = rng.dirichlet(np.ones(k))
    covs = np.zeros((k, 4, 4))
    means = rng.normal(0.0, mean_spread, size=(k, 4)) if mean_spread > 0.0 else np.zeros((k, 4))
    for j in range(k):
        covs[j, :2, :2] = _random_single_mode_cov(rng)
        covs[j, 2:, 2:] = _random_single_mode_cov(rng)
    mean = weights @ means
    cov = np.einsum("j,jab->ab", weights, covs)
    cov += np.einsum("j,ja,jb->ab", weights, means, means) - np.outer(mean, mean)
    return GaussianState(mean, CovarianceMatrix(cov))
