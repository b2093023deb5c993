"""Separability analysis of two-mode Gaussian states.

Covariance-matrix level tools: symplectic invariants, uncertainty-principle
and PPT tests in mutually checking formulations, standard-form reduction,
constructive separability certificates, entanglement witnesses, Wigner
sampling, and a small CLI (``cvsep``).

Conventions throughout: hbar = 1, quadrature ordering ``(q1, p1, q2, p2)``,
vacuum variance 1/2.
"""

from .covariance import (
    CovarianceMatrix,
    Invariants,
    PhysicalityCheck,
    ResidualCheck,
    StandardForm,
    StandardResiduals,
    UncertaintySum,
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
from .errors import (
    CvsepError,
    MalformedHermitianError,
    NegativeDetCError,
    NonFiniteError,
    NotPhysicalError,
    NotSPDError,
    NotSymmetricError,
    NotSymplecticError,
    SingularMatrixError,
    StateFileError,
)
from .matcore import DEFAULT_TOL, HermitianPair, PsdResult, is_psd_hermitian
from .separability import (
    Certificate,
    Verdict,
    VerdictKind,
    WitnessPair,
    certify_separable,
    check_commuting_pair_bound,
    decide,
    find_witness,
)
from .states import (
    GaussianState,
    random_physical,
    random_separable,
    thermal,
    two_mode_squeezed,
    vacuum,
)
from .symplectic import (
    J2,
    MIRROR,
    OMEGA,
    OMEGA_TILDE,
    SIGMA3,
    LocalSymplectic,
    embed_local,
    equal_rotation4,
    is_symplectic,
    random_symplectic,
    rotation2,
    squeeze2,
    two_mode_squeeze4,
)
from .wigner import MomentEstimate, partial_transpose_eval, sample_moments, wigner_eval

__version__ = "0.1.0"

__all__ = [
    "CovarianceMatrix",
    "Invariants",
    "PhysicalityCheck",
    "ResidualCheck",
    "StandardForm",
    "StandardResiduals",
    "UncertaintySum",
    "from_matrix",
    "invariants",
    "is_physical_invariant",
    "is_physical_psd",
    "mirror_reflect",
    "ppt_invariant",
    "ppt_psd",
    "ppt_psd_tilde",
    "standard_inequalities",
    "to_standard_form",
    "transform",
    "uncertainty_sum",
    "CvsepError",
    "MalformedHermitianError",
    "NegativeDetCError",
    "NonFiniteError",
    "NotPhysicalError",
    "NotSPDError",
    "NotSymmetricError",
    "NotSymplecticError",
    "SingularMatrixError",
    "StateFileError",
    "DEFAULT_TOL",
    "HermitianPair",
    "PsdResult",
    "is_psd_hermitian",
    "Certificate",
    "Verdict",
    "VerdictKind",
    "WitnessPair",
    "certify_separable",
    "check_commuting_pair_bound",
    "decide",
    "find_witness",
    "GaussianState",
    "random_physical",
    "random_separable",
    "thermal",
    "two_mode_squeezed",
    "vacuum",
    "J2",
    "MIRROR",
    "OMEGA",
    "OMEGA_TILDE",
    "SIGMA3",
    "LocalSymplectic",
    "embed_local",
    "equal_rotation4",
    "is_symplectic",
    "random_symplectic",
    "rotation2",
    "squeeze2",
    "two_mode_squeeze4",
    "MomentEstimate",
    "partial_transpose_eval",
    "sample_moments",
    "wigner_eval",
]
