"""Least-squares (symmetric) orthonormalization of linearly independent vectors.

The orthonormal basis closest to a family ``alpha`` in summed squared
distance is ``G^(-1/2) alpha`` with ``G`` the Gram matrix. This package
computes it, its loss, classical baselines, and the related perturbation
and distance results.
"""

from .errors import (
    IllConditionedError,
    NotHermitianError,
    NotPositiveDefiniteError,
    NumericalError,
    PreconditionError,
    ShapeError,
    SymorthoError,
    UnsupportedRepresentationError,
)
from .linalg import (
    Spectrum,
    assert_positive_definite,
    determinant,
    gershgorin_bounds,
    hermitian_eigen,
    spectral_apply,
    spectral_norm,
)
from .orthonorm import (
    LossReport,
    OrthonormalBasis,
    gram_schmidt,
    householder,
    loewdin,
    loss_closed_form,
    loss_direct,
    loss_general,
    optimality_sample,
    orthonormalize,
    row_space_orthonormalize,
)
from .spaces import VectorSet, cross_gram, gram, hilbert, monomial_space, normalize

__version__ = "0.1.0"
