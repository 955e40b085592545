"""Distance from a vector to the span of a family, via Gram determinants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError, ShapeError, UnsupportedRepresentationError
from ..linalg import HERMITIAN_RTOL, as_matrix, check_hermitian, determinant
from ..orthonorm import condition_gram, loewdin
from ..spaces import VectorSet, gram

GRAM_DETERMINANT = "gram_determinant"
PROJECTION_ORACLE = "projection_oracle"
NEGATIVE_CLAMP = 1e-12
MONOTONE_TOL = 1e-10


class InconsistentGramError(ShapeError):
    """Extended Gram does not extend the family's Gram matrix."""


@dataclass(frozen=True)
class DistanceResult:
    distance: float
    numerator_det: float | None
    denominator_det: float | None
    method: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _extended_gram(gamma, vs: VectorSet) -> np.ndarray:
    """Gram of ``(gamma, alpha_1, ..., alpha_n)`` in the same layout as :func:`gram`."""
    g = np.asarray(gamma)
    if g.ndim == 1:
        x = vs.require_coordinates("distance with a coordinate gamma")
        if g.shape[0] != x.shape[1]:
            raise ShapeError(f"gamma has {g.shape[0]} coordinates, ambient dimension is {x.shape[1]}")
        return gram(VectorSet.from_coordinates(np.vstack([g, x])))
    ext = as_matrix(g, square=True)
    n = vs.n
    if ext.shape[0] != n + 1:
        raise InconsistentGramError(f"extended Gram must be {n + 1}x{n + 1}, got {ext.shape}")
    check_hermitian(ext, HERMITIAN_RTOL)
    base = gram(vs)
    scale = max(np.max(np.abs(base)), 1.0)
    if np.max(np.abs(ext[1:, 1:] - base)) > HERMITIAN_RTOL * scale:
        raise InconsistentGramError("extended Gram's trailing block differs from the family's Gram matrix")
    return 0.5 * (ext + ext.conj().T)


def distance_to_span(gamma, vs: VectorSet) -> DistanceResult:
    """``dist(gamma, span) = sqrt(det Gram(gamma, alpha) / det Gram(alpha))``.

    ``gamma`` is a coordinate vector when ``vs`` has coordinates, or the
    (n+1) x (n+1) Gram matrix of ``(gamma, alpha_1, ..., alpha_n)``
    otherwise (also accepted for coordinate families).
    """
    condition_gram(gram(vs))
    ext = _extended_gram(gamma, vs)
    num = float(np.real(determinant(ext)))
    den = float(np.real(determinant(ext[1:, 1:])))
    if num < 0:
        if num < -NEGATIVE_CLAMP * den:
            raise NumericalError(f"Gram determinant ratio is negative: {num:.3e} / {den:.3e}")
        num = 0.0
    return DistanceResult(float(np.sqrt(num / den)), num, den, GRAM_DETERMINANT)


def distance_projection_oracle(gamma, vs: VectorSet) -> DistanceResult:
    """Residual of ``gamma`` after removing its components along ``K(alpha)``.

    Equals ``sqrt(||gamma||^2 - sum_i |<gamma, e_i>|^2)``; evaluated as the
    norm of the residual vector to avoid cancellation.
    """
    x = vs.require_coordinates("distance_projection_oracle")
    gamma = np.asarray(gamma)
    if gamma.ndim != 1 or gamma.shape[0] != x.shape[1]:
        raise UnsupportedRepresentationError("projection oracle needs gamma as a coordinate vector")
    e = loewdin(vs).vectors.coordinates
    comps = e.conj() @ gamma  # <gamma, e_i>
    residual = gamma - comps @ e
    return DistanceResult(float(np.linalg.norm(residual)), None, None, PROJECTION_ORACLE)


def distance_limit(gamma, family: VectorSet) -> list[float]:
    """Distances ``D_k`` from ``gamma`` to ``span(alpha_1..alpha_k)`` for k = 1..n.

    For a Gram-only family ``gamma`` is the extended Gram of
    ``(gamma, alpha_1, ..., alpha_n)``; prefixes use its leading blocks.
    The sequence must be non-increasing (within 1e-10).
    """
    g = np.asarray(gamma)
    out = []
    for k in range(1, family.n + 1):
        sub = family.subset(k)
        arg = g if g.ndim == 1 else g[: k + 1, : k + 1]
        out.append(distance_to_span(arg, sub).distance)
    for k in range(1, len(out)):
        if out[k] > out[k - 1] + MONOTONE_TOL:
            raise NumericalError(
                f"distance increased from {out[k - 1]:.3e} to {out[k]:.3e} at prefix {k + 1}"
            )
    return out
