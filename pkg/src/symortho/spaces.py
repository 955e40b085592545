"""Vector families and their Gram data.

A :class:`VectorSet` holds an n-tuple of vectors either as explicit
coordinates (row i of an n x m array is the i-th vector) or only through
its Gram matrix. Inner products are linear in the first argument and
conjugate-linear in the second, ``<x, y> = sum_k x_k conj(y_k)``.

Gram layout: ``G[i, j] = <alpha_j, alpha_i>``. For real vectors this is
the ordinary matrix of dot products. For complex rows ``X`` it equals
``conj(X @ X^H)``; the conjugate ``X @ X^H`` is the metric that
coefficient rows see (see :mod:`symortho.orthonorm`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ShapeError, UnsupportedRepresentationError
from .linalg import HERMITIAN_RTOL, as_matrix, check_hermitian, hermitian_part

REAL = "real"
COMPLEX = "complex"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class VectorSet:
    """An n-tuple of vectors in F^m, or an abstract family known by its Gram.

    Use :meth:`from_coordinates` or :meth:`from_gram` rather than the raw
    constructor. Exactly one of ``coordinates`` and ``supplied_gram`` is set.
    """

    coordinates: np.ndarray | None = None
    supplied_gram: np.ndarray | None = None
    labels: tuple[str, ...] | None = None

    @classmethod
    def from_coordinates(cls, rows, labels: Sequence[str] | None = None) -> "VectorSet":
        x = as_matrix(rows)
        labels = _check_labels(labels, x.shape[0])
        return cls(coordinates=_frozen(x), labels=labels)

    @classmethod
    def from_gram(cls, g, labels: Sequence[str] | None = None) -> "VectorSet":
        g = as_matrix(g, square=True)
        check_hermitian(g, HERMITIAN_RTOL)
        g = hermitian_part(g)
        if np.any(g.diagonal().real < 0):
            raise ValueError("Gram matrix has a negative diagonal entry")
        labels = _check_labels(labels, g.shape[0])
        return cls(supplied_gram=_frozen(g), labels=labels)

    @property
    def has_coordinates(self) -> bool:
        return self.coordinates is not None

    @property
    def n(self) -> int:
        a = self.coordinates if self.has_coordinates else self.supplied_gram
        return a.shape[0]

    @property
    def ambient_dim(self) -> int | None:
        return self.coordinates.shape[1] if self.has_coordinates else None

    @property
    def field(self) -> str:
        a = self.coordinates if self.has_coordinates else self.supplied_gram
        return COMPLEX if np.iscomplexobj(a) else REAL

    def require_coordinates(self, what: str = "this operation") -> np.ndarray:
        if not self.has_coordinates:
            raise UnsupportedRepresentationError(
                f"{what} needs explicit coordinates; the family is known only by its Gram matrix"
            )
        return self.coordinates

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"alpha_{i + 1}"

    def subset(self, count: int) -> "VectorSet":
        """The prefix ``(alpha_1, ..., alpha_count)``."""
        labels = self.labels[:count] if self.labels else None
        if self.has_coordinates:
            return VectorSet.from_coordinates(self.coordinates[:count], labels)
        return VectorSet.from_gram(self.supplied_gram[:count, :count], labels)

    def permuted(self, perm: Sequence[int]) -> "VectorSet":
        perm = list(perm)
        labels = tuple(self.labels[i] for i in perm) if self.labels else None
        if self.has_coordinates:
            return VectorSet.from_coordinates(self.coordinates[perm], labels)
        return VectorSet.from_gram(self.supplied_gram[np.ix_(perm, perm)], labels)


def _check_labels(labels, n):
    if labels is None:
        return None
    labels = tuple(str(s) for s in labels)
    if len(labels) != n:
        raise ShapeError(f"{len(labels)} labels for {n} vectors")
    return labels


def gram(vs: VectorSet) -> np.ndarray:
    """Gram matrix ``G[i, j] = <alpha_j, alpha_i>``, Hermitian-symmetrized."""
    if not vs.has_coordinates:
        return vs.supplied_gram.copy()
    x = vs.coordinates
    return hermitian_part(np.conj(x) @ x.T)


def cross_gram(a: VectorSet, b: VectorSet) -> np.ndarray:
    """Matrix with entry ``(i, j) = <beta_j, alpha_i>`` for ``alpha`` in ``a``, ``beta`` in ``b``."""
    xa = a.require_coordinates("cross_gram")
    xb = b.require_coordinates("cross_gram")
    if xa.shape[1] != xb.shape[1]:
        raise ShapeError(
            f"ambient dimensions differ: {xa.shape[1]} vs {xb.shape[1]}"
        )
    if a.field != b.field:
        raise ShapeError(f"fields differ: {a.field} vs {b.field}")
    return np.conj(xa) @ xb.T


def norms(vs: VectorSet) -> np.ndarray:
    if vs.has_coordinates:
        return np.linalg.norm(vs.coordinates, axis=1)
    return np.sqrt(vs.supplied_gram.diagonal().real)


def normalize(vs: VectorSet, tol: float = 0.0) -> tuple[VectorSet, np.ndarray]:
    """Scale every vector to unit norm.

    Returns the normalized family and the original norms.

    Raises
    ------
    ValueError
        If some vector has norm ``<= tol``.
    """
    scales = norms(vs)
    if np.any(scales <= tol):
        bad = int(np.argmin(scales))
        raise ValueError(f"vector {vs.label(bad)} has zero norm and cannot be normalized")
    if vs.has_coordinates:
        out = VectorSet.from_coordinates(vs.coordinates / scales[:, None], vs.labels)
    else:
        g = vs.supplied_gram / np.outer(scales, scales)
        g[np.diag_indices_from(g)] = 1.0
        out = VectorSet.from_gram(g, vs.labels)
    return out, scales


# Monomials 1, x, ..., x^(n-1) in L^2[0, 1]


def monomial_gram(exponents: Sequence[int]) -> np.ndarray:
    """Exact moment matrix ``<x^a, x^b> = 1 / (a + b + 1)`` in L^2[0, 1]."""
    e = np.asarray(exponents, dtype=float)
    return 1.0 / (e[:, None] + e[None, :] + 1.0)


def monomial_gram_exact(exponents: Sequence[int]) -> list[list[Fraction]]:
    return [[Fraction(1, a + b + 1) for b in exponents] for a in exponents]


def hilbert(n: int) -> np.ndarray:
    """The n x n Hilbert matrix ``1 / (i + j - 1)`` (1-based indices)."""
    return monomial_gram(range(n))


def monomial_space(n: int) -> VectorSet:
    """Gram-only family ``(1, x, ..., x^(n-1))`` of L^2[0, 1]; its Gram is the Hilbert matrix."""
    if n < 1:
        raise ValueError("monomial_space needs n >= 1")
    return VectorSet.from_gram(hilbert(n), labels=[f"x^{k}" for k in range(n)])


def polynomial_coefficients(row) -> list[float]:
    """Coefficients of ``sum_k row[k] x^k`` in ascending powers.

    A coefficient row over the monomial family is already the polynomial's
    coefficient list; this returns it as plain floats (real part).
    """
    return [float(np.real(c)) for c in row]


def format_polynomial(row, digits: int = 4) -> str:
    """Render a coefficient row over monomials, e.g. ``1.8145 - 2.8273x + 2.0557x^2``."""
    parts = []
    for k, c in enumerate(polynomial_coefficients(row)):
        mag = f"{abs(c):.{digits}f}"
        term = mag if k == 0 else (f"{mag}x" if k == 1 else f"{mag}x^{k}")
        sign = "-" if c < 0 else "+"
        if not parts:
            parts.append(term if sign == "+" else f"-{term}")
        else:
            parts.append(f"{sign} {term}")
    return " ".join(parts)
