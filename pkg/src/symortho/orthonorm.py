"""Least-squares orthonormalization and its loss functionals.

Coefficient layout: an output basis is ``beta_i = sum_j A[i, j] alpha_j``,
i.e. the rows of ``A`` are coefficient rows over the input family. With
the Gram layout of :mod:`symortho.spaces` (``G[i, j] = <alpha_j, alpha_i>``)
the output is orthonormal iff ``A @ conj(G) @ A^H = I``; ``conj(G)`` is
called the *metric* below (``X @ X^H`` for coordinate rows ``X``). For
real families the metric is ``G`` itself.

The symmetric (Loewdin) orthonormalizer uses ``A = metric^(-1/2)``, which
is the unique orthonormal basis of the span minimizing
``sum_i ||beta_i - alpha_i||^2``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    IllConditionedError,
    NotPositiveDefiniteError,
    NumericalError,
    PreconditionError,
    ShapeError,
    UnsupportedRepresentationError,
)
from .linalg import Spectrum, as_matrix, hermitian_eigen
from .spaces import VectorSet, gram

LOEWDIN = "loewdin"
GRAM_SCHMIDT = "gram_schmidt"
HOUSEHOLDER = "householder"
CUSTOM = "custom"
METHODS = (LOEWDIN, GRAM_SCHMIDT, HOUSEHOLDER)

CONDITION_LIMIT = 1e13
RELAXED_CONDITION = 1e10
ORTHONORMALITY_TOL = 1e-8
RELAXED_ORTHONORMALITY_TOL = 1e-6
NEGATIVE_LOSS_CLAMP = 1e-12


class NearSingularWarning(UserWarning):
    pass


def metric(g) -> np.ndarray:
    """The Hermitian form seen by coefficient rows: ``conj(G)``."""
    g = np.asarray(g)
    return np.conj(g) if np.iscomplexobj(g) else g


@dataclass(frozen=True, eq=False)
class Conditioning:
    spectrum: Spectrum
    condition: float
    near_singular: bool

    @property
    def lambda_min(self) -> float:
        return self.spectrum.lambda_min

    @property
    def tolerance(self) -> float:
        return RELAXED_ORTHONORMALITY_TOL if self.near_singular else ORTHONORMALITY_TOL


def condition_metric(m) -> Conditioning:
    """Spectrum and conditioning verdict for a Hermitian PD matrix.

    Raises
    ------
    NotPositiveDefiniteError
        If the smallest eigenvalue is not positive.
    IllConditionedError
        If ``lambda_max / lambda_min > 1e13``.
    """
    eig = hermitian_eigen(m)
    lam_min, cond = eig.lambda_min, eig.condition
    if eig.n and lam_min <= 0:
        raise NotPositiveDefiniteError(
            "Gram matrix is not positive definite (vectors are linearly dependent): "
            f"lambda_min = {lam_min:.6e}, condition = inf",
            lambda_min=lam_min,
            condition=cond,
        )
    if cond > CONDITION_LIMIT:
        raise IllConditionedError(
            f"Gram matrix condition number {cond:.3e} exceeds {CONDITION_LIMIT:.0e} "
            f"(vectors are numerically dependent): lambda_min = {lam_min:.6e}",
            lambda_min=lam_min,
            condition=cond,
        )
    return Conditioning(eig, cond, cond > RELAXED_CONDITION)


def condition_gram(g) -> Conditioning:
    """:func:`condition_metric` applied to the metric of Gram matrix ``g``."""
    return condition_metric(metric(g))


def orthonormality_defect(coeffs, g) -> float:
    """``max |A conj(G) A^H - I|`` entrywise."""
    a = np.asarray(coeffs)
    form = a @ metric(g) @ a.conj().T
    return float(np.max(np.abs(form - np.eye(a.shape[0])))) if a.size else 0.0


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Result of an orthonormalization.

    ``coeffs`` expresses the output through the input family; ``vectors``
    holds explicit output coordinates when the input had them.
    """

    coeffs: np.ndarray
    method: str
    source_gram: np.ndarray
    vectors: VectorSet | None = None
    condition: float = 1.0
    lambda_min: float = 1.0
    defect: float = 0.0
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @property
    def near_singular(self) -> bool:
        return self.condition > RELAXED_CONDITION

    def output_gram(self) -> np.ndarray:
        """Gram matrix of the output family (identity up to rounding)."""
        a = self.coeffs
        return np.conj(a @ metric(self.source_gram) @ a.conj().T)


@dataclass(frozen=True, eq=False)
class LossReport:
    loss: float
    per_vector: np.ndarray
    method: str
    closed_form: float | None = None


def _finish(vs, coeffs, method, g, cond, out_rows=None) -> OrthonormalBasis:
    defect = orthonormality_defect(coeffs, g)
    notes = []
    if cond.near_singular:
        notes.append(
            f"near-singular Gram (condition {cond.condition:.3e} > {RELAXED_CONDITION:.0e}); "
            f"orthonormality checked at {RELAXED_ORTHONORMALITY_TOL:g}"
        )
    if defect > cond.tolerance:
        msg = f"orthonormality defect {defect:.3e} exceeds {cond.tolerance:g} ({method})"
        if method == LOEWDIN and not cond.near_singular:
            raise NumericalError(msg)
        notes.append(msg)
    for note in notes:
        warnings.warn(note, NearSingularWarning, stacklevel=3)
    vectors = None
    if vs.has_coordinates:
        rows = coeffs @ vs.coordinates if out_rows is None else out_rows
        vectors = VectorSet.from_coordinates(rows, vs.labels)
    return OrthonormalBasis(
        coeffs=coeffs,
        method=method,
        source_gram=g,
        vectors=vectors,
        condition=cond.condition,
        lambda_min=cond.lambda_min,
        defect=defect,
        warnings=tuple(notes),
    )


def loewdin(vs: VectorSet) -> OrthonormalBasis:
    """Symmetric orthonormalization ``K(alpha) = metric^(-1/2) alpha``.

    The coefficient matrix is Hermitian positive definite and real for real
    families. Raises :class:`NotPositiveDefiniteError` (or its subclass
    :class:`IllConditionedError`) for dependent input.
    """
    g = gram(vs)
    cond = condition_gram(g)
    coeffs = cond.spectrum.power(-0.5)
    if vs.field == "real" and np.iscomplexobj(coeffs):
        raise NumericalError("real family produced complex coefficients")
    return _finish(vs, coeffs, LOEWDIN, g, cond)


def row_space_orthonormalize(a) -> np.ndarray:
    """``(A A^H)^(-1/2) A`` for a full-row-rank matrix ``A``.

    The rows of the result are the Loewdin basis of the row space of ``A``.
    """
    a = as_matrix(a)
    cond = condition_metric(a @ a.conj().T)
    return cond.spectrum.power(-0.5) @ a


def gram_schmidt(vs: VectorSet, tol: float = 1e-12) -> OrthonormalBasis:
    """Classical Gram-Schmidt; lower-triangular coefficients with positive diagonal.

    Families without coordinates go through the Cholesky factor of the
    metric, ``metric = L L^H`` and ``A = L^(-1)``, which is the same map.
    Orthonormality degrades with conditioning (classical variant); the
    measured defect is stored on the result.
    """
    g = gram(vs)
    cond = condition_gram(g)
    n = vs.n
    if not vs.has_coordinates:
        m = metric(g)
        try:
            chol = np.linalg.cholesky(m)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError(
                "Cholesky factorization failed: vectors are linearly dependent",
                lambda_min=cond.lambda_min,
                condition=cond.condition,
            ) from exc
        pivots = chol.diagonal().real
        if np.any(pivots <= tol * np.sqrt(m.diagonal().real)):
            raise NotPositiveDefiniteError(
                f"Gram-Schmidt pivot below tolerance {tol:g}: vectors are linearly dependent",
                lambda_min=cond.lambda_min,
                condition=cond.condition,
            )
        coeffs = solve_triangular(chol, np.eye(n, dtype=chol.dtype), lower=True)
        return _finish(vs, coeffs, GRAM_SCHMIDT, g, cond)

    x = vs.coordinates
    e = np.zeros_like(x)
    coeffs = np.zeros((n, n), dtype=x.dtype)
    for i in range(n):
        proj = e[:i].conj() @ x[i]  # <x_i, e_j> for j < i
        v = x[i] - proj @ e[:i]
        c = -proj @ coeffs[:i]
        c[i] += 1.0
        nv = np.linalg.norm(v)
        if nv <= tol * np.linalg.norm(x[i]):
            raise NotPositiveDefiniteError(
                f"Gram-Schmidt pivot {nv:.3e} below tolerance at vector {vs.label(i)}: "
                "vectors are linearly dependent",
                lambda_min=cond.lambda_min,
                condition=cond.condition,
            )
        e[i] = v / nv
        coeffs[i] = c / nv
    return _finish(vs, coeffs, GRAM_SCHMIDT, g, cond, out_rows=e)


def householder_qr(m) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR of a tall matrix by Householder reflections, ``R`` with non-negative diagonal."""
    r = as_matrix(m)
    rows, cols = r.shape
    if rows < cols:
        raise ShapeError(f"householder_qr needs rows >= cols, got {r.shape}")
    reflectors = []
    for k in range(cols):
        x = r[k:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            reflectors.append(None)
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        r[k:, k:] -= 2.0 * np.outer(v, v.conj() @ r[k:, k:])
        r[k + 1:, k] = 0.0
        reflectors.append(v)
    q = np.eye(rows, cols, dtype=r.dtype)
    for k in reversed(range(cols)):
        v = reflectors[k]
        if v is not None:
            q[k:, :] -= 2.0 * np.outer(v, v.conj() @ q[k:, :])
    r = r[:cols, :cols]
    d = r.diagonal()
    mag = np.abs(d)
    phases = np.where(mag > 0, d / np.where(mag > 0, mag, 1.0), 1.0)
    r = np.triu(np.conj(phases)[:, None] * r)
    q = q * phases[None, :]
    return q, r


def householder(vs: VectorSet, tol: float = 1e-12) -> OrthonormalBasis:
    """Orthonormalize rows ``X`` through the Householder QR of ``X^H``.

    With ``X^H = Q R`` the output rows are ``Q^H`` and the coefficients are
    ``R^(-H)``, lower triangular with positive diagonal, so the result
    matches :func:`gram_schmidt` in exact arithmetic.
    """
    x = vs.require_coordinates("householder")
    g = gram(vs)
    cond = condition_gram(g)
    n = vs.n
    q, r = householder_qr(x.conj().T)
    pivots = r.diagonal().real
    if np.any(pivots < tol * np.linalg.norm(x)):
        raise NotPositiveDefiniteError(
            f"Householder pivot below tolerance {tol:g}: vectors are linearly dependent",
            lambda_min=cond.lambda_min,
            condition=cond.condition,
        )
    coeffs = solve_triangular(r, np.eye(n, dtype=r.dtype), lower=False).conj().T
    return _finish(vs, coeffs, HOUSEHOLDER, g, cond, out_rows=q.conj().T)


def orthonormalize(vs: VectorSet, method: str = LOEWDIN, tol: float = 1e-12) -> OrthonormalBasis:
    if method == LOEWDIN:
        return loewdin(vs)
    if method == GRAM_SCHMIDT:
        return gram_schmidt(vs, tol)
    if method == HOUSEHOLDER:
        return householder(vs, tol)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


# Losses


def _clamp_loss(value: float) -> float:
    if value < 0:
        if value < -NEGATIVE_LOSS_CLAMP:
            raise NumericalError(f"sum of squares evaluated to {value:.3e} < 0")
        return 0.0
    return value


def loss_closed_form(g) -> float:
    """``n + tr(G) - 2 tr(G^(1/2))``: the least sum of squares over orthonormal bases."""
    g = as_matrix(g, square=True)
    cond = condition_gram(g)
    n = g.shape[0]
    value = n + float(np.sum(g.diagonal().real)) - 2.0 * float(np.sum(np.sqrt(cond.spectrum.eigenvalues)))
    return _clamp_loss(value)


def loss_general(g, a, tol: float = RELAXED_ORTHONORMALITY_TOL) -> float:
    """Sum of squares of the basis with coefficient rows ``a`` against the input.

    Evaluates ``n + tr(G) - 2 Re sum_ij a_ij G_ij``, which needs only the
    Gram matrix. ``a`` must orthonormalize the family (defect ``<= tol``).
    """
    g = as_matrix(g, square=True)
    a = as_matrix(a, square=True)
    if a.shape != g.shape:
        raise ShapeError(f"coefficient shape {a.shape} does not match Gram {g.shape}")
    defect = orthonormality_defect(a, g)
    if defect > tol:
        raise PreconditionError(
            f"coefficient rows are not orthonormal for this Gram matrix (defect {defect:.3e} > {tol:g})"
        )
    n = g.shape[0]
    value = n + float(np.sum(g.diagonal().real)) - 2.0 * float(np.real(np.sum(a * g)))
    return _clamp_loss(value)


def loss_direct(basis, original: VectorSet, cross=None) -> LossReport:
    """Per-vector ``||beta_i - alpha_i||^2`` and their sum.

    ``basis`` is a :class:`VectorSet` or an :class:`OrthonormalBasis` of
    ``original``. Coordinates are used when both sides have them. Without
    coordinates the distances need either the coefficients of an
    :class:`OrthonormalBasis` or an explicit ``cross`` matrix with entries
    ``<beta_j, alpha_i>``.
    """
    method = CUSTOM
    coeffs = None
    if isinstance(basis, OrthonormalBasis):
        method = basis.method
        coeffs = basis.coeffs
        basis_vs = basis.vectors
    else:
        basis_vs = basis
    if basis_vs is not None and basis_vs.n != original.n:
        raise ShapeError(f"basis has {basis_vs.n} vectors, original has {original.n}")

    if basis_vs is not None and basis_vs.has_coordinates and original.has_coordinates:
        xa, xb = original.coordinates, basis_vs.coordinates
        if xa.shape != xb.shape:
            raise ShapeError(f"coordinate shapes differ: {xb.shape} vs {xa.shape}")
        per = np.sum(np.abs(xb - xa) ** 2, axis=1)
    elif cross is not None and basis_vs is not None:
        c = as_matrix(cross, square=True)
        per = gram(basis_vs).diagonal().real + gram(original).diagonal().real - 2.0 * c.diagonal().real
        per = np.maximum(per, 0.0)
    elif coeffs is not None:
        d = coeffs - np.eye(coeffs.shape[0])
        per = np.einsum("ij,jk,ik->i", d, metric(gram(original)), d.conj()).real
        per = np.maximum(per, 0.0)
    else:
        raise UnsupportedRepresentationError(
            "distance between Gram-only families is not determined by their Gram matrices; "
            "supply coordinates, coefficients, or a cross-Gram matrix"
        )
    closed = None
    if method == LOEWDIN:
        closed = loss_closed_form(gram(original))
    return LossReport(loss=float(np.sum(per)), per_vector=per, method=method, closed_form=closed)


# Optimality sampling


def haar_unitary(n: int, rng: np.random.Generator, complex_field: bool = False) -> np.ndarray:
    """Haar-distributed unitary (orthogonal if real) via QR with phase fix."""
    z = rng.standard_normal((n, n))
    if complex_field:
        z = (z + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = r.diagonal()
    return q * (d / np.abs(d))[None, :]


def competitor_loss(g, u, k=None) -> float:
    """Loss of the rotated Loewdin basis ``U K(alpha)``."""
    if k is None:
        k = condition_gram(g).spectrum.power(-0.5)
    return loss_general(g, np.asarray(u) @ k)


@dataclass(frozen=True)
class OptimalityReport:
    seed: int
    trials: int
    loewdin_loss: float
    closed_form_loss: float
    min_competitor_loss: float
    max_competitor_loss: float
    min_margin: float
    min_scaled_margin: float
    violations: int
    trace_violations: int
    strict_failures: int

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.trace_violations == 0 and self.strict_failures == 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def optimality_sample(
    vs: VectorSet,
    trials: int,
    seed: int,
    include_identity: bool = False,
    margin_tol: float = 1e-10,
    distinct_tol: float = 1e-6,
) -> OptimalityReport:
    """Compare the Loewdin loss to ``trials`` Haar-rotated competitors ``U K(alpha)``.

    Each trial uses its own child seed of ``seed``, so results do not
    depend on evaluation order. The margin (competitor minus Loewdin loss)
    must be ``>= -margin_tol``. For ``||U - I|| > distinct_tol`` it must be
    strictly positive; strictness is judged on ``2 Re tr(T (I - U))`` with
    ``T = metric^(1/2)``, which equals the margin without cancellation, against
    the threshold ``1e-12 tr(T) ||U - I||^2``. ``Re tr(T U) <= tr(T)`` is checked
    directly as well.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    g = gram(vs)
    cond = condition_gram(g)
    k = cond.spectrum.power(-0.5)
    t = cond.spectrum.power(0.5)
    tr_t = float(np.trace(t).real)
    base = loss_general(g, k)
    closed = loss_closed_form(g)
    complex_field = vs.field == "complex"
    n = vs.n
    eye = np.eye(n)

    unitaries = []
    if include_identity:
        unitaries.append(eye.astype(k.dtype))
    for child in np.random.SeedSequence(seed).spawn(trials):
        unitaries.append(haar_unitary(n, np.random.default_rng(child), complex_field))

    losses, margins, scaled = [], [], []
    violations = trace_violations = strict_failures = 0
    for u in unitaries:
        loss = loss_general(g, u @ k)
        margin = loss - base
        direct = 2.0 * float(np.real(np.trace(t @ (eye - u))))
        dist = float(np.linalg.norm(u - eye, 2))
        losses.append(loss)
        margins.append(margin)
        if margin < -margin_tol:
            violations += 1
        if float(np.real(np.trace(t @ u))) > tr_t + margin_tol:
            trace_violations += 1
        if dist > distinct_tol:
            scaled.append(direct / (tr_t * dist**2))
            if direct <= 1e-12 * tr_t * dist**2:
                strict_failures += 1
    return OptimalityReport(
        seed=seed,
        trials=len(unitaries),
        loewdin_loss=base,
        closed_form_loss=closed,
        min_competitor_loss=min(losses),
        max_competitor_loss=max(losses),
        min_margin=min(margins),
        min_scaled_margin=min(scaled) if scaled else float("nan"),
        violations=violations,
        trace_violations=trace_violations,
        strict_failures=strict_failures,
    )
