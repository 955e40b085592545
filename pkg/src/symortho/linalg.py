"""Dense Hermitian linear algebra kernel.

Everything here operates on small dense numpy arrays (n up to a few
hundred). The eigensolver is a cyclic Jacobi method written out in full;
real input stays in real arithmetic, complex Hermitian input uses complex
rotations. No blocking or other low-level optimization is attempted:
results are reproducible bit for bit across runs on the same platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitianError, NotPositiveDefiniteError, NumericalError, ShapeError

MAX_SWEEPS = 100
OFF_DIAGONAL_RTOL = 1e-14
HERMITIAN_RTOL = 1e-12
PD_RTOL = 1e-10


def as_matrix(m, *, square=False) -> np.ndarray:
    """Validate ``m`` as a finite 2-D real or complex array.

    Integer and boolean input is promoted to float64, complex input to
    complex128. The returned array is a private copy.
    """
    a = np.array(m)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {a.shape}")
    if np.iscomplexobj(a):
        a = a.astype(np.complex128)
    else:
        a = a.astype(np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    if square and a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    return a


def is_complex(m) -> bool:
    return np.iscomplexobj(m)


def hermitian_part(m: np.ndarray) -> np.ndarray:
    h = 0.5 * (m + m.conj().T)
    if np.iscomplexobj(h):
        # exact real diagonal
        h[np.diag_indices_from(h)] = h.diagonal().real
    return h


def check_hermitian(m: np.ndarray, rtol: float = HERMITIAN_RTOL) -> None:
    scale = spectral_norm(m) if m.size else 0.0
    defect = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if defect > rtol * max(scale, np.finfo(float).tiny):
        raise NotHermitianError(
            f"matrix is not Hermitian: max |M - M^H| = {defect:.3e}, "
            f"allowed {rtol:.1e} * ||M|| = {rtol * scale:.3e}"
        )


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigendecomposition ``M = V diag(eigenvalues) V^H`` of a Hermitian matrix.

    Eigenvalues are real and ascending; the columns of ``eigenvectors`` are
    orthonormal, each scaled so that its first non-negligible component is
    real and positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0]) if self.n else 0.0

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1]) if self.n else 0.0

    @property
    def condition(self) -> float:
        """``lambda_max / lambda_min``, or ``inf`` if ``lambda_min <= 0``."""
        if self.n == 0:
            return 1.0
        if self.lambda_min <= 0:
            return float("inf")
        return self.lambda_max / self.lambda_min

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return hermitian_part((v * self.eigenvalues) @ v.conj().T)

    def apply(self, func) -> np.ndarray:
        """Return ``V diag(func(eigenvalues)) V^H`` (Hermitian-symmetrized)."""
        v = self.eigenvectors
        return hermitian_part((v * func(self.eigenvalues)) @ v.conj().T)

    def power(self, exponent: float) -> np.ndarray:
        """Matrix power ``M**exponent`` through the eigenvalues.

        Negative or non-integer exponents require every eigenvalue to be
        strictly positive.
        """
        fractional = float(exponent) != int(exponent)
        if (exponent < 0 or fractional) and self.n and self.lambda_min <= 0:
            raise NotPositiveDefiniteError(
                f"matrix power {exponent} needs a positive definite matrix; "
                f"lambda_min = {self.lambda_min:.6e}",
                lambda_min=self.lambda_min,
                condition=self.condition,
            )
        if exponent == 0:
            return np.eye(self.n, dtype=self.eigenvectors.dtype)
        return self.apply(lambda x: np.power(x, exponent))


def _jacobi_pair(app: float, aqq: float, apq):
    """Rotation ``J`` (2x2) with ``J^H [[app, apq], [conj(apq), aqq]] J`` diagonal."""
    r = abs(apq)
    phase = np.conj(apq) / r  # makes the off-diagonal entry real and positive
    tau = (aqq - app) / (2.0 * r)
    if abs(tau) > 1e150:
        t = 0.5 / tau
    else:
        t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    return np.array([[c, s], [-s * phase, c * phase]])


def _sign_convention(v: np.ndarray) -> np.ndarray:
    """Scale each column so its first non-negligible entry is real positive."""
    v = v.copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        mags = np.abs(col)
        idx = int(np.argmax(mags > 1e-12 * mags.max()))
        pivot = col[idx]
        v[:, k] = col * (np.conj(pivot) / abs(pivot))
    return v


def hermitian_eigen(m, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian within ``1e-12 * ||m||``. It is symmetrized
        before decomposition.
    max_sweeps : int
        Upper bound on full sweeps over the off-diagonal entries.

    Returns
    -------
    Spectrum
        Ascending eigenvalues and matching orthonormal eigenvectors.

    Raises
    ------
    ShapeError
        If ``m`` is not square.
    NotHermitianError
        If ``m`` is not Hermitian within tolerance.
    NumericalError
        If the off-diagonal mass does not fall below
        ``1e-14 * ||m||_F`` within ``max_sweeps`` sweeps.
    """
    a = as_matrix(m, square=True)
    check_hermitian(a)
    a = hermitian_part(a)
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)
    if n == 0:
        return Spectrum(np.zeros(0), v)

    thresh = OFF_DIAGONAL_RTOL * np.linalg.norm(a)
    off_mask = ~np.eye(n, dtype=bool)
    sweeps = 0
    while np.linalg.norm(a[off_mask]) > thresh:
        if sweeps >= max_sweeps:
            raise NumericalError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps"
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0:
                    continue
                j = _jacobi_pair(a[p, p].real, a[q, q].real, apq)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ j

    lam = a.diagonal().real.copy()
    v = _sign_convention(v)
    # ascending; exact ties ordered by eigenvector entries for determinism
    order = sorted(range(n), key=lambda k: (lam[k], tuple(-v[:, k].real)))
    return Spectrum(lam[order], v[:, order], sweeps)


def spectral_apply(m, exponent: float) -> np.ndarray:
    """Hermitian matrix power ``m**exponent`` via the eigendecomposition.

    For a negative or fractional ``exponent`` every eigenvalue must be
    strictly positive; otherwise :class:`NotPositiveDefiniteError` is raised
    carrying ``lambda_min``.
    """
    return hermitian_eigen(m).power(exponent)


def spectral_norm(m) -> float:
    """Largest singular value of an arbitrary (rectangular) matrix."""
    a = np.asarray(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def determinant(m):
    """Determinant by partial-pivoted LU (LAPACK ``getrf``).

    Returns a float for real input and a complex for complex input. A
    singular matrix gives 0.
    """
    a = as_matrix(m, square=True)
    d = np.linalg.det(a)
    return complex(d) if np.iscomplexobj(a) else float(d)


def gershgorin_bounds(m) -> tuple[float, float]:
    """Interval containing the union of the Gershgorin discs projected to the real axis.

    ``lo = min_i(Re m_ii - R_i)`` and ``hi = max_i(Re m_ii + R_i)`` where
    ``R_i`` is the off-diagonal absolute row sum. Every eigenvalue of a
    Hermitian matrix lies in ``[lo, hi]``.
    """
    a = as_matrix(m, square=True)
    if a.shape[0] == 0:
        return (0.0, 0.0)
    centers = a.diagonal().real
    radii = np.abs(a).sum(axis=1) - np.abs(a.diagonal())
    return float(np.min(centers - radii)), float(np.max(centers + radii))


def assert_positive_definite(m, tol: float = PD_RTOL) -> Spectrum:
    """Return the spectrum of ``m`` if ``lambda_min > tol * max(1, lambda_max)``.

    Raises
    ------
    NotPositiveDefiniteError
        Carrying ``lambda_min`` and the condition estimate
        ``lambda_max / lambda_min``.
    """
    eig = hermitian_eigen(m)
    if eig.n and eig.lambda_min <= tol * max(1.0, eig.lambda_max):
        raise NotPositiveDefiniteError(
            "matrix is not positive definite (vectors are linearly dependent): "
            f"lambda_min = {eig.lambda_min:.6e}, condition = {eig.condition:.3e}",
            lambda_min=eig.lambda_min,
            condition=eig.condition,
        )
    return eig
