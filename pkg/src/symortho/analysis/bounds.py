"""Perturbation bounds for inverses and inverse square roots, and the stability of K.

Each ``verify_*`` function evaluates both sides of an inequality on concrete
matrices and returns a :class:`BoundReport`. The inequalities are theorems;
a failed check on inputs that meet the stated hypotheses points at a
numerical problem. Comparisons allow a relative rounding slack of
``ROUNDING_RTOL`` because some of the bounds are attained exactly (e.g. the
inverse bound for commuting scalar perturbations).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NotPositiveDefiniteError, NumericalError, PreconditionError, ShapeError
from ..linalg import as_matrix, hermitian_eigen, spectral_norm
from ..orthonorm import condition_gram
from ..spaces import VectorSet, gram, normalize

ROUNDING_RTOL = 1e-10
ROUNDING_ATOL = 1e-15
UNIT_DIAGONAL_TOL = 1e-10


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        allowance = ROUNDING_RTOL * (abs(self.lhs) + abs(self.rhs)) + ROUNDING_ATOL
        return self.lhs <= self.rhs + allowance

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack, "passed": self.passed}


@dataclass(frozen=True)
class BoundReport:
    checks: tuple[BoundCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> BoundCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _pd_spectrum(m, what):
    eig = hermitian_eigen(m)
    if eig.lambda_min <= 0:
        raise NotPositiveDefiniteError(
            f"{what} must be positive definite; lambda_min = {eig.lambda_min:.6e}",
            lambda_min=eig.lambda_min,
            condition=eig.condition,
        )
    return eig


def verify_inverse_bounds(a, b) -> BoundReport:
    """Inverse perturbation bounds for ``||B - A|| < 1 / ||A^-1||``.

    ``inverse_difference``: ``||A^-1 - B^-1|| <= ||A^-1||^2 ||A - B|| / (1 - ||A^-1|| ||A - B||)``

    ``inverse_norm``: ``||B^-1|| <= ||A^-1|| / (1 - ||A^-1|| ||A - B||)``
    """
    a = as_matrix(a, square=True)
    b = as_matrix(b, square=True)
    if a.shape != b.shape:
        raise ShapeError("A and B must have the same shape")
    try:
        a_inv = np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError("A must be invertible") from exc
    na = spectral_norm(a_inv)
    d = spectral_norm(a - b)
    if not d * na < 1.0:
        raise PreconditionError(
            f"||B - A|| = {d:.3e} must be below 1/||A^-1|| = {1.0 / na:.3e}"
        )
    b_inv = np.linalg.inv(b)
    denom = 1.0 - na * d
    return BoundReport((
        BoundCheck("inverse_difference", spectral_norm(a_inv - b_inv), na * na * d / denom),
        BoundCheck("inverse_norm", spectral_norm(b_inv), na / denom),
    ))


def verify_invsqrt_bound(a, b) -> BoundReport:
    """Inverse-square-root bound for Hermitian PD ``A``, ``B``.

    ``invsqrt_difference``: ``||A^-1/2 - B^-1/2|| <= ||A^1/2|| ||A^-1 - B^-1||``

    ``square_difference``: ``||X - Y|| <= ||X^-1|| ||X^2 - Y^2||`` on the pair
    ``X = A^1/2``, ``Y = B^1/2`` (the inequality the first one is reduced to).
    """
    a = as_matrix(a, square=True)
    b = as_matrix(b, square=True)
    if a.shape != b.shape:
        raise ShapeError("A and B must have the same shape")
    sa = _pd_spectrum(a, "A")
    sb = _pd_spectrum(b, "B")
    a_h, b_h = sa.power(0.5), sb.power(0.5)
    a_ih, b_ih = sa.power(-0.5), sb.power(-0.5)
    a_i, b_i = sa.power(-1.0), sb.power(-1.0)
    return BoundReport((
        BoundCheck("invsqrt_difference", spectral_norm(a_ih - b_ih), spectral_norm(a_h) * spectral_norm(a_i - b_i)),
        BoundCheck("square_difference", spectral_norm(a_h - b_h), spectral_norm(a_ih) * spectral_norm(a - b)),
    ))


def verify_sandwich_bound(a, b, c, eta: float) -> BoundReport:
    """Bound on ``||A^-1/2 C B^-1/2 - I||`` for ``B``, ``C`` within ``eta`` of ``A``.

    Hypotheses: ``A`` PD with ``||A|| <= n`` and ``||A^-1|| >= 1``; ``B``
    Hermitian PSD; ``||A - B|| < eta``, ``||A - C|| < eta`` and
    ``0 <= eta <= 1 / (2 ||A^-1||)``.

    ``stated_constant`` compares with ``2 n (n+1) ||A^-1||^2 eta``;
    ``proof_constant`` with the sharper ``2 (n+1) ||A^-1||^2 eta``.
    """
    a = as_matrix(a, square=True)
    b = as_matrix(b, square=True)
    c = as_matrix(c, square=True)
    if not (a.shape == b.shape == c.shape):
        raise ShapeError("A, B and C must have the same shape")
    n = a.shape[0]
    sa = _pd_spectrum(a, "A")
    a_norm = sa.lambda_max
    a_inv_norm = 1.0 / sa.lambda_min
    problems = []
    if a_norm > n * (1 + 1e-12):
        problems.append(f"||A|| = {a_norm:.6g} exceeds n = {n}")
    if a_inv_norm < 1.0 - 1e-12:
        problems.append(f"||A^-1|| = {a_inv_norm:.6g} is below 1")
    sb = hermitian_eigen(b)
    if sb.lambda_min < 0:
        problems.append(f"B is not positive semidefinite (lambda_min = {sb.lambda_min:.3e})")
    if not 0 <= eta <= 1.0 / (2.0 * a_inv_norm):
        problems.append(f"eta = {eta:.3e} outside [0, 1/(2||A^-1||)] = [0, {0.5 / a_inv_norm:.3e}]")
    dab, dac = spectral_norm(a - b), spectral_norm(a - c)
    if not dab < eta:
        problems.append(f"||A - B|| = {dab:.3e} is not below eta = {eta:.3e}")
    if not dac < eta:
        problems.append(f"||A - C|| = {dac:.3e} is not below eta = {eta:.3e}")
    if problems:
        raise PreconditionError("; ".join(problems))
    lhs = spectral_norm(sa.power(-0.5) @ c @ sb.power(-0.5) - np.eye(n))
    base = a_inv_norm**2 * eta
    return BoundReport((
        BoundCheck("stated_constant", lhs, 2.0 * n * (n + 1) * base),
        BoundCheck("proof_constant", lhs, 2.0 * (n + 1) * base),
    ))


def sqrt_sum_bound_check(lambdas) -> BoundReport:
    """``|sum_i sqrt(lambda_i) - n| <= eps`` for positive ``lambda`` summing to ``n``.

    Hypotheses: every ``lambda_i > 0``, ``sum lambda_i = n`` within 1e-10,
    and ``eps = max |1 - lambda_i| <= 1 / (2 (n - 1))``.
    """
    lam = np.asarray(lambdas, dtype=float).ravel()
    n = lam.size
    problems = []
    if n == 0:
        problems.append("empty eigenvalue list")
    if np.any(lam <= 0):
        problems.append("all values must be positive")
    if n and abs(lam.sum() - n) > 1e-10:
        problems.append(f"values sum to {lam.sum():.12g}, not n = {n}")
    eps = float(np.max(np.abs(1.0 - lam))) if n else 0.0
    if n > 1 and eps > 1.0 / (2 * (n - 1)):
        problems.append(f"max |1 - lambda| = {eps:.6g} exceeds 1/(2(n-1)) = {1.0 / (2 * (n - 1)):.6g}")
    if problems:
        raise PreconditionError("; ".join(problems))
    return BoundReport((BoundCheck("sqrt_sum", abs(float(np.sum(np.sqrt(lam))) - n), eps),))


# Stability of the symmetric orthonormalizer


def _require_unit_diagonal(g):
    d = np.asarray(g).diagonal().real
    if np.max(np.abs(d - 1.0)) > UNIT_DIAGONAL_TOL:
        raise PreconditionError(
            "Gram matrix must have unit diagonal (unit vectors); normalize the family first"
        )


def perturbation_delta(g, epsilon: float) -> float:
    """Admissible perturbation ``epsilon / (8 n^2 (n+1) ||G^-1||^2)`` for a unit family."""
    g = as_matrix(g, square=True)
    _require_unit_diagonal(g)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = g.shape[0]
    g_inv_norm = 1.0 / condition_gram(g).lambda_min
    return epsilon / (8.0 * n * n * (n + 1) * g_inv_norm**2)


@dataclass(frozen=True)
class PerturbationReport:
    """Outcome of :func:`stability_check`.

    ``bound_satisfied`` says whether ``k_distance_sq < epsilon``;
    ``theorem_violation`` is set only when the hypothesis
    (``max_vector_perturbation < delta``) holds but the conclusion fails.
    """

    epsilon: float
    delta: float
    g_inv_norm: float
    max_vector_perturbation: float
    k_distance_sq: float | None
    k_distance_sq_trace: float | None
    hypothesis_met: bool
    perturbed_independent: bool
    bound_satisfied: bool
    theorem_violation: bool
    scales: list[float]
    perturbed_scales: list[float]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


TRACE_AGREEMENT_TOL = 1e-8


def stability_check(vs: VectorSet, perturbed: VectorSet, epsilon: float) -> PerturbationReport:
    """Compare ``K(alpha)`` with ``K(beta)`` for a perturbed family ``beta``.

    Both families are normalized to unit vectors first (scales are
    recorded). ``||K alpha - K beta||^2`` is evaluated from coordinates and
    again from Gram data as ``2 Re tr(I - A^-1/2 X C^-1/2)`` with ``A``,
    ``C`` the metrics of the two families and ``X`` their cross metric; the two
    must agree within 1e-8.
    """
    xa0 = vs.require_coordinates("stability_check")
    xb0 = perturbed.require_coordinates("stability_check")
    if xa0.shape != xb0.shape:
        raise ShapeError(f"family shapes differ: {xa0.shape} vs {xb0.shape}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    a_vs, scales = normalize(vs)
    b_vs, pscales = normalize(perturbed)
    xa, xb = a_vs.coordinates, b_vs.coordinates
    n = vs.n
    ga = gram(a_vs)
    cond_a = condition_gram(ga)
    g_inv_norm = 1.0 / cond_a.lambda_min
    delta = perturbation_delta(ga, epsilon)
    max_pert = float(np.max(np.linalg.norm(xa - xb, axis=1)))
    hypothesis = max_pert < delta

    try:
        cond_b = condition_gram(gram(b_vs))
    except NotPositiveDefiniteError:
        return PerturbationReport(
            epsilon, delta, g_inv_norm, max_pert, None, None,
            hypothesis, False, False, hypothesis,
            scales.tolist(), pscales.tolist(),
        )

    ka = cond_a.spectrum.power(-0.5)
    kb = cond_b.spectrum.power(-0.5)
    ea, eb = ka @ xa, kb @ xb
    direct = float(np.sum(np.abs(ea - eb) ** 2))
    cross = xa @ xb.conj().T  # metric form of the cross Gram
    trace = 2.0 * float(np.real(np.trace(np.eye(n) - ka @ cross @ kb)))
    if abs(direct - trace) > TRACE_AGREEMENT_TOL:
        raise NumericalError(
            f"trace identity {trace:.6e} disagrees with coordinate evaluation {direct:.6e}"
        )
    satisfied = direct < epsilon
    return PerturbationReport(
        epsilon, delta, g_inv_norm, max_pert, direct, trace,
        hypothesis, True, satisfied, hypothesis and not satisfied,
        scales.tolist(), pscales.tolist(),
    )
