"""Seeded random instance generators and trial suites.

Every suite derives one child seed per trial from ``numpy.random.SeedSequence``,
so a trial's instance depends only on ``(seed, trial index)`` and the suite
can be evaluated in any order with identical results.
"""

from __future__ import annotations

import numpy as np

from ..linalg import hermitian_eigen
from ..orthonorm import metric
from ..spaces import VectorSet, gram
from .bounds import (
    sqrt_sum_bound_check,
    stability_check,
    verify_inverse_bounds,
    verify_invsqrt_bound,
    verify_sandwich_bound,
    perturbation_delta,
)
from .orthogonality import orthogonality_report


def trial_rngs(seed: int, trials: int):
    return [np.random.default_rng(c) for c in np.random.SeedSequence(seed).spawn(trials)]


def _gaussian(rng, shape, complex_field):
    z = rng.standard_normal(shape)
    if complex_field:
        z = (z + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return z


def random_family(rng, n, m, complex_field=False, max_condition=1e8, spread=0.0) -> VectorSet:
    """Gaussian rows in F^m, optionally scaled by ``10**U(-spread, spread)``.

    Draws are repeated until the Gram condition number is at most ``max_condition``.
    """
    while True:
        x = _gaussian(rng, (n, m), complex_field)
        if spread:
            x = x * (10.0 ** rng.uniform(-spread, spread, size=n))[:, None]
        vs = VectorSet.from_coordinates(x)
        if hermitian_eigen(metric(gram(vs))).condition <= max_condition:
            return vs


def random_unit_family(rng, n, m, complex_field=False, max_condition=1e8) -> VectorSet:
    vs = random_family(rng, n, m, complex_field, max_condition)
    x = vs.coordinates
    return VectorSet.from_coordinates(x / np.linalg.norm(x, axis=1)[:, None])


def perturb_unit_family(rng, vs: VectorSet, size: float) -> VectorSet:
    """Move every unit vector to another unit vector exactly ``size`` away."""
    x = vs.coordinates
    out = np.empty_like(x)
    theta = 2.0 * np.arcsin(min(size / 2.0, 1.0))
    for i, a in enumerate(x):
        w = _gaussian(rng, a.shape, np.iscomplexobj(x))
        w = w - (a.conj() @ w) * a
        w /= np.linalg.norm(w)
        out[i] = np.cos(theta) * a + np.sin(theta) * w
    return VectorSet.from_coordinates(out)


def epsilon_orthogonal_gram(rng, n) -> np.ndarray:
    """Unit-diagonal Gram ``I + eps S`` with ``eps < 1/(2(n-1))`` and ``|S_ij| <= 1``."""
    limit = 1.0 / (2 * (n - 1)) if n > 1 else 1.0
    while True:
        eps = rng.uniform(0.0, limit)
        s = rng.uniform(-1.0, 1.0, size=(n, n))
        s = np.triu(s, 1)
        g = np.eye(n) + eps * (s + s.T)
        if n == 1 or np.max(np.abs(g - np.eye(n))) < limit:
            return g


def epsilon_orthogonal_family(rng, n) -> VectorSet:
    """Unit coordinate family in R^n whose Gram is :func:`epsilon_orthogonal_gram`."""
    g = epsilon_orthogonal_gram(rng, n)
    rows = np.linalg.cholesky(g)
    return VectorSet.from_coordinates(rows / np.linalg.norm(rows, axis=1)[:, None])


def random_pd(rng, n, complex_field=False, log10_condition=4.0) -> np.ndarray:
    q, _ = np.linalg.qr(_gaussian(rng, (n, n), complex_field))
    lam = 10.0 ** rng.uniform(-log10_condition / 2, log10_condition / 2, size=n)
    a = (q * lam) @ q.conj().T
    return 0.5 * (a + a.conj().T)


def random_hermitian(rng, n, complex_field=False) -> np.ndarray:
    z = _gaussian(rng, (n, n), complex_field)
    return 0.5 * (z + z.conj().T)


# Trial suites


def inverse_bound_instances(seed: int, count: int):
    for rng in trial_rngs(seed, count):
        n = int(rng.integers(1, 7))
        cplx = bool(rng.integers(0, 2))
        a = random_pd(rng, n, cplx)
        e = random_hermitian(rng, n, cplx)
        a_inv_norm = 1.0 / np.linalg.eigvalsh(a)[0]
        t = rng.uniform(0.0, 0.99)
        b = a + e * (t / (a_inv_norm * np.linalg.norm(e, 2)))
        yield a, b


def invsqrt_bound_instances(seed: int, count: int):
    for rng in trial_rngs(seed, count):
        n = int(rng.integers(1, 7))
        cplx = bool(rng.integers(0, 2))
        a = random_pd(rng, n, cplx)
        if rng.integers(0, 2):
            # commuting pair
            w, v = np.linalg.eigh(a)
            w2 = w * 10.0 ** rng.uniform(-1, 1, size=n)
            b = (v * w2) @ v.conj().T
            b = 0.5 * (b + b.conj().T)
        else:
            b = random_pd(rng, n, cplx)
        yield a, b


def sandwich_bound_instances(seed: int, count: int):
    """Triples ``(A, B, C, eta)`` from a unit family and a perturbed copy.

    ``A`` and ``B`` are the metrics of the two families, ``C`` their cross
    metric; ``eta`` sits between ``max(||A-B||, ||A-C||)`` and ``1/(2||A^-1||)``.
    """
    for rng in trial_rngs(seed, count):
        while True:
            n = int(rng.integers(2, 7))
            m = int(rng.integers(n + 1, 11))
            cplx = bool(rng.integers(0, 2))
            alpha = random_unit_family(rng, n, m, cplx, max_condition=1e3)
            xa = alpha.coordinates
            a = xa @ xa.conj().T
            eta_max = 0.5 * np.linalg.eigvalsh(a)[0] * (1 - 1e-9)
            size = eta_max / (2 * n + 1) * rng.uniform(0.05, 1.0)
            xb = perturb_unit_family(rng, alpha, size).coordinates
            b = xb @ xb.conj().T
            c = xa @ xb.conj().T
            d = max(np.linalg.norm(a - b, 2), np.linalg.norm(a - c, 2))
            if d < eta_max:
                break
        eta = eta_max if rng.integers(0, 2) else min(eta_max, d * (1 + 1e-6))
        if not d < eta:
            eta = eta_max
        yield a, b, c, eta


def sqrt_sum_instances(seed: int, count: int):
    for rng in trial_rngs(seed, count):
        n = int(rng.integers(2, 11))
        d = rng.standard_normal(n)
        d -= d.mean()
        eps = rng.uniform(0.0, 1.0 / (2 * (n - 1)))
        lam = 1.0 + eps * d / np.max(np.abs(d))
        yield lam


def run_bound_suite(kind: str, seed: int, count: int):
    """Evaluate one verifier on ``count`` seeded instances; returns the reports."""
    if kind == "inverse":
        return [verify_inverse_bounds(a, b) for a, b in inverse_bound_instances(seed, count)]
    if kind == "invsqrt":
        return [verify_invsqrt_bound(a, b) for a, b in invsqrt_bound_instances(seed, count)]
    if kind == "sandwich":
        return [verify_sandwich_bound(*t) for t in sandwich_bound_instances(seed, count)]
    if kind == "sqrt_sum":
        return [sqrt_sum_bound_check(lam) for lam in sqrt_sum_instances(seed, count)]
    raise ValueError(f"unknown bound suite {kind!r}")


def stability_trials(seed: int, trials: int = 100, scale: float = 0.9, epsilon: float | None = None):
    """Perturb seeded unit families by ``scale * delta`` and check the stability bound.

    ``n <= 5`` vectors in ``F^m`` with ``m <= 8``; half of the trials are complex.
    """
    reports = []
    for rng in trial_rngs(seed, trials):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(max(n, 2), 9))
        cplx = bool(rng.integers(0, 2))
        eps = epsilon if epsilon is not None else float(10.0 ** rng.uniform(-3, 0))
        alpha = random_unit_family(rng, n, m, cplx, max_condition=1e4)
        delta = perturbation_delta(gram(alpha), eps)
        beta = perturb_unit_family(rng, alpha, scale * delta)
        reports.append(stability_check(alpha, beta, eps))
    return reports


def orthogonality_trials(seed: int, trials: int = 200, sizes=range(2, 9)):
    sizes = list(sizes)
    reports = []
    for k, rng in enumerate(trial_rngs(seed, trials)):
        n = sizes[k % len(sizes)]
        reports.append(orthogonality_report(epsilon_orthogonal_family(rng, n)))
    return reports
