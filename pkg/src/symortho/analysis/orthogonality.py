"""Near-orthogonality certificates for unit families."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError
from ..linalg import gershgorin_bounds
from ..orthonorm import condition_gram, loss_closed_form, metric
from ..spaces import VectorSet, gram, normalize

BOUND_TOL = 1e-10


@dataclass(frozen=True)
class OrthogonalityReport:
    """Mutual-orthogonality level of a normalized family and the loss bounds it implies.

    ``epsilon`` is the largest off-diagonal ``|<alpha_i, alpha_j>|`` after
    normalization. The bound ``2 (n-1) epsilon`` on the Loewdin loss applies
    when ``epsilon < 1 / (2 (n-1))``; ``6 (n-1) epsilon`` is carried only as a
    comparison constant from an earlier, weaker result.
    """

    n: int
    epsilon: float
    bound_applicable: bool
    loewdin_loss: float
    loss_bound: float
    comparison_bound: float
    bound_satisfied: bool | None
    gershgorin: tuple[float, float]
    eigenvalues: list[float]
    sqrt_trace_gap: float
    sqrt_trace_bound: float
    scales: list[float]

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["gershgorin"] = list(self.gershgorin)
        return d


def mutual_orthogonality(g) -> float:
    """Largest off-diagonal magnitude of a Gram matrix."""
    g = np.asarray(g)
    n = g.shape[0]
    if n < 2:
        return 0.0
    off = np.abs(g[~np.eye(n, dtype=bool)])
    return float(off.max())


def orthogonality_report(vs: VectorSet) -> OrthogonalityReport:
    """Normalize ``vs`` and certify how close it is to orthonormal.

    When the bound applies it is enforced, together with the spectral
    sub-check ``|tr(G^1/2) - n| <= (n-1) epsilon`` for the normalized Gram
    ``G``; a failure raises :class:`NumericalError`.
    """
    unit, scales = normalize(vs)
    g = gram(unit)
    n = unit.n
    eps = mutual_orthogonality(g)
    applicable = n == 1 or eps < 1.0 / (2 * (n - 1))
    loss = loss_closed_form(g)
    lam = condition_gram(g).spectrum.eigenvalues
    gap = abs(float(np.sum(np.sqrt(lam))) - n)
    sub_bound = (n - 1) * eps
    loss_bound = 2.0 * (n - 1) * eps
    satisfied = None
    if applicable:
        satisfied = loss <= loss_bound + BOUND_TOL
        if not satisfied:
            raise NumericalError(
                f"loss {loss:.6e} exceeds 2(n-1)eps = {loss_bound:.6e} for an eps-orthogonal family"
            )
        if gap > sub_bound + BOUND_TOL:
            raise NumericalError(
                f"|tr(G^1/2) - n| = {gap:.6e} exceeds (n-1)eps = {sub_bound:.6e}"
            )
    return OrthogonalityReport(
        n=n,
        epsilon=eps,
        bound_applicable=applicable,
        loewdin_loss=loss,
        loss_bound=loss_bound,
        comparison_bound=6.0 * (n - 1) * eps,
        bound_satisfied=satisfied,
        gershgorin=gershgorin_bounds(metric(g)),
        eigenvalues=[float(x) for x in lam],
        sqrt_trace_gap=gap,
        sqrt_trace_bound=sub_bound,
        scales=scales.tolist(),
    )
