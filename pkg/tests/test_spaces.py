import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hilbert_exact
from symortho import (
    NotHermitianError,
    NotPositiveDefiniteError,
    ShapeError,
    UnsupportedRepresentationError,
    VectorSet,
    assert_positive_definite,
    cross_gram,
    gram,
    hilbert,
    monomial_space,
    normalize,
)
from symortho.spaces import format_polynomial, monomial_gram, monomial_gram_exact, polynomial_coefficients


def test_gram_of_basis_rows():
    vs = VectorSet.from_coordinates(np.eye(3)[:2])
    np.testing.assert_array_equal(gram(vs), np.eye(2))


def test_gram_dot_products():
    vs = VectorSet.from_coordinates([[1.0, 0.0], [1.0, 1.0]])
    np.testing.assert_array_equal(gram(vs), [[1.0, 1.0], [1.0, 2.0]])


def test_gram_layout_complex():
    # G[i, j] = <alpha_j, alpha_i> = sum_k alpha_j[k] conj(alpha_i[k])
    x = np.array([[1.0, 1j], [2.0, 0.0]])
    g = gram(VectorSet.from_coordinates(x))
    assert g[0, 1] == pytest.approx(np.sum(x[1] * np.conj(x[0])))
    assert g[1, 0] == pytest.approx(np.conj(g[0, 1]))
    np.testing.assert_allclose(g, g.conj().T)


def test_monomial_space_is_hilbert():
    vs = monomial_space(4)
    assert not vs.has_coordinates
    assert vs.field == "real"
    expected = np.array([[float(v) for v in row] for row in hilbert_exact(4)])
    np.testing.assert_array_equal(gram(vs), expected)
    assert [vs.label(i) for i in range(4)] == ["x^0", "x^1", "x^2", "x^3"]
    np.testing.assert_array_equal(gram(monomial_space(1)), [[1.0]])
    np.testing.assert_array_equal(gram(monomial_space(2)), [[1.0, 0.5], [0.5, 1 / 3]])
    with pytest.raises(ValueError):
        monomial_space(0)


def test_monomial_gram_exact():
    g = monomial_gram_exact([2, 0, 1])
    assert g[0][0] == hilbert_exact(5)[2][2]
    np.testing.assert_allclose(monomial_gram([2, 0, 1]), [[float(v) for v in r] for r in g])
    np.testing.assert_array_equal(hilbert(3), monomial_gram([0, 1, 2]))


def test_cross_gram():
    e = VectorSet.from_coordinates(np.eye(2))
    np.testing.assert_array_equal(cross_gram(e, e), np.eye(2))
    a = VectorSet.from_coordinates([[1.0, 0.0]])
    b = VectorSet.from_coordinates([[0.0, 1.0]])
    np.testing.assert_array_equal(cross_gram(a, b), [[0.0]])
    rot = VectorSet.from_coordinates([[0.995, 0.0998], [-0.0998, 0.995]])
    np.testing.assert_allclose(cross_gram(e, rot), [[0.995, -0.0998], [0.0998, 0.995]])


def test_cross_gram_errors():
    a = VectorSet.from_coordinates(np.eye(2))
    with pytest.raises(ShapeError):
        cross_gram(a, VectorSet.from_coordinates(np.eye(3)))
    with pytest.raises(UnsupportedRepresentationError):
        cross_gram(a, monomial_space(2))


def test_normalize_examples():
    unit, scales = normalize(VectorSet.from_coordinates([[2.0, 0.0]]))
    np.testing.assert_array_equal(unit.coordinates, [[1.0, 0.0]])
    np.testing.assert_array_equal(scales, [2.0])
    unit, scales = normalize(VectorSet.from_gram(np.diag([4.0, 9.0])))
    np.testing.assert_array_equal(gram(unit), np.eye(2))
    np.testing.assert_array_equal(scales, [2.0, 3.0])
    g = gram(normalize(monomial_space(2))[0])
    np.testing.assert_allclose(g, [[1.0, np.sqrt(3) / 2], [np.sqrt(3) / 2, 1.0]], rtol=1e-15)


def test_normalize_rejects_zero_vector():
    with pytest.raises(ValueError):
        normalize(VectorSet.from_coordinates([[1.0, 0.0], [0.0, 0.0]]))


def test_gram_only_validation():
    with pytest.raises(NotHermitianError):
        VectorSet.from_gram([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(ValueError):
        VectorSet.from_gram([[-1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ShapeError):
        VectorSet.from_gram(np.ones((2, 3)))
    with pytest.raises(UnsupportedRepresentationError):
        monomial_space(2).require_coordinates()


def test_labels_propagate():
    vs = VectorSet.from_coordinates(np.eye(3), labels=["a", "b", "c"])
    assert vs.subset(2).label(1) == "b"
    assert vs.permuted([2, 0, 1]).label(0) == "c"
    assert VectorSet.from_coordinates(np.eye(2)).label(1) == "alpha_2"
    with pytest.raises(ValueError):
        VectorSet.from_coordinates(np.eye(2), labels=["only one"])


def test_coordinates_are_immutable():
    vs = VectorSet.from_coordinates(np.eye(2))
    with pytest.raises(ValueError):
        vs.coordinates[0, 0] = 5.0


def test_format_polynomial():
    row = [1.81449, -2.82732, 2.05571, -0.69864]
    assert format_polynomial(row) == "1.8145 - 2.8273x + 2.0557x^2 - 0.6986x^3"
    assert format_polynomial([-2.82732, 18.194]) == "-2.8273 + 18.1940x"
    assert polynomial_coefficients([1, 2]) == [1.0, 2.0]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(0, 3), st.booleans(), st.integers(0, 2**32 - 1))
def test_gram_invariants(n, extra, cplx, seed):
    rng = np.random.default_rng(seed)
    m = n + extra
    x = rng.standard_normal((n, m)) + (1j * rng.standard_normal((n, m)) if cplx else 0)
    vs = VectorSet.from_coordinates(x)
    g = gram(vs)
    np.testing.assert_array_equal(g, g.conj().T)
    assert np.all(g.diagonal().real >= 0) and np.all(g.diagonal().imag == 0)
    np.testing.assert_allclose(cross_gram(vs, vs), g, atol=1e-14 * max(1, np.abs(g).max()))
    unit, _ = normalize(vs)
    np.testing.assert_allclose(gram(unit).diagonal(), 1.0, atol=1e-14)
    # independence test agrees with a rank oracle; a dependent extra row makes it fail
    if np.linalg.matrix_rank(x) == n and np.linalg.cond(x) < 1e6:
        assert_positive_definite(g)
        dep = VectorSet.from_coordinates(np.vstack([x, x[0] + 2 * x[-1]]))
        with pytest.raises(NotPositiveDefiniteError):
            assert_positive_definite(gram(dep))
