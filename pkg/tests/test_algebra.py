import numpy as np
import pytest

from lwsurf.algebra import (
    METRICS,
    act,
    circle_through,
    circumcircle,
    det2,
    from_matrix,
    hermitian_inner,
    inner,
    is_sl2,
    minkowski21_inner,
    minkowski31_inner,
    to_matrix,
)


@pytest.mark.parametrize(
    "x, y, expected",
    [((1, 0, 0, 0), (1, 0, 0, 0), -1.0), ((0, 1, 0, 0), (0, 1, 0, 0), 1.0), ((1, 0, 0, 0), (0, 0, 0, 1), 0.0)],
)
def test_minkowski31_examples(x, y, expected):
    assert minkowski31_inner(x, y) == expected
    assert hermitian_inner(to_matrix(x), to_matrix(y)) == pytest.approx(expected, abs=1e-15)


def test_minkowski21_timelike_last():
    assert minkowski21_inner((0, 0, 1), (0, 0, 1)) == -1.0
    assert minkowski21_inner((1, 2, 0), (3, 4, 0)) == 11.0
    assert inner((1, 0, 2), (1, 0, 2), METRICS["R21"]) == -3.0


def test_to_matrix_examples():
    np.testing.assert_array_equal(to_matrix((1, 0, 0, 0)), np.eye(2))
    np.testing.assert_array_equal(to_matrix((0, 0, 0, -1)), np.diag([-1.0, 1.0]))
    np.testing.assert_array_equal(from_matrix(np.eye(2)), [1.0, 0.0, 0.0, 0.0])


def test_matrix_round_trip_and_determinant():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(50, 4))
    np.testing.assert_allclose(from_matrix(to_matrix(x)), x, atol=1e-14)
    # det X = -<x, x>
    np.testing.assert_allclose(det2(to_matrix(x)).real, -minkowski31_inner(x, x), atol=1e-12)


def test_from_matrix_rejects_non_hermitian():
    with pytest.raises(ValueError):
        from_matrix(np.array([[1, 1], [0, 1]], dtype=complex))


def test_trace_formula_matches_components():
    rng = np.random.default_rng(2)
    x, y = rng.normal(size=(2, 1000, 4))
    np.testing.assert_allclose(hermitian_inner(to_matrix(x), to_matrix(y)), minkowski31_inner(x, y), atol=1e-12)


def test_lorentz_equivariance():
    rng = np.random.default_rng(3)
    for _ in range(50):
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        A = A / np.sqrt(det2(A))
        assert is_sl2(A)
        x, y = rng.normal(size=(2, 4))
        xa = from_matrix(act(A, to_matrix(x)), tol=1e-9)
        ya = from_matrix(act(A, to_matrix(y)), tol=1e-9)
        assert minkowski31_inner(xa, ya) == pytest.approx(minkowski31_inner(x, y), abs=1e-10 * max(1, np.abs(A).max() ** 4))


def test_circumcircle_examples():
    c = circumcircle([0, 1, 1 + 1j, 1j])
    assert c.center == pytest.approx((1 + 1j) / 2, abs=1e-12)
    assert c.radius == pytest.approx(np.sqrt(2) / 2, abs=1e-12)
    c = circumcircle([0.5, 1, 1 + 0.5j, 0.5 + 0.5j])
    assert c.center == pytest.approx(0.75 + 0.25j, abs=1e-12)
    assert c.radius == pytest.approx(np.sqrt(0.125), abs=1e-12)
    with pytest.raises(ValueError):
        circumcircle([0, 1, 1 + 1j, 2j])


def test_circumcircle_cyclic_relabeling():
    pts = [0.5, 1, 1 + 0.5j, 0.5 + 0.5j]
    ref = circumcircle(pts)
    for k in range(1, 4):
        c = circumcircle(pts[k:] + pts[:k])
        assert c.center == pytest.approx(ref.center, abs=1e-12)
        assert c.radius == pytest.approx(ref.radius, abs=1e-12)


def test_collinear_points_have_no_circle():
    with pytest.raises(ValueError):
        circle_through(0, 1, 2)
