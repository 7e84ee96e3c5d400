import numpy as np
import pytest

from lwsurf.algebra import det2
from lwsurf.curvature import mesh_edge_kappa, mesh_face_curvature, weingarten_residual
from lwsurf.lattice import DiscreteHolomorphicFunction, LatticeDomain, gen_exp, gen_linear
from lwsurf.weingarten import (
    FrameClosureError,
    WeingartenParams,
    build_pair,
    dressing,
    edge_kappa_weingarten,
    integrate_frame,
    kappa_weingarten,
    normalization_defects,
    parallel_hyperbolic,
    parallel_kappa_hyperbolic,
    transition,
    upper_sheet,
)


@pytest.fixture(scope="module")
def origin_lattice():
    return gen_linear(0.3, LatticeDomain(0, 3, 0, 3))


def test_params_validation(origin_lattice):
    with pytest.raises(ValueError):
        WeingartenParams(0.0, 0.0)
    with pytest.raises(ValueError, match="positive"):
        WeingartenParams(0.0, 2.0).check(origin_lattice)
    WeingartenParams(0.0, 2.0, allow_complex=True).check(origin_lattice)
    with pytest.raises(ValueError, match="vanishes at vertex"):
        WeingartenParams(-1 / abs(origin_lattice.value(1, 0)) ** 2, 0.1).check(origin_lattice)


def test_transition_has_unit_determinant():
    rng = np.random.default_rng(6)
    dg = rng.normal(size=10) + 1j * rng.normal(size=10)
    la = rng.uniform(-0.5, 0.5, size=10)
    np.testing.assert_allclose(det2(transition(dg, la)), 1, atol=1e-13)


def test_frame_initialization_and_determinant(origin_lattice):
    frame = integrate_frame(origin_lattice, WeingartenParams(0.5, 0.1))
    np.testing.assert_array_equal(frame.E[0, 0], np.eye(2))
    assert frame.det_defect() <= 1e-12
    assert frame.edge_defect() <= 1e-12


def test_frame_closure_on_enneper():
    fn = gen_linear(1, LatticeDomain.square(2))
    frame = integrate_frame(fn, WeingartenParams(0.0, 0.1))
    assert frame.closure.max() <= 1e-10


def test_frame_closure_rejects_non_holomorphic_data():
    m, n = np.meshgrid(np.arange(4), np.arange(4), indexing="ij")
    fn = DiscreteHolomorphicFunction(LatticeDomain(0, 3, 0, 3), 0.3 * (m + 2j * n), np.ones(3), -np.ones(3))
    with pytest.raises(FrameClosureError):
        integrate_frame(fn, WeingartenParams(0.0, 0.1))


def test_dressing_unimodular():
    g = np.array([0, 0.3 + 0.2j, -1.5j])
    for t in (-1.0, 0.0, 0.5):
        L = dressing(g, t)
        np.testing.assert_allclose(det2(L), 1, atol=1e-14)
    np.testing.assert_array_equal(dressing(0, -2.0), [[0, 1], [-1, 0]])


@pytest.mark.parametrize("t", [-2.0, -1.0, 0.0, 1.0])
def test_build_pair_at_origin(origin_lattice, t):
    f, n = build_pair(origin_lattice, WeingartenParams(t, 0.05))
    np.testing.assert_allclose(f.positions[0, 0], [1, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(f.normals[0, 0], [0, 0, 0, -1], atol=1e-15)
    assert n.ambient == "S21"
    np.testing.assert_array_equal(n.positions, f.normals)


def test_build_pair_normalization_and_sheet():
    fn = gen_linear(0.3, LatticeDomain.square(5))
    f, _ = build_pair(fn, WeingartenParams(-2.0, 0.05))
    assert max(normalization_defects(f).values()) <= 1e-10
    upper = upper_sheet(fn, -2.0)
    assert upper.any() and (~upper).any()
    assert np.array_equal(f.positions[..., 0] > 0, upper)


def test_kappa_examples():
    assert kappa_weingarten(0, 1, 1.0, 0.0) == pytest.approx(0)
    assert kappa_weingarten(0, 1, 2.0, 0.0) == pytest.approx(1 / 3)
    # at t = -1 the curvature reduces to w / (2|dg|^2 + w) with w = T_i T_s lam alpha
    la, gs = 0.3, 0.5
    w = (1 - gs**2) * la
    assert kappa_weingarten(0, gs, la, -1.0) == pytest.approx(w / (2 * gs**2 + w))
    assert np.isnan(kappa_weingarten(0, 1, -1.0, 0.0))  # denominator vanishes: planar curvature sphere


def test_kappa_matches_extraction():
    fn = gen_exp(0.3, 0.4, LatticeDomain(-3, 3, 0, 6))
    params = WeingartenParams(0.5, -0.05)
    f, n = build_pair(fn, params)
    k = edge_kappa_weingarten(fn, params)
    assert k.max_rel_diff(mesh_edge_kappa(f)) <= 1e-9
    assert k.reciprocal().max_rel_diff(mesh_edge_kappa(n)) <= 1e-9


def test_parallel_hyperbolic_examples():
    fn = gen_linear(0.3, LatticeDomain.square(4))
    f, n = build_pair(fn, WeingartenParams(-2.0, 0.05))
    f0, n0 = parallel_hyperbolic(f, n, 0.0)
    np.testing.assert_array_equal(f0.positions, f.positions)
    theta = 0.5 * np.log(2)
    ft, nt = parallel_hyperbolic(f, n, theta)
    assert ft.meta["T"] == pytest.approx(-1.0)
    assert max(normalization_defects(ft).values()) <= 1e-10
    res = weingarten_residual(mesh_face_curvature(ft, strict=False), -1.0, "BrLW")
    assert np.nanmax(np.abs(res)) <= 1e-8
    kt = parallel_kappa_hyperbolic(edge_kappa_weingarten(fn, WeingartenParams(-2.0, 0.05)), theta)
    assert kt.max_rel_diff(mesh_edge_kappa(ft)) <= 1e-9


def test_parallel_hyperbolic_composes():
    fn = gen_linear(0.3, LatticeDomain.square(3))
    f, n = build_pair(fn, WeingartenParams(0.5, 0.05))
    a, b = parallel_hyperbolic(*parallel_hyperbolic(f, n, 0.2), 0.3)
    c, _ = parallel_hyperbolic(f, n, 0.5)
    np.testing.assert_allclose(a.positions, c.positions, atol=1e-12)
    assert a.meta["theta"] == pytest.approx(0.5)
