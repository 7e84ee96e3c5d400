import numpy as np
import pytest

from lwsurf.curvature import (
    CurvatureError,
    edge_kappa_from_pair,
    face_curvature_from_edges,
    face_HK_from_kappa,
    face_HK_mixed_area,
    mesh_edge_kappa,
    mesh_face_curvature,
    weingarten_residual,
)
from lwsurf.euclidean import build_minimal, edge_kappa_minimal
from lwsurf.lattice import LatticeDomain, gen_linear
from lwsurf.weingarten import WeingartenParams, build_pair


def test_minimal_surface_has_zero_mean_curvature(enneper):
    faces = mesh_face_curvature(build_minimal(enneper))
    assert faces.valid().all()
    assert np.max(np.abs(faces.H)) <= 1e-10
    assert np.all(faces.K < 0)


def test_normals_equal_positions():
    mesh = build_minimal(gen_linear(0.3, LatticeDomain.square(3)))
    faces = face_HK_mixed_area(mesh.positions, mesh.positions)
    np.testing.assert_allclose(faces.H, -1, atol=1e-12)
    np.testing.assert_allclose(faces.K, 1, atol=1e-12)


def test_flat_weingarten_has_unit_K():
    fn = gen_linear(0.3, LatticeDomain.square(4))
    f, _ = build_pair(fn, WeingartenParams(0.0, 0.05))
    faces = mesh_face_curvature(f)
    np.testing.assert_allclose(faces.K, 1, atol=1e-8)


def test_kappa_formula_examples():
    c = 1.7
    H, K, deg = face_HK_from_kappa(c, -c, c, -c)
    assert not deg
    assert H == pytest.approx(0, abs=1e-15)
    assert K == pytest.approx(-c * c)
    _, _, deg = face_HK_from_kappa(0.5, 0.5, 0.5, 0.5)
    assert deg


def test_kappa_formula_matches_mixed_area(enneper):
    mesh = build_minimal(enneper)
    edges = face_curvature_from_edges(edge_kappa_minimal(enneper))
    faces = mesh_face_curvature(mesh)
    np.testing.assert_allclose(faces.K, edges.K, rtol=1e-8)
    np.testing.assert_allclose(faces.H, edges.H, atol=1e-8)


def test_extraction_examples():
    fn = gen_linear(1, LatticeDomain.square(2))
    mesh = build_minimal(fn)
    kappa = mesh_edge_kappa(mesh)
    a, b = fn.domain.index(0, 0)
    assert kappa.horizontal[a, b] == pytest.approx(-2, rel=1e-12)
    const = edge_kappa_from_pair(mesh.positions, np.ones_like(mesh.positions), mesh.metric)
    assert np.all(const.horizontal == 0) and np.all(const.vertical == 0)


def test_extraction_residual_vanishes_on_curvature_lines(enneper):
    _, res = mesh_edge_kappa(build_minimal(enneper), return_residual=True)
    assert max(np.max(res.horizontal), np.max(res.vertical)) <= 1e-12


def test_strict_mode_rejects_non_parallel_bivectors():
    rng = np.random.default_rng(7)
    f = rng.normal(size=(3, 3, 3))
    n = rng.normal(size=(3, 3, 3))
    with pytest.raises(CurvatureError):
        face_HK_mixed_area(f, n)
    assert np.all(face_HK_mixed_area(f, n, strict=False).residual > 1e-3)


def test_weingarten_residual_examples(enneper):
    f, n = build_pair(enneper, WeingartenParams(-2.0, 0.05))
    assert np.nanmax(np.abs(weingarten_residual(mesh_face_curvature(f), -2.0, "BrLW"))) <= 1e-8
    assert np.nanmax(np.abs(weingarten_residual(mesh_face_curvature(n), -2.0, "BiLW"))) <= 1e-8
    # out-of-family input: a minimal surface is not flat
    minimal = mesh_face_curvature(build_minimal(enneper))
    assert np.max(np.abs(weingarten_residual(minimal, 0.0))) > 1e-3
    with pytest.raises(ValueError):
        weingarten_residual(minimal, 0.0, "other")
