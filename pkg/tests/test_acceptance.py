"""Acceptance suite: one group of tests per numbered criterion.

Run ``pytest tests/test_acceptance.py``; the terminal summary lists one
pass/fail line per criterion.
"""
from functools import lru_cache

import numpy as np
import pytest

from lwsurf.curvature import face_HK_from_kappa, mesh_edge_kappa, mesh_face_curvature, weingarten_residual
from lwsurf.euclidean import (
    build_maximal,
    build_minimal,
    edge_kappa_maximal,
    edge_kappa_minimal,
    parallel_euclidean,
    parallel_kappa,
)
from lwsurf.lattice import LatticeDomain, catenoid_c1, cross_ratio, gen_exp, gen_linear, mobius, validate
from lwsurf.lie_sphere import curvature_spheres, lift, validate_legendre
from lwsurf.projection import poincare_ball
from lwsurf.singularity import (
    check_circumcircle_criterion,
    check_cmc1_face_equivalence,
    check_cmc1_sign_characterization,
    check_cmc1_vertex_face,
    check_maximal_vertex_face,
    fps_vertices,
    lambda_sweep,
)
from lwsurf.weingarten import (
    WeingartenParams,
    build_pair,
    edge_kappa_weingarten,
    normalization_defects,
    parallel_hyperbolic,
    parallel_kappa_hyperbolic,
)

T_SWEEP = (-2.0, -1.0, 0.0, 0.5, 1.0)
LAM_SWEEP = (0.001, -0.001, 0.01, -0.01, 0.05, -0.05)
GENERATORS = {
    "linear": lambda: gen_linear(0.3, LatticeDomain.square(5)),
    "exp": lambda: gen_exp(0.3, 0.4, LatticeDomain(-9, -1, 0, 8)),
}


@lru_cache(maxsize=None)
def data(name):
    return GENERATORS[name]()


@lru_cache(maxsize=None)
def builds(name):
    """All admissible ``(t, lam, f_mesh, n_mesh)`` of the sweep on one generator."""
    fn = data(name)
    out = []
    for t in T_SWEEP:
        for lam in LAM_SWEEP:
            p = WeingartenParams(t, lam)
            try:
                p.check(fn)
            except ValueError:
                continue  # excluded by the admissibility condition 1 - lam*alpha > 0
            out.append((t, lam) + build_pair(fn, p))
    return tuple(out)


def rel_gap(a, b, ok=None):
    ok = np.isfinite(a) & np.isfinite(b) if ok is None else ok & np.isfinite(a) & np.isfinite(b)
    if not ok.any():
        return 0.0
    return float(np.max(np.abs(a[ok] - b[ok]) / np.maximum(1.0, np.abs(b[ok]))))


def missing_normal_faces(mesh):
    if mesh.normal_mask is None:
        return np.zeros(mesh.domain.face_shape, dtype=bool)
    mk = ~mesh.normal_mask
    return mk[:-1, :-1] | mk[1:, :-1] | mk[1:, 1:] | mk[:-1, 1:]


def euclidean_builds(name):
    fn = data(name)
    return [(build_minimal(fn), edge_kappa_minimal(fn)), (build_maximal(fn), edge_kappa_maximal(fn))]


D50 = LatticeDomain(-24, 25, -24, 25)


# --- criterion 1 ---------------------------------------------------------------------------

@pytest.mark.criterion(1)
@pytest.mark.parametrize("make", [
    lambda: gen_linear(0.3, D50),
    lambda: gen_linear(1 + 0.5j, D50),
    lambda: gen_exp(0.3, 0.4, D50),
    lambda: gen_exp(0.1, 0.25, D50),
], ids=["linear-real", "linear-complex", "exp", "exp-other"])
def test_c1_generators_are_holomorphic(make):
    fn = make()
    assert fn.domain.shape == (50, 50)
    report = validate(fn, tol=1e-12)
    assert report.passed and report.max_residual <= 1e-12


@pytest.mark.criterion(1)
@pytest.mark.parametrize("c2", [2 * np.pi / 25, 0.6, 1.3])
def test_c1_catenoid_cross_ratio(c2):
    c1 = catenoid_c1(c2)
    assert np.sinh(c1 / 2) == pytest.approx(np.sin(c2 / 2), abs=1e-15)
    g = gen_exp(c1, c2, D50).g
    cr = cross_ratio(g[:-1, :-1], g[1:, :-1], g[1:, 1:], g[:-1, 1:])
    assert np.abs(cr + 1).max() <= 1e-12


# --- criteria 2 and 3 ----------------------------------------------------------------------

@pytest.mark.criterion(2)
@pytest.mark.parametrize("name", GENERATORS)
def test_c2_frame_closure(name):
    got = builds(name)
    assert len(got) >= 20
    assert {t for t, *_ in got} == set(T_SWEEP)
    for t, lam, f, _ in got:
        assert f.meta["frame_closure"] <= 1e-9, (t, lam)


@pytest.mark.criterion(3)
@pytest.mark.parametrize("name", GENERATORS)
def test_c3_ambient_normalization(name):
    for t, lam, f, _ in builds(name):
        defects = normalization_defects(f)
        assert max(defects.values()) <= 1e-10, (t, lam, defects)


# --- criterion 4 ---------------------------------------------------------------------------

def three_way_gap(closed, mesh):
    extracted = mesh_edge_kappa(mesh)
    _, _, lie = curvature_spheres(lift(mesh), strict=False)
    for field in (extracted, lie):
        h, v = field.defined()
        # every edge with a closed form must also be recovered by the other two routes
        ch, cv = closed.defined()
        assert (h | ~ch).all() and (v | ~cv).all()
    return max(closed.max_rel_diff(extracted), closed.max_rel_diff(lie), extracted.max_rel_diff(lie))


@pytest.mark.criterion(4)
@pytest.mark.parametrize("name", GENERATORS)
def test_c4_weingarten_kappa_agree(name):
    fn = data(name)
    for t, lam, f, n in builds(name):
        k = edge_kappa_weingarten(fn, WeingartenParams(t, lam))
        assert three_way_gap(k, f) <= 1e-9, ("f", t, lam)
        assert three_way_gap(k.reciprocal(), n) <= 1e-9, ("n", t, lam)


@pytest.mark.criterion(4)
@pytest.mark.parametrize("name", GENERATORS)
def test_c4_euclidean_kappa_agree(name):
    for mesh, k in euclidean_builds(name):
        assert three_way_gap(k, mesh) <= 1e-9, mesh.meta["kind"]
        for rho in (1.0, 5.0):
            assert three_way_gap(parallel_kappa(k, rho), parallel_euclidean(mesh, rho)) <= 1e-9


# --- criterion 5 ---------------------------------------------------------------------------

def formula_gap(mesh, kappa):
    faces = mesh_face_curvature(mesh, strict=False)
    H, K, deg = face_HK_from_kappa(*kappa.face_values())
    ok = faces.valid() & ~deg
    assert ok.mean() > 0.9
    return max(rel_gap(faces.H, H, ok), rel_gap(faces.K, K, ok))


@pytest.mark.criterion(5)
@pytest.mark.parametrize("name", GENERATORS)
def test_c5_mixed_area_matches_kappa_formulas(name):
    fn = data(name)
    for t, lam, f, n in builds(name):
        k = edge_kappa_weingarten(fn, WeingartenParams(t, lam))
        assert formula_gap(f, k) <= 1e-8, ("f", t, lam)
        assert formula_gap(n, k.reciprocal()) <= 1e-8, ("n", t, lam)
    for mesh, k in euclidean_builds(name):
        assert formula_gap(mesh, k) <= 1e-8


@pytest.mark.criterion(5)
@pytest.mark.parametrize("name", GENERATORS)
def test_c5_minimal_and_maximal_have_zero_mean_curvature(name):
    for mesh, _ in euclidean_builds(name):
        faces = mesh_face_curvature(mesh, strict=False)
        ok = faces.valid()
        assert ok.any()
        assert np.abs(faces.H[ok]).max() <= 1e-10, mesh.meta["kind"]


@pytest.mark.criterion(5)
@pytest.mark.parametrize("name", GENERATORS)
def test_c5_flat_builds_have_unit_extrinsic_curvature(name):
    flat = [b for b in builds(name) if b[0] == 0.0]
    assert flat
    for _, lam, f, _ in flat:
        faces = mesh_face_curvature(f, strict=False)
        assert np.nanmax(np.abs(faces.K - 1)) <= 1e-8, lam


# --- criterion 6 ---------------------------------------------------------------------------

@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", GENERATORS)
def test_c6_linear_weingarten_relations(name):
    for t, lam, f, n in builds(name):
        Ff = mesh_face_curvature(f, strict=False)
        Fn = mesh_face_curvature(n, strict=False)
        assert np.nanmax(np.abs(weingarten_residual(Ff, t, "BrLW"))) <= 1e-8, ("BrLW", t, lam)
        assert np.nanmax(np.abs(weingarten_residual(Fn, t, "BiLW"))) <= 1e-8, ("BiLW", t, lam)


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", GENERATORS)
def test_c6_reciprocity(name):
    for t, lam, f, n in builds(name):
        Ff = mesh_face_curvature(f, strict=False)
        Fn = mesh_face_curvature(n, strict=False)
        assert np.nanmax(np.abs(Fn.K * Ff.K - 1)) <= 1e-8, (t, lam)
        assert np.nanmax(np.abs(Fn.H - Ff.H / Ff.K)) <= 1e-8, (t, lam)


# --- criterion 7 ---------------------------------------------------------------------------

@pytest.mark.criterion(7)
@pytest.mark.parametrize("rho", [1.0, 5.0, 20.0])
def test_c7_euclidean_parallels(rho):
    for mesh, k in euclidean_builds("linear"):
        par = parallel_euclidean(mesh, rho)
        assert parallel_kappa(k, rho).max_rel_diff(mesh_edge_kappa(par)) <= 1e-9
        faces = mesh_face_curvature(par, strict=False)
        ok = faces.valid() & (np.abs(faces.K) > 0)
        assert ok.mean() > 0.9
        ratio = faces.H[ok] / faces.K[ok]
        assert np.max(np.abs(ratio + rho) / rho) <= 1e-8, mesh.meta["kind"]


@pytest.mark.criterion(7)
@pytest.mark.parametrize("theta", [-0.5, -0.25, 0.25, 0.5])
def test_c7_hyperbolic_parallels(theta):
    fn = data("linear")
    for t, lam, f, n in builds("linear"):
        if abs(lam) < 0.01:
            continue
        ft, nt = parallel_hyperbolic(f, n, theta)
        k = parallel_kappa_hyperbolic(edge_kappa_weingarten(fn, WeingartenParams(t, lam)), theta)
        assert k.max_rel_diff(mesh_edge_kappa(ft)) <= 1e-9, (t, lam)
        T = np.exp(-2 * theta) * t
        assert ft.meta["T"] == pytest.approx(T)
        faces = mesh_face_curvature(ft, strict=False)
        assert np.nanmax(np.abs(weingarten_residual(faces, T, "BrLW"))) <= 1e-8, (t, lam)


# --- criteria 8 and 9 ----------------------------------------------------------------------

CMC1_DATA = {
    "linear12": lambda: gen_linear(0.3, LatticeDomain.square(12)),
    "linear6": lambda: gen_linear(0.27, LatticeDomain.square(6)),
    "exp": lambda: gen_exp(0.3, 0.4, LatticeDomain(-9, -1, 0, 8)),
    "mobius": lambda: mobius(gen_linear(0.3, LatticeDomain.square(6)), 1, 0.2 + 0.1j, 0.3j, 1),
}


@lru_cache(maxsize=None)
def cmc1(name):
    fn = CMC1_DATA[name]()
    return fn, tuple(lambda_sweep(fn))


@pytest.mark.criterion(8)
def test_c8_face_equivalence_on_enough_faces():
    faces = 0
    for name in CMC1_DATA:
        fn, sweep = cmc1(name)
        chk = check_cmc1_face_equivalence(fn, list(sweep))
        assert chk.status == "pass", (name, chk.witnesses[:3])
        assert chk.checked > 0
        faces += int(np.prod(fn.domain.face_shape))
    assert faces >= 500


@pytest.mark.criterion(8)
@pytest.mark.parametrize("name", CMC1_DATA)
def test_c8_circumcircle_criterion(name):
    fn, sweep = cmc1(name)
    chk = check_circumcircle_criterion(fn, list(sweep))
    assert chk.status == "pass", chk.witnesses[:3]
    assert chk.checked > 0


MAXIMAL_DATA = {
    "linear25": lambda: gen_linear(0.25, LatticeDomain.square(6)),
    "linear30": lambda: gen_linear(0.3, LatticeDomain.square(5)),
    "exp-scaled": lambda: mobius(gen_exp(0.3, 0.4, LatticeDomain(-6, 6, 0, 12)), np.exp(0.15), 0, 0, 1),
}


@pytest.mark.criterion(9)
@pytest.mark.parametrize("name", MAXIMAL_DATA)
def test_c9_maximal_vertex_face(name):
    fn = MAXIMAL_DATA[name]()
    r = np.abs(fn.g)
    assert (r < 1).any() and (r > 1).any()
    chk = check_maximal_vertex_face(fn, build_maximal(fn))
    assert chk.status == "pass", chk.witnesses[:3]
    assert chk.checked > 0


@pytest.mark.criterion(9)
@pytest.mark.parametrize("name", CMC1_DATA)
def test_c9_cmc1_sign_characterization(name):
    fn, sweep = cmc1(name)
    chk = check_cmc1_sign_characterization(fn, list(sweep))
    assert chk.status == "pass", chk.witnesses[:3]
    assert chk.checked > 0


@pytest.mark.criterion(9)
def test_c9_cmc1_vertex_face():
    checked = 0
    for name in CMC1_DATA:
        fn, sweep = cmc1(name)
        chk = check_cmc1_vertex_face(fn, list(sweep))
        # data without stable FPS vertices is vacuously fine; violations never are
        assert chk.status in ("pass", "skipped") and not chk.witnesses, (name, chk.witnesses[:3])
        checked += chk.checked
    assert checked > 0


# --- criterion 10 --------------------------------------------------------------------------

@pytest.mark.criterion(10)
@pytest.mark.parametrize("name", GENERATORS)
def test_c10_weingarten_builds_are_legendre(name):
    for t, lam, f, n in builds(name):
        for mesh in (f, n):
            rep = validate_legendre(lift(mesh))
            assert rep.passed(), (mesh.ambient, t, lam, rep.failures())


@pytest.mark.criterion(10)
@pytest.mark.parametrize("name", GENERATORS)
def test_c10_euclidean_builds_are_legendre(name):
    for mesh, _ in euclidean_builds(name):
        meshes = [mesh] + [parallel_euclidean(mesh, rho) for rho in (1.0, 5.0, 20.0)]
        for m in meshes:
            excluded = missing_normal_faces(m)
            assert excluded.mean() < 0.5
            rep = validate_legendre(lift(m))
            assert rep.passed(exclude=excluded), (m.meta, rep.failures())


# --- criterion 11 --------------------------------------------------------------------------

@pytest.mark.criterion(11)
def test_c11_brlw_t_minus_two_smoke():
    fn = data("linear")
    params = WeingartenParams(-2.0, 0.05)
    f, n = build_pair(fn, params)
    assert np.all(np.isfinite(f.positions)) and np.all(np.isfinite(n.positions))
    fps = fps_vertices(edge_kappa_weingarten(fn, params), fn.domain)
    assert fps.vertices()
    T = 1 - 2 * np.abs(fn.g) ** 2
    assert (T > 0).any() and (T < 0).any() and not (T == 0).any()
    y, finite = poincare_ball(f.positions)
    assert finite.all()
    inside = np.linalg.norm(y, axis=-1) < 1
    assert np.array_equal(inside, T > 0)
