"""One-call analysis of a built surface: curvatures, invariants, singularities and theorem checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curvature as cv
from . import euclidean as eu
from . import lie_sphere as ls
from . import singularity as sg
from . import weingarten as wg
from .io import encode_array
from .lattice import DiscreteHolomorphicFunction
from .mesh import EdgeCurvatureField, SpaceformMesh

KAPPA_TOL = 1e-9
FACE_TOL = 1e-8
H_ZERO_TOL = 1e-10
NORMALIZATION_TOL = 1e-10


@dataclass
class Invariant:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)

    def row(self) -> list:
        return [self.name, f"{self.value:.3e}", f"{self.tol:.0e}", "pass" if self.passed else "FAIL"]


@dataclass
class Analysis:
    mesh: SpaceformMesh
    fn: DiscreteHolomorphicFunction | None
    kappa: EdgeCurvatureField
    kappa_source: str
    faces: cv.FaceCurvatureField
    report: sg.SingularityReport
    vertex_kind: str = "fps"
    invariants: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(inv.passed for inv in self.invariants) and self.report.passed

    def failures(self) -> list[str]:
        out = [inv.name for inv in self.invariants if not inv.passed]
        out += [c.theorem for c in self.report.theorem_checks if not c.passed]
        return out

    def to_dict(self) -> dict:
        return {
            "format": "lwsurf-report/1",
            "ambient": self.mesh.ambient,
            "meta": {k: v for k, v in self.mesh.meta.items() if k != "finite"},
            "kappa_source": self.kappa_source,
            "vertex_kind": self.vertex_kind,
            "passed": self.passed,
            "invariants": [{"name": i.name, "value": float(i.value) if np.isfinite(i.value) else None,
                            "tol": i.tol, "passed": i.passed} for i in self.invariants],
            "singularities": self.report.to_dict(),
            "fields": {
                "kappa_h": encode_array(self.kappa.horizontal),
                "kappa_v": encode_array(self.kappa.vertical),
                "H": encode_array(self.faces.H),
                "K": encode_array(self.faces.K),
                "parallel_residual": encode_array(self.faces.residual),
            },
        }

    def face_rows(self):
        singular = self.report.singular_face_labels()
        d = self.mesh.domain
        for a, b in np.ndindex(self.faces.H.shape):
            m, n = d.label(a, b)
            yield [m, n, repr(float(self.faces.H[a, b])), repr(float(self.faces.K[a, b])),
                   int((m, n) in singular), ";".join(singular.get((m, n), []))]


FACE_CSV_HEADER = ["m", "n", "H", "K", "singular", "criteria"]


def _params(meta) -> wg.WeingartenParams:
    return wg.WeingartenParams(float(meta["t"]), float(meta["lambda"]))


def closed_form_kappa(mesh: SpaceformMesh, fn: DiscreteHolomorphicFunction | None) -> EdgeCurvatureField | None:
    """Edge curvatures from the holomorphic data, following the construction recorded in ``meta``."""
    if fn is None:
        return None
    meta = mesh.meta
    kind = meta.get("kind")
    if kind in ("minimal", "maximal"):
        base = eu.edge_kappa_minimal(fn) if kind == "minimal" else eu.edge_kappa_maximal(fn)
        return eu.parallel_kappa(base, float(meta["rho"])) if "rho" in meta else base
    if kind == "weingarten":
        k = wg.edge_kappa_weingarten(fn, _params(meta))
        if "theta" in meta:
            k = wg.parallel_kappa_hyperbolic(k, float(meta["theta"]))
        return k.reciprocal() if meta.get("surface") == "n" else k
    return None


def _formula_gap(faces: cv.FaceCurvatureField, kappa: EdgeCurvatureField) -> float:
    H, K, deg = cv.face_HK_from_kappa(*kappa.face_values())
    ok = faces.valid() & ~deg
    if not ok.any():
        return 0.0
    dH = np.abs(faces.H[ok] - H[ok]) / np.maximum(1.0, np.abs(H[ok]))
    dK = np.abs(faces.K[ok] - K[ok]) / np.maximum(1.0, np.abs(K[ok]))
    return float(max(dH.max(), dK.max()))


def _weingarten_gap(faces: cv.FaceCurvatureField, meta) -> float:
    t = float(meta.get("T", meta["t"]))
    kind = "BiLW" if meta.get("surface") == "n" else "BrLW"
    res = cv.weingarten_residual(faces, t, kind)
    scale = np.maximum(1.0, np.maximum(np.abs(faces.H), np.abs(faces.K)))
    ok = faces.valid()
    return float(np.max(np.abs(res[ok]) / scale[ok])) if ok.any() else 0.0


def analyze(mesh: SpaceformMesh, fn: DiscreteHolomorphicFunction | None = None, *,
            check_theorems: bool = False, seed: int = 0, converse_trials: int = 2000) -> Analysis:
    """Curvatures, invariant residuals and singularities of ``mesh``.

    The edge curvatures come from the holomorphic data when it is available (and
    are then cross-checked against the mesh); otherwise they are extracted from
    the mesh and its normals.  ``check_theorems`` adds the vertex/face theorem
    checks that apply to the surface family.
    """
    meta = mesh.meta
    invs: list[Invariant] = []
    if "closure_residual" in meta:
        invs.append(Invariant("closure_residual", float(meta["closure_residual"]), eu.CLOSURE_TOL))
    if "frame_closure" in meta:
        invs.append(Invariant("frame_closure", float(meta["frame_closure"]), wg.FRAME_CLOSURE_TOL))
    if mesh.ambient in ("H3", "S21") and mesh.normals is not None:
        f_mesh = mesh if mesh.ambient == "H3" else mesh.swapped("H3")
        invs.append(Invariant("normalization", max(wg.normalization_defects(f_mesh).values()), NORMALIZATION_TOL))

    extracted = cv.mesh_edge_kappa(mesh)
    closed = closed_form_kappa(mesh, fn)
    kappa, source = (closed, "closed-form") if closed is not None else (extracted, "extracted")
    if closed is not None:
        invs.append(Invariant("kappa_closed_vs_extracted", closed.max_rel_diff(extracted), KAPPA_TOL))
    try:
        L = ls.lift(mesh)
        _, _, klie = ls.curvature_spheres(L, strict=False)
        invs.append(Invariant("kappa_lie_sphere", kappa.max_rel_diff(klie), KAPPA_TOL))
        leg = ls.validate_legendre(L)
        missing = np.zeros(mesh.domain.face_shape, dtype=bool)
        if mesh.normal_mask is not None:
            mk = ~mesh.normal_mask
            missing = mk[:-1, :-1] | mk[1:, :-1] | mk[1:, 1:] | mk[:-1, 1:]
        invs.append(Invariant("legendre_failed_faces", float((~(leg.passed_faces | missing)).sum()), 0.0))
    except ls.LegendreError:
        invs.append(Invariant("legendre_lift", float("inf"), ls.LIFT_TOL))

    faces = cv.face_HK_mixed_area(mesh.positions, mesh.normals, strict=False)
    invs.append(Invariant("mixed_area_parallelism", float(np.nanmax(faces.residual, initial=0.0)), cv.PARALLEL_TOL))
    invs.append(Invariant("mixed_area_vs_kappa_formula", _formula_gap(faces, kappa), FACE_TOL))
    kind = meta.get("kind")
    valid = faces.valid()
    if kind in ("minimal", "maximal") and "rho" not in meta and valid.any():
        invs.append(Invariant("mean_curvature_zero", float(np.max(np.abs(faces.H[valid]))), H_ZERO_TOL))
    if kind in ("minimal", "maximal") and "rho" in meta and valid.any():
        ratio = faces.H[valid] / faces.K[valid]
        rho = float(meta["rho"])
        invs.append(Invariant("harmonic_ratio", float(np.max(np.abs(ratio + rho) / max(1.0, abs(rho)))), FACE_TOL))
    if kind == "weingarten":
        invs.append(Invariant("weingarten_relation", _weingarten_gap(faces, meta), FACE_TOL))

    report = sg.SingularityReport(mesh.domain, fps=sg.fps_vertices(kappa, mesh.domain))
    vertex_kind = "fps"
    if kind == "maximal":
        vertex_kind = "singular"
    else:
        try:
            sg.classify_cgc(kappa, faces, mesh.domain)
            vertex_kind = "singular"
        except ValueError:
            pass
    if mesh.ambient in ("R21", "S21"):
        report.singular_faces["non-spacelike"] = sg.singular_faces_causal(mesh)
    cmc1_n = kind == "weingarten" and fn is not None and float(meta["t"]) == -1.0 and \
        meta.get("surface") == "n" and "theta" not in meta
    if cmc1_n:
        report.singular_faces["h-criterion"] = sg.cmc1_face_criterion(fn, float(meta["lambda"]))

    if check_theorems:
        report.theorem_checks += _theorem_checks(mesh, fn, faces, seed, converse_trials)
    return Analysis(mesh, fn, kappa, source, faces, report, vertex_kind, invs)


def _theorem_checks(mesh, fn, faces, seed, converse_trials) -> list:
    meta = mesh.meta
    kind = meta.get("kind")
    if fn is None:
        return [sg.TheoremCheck("theorems", "skipped", notes=["mesh carries no holomorphic data"])]
    if kind == "maximal" and "rho" not in meta:
        return [sg.check_maximal_vertex_face(fn, mesh)]
    if kind == "weingarten" and "theta" not in meta:
        t = float(meta["t"])
        if t == -1.0:
            sweep = sg.lambda_sweep(fn)
            checks = [sg.check_cmc1_face_equivalence(fn, sweep), sg.check_circumcircle_criterion(fn, sweep),
                      sg.check_cmc1_sign_characterization(fn, sweep), sg.check_cmc1_vertex_face(fn, sweep)]
            conv, _ = sg.search_converse_failure(seed, converse_trials)
            return checks + [conv]
        if t == 0.0 and meta.get("surface") != "n":
            return [sg.check_flat_classification(fn, float(meta["lambda"]), faces)]
    return [sg.TheoremCheck("theorems", "skipped", notes=["no vertex/face theorem applies to this surface"])]
