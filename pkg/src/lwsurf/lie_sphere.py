"""Legendre lifts to R^{4,2}, the discrete Legendre immersion checks, and curvature spheres.

Coordinates of R^{4,2} are ``(x1, ..., x6)`` with metric ``(-,+,+,+,+,-)``.  A
spaceform is fixed by vectors ``p, q``; a point sphere ``f`` satisfies
``(f, p) = 0, (f, q) = -1`` and the tangent plane ``n`` satisfies
``(n, q) = 0, (n, p) = -1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import METRICS, inner
from .lattice import LatticeDomain, face_corners
from .mesh import EdgeCurvatureField, SpaceformMesh

G42 = METRICS["R42"]
LIFT_TOL = 1e-10
RANK_TOL = 1e-8
NULL_TOL = 1e-12

_E = np.eye(6)
# q = (1,0,0,0,-1,0) is the null vector making the flat spaceforms; p picks the signature.
SPACEFORM_VECTORS = {
    "H3": (_E[5], -_E[4]),
    "S21": (-_E[4], _E[5]),
    "R3": (_E[5], _E[0] - _E[4]),
    "R21": (_E[3], _E[0] - _E[4]),
}


class LegendreError(ValueError):
    pass


def ip42(x, y) -> np.ndarray:
    return inner(x, y, G42)


def _lift_flat(x, nu, ambient):
    if ambient == "R3":
        xx = np.sum(x * x, axis=-1)
        xn = np.sum(x * nu, axis=-1)
        zero = np.zeros_like(xx)
        f = np.stack([(1 + xx) / 2, x[..., 0], x[..., 1], x[..., 2], (1 - xx) / 2, zero], axis=-1)
        n = np.stack([xn, nu[..., 0], nu[..., 1], nu[..., 2], -xn, np.ones_like(xx)], axis=-1)
    else:
        # R21 stored as (y1, y2, y0); y0 goes to the second timelike slot x6.
        xx = x[..., 0] ** 2 + x[..., 1] ** 2 - x[..., 2] ** 2
        xn = x[..., 0] * nu[..., 0] + x[..., 1] * nu[..., 1] - x[..., 2] * nu[..., 2]
        zero = np.zeros_like(xx)
        f = np.stack([(1 + xx) / 2, x[..., 0], x[..., 1], zero, (1 - xx) / 2, x[..., 2]], axis=-1)
        n = np.stack([xn, nu[..., 0], nu[..., 1], -np.ones_like(xx), -xn, nu[..., 2]], axis=-1)
    return f, n


def _lift_r31(x, nu, point_slot):
    ones = np.ones(x.shape[:-1])
    zero = np.zeros(x.shape[:-1])
    a = np.concatenate([x, np.stack([ones, zero] if point_slot else [zero, ones], axis=-1)], axis=-1)
    b = np.concatenate([nu, np.stack([zero, ones] if point_slot else [ones, zero], axis=-1)], axis=-1)
    return a, b


@dataclass(frozen=True, eq=False)
class LegendreLattice:
    """Per-vertex null planes ``span{f, n}`` together with the spaceform vectors."""

    domain: LatticeDomain
    f: np.ndarray  # (Nm, Nn, 6)
    n: np.ndarray
    p: np.ndarray
    q: np.ndarray

    def invariant_defects(self) -> dict:
        f, n, p, q = self.f, self.n, self.p, self.q
        return {
            "(f,f)": np.abs(ip42(f, f)), "(n,n)": np.abs(ip42(n, n)), "(f,n)": np.abs(ip42(f, n)),
            "(f,p)": np.abs(ip42(f, p)), "(f,q)+1": np.abs(ip42(f, q) + 1),
            "(n,q)": np.abs(ip42(n, q)), "(n,p)+1": np.abs(ip42(n, p) + 1),
        }

    def check(self, tol: float = LIFT_TOL, mask=None) -> None:
        """Raise LegendreError naming the first vertex that breaks an invariant."""
        with np.errstate(invalid="ignore"):
            scale = np.maximum(1.0, np.linalg.norm(self.f, axis=-1) * np.linalg.norm(self.n, axis=-1))
            for name, defect in self.invariant_defects().items():
                rel = defect / scale
                if mask is not None:
                    rel = np.where(mask, rel, 0.0)
                if not np.all(rel <= tol):
                    a, b = np.unravel_index(np.nanargmax(rel), rel.shape)
                    raise LegendreError(f"lift fails {name} at vertex {self.domain.label(a, b)} "
                                        f"(defect {rel[a, b]:.3e})")

    def swap(self) -> LegendreLattice:
        """Exchange ``p`` and ``q``: the point-sphere map becomes the Gauss map."""
        return LegendreLattice(self.domain, self.n, self.f, self.q, self.p)


def lift(mesh: SpaceformMesh, center=None, tol: float = LIFT_TOL) -> LegendreLattice:
    """Lift a surface with normals to Legendre data in R^{4,2}.

    Flat ambients are first translated by ``center`` (the centroid by default); a
    translation is a Lie sphere transformation preserving ``p, q``, so curvature
    spheres and their curvatures are unaffected, while the quadratic lift stays
    well conditioned.
    """
    if mesh.normals is None:
        raise ValueError("lift needs a mesh with normals")
    x, nu = mesh.positions, mesh.normals
    if mesh.ambient in ("R3", "R21"):
        c = x.reshape(-1, x.shape[-1]).mean(axis=0) if center is None else np.asarray(center, float)
        f, n = _lift_flat(x - c, nu, mesh.ambient)
    else:
        f, n = _lift_r31(x, nu, point_slot=mesh.ambient == "H3")
    mask = mesh.normal_mask
    if mask is not None and not mask.all():
        # vertices without a normal carry NaN and are skipped by the checks
        f[~mask] = np.nan
        n[~mask] = np.nan
    p, q = SPACEFORM_VECTORS[mesh.ambient]
    L = LegendreLattice(mesh.domain, f, n, p.copy(), q.copy())
    L.check(tol, mask)
    return L


def _unit_columns(M):
    norms = np.linalg.norm(M, axis=-2, keepdims=True)
    return M / np.where(norms > 0, norms, 1.0)


def _rel_singular_values(M):
    s = np.linalg.svd(M, compute_uv=False)
    return s / np.where(s[..., :1] > 0, s[..., :1], 1.0)


def _contact_ratio(fi, ni, fs, ns):
    """Smallest relative singular value of ``[f_i, n_i, f_s, n_s]``; ~0 iff the planes meet."""
    M = _unit_columns(np.stack([fi, ni, fs, ns], axis=-1))
    return _rel_singular_values(M)[..., -1]


@dataclass
class LegendreReport:
    principal_net: np.ndarray
    non_null: np.ndarray
    non_parallel: np.ndarray
    contact: np.ndarray
    rank_gap: np.ndarray  # sigma_4 / sigma_1 of the corner points, ~0 on planar faces
    contact_gap: np.ndarray  # worst edge of the face
    domain: LatticeDomain

    @property
    def passed_faces(self) -> np.ndarray:
        return self.principal_net & self.non_null & self.non_parallel & self.contact

    def passed(self, exclude: np.ndarray | None = None) -> bool:
        ok = self.passed_faces
        if exclude is not None:
            ok = ok | exclude
        return bool(ok.all())

    def failures(self) -> dict:
        out = {}
        for name in ("principal_net", "non_null", "non_parallel", "contact"):
            bad = ~getattr(self, name)
            out[name] = [self.domain.label(a, b) for a, b in zip(*np.nonzero(bad))]
        return out


def validate_legendre(L: LegendreLattice) -> LegendreReport:
    """Per-face check of the four discrete Legendre immersion conditions.

    1. the corner point spheres span a 3-space (singular values, relative gap);
    2. all six differences of corner points are non-null;
    3. the diagonals ``f_k - f_i`` and ``f_l - f_j`` are not parallel;
    4. neighbouring null planes intersect along each of the four edges.
    Never raises; NaN data (missing normals) fails every test on its faces.
    """
    fi, fj, fk, fl = face_corners(L.f)
    ni, nj, nk, nl = face_corners(L.n)
    finite = np.all(np.isfinite(np.stack([fi, fj, fk, fl, ni, nj, nk, nl])), axis=(0, -1))
    clean = np.nan_to_num

    pts = clean(np.stack([fi, fj, fk, fl], axis=-1))
    sv = _rel_singular_values(pts)
    principal = (sv[..., 2] > RANK_TOL) & (sv[..., 3] <= RANK_TOL)

    corners = [clean(fi), clean(fj), clean(fk), clean(fl)]
    non_null = np.ones(fi.shape[:-1], dtype=bool)
    for a in range(4):
        for b in range(a + 1, 4):
            d = corners[a] - corners[b]
            e2 = np.sum(d * d, axis=-1)
            non_null &= np.abs(ip42(d, d)) > NULL_TOL * e2

    diag = np.stack([corners[2] - corners[0], corners[3] - corners[1]], axis=-1)
    non_parallel = _rel_singular_values(diag)[..., 1] > RANK_TOL

    gaps = np.stack([
        _contact_ratio(clean(fi), clean(ni), clean(fj), clean(nj)),
        _contact_ratio(clean(fi), clean(ni), clean(fl), clean(nl)),
        _contact_ratio(clean(fj), clean(nj), clean(fk), clean(nk)),
        _contact_ratio(clean(fl), clean(nl), clean(fk), clean(nk)),
    ])
    contact_gap = gaps.max(axis=0)
    contact = contact_gap < RANK_TOL
    return LegendreReport(principal & finite, non_null & finite, non_parallel & finite, contact & finite,
                          np.where(finite, sv[..., 3], np.nan), np.where(finite, contact_gap, np.nan), L.domain)


def _edge_spheres(fi, ni, fs, ns, p, q, strict):
    # Entries of the Gram system written through edge differences: on null planes
    # (f_i, f_s) = -(df, df)/2 and (n_i, f_s) = (n_i, df), which avoids cancelling
    # the large lifted coordinates against each other on short edges.
    df, dn = fs - fi, ns - ni
    M = np.stack([
        np.stack([-0.5 * ip42(df, df), ip42(ni, df)], axis=-1),
        np.stack([ip42(fi, dn), -0.5 * ip42(dn, dn)], axis=-1),
    ], axis=-2)
    finite = np.all(np.isfinite(M), axis=(-2, -1))
    M = np.where(finite[..., None, None], M, 0.0)
    _, s, vt = np.linalg.svd(M)
    ab = vt[..., -1, :]
    ok = finite & (s[..., 0] > 0) & (s[..., 1] < RANK_TOL * s[..., 0])
    if strict and not np.all(ok | ~finite):
        raise LegendreError("contact condition violated: neighbouring null planes do not intersect")
    sph = ab[..., :1] * np.nan_to_num(fi) + ab[..., 1:] * np.nan_to_num(ni)
    sq, sp = ip42(sph, q), ip42(sph, p)
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = np.where(sp == 0, np.inf, sq / np.where(sp == 0, 1.0, sp))
    kappa = np.where(ok, kappa, np.nan)
    return np.where(ok[..., None], sph, np.nan), kappa


def curvature_spheres(L: LegendreLattice, strict: bool = True):
    """Curvature spheres and curvatures ``(s,q)/(s,p)`` on every edge.

    The sphere ``s = a f_i + b n_i`` is the kernel of the 2x2 system making it
    orthogonal to ``f_s`` and ``n_s``.  Returns ``(spheres_h, spheres_v, kappa)``;
    point spheres give infinite curvature, edges lacking data give NaN.
    """
    f, n = L.f, L.n
    sh, kh = _edge_spheres(f[:-1], n[:-1], f[1:], n[1:], L.p, L.q, strict)
    sv, kv = _edge_spheres(f[:, :-1], n[:, :-1], f[:, 1:], n[:, 1:], L.p, L.q, strict)
    return sh, sv, EdgeCurvatureField(kh, kv)


def curvature_sphere_and_kappa(L: LegendreLattice, edge) -> tuple[np.ndarray, float]:
    """Curvature sphere and curvature of one edge ``((m, n), (m', n'))`` between neighbours."""
    (m0, n0), (m1, n1) = edge
    if abs(m1 - m0) + abs(n1 - n0) != 1:
        raise ValueError("edge endpoints must be lattice neighbours")
    a = L.domain.index(m0, n0)
    b = L.domain.index(m1, n1)
    sph, kappa = _edge_spheres(L.f[a], L.n[a], L.f[b], L.n[b], L.p, L.q, strict=True)
    return sph, float(kappa)


def sphere_membership_defect(L: LegendreLattice, spheres_h, spheres_v) -> float:
    """Worst relative distance of each edge sphere from the null plane at the far endpoint."""
    worst = 0.0
    for sph, fs, ns in ((spheres_h, L.f[1:], L.n[1:]), (spheres_v, L.f[:, 1:], L.n[:, 1:])):
        ok = np.all(np.isfinite(sph), axis=-1)
        A = np.stack([fs[ok], ns[ok]], axis=-1)
        coef = np.einsum("eij,ej->ei", np.linalg.pinv(A), sph[ok])
        rem = sph[ok] - np.einsum("eij,ej->ei", A, coef)
        rel = np.linalg.norm(rem, axis=-1) / np.linalg.norm(sph[ok], axis=-1)
        worst = max(worst, float(rel.max(initial=0.0)))
    return worst
