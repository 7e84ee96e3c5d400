"""Face curvatures from mixed areas, and edge curvatures from surface/normal pairs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import inner
from .lattice import face_corners
from .mesh import EdgeCurvatureField, SpaceformMesh

PARALLEL_TOL = 1e-8
DEGENERATE_TOL = 1e-12
NULL_EDGE_TOL = 1e-12


class CurvatureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FaceCurvatureField:
    H: np.ndarray
    K: np.ndarray
    degenerate: np.ndarray
    residual: np.ndarray | None = None

    def harmonic_ratio(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.H / self.K

    def valid(self) -> np.ndarray:
        return ~self.degenerate & np.isfinite(self.H) & np.isfinite(self.K)


def wedge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Bivector components ``a_p b_q - a_q b_p`` for ``p < q``."""
    p, q = np.triu_indices(a.shape[-1], 1)
    return a[..., p] * b[..., q] - a[..., q] * b[..., p]


def _diagonals(x):
    i, j, k, l = face_corners(x)
    return k - i, l - j


def _ratio(A, B, BB, size):
    """Projection coefficient of ``A`` on ``B`` and the remainder relative to ``size``."""
    r = np.einsum("...i,...i->...", A, B) / BB
    rem = np.linalg.norm(A - r[..., None] * B, axis=-1)
    return r, np.where(size > 0, rem / np.where(size > 0, size, 1.0), 0.0)


def face_HK_mixed_area(f, n, *, tol: float = PARALLEL_TOL, strict: bool = True) -> FaceCurvatureField:
    """Mean and Gaussian curvature of each face from the mixed-area bivectors.

    With ``A(f,f) = 1/2 df_ik ^ df_jl`` the curvatures solve
    ``A(f,n) = -H A(f,f)`` and ``A(n,n) = K A(f,f)``; both right-hand sides are
    projected onto ``A(f,f)``; the remainder, relative to the product of the
    diagonal lengths, is the parallelism residual.  Faces with vanishing ``A(f,f)`` (or a missing normal) are flagged
    degenerate.  ``strict`` raises CurvatureError when a residual exceeds ``tol``.
    """
    f = np.asarray(f, dtype=float)
    n = np.asarray(n, dtype=float)
    fik, fjl = _diagonals(f)
    nik, njl = _diagonals(n)
    Aff = 0.5 * wedge(fik, fjl)
    Afn = 0.25 * (wedge(fik, njl) + wedge(nik, fjl))
    Ann = 0.5 * wedge(nik, njl)

    BB = np.einsum("...i,...i->...", Aff, Aff)
    diam2 = np.maximum(np.sum(fik**2, axis=-1), np.sum(fjl**2, axis=-1))
    finite = np.all(np.isfinite(Afn), axis=-1) & np.all(np.isfinite(Ann), axis=-1)
    degenerate = ~(np.sqrt(BB) > DEGENERATE_TOL * diam2) | ~finite
    BB = np.where(degenerate, 1.0, BB)
    Afn = np.where(degenerate[..., None], 0.0, Afn)
    Ann = np.where(degenerate[..., None], 0.0, Ann)

    norm = lambda a: np.linalg.norm(a, axis=-1)  # noqa: E731
    size_fn = 0.25 * (norm(fik) * norm(njl) + norm(nik) * norm(fjl))
    size_nn = 0.5 * norm(nik) * norm(njl)
    mH, res_fn = _ratio(Afn, Aff, BB, np.nan_to_num(size_fn))
    K, res_nn = _ratio(Ann, Aff, BB, np.nan_to_num(size_nn))
    residual = np.where(degenerate, 0.0, np.maximum(res_fn, res_nn))
    if strict and np.any(residual > tol):
        worst = np.unravel_index(np.argmax(residual), residual.shape)
        raise CurvatureError(f"mixed-area bivectors are not parallel (residual {residual[worst]:.3e} "
                             f"at face index {tuple(int(x) for x in worst)}); not a curvature-line pair")
    H = np.where(degenerate, np.nan, -mH)
    K = np.where(degenerate, np.nan, K)
    return FaceCurvatureField(H, K, degenerate, residual)


def mesh_face_curvature(mesh: SpaceformMesh, **kwargs) -> FaceCurvatureField:
    """Mixed-area curvatures of ``mesh`` against its own normals."""
    if mesh.normals is None:
        raise ValueError("mesh has no normals")
    return face_HK_mixed_area(mesh.positions, mesh.normals, **kwargs)


def face_HK_from_kappa(k_ij, k_jk, k_kl, k_il):
    """Face ``(H, K, degenerate)`` from the four edge principal curvatures.

    ``K`` is evaluated with the reciprocals cleared, which is the same rational
    function but stays finite when an edge curvature vanishes.
    """
    k_ij, k_jk, k_kl, k_il = (np.asarray(x, dtype=float) for x in (k_ij, k_jk, k_kl, k_il))
    den = k_ij - k_il - k_jk + k_kl
    scale = np.maximum.reduce([np.abs(k_ij), np.abs(k_jk), np.abs(k_kl), np.abs(k_il)])
    finite = np.isfinite(den) & np.isfinite(scale)
    degenerate = ~finite | ~(np.abs(den) > DEGENERATE_TOL * np.where(finite, scale, 0.0))
    safe = np.where(degenerate, 1.0, den)
    H = (k_ij * k_kl - k_il * k_jk) / safe
    K = (-k_jk * k_kl * k_il + k_ij * k_kl * k_il + k_ij * k_jk * k_kl - k_ij * k_jk * k_il) / safe
    return np.where(degenerate, np.nan, H), np.where(degenerate, np.nan, K), degenerate


def face_curvature_from_edges(kappa: EdgeCurvatureField) -> FaceCurvatureField:
    H, K, degenerate = face_HK_from_kappa(*kappa.face_values())
    return FaceCurvatureField(H, K, degenerate)


def edge_kappa_from_pair(f, n, metric, *, return_residual: bool = False):
    """``kappa = -<dn, df> / <df, df>`` per edge in the ambient metric.

    Null edges (``<df, df> = 0``) and edges touching a missing normal are NaN.
    With ``return_residual`` also returns ``|dn + kappa df| / |df|`` per edge.
    """
    f = np.asarray(f, dtype=float)
    n = np.asarray(n, dtype=float)

    def along(df, dn):
        dd = inner(df, df, metric)
        e2 = np.sum(df**2, axis=-1)
        ok = np.abs(dd) > NULL_EDGE_TOL * e2
        with np.errstate(divide="ignore", invalid="ignore"):
            k = -inner(dn, df, metric) / np.where(ok, dd, 1.0)
            k = np.where(ok, k, np.nan)
            res = np.linalg.norm(dn + k[..., None] * df, axis=-1) / np.sqrt(e2)
        return k, res

    kh, rh = along(f[1:] - f[:-1], n[1:] - n[:-1])
    kv, rv = along(f[:, 1:] - f[:, :-1], n[:, 1:] - n[:, :-1])
    field = EdgeCurvatureField(kh, kv)
    if return_residual:
        return field, EdgeCurvatureField(rh, rv)
    return field


def mesh_edge_kappa(mesh: SpaceformMesh, **kwargs):
    if mesh.normals is None:
        raise ValueError("mesh has no normals")
    return edge_kappa_from_pair(mesh.positions, mesh.normals, mesh.metric, **kwargs)


def weingarten_residual(field: FaceCurvatureField, t: float, kind: str = "BrLW") -> np.ndarray:
    """Left-hand side of the linear Weingarten relation per face.

    ``BrLW``: ``2t(H-1) + (1-t)(K-1)``; ``BiLW``: ``2t(H-1) - (1+t)(K-1)``.
    """
    if kind == "BrLW":
        return 2 * t * (field.H - 1) + (1 - t) * (field.K - 1)
    if kind == "BiLW":
        return 2 * t * (field.H - 1) - (1 + t) * (field.K - 1)
    raise ValueError(f"unknown Weingarten kind {kind!r}")
