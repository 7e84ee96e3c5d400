"""Maps from the spaceform models to Euclidean 3-space, for drawing and export."""
from __future__ import annotations

import numpy as np

from .mesh import SpaceformMesh

PROJECTIONS = ("poincare-ball", "hollow-ball", "identity")
INFINITY_TOL = 1e-12

_NATIVE = {"H3": "poincare-ball", "S21": "hollow-ball", "R3": "identity", "R21": "identity"}


def default_projection(ambient: str) -> str:
    return _NATIVE[ambient]


def poincare_ball(x) -> tuple[np.ndarray, np.ndarray]:
    """``(x1, x2, x3) / (1 + x0)``; returns ``(points, finite_mask)``.

    Upper-sheet points land inside the unit ball, lower-sheet points outside;
    ``x0 = -1`` goes to infinity and is flagged (NaN coordinates).
    """
    x = np.asarray(x, dtype=float)
    den = 1 + x[..., 0]
    ok = np.abs(den) > INFINITY_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        y = x[..., 1:] / np.where(ok, den, np.nan)[..., None]
    return y, ok


def poincare_ball_inverse(y, upper=None) -> np.ndarray:
    """Inverse of :func:`poincare_ball` on either sheet (the sheet follows from ``|y|``)."""
    y = np.asarray(y, dtype=float)
    r2 = np.sum(y * y, axis=-1)
    den = 1 - r2
    x0 = (1 + r2) / den
    return np.concatenate([x0[..., None], 2 * y / den[..., None]], axis=-1)


def hollow_ball(x) -> np.ndarray:
    """``exp(arctan x0) / sqrt(1 + x0^2) * (x1, x2, x3)`` for points of S^{2,1}.

    On S^{2,1} the spatial part has length ``sqrt(1 + x0^2)``, so the image radius
    is ``exp(arctan x0)``, a monotone bijection of the time coordinate onto the
    open shell ``exp(-pi/2) < |y| < exp(pi/2)``.
    """
    x = np.asarray(x, dtype=float)
    scale = np.exp(np.arctan(x[..., 0])) / np.sqrt(1 + x[..., 0] ** 2)
    return x[..., 1:] * scale[..., None]


def hollow_ball_inverse(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    r = np.linalg.norm(y, axis=-1)
    x0 = np.tan(np.log(r))
    spatial = y * (np.sqrt(1 + x0**2) / r)[..., None]
    return np.concatenate([x0[..., None], spatial], axis=-1)


def project_points(x, ambient: str, kind: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Project an array of ambient points; returns ``(points, finite_mask)``."""
    kind = kind or default_projection(ambient)
    if kind not in PROJECTIONS:
        raise ValueError(f"unknown projection {kind!r}")
    if kind == "poincare-ball":
        if ambient != "H3":
            raise ValueError("the Poincare ball model is defined for H3 only")
        return poincare_ball(x)
    if kind == "hollow-ball":
        if ambient != "S21":
            raise ValueError("the hollow ball model is defined for S21 only")
        y = hollow_ball(x)
        return y, np.all(np.isfinite(y), axis=-1)
    if ambient not in ("R3", "R21"):
        raise ValueError("the identity projection applies to R3 and R21 only")
    x = np.asarray(x, dtype=float)
    return x.copy(), np.all(np.isfinite(x), axis=-1)


def project(mesh: SpaceformMesh, kind: str | None = None) -> SpaceformMesh:
    """Euclidean picture of ``mesh`` as an R3 mesh without normals.

    Vertices sent to infinity carry NaN; the finite mask is stored in ``meta``.
    """
    kind = kind or default_projection(mesh.ambient)
    pts, ok = project_points(mesh.positions, mesh.ambient, kind)
    meta = dict(mesh.meta, projection=kind, source_ambient=mesh.ambient, finite=ok.tolist())
    return SpaceformMesh(mesh.domain, "R3", pts, meta=meta)
