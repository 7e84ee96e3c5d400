"""Discrete minimal surfaces in R^3 and maximal surfaces in R^{2,1}.

Both are integrated from edge increments written in terms of a discrete
holomorphic function ``g``; the vertex normals are the lifts of ``g`` to the
unit sphere and to the hyperboloid respectively.
"""
from __future__ import annotations

import numpy as np

from .lattice import DiscreteHolomorphicFunction
from .mesh import EdgeCurvatureField, SpaceformMesh

CLOSURE_TOL = 1e-10
UNIT_CIRCLE_TOL = 1e-12


class ClosureError(ValueError):
    """Edge increments do not close around some face."""

    def __init__(self, message: str, residual: np.ndarray):
        super().__init__(message)
        self.residual = residual


def minimal_increment(g_i, g_s, alpha) -> np.ndarray:
    """Edge vector ``f_s - f_i`` of the discrete minimal surface."""
    g_i = np.asarray(g_i, dtype=complex)
    g_s = np.asarray(g_s, dtype=complex)
    dg = g_s - g_i
    comps = np.stack([(1 - g_s * g_i) / dg, 1j * (1 + g_s * g_i) / dg, (g_s + g_i) / dg], axis=-1)
    return 0.5 * np.asarray(alpha, dtype=float)[..., None] * comps.real


def maximal_increment(g_i, g_s, alpha) -> np.ndarray:
    """Edge vector ``f_s - f_i`` of the discrete maximal surface, as ``(x1, x2, x0)``."""
    g_i = np.asarray(g_i, dtype=complex)
    g_s = np.asarray(g_s, dtype=complex)
    dg = g_s - g_i
    comps = np.stack([(1 + g_s * g_i) / dg, 1j * (1 - g_s * g_i) / dg, -(g_s + g_i) / dg], axis=-1)
    return 0.5 * np.asarray(alpha, dtype=float)[..., None] * comps.real


def closure_residual(dh: np.ndarray, dv: np.ndarray) -> np.ndarray:
    """Relative failure of the increments to close around each face."""
    loop = dh[:, :-1] + dv[1:, :] - dv[:-1, :] - dh[:, 1:]
    scale = (np.linalg.norm(dh[:, :-1], axis=-1) + np.linalg.norm(dv[1:, :], axis=-1)
             + np.linalg.norm(dv[:-1, :], axis=-1) + np.linalg.norm(dh[:, 1:], axis=-1))
    return np.linalg.norm(loop, axis=-1) / np.where(scale > 0, scale, 1.0)


def integrate(dh: np.ndarray, dv: np.ndarray, f0, tol: float = CLOSURE_TOL):
    """Sum edge increments from the lower-left vertex: along the bottom row, then up each column.

    Returns ``(positions, residual)``; raises ClosureError if any face fails to close.
    """
    residual = closure_residual(dh, dv)
    if not np.all(residual <= tol):
        worst = np.unravel_index(np.nanargmax(residual), residual.shape)
        raise ClosureError(f"increments do not close (max relative residual {residual[worst]:.3e} "
                           f"at face index {tuple(int(x) for x in worst)})", residual)
    nm, nn = dv.shape[0], dh.shape[1]
    f = np.empty((nm, nn, dh.shape[-1]))
    f[0, 0] = f0
    f[1:, 0] = f0 + np.cumsum(dh[:, 0], axis=0)
    f[:, 1:] = f[:, :1] + np.cumsum(dv, axis=1)
    return f, residual


def sphere_lift(g) -> np.ndarray:
    """Inverse stereographic projection of ``g`` to the unit sphere."""
    g = np.asarray(g, dtype=complex)
    r2 = np.abs(g) ** 2
    return np.stack([2 * g.real, 2 * g.imag, r2 - 1], axis=-1) / (r2 + 1)[..., None]


def hyperboloid_lift(g):
    """Lift of ``g`` to the two-sheeted hyperboloid of R^{2,1}.

    The third coordinate is ``-(1 + |g|^2) / (1 - |g|^2)``, so ``|g| < 1`` lands on
    the lower sheet.  This orientation is the one for which ``dn = -kappa df`` holds
    on the maximal surface.  Returns ``(normals, mask)``; vertices with ``|g| = 1``
    have no normal.
    """
    g = np.asarray(g, dtype=complex)
    r2 = np.abs(g) ** 2
    den = 1 - r2
    mask = np.abs(den) > UNIT_CIRCLE_TOL
    safe = np.where(mask, den, np.nan)
    n = np.stack([2 * g.real, 2 * g.imag, -(1 + r2)], axis=-1) / safe[..., None]
    return n, mask


def _base(f0, dim):
    return np.zeros(dim) if f0 is None else np.asarray(f0, dtype=float).reshape(dim)


def build_minimal(fn: DiscreteHolomorphicFunction, f0=None, tol: float = CLOSURE_TOL) -> SpaceformMesh:
    if np.any(fn.dg_h == 0) or np.any(fn.dg_v == 0):
        raise ValueError("build_minimal needs dg != 0 on every edge")
    g = fn.g
    dh = minimal_increment(g[:-1], g[1:], fn.alpha_h_edges)
    dv = minimal_increment(g[:, :-1], g[:, 1:], fn.alpha_v_edges)
    f, residual = integrate(dh, dv, _base(f0, 3), tol)
    return SpaceformMesh(fn.domain, "R3", f, sphere_lift(g),
                         meta={"kind": "minimal", "closure_residual": float(residual.max(initial=0.0))})


def build_maximal(fn: DiscreteHolomorphicFunction, f0=None, tol: float = CLOSURE_TOL) -> SpaceformMesh:
    if np.any(fn.dg_h == 0) or np.any(fn.dg_v == 0):
        raise ValueError("build_maximal needs dg != 0 on every edge")
    g = fn.g
    dh = maximal_increment(g[:-1], g[1:], fn.alpha_h_edges)
    dv = maximal_increment(g[:, :-1], g[:, 1:], fn.alpha_v_edges)
    f, residual = integrate(dh, dv, _base(f0, 3), tol)
    n, mask = hyperboloid_lift(g)
    return SpaceformMesh(fn.domain, "R21", f, n, mask,
                         meta={"kind": "maximal", "closure_residual": float(residual.max(initial=0.0))})


def _edge_kappa(fn: DiscreteHolomorphicFunction, sign: float) -> EdgeCurvatureField:
    g = fn.g
    w = 1 + sign * np.abs(g) ** 2

    def along(wi, ws, dg, alpha):
        den = alpha * wi * ws
        with np.errstate(divide="ignore", invalid="ignore"):
            k = -4 * np.abs(dg) ** 2 / den
        return np.where(np.abs(wi * ws) > UNIT_CIRCLE_TOL, k, np.nan)

    return EdgeCurvatureField(
        along(w[:-1], w[1:], fn.dg_h, fn.alpha_h_edges),
        along(w[:, :-1], w[:, 1:], fn.dg_v, fn.alpha_v_edges),
    )


def edge_kappa_minimal(fn: DiscreteHolomorphicFunction) -> EdgeCurvatureField:
    """``-4|dg|^2 / (alpha (1+|g_i|^2)(1+|g_s|^2))`` on every edge."""
    return _edge_kappa(fn, +1.0)


def edge_kappa_maximal(fn: DiscreteHolomorphicFunction) -> EdgeCurvatureField:
    """``-4|dg|^2 / (alpha (1-|g_i|^2)(1-|g_s|^2))``; NaN on edges touching ``|g| = 1``."""
    return _edge_kappa(fn, -1.0)


def parallel_euclidean(mesh: SpaceformMesh, rho: float) -> SpaceformMesh:
    """Offset every vertex by ``rho`` along its normal; normals are kept."""
    if mesh.normals is None or not mesh.normal_mask.all():
        raise ValueError("parallel surface needs a normal at every vertex")
    # offsets along the same normals compose additively
    meta = {"parallel_of": mesh.meta.get("kind"), "rho": float(mesh.meta.get("rho", 0.0)) + float(rho)}
    return mesh.with_positions(mesh.positions + rho * mesh.normals, mesh.normals, **meta)


def parallel_kappa(kappa: EdgeCurvatureField, rho: float) -> EdgeCurvatureField:
    """``kappa / (1 - rho kappa)``; edges with ``1 - rho kappa = 0`` become infinite."""

    def shift(k):
        den = 1 - rho * k
        with np.errstate(divide="ignore", invalid="ignore"):
            out = k / den
        return np.where(den == 0, np.inf, out)

    return kappa.map(shift)
