"""Discrete BrLW surfaces in H^3 and their BiLW Gauss maps in S^{2,1}.

An SL2C frame ``E`` is integrated over the lattice from the transition matrices
``E_i^{-1} E_j = [[1, dg], [lam alpha / dg, 1]] / sqrt(1 - lam alpha)``; dressing
with ``L_i`` then gives the surface ``f = sgn(T) (E L)(E L)^*`` and its unit normal
``n = sgn(T) (E L) diag(1, -1) (E L)^*`` in the Hermitian model of R^{3,1}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import from_matrix, minkowski31_inner
from .lattice import DiscreteHolomorphicFunction
from .mesh import EdgeCurvatureField, SpaceformMesh

FRAME_CLOSURE_TOL = 1e-9
GENERIC_TOL = 1e-12
# Frames and dressed products are accumulated in extended precision and rounded
# once at the end; near-flat faces make the curvatures of the Gauss map a ratio of
# two tiny bivectors, so vertex errors must stay at the rounding level.
WORK_DTYPE = np.clongdouble

PRESETS = {
    "flat-H3": 0.0,
    "cmc1-H3": 1.0,
    "cmc1-S21": -1.0,
    "hmc1-S21": 1.0,
}


class FrameClosureError(ValueError):
    pass


@dataclass(frozen=True)
class WeingartenParams:
    """``t`` selects the member of the linear Weingarten family, ``lam`` the spectral offset.

    By default ``1 - lam alpha > 0`` is required so the transition matrices stay
    real-scaled; ``allow_complex`` accepts any ``1 - lam alpha != 0`` using the
    principal square root.
    """

    t: float
    lam: float
    allow_complex: bool = False

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("lambda must be nonzero")

    def check(self, fn: DiscreteHolomorphicFunction) -> None:
        alphas = np.concatenate([fn.alpha_h, fn.alpha_v])
        one_minus = 1 - self.lam * alphas
        if self.allow_complex:
            if np.any(np.abs(one_minus) <= GENERIC_TOL):
                raise ValueError("1 - lambda*alpha vanishes on some edge")
        elif np.any(one_minus <= 0):
            raise ValueError("1 - lambda*alpha must be positive on every edge (pass allow_complex to relax)")
        T = 1 + self.t * np.abs(fn.g) ** 2
        bad = np.argwhere(np.abs(T) <= GENERIC_TOL)
        if len(bad):
            raise ValueError(f"1 + t|g|^2 vanishes at vertex {fn.domain.label(*bad[0])}")


def _fro(M) -> np.ndarray:
    return np.sqrt(np.sum(np.abs(M) ** 2, axis=(-2, -1))).astype(float)


def transition(dg, lam_alpha, allow_complex: bool = False, dtype=complex) -> np.ndarray:
    """Stack of transition matrices ``E_i^{-1} E_s`` for edges with given ``dg`` and ``lam*alpha``."""
    dg = np.asarray(dg).astype(dtype)
    la = np.broadcast_to(np.asarray(lam_alpha).astype(np.real(np.zeros((), dtype)).dtype), dg.shape)
    root = np.sqrt((1 - la).astype(dtype)) if allow_complex else np.sqrt(1 - la)
    out = np.empty(dg.shape + (2, 2), dtype=dtype)
    out[..., 0, 0] = 1
    out[..., 0, 1] = dg
    out[..., 1, 0] = la / dg
    out[..., 1, 1] = 1
    return out / root[..., None, None]


@dataclass(frozen=True, eq=False)
class FrameField:
    E: np.ndarray  # (Nm, Nn, 2, 2)
    Th: np.ndarray  # horizontal transitions (Nm-1, Nn, 2, 2)
    Tv: np.ndarray  # vertical transitions (Nm, Nn-1, 2, 2)
    closure: np.ndarray  # per-face residual

    def det_defect(self) -> float:
        d = self.E[..., 0, 0] * self.E[..., 1, 1] - self.E[..., 0, 1] * self.E[..., 1, 0]
        return float(np.abs(d - 1).max())

    def edge_defect(self) -> float:
        """Largest relative mismatch between ``E_i^{-1} E_s`` and the prescribed transition."""
        worst = 0.0
        for Ei, Es, T in ((self.E[:-1], self.E[1:], self.Th), (self.E[:, :-1], self.E[:, 1:], self.Tv)):
            diff = _fro(Es - Ei @ T)
            scale = _fro(Ei) * _fro(T)
            worst = max(worst, float(np.max(diff / scale)))
        return worst


def integrate_frame(fn: DiscreteHolomorphicFunction, params: WeingartenParams, E0=None,
                    tol: float = FRAME_CLOSURE_TOL) -> FrameField:
    """Integrate the SL2C frame from ``E0`` (identity by default) at the lower-left vertex.

    The walk goes along the bottom row, then up each column.  The closure residual
    ``|T_ij T_jk - T_il T_lk|``, relative to the sizes of the two products, is
    evaluated on every face from the transitions themselves; FrameClosureError is
    raised if it exceeds ``tol``.
    """
    params.check(fn)
    lam = params.lam
    Th = transition(fn.dg_h, lam * fn.alpha_h_edges, params.allow_complex, WORK_DTYPE)
    Tv = transition(fn.dg_v, lam * fn.alpha_v_edges, params.allow_complex, WORK_DTYPE)
    loop = Th[:, :-1] @ Tv[1:, :] - Tv[:-1, :] @ Th[:, 1:]
    size = _fro(Th[:, :-1]) * _fro(Tv[1:, :]) + _fro(Tv[:-1, :]) * _fro(Th[:, 1:])
    closure = _fro(loop) / size
    if not np.all(closure <= tol):
        worst = np.unravel_index(np.nanargmax(closure), closure.shape)
        raise FrameClosureError(f"frame does not close at face {fn.domain.label(*worst)} "
                                f"(residual {closure[worst]:.3e}); data is not discrete holomorphic")
    nm, nn = fn.domain.shape
    E = np.empty((nm, nn, 2, 2), dtype=WORK_DTYPE)
    E[0, 0] = np.eye(2) if E0 is None else np.asarray(E0, dtype=complex)
    for a in range(1, nm):
        E[a, 0] = E[a - 1, 0] @ Th[a - 1, 0]
    for b in range(1, nn):
        E[:, b] = E[:, b - 1] @ Tv[:, b - 1]
    return FrameField(E, Th, Tv, closure)


def dressing(g, t: float, dtype=complex) -> np.ndarray:
    """``L = [[0, sqrt(T)], [-1/sqrt(T), -t conj(g)/sqrt(T)]]`` with ``T = 1 + t|g|^2``."""
    g = np.asarray(g).astype(dtype)
    s = np.sqrt((1 + t * np.abs(g) ** 2).astype(dtype))
    L = np.empty(g.shape + (2, 2), dtype=dtype)
    L[..., 0, 0] = 0
    L[..., 0, 1] = s
    L[..., 1, 0] = -1 / s
    L[..., 1, 1] = -t * np.conj(g) / s
    return L


def build_pair(fn: DiscreteHolomorphicFunction, params: WeingartenParams, frame: FrameField | None = None):
    """Return ``(f_mesh, n_mesh)``: the BrLW surface in H3 and its BiLW normal in S21.

    Each mesh carries the other as its normal field.
    """
    params.check(fn)
    if frame is None:
        frame = integrate_frame(fn, params)
    t = params.t
    T = 1 + t * np.abs(fn.g) ** 2
    EL = frame.E @ dressing(fn.g, t, WORK_DTYPE)
    ELh = np.conj(np.swapaxes(EL, -1, -2))
    sgn = np.sign(T)[..., None]
    f = sgn * from_matrix(EL @ ELh, tol=np.inf).astype(float)
    n = sgn * from_matrix((EL * np.array([1.0, -1.0])) @ ELh, tol=np.inf).astype(float)
    meta = {"kind": "weingarten", "t": float(t), "lambda": float(params.lam),
            "frame_closure": float(frame.closure.max(initial=0.0))}
    f_mesh = SpaceformMesh(fn.domain, "H3", f, n, meta=dict(meta, surface="f"))
    n_mesh = SpaceformMesh(fn.domain, "S21", n, f, meta=dict(meta, surface="n"))
    return f_mesh, n_mesh


def normalization_defects(f_mesh: SpaceformMesh) -> dict:
    """Worst deviations of ``<f,f> = -1``, ``<n,n> = 1`` and ``<f,n> = 0`` over vertices."""
    f, n = f_mesh.positions, f_mesh.normals
    return {
        "ff": float(np.abs(minkowski31_inner(f, f) + 1).max()),
        "nn": float(np.abs(minkowski31_inner(n, n) - 1).max()),
        "fn": float(np.abs(minkowski31_inner(f, n)).max()),
    }


def upper_sheet(fn: DiscreteHolomorphicFunction, t: float) -> np.ndarray:
    """Vertices whose surface point lies on the upper sheet: ``1 + t|g|^2 > 0``."""
    return 1 + t * np.abs(fn.g) ** 2 > 0


def kappa_weingarten(g_i, g_s, lam_alpha, t: float):
    """Closed-form edge curvature of the H3 surface; NaN where the denominator vanishes."""
    d2 = np.abs(np.asarray(g_s) - np.asarray(g_i)) ** 2
    w = (1 + t * np.abs(g_i) ** 2) * (1 + t * np.abs(g_s) ** 2) * lam_alpha
    num = -d2 * (1 + t) + w
    den = -d2 * (t - 1) + w
    ok = np.abs(den) > GENERIC_TOL * (np.abs(d2 * (t - 1)) + np.abs(w))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ok, num / np.where(ok, den, 1.0), np.nan)


def edge_kappa_weingarten(fn: DiscreteHolomorphicFunction, params: WeingartenParams) -> EdgeCurvatureField:
    """Edge principal curvatures of the H3 surface; those of the S21 normal are the reciprocals."""
    g, lam, t = fn.g, params.lam, params.t
    return EdgeCurvatureField(
        kappa_weingarten(g[:-1], g[1:], lam * fn.alpha_h_edges, t),
        kappa_weingarten(g[:, :-1], g[:, 1:], lam * fn.alpha_v_edges, t),
    )


def parallel_hyperbolic(f_mesh: SpaceformMesh, n_mesh: SpaceformMesh, theta: float):
    """Parallel pair ``(cosh th f + sinh th n, cosh th n + sinh th f)``.

    The H3 member satisfies the BrLW relation with parameter ``exp(-2 theta) t``.
    """
    c, s = np.cosh(theta), np.sinh(theta)
    f, n = f_mesh.positions, n_mesh.positions
    ft = c * f + s * n
    nt = c * n + s * f
    # hyperbolic offsets compose additively
    total = float(f_mesh.meta.get("theta", 0.0)) + float(theta)
    meta = dict(f_mesh.meta, theta=total)
    if "t" in meta:
        meta["T"] = float(np.exp(-2 * total) * meta["t"])
    return (SpaceformMesh(f_mesh.domain, "H3", ft, nt, meta=dict(meta, surface="f")),
            SpaceformMesh(n_mesh.domain, "S21", nt, ft, meta=dict(meta, surface="n")))


def parallel_kappa_hyperbolic(kappa: EdgeCurvatureField, theta: float) -> EdgeCurvatureField:
    """Edge curvatures of ``cosh th f + sinh th n``: ``(c kappa - s) / (c - s kappa)``.

    Edges where the denominator vanishes become infinite.
    """
    c, s = np.cosh(theta), np.sinh(theta)

    def shift(k):
        den = c - s * k
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (c * k - s) / den
        return np.where(den == 0, np.inf, out)

    return kappa.map(shift)
