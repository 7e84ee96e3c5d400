"""Minkowski metrics, the Hermitian matrix model of R^{3,1}, and planar circles.

Points of R^{3,1} are stored as length-4 float arrays ``(x0, x1, x2, x3)`` with
``x0`` timelike.  Points of R^{2,1} are stored as ``(x1, x2, x0)`` so that the
timelike coordinate comes last, matching how those surfaces are drawn.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ALGEBRA_TOL = 1e-12
GEOMETRY_TOL = 1e-9

SIGMA = np.array([[0.0, -1.0j], [1.0j, 0.0]])

METRICS = {
    "R3": np.diag([1.0, 1.0, 1.0]),
    "R21": np.diag([1.0, 1.0, -1.0]),
    "R31": np.diag([-1.0, 1.0, 1.0, 1.0]),
    "R42": np.diag([-1.0, 1.0, 1.0, 1.0, 1.0, -1.0]),
}


def metric_for(ambient: str) -> np.ndarray:
    """Gram matrix of the vector space a mesh with this ambient tag lives in."""
    if ambient in ("H3", "S21"):
        return METRICS["R31"]
    return METRICS[ambient]


def inner(x, y, metric: np.ndarray) -> np.ndarray:
    """Bilinear form ``x^T G y`` over the trailing axis, broadcasting."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.einsum("...i,ij,...j->...", x, metric, y)


def minkowski31_inner(x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return -x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] + x[..., 2] * y[..., 2] + x[..., 3] * y[..., 3]


def minkowski21_inner(x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] - x[..., 2] * y[..., 2]


def to_matrix(x) -> np.ndarray:
    """Hermitian 2x2 matrix of a point of R^{3,1}; works on stacks ``(..., 4)``."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = x[..., 0] + x[..., 3]
    out[..., 0, 1] = x[..., 1] - 1j * x[..., 2]
    out[..., 1, 0] = x[..., 1] + 1j * x[..., 2]
    out[..., 1, 1] = x[..., 0] - x[..., 3]
    return out


def from_matrix(X, tol: float = ALGEBRA_TOL) -> np.ndarray:
    """Inverse of :func:`to_matrix`.

    Raises ValueError when ``X`` is not Hermitian (relative to its size), since
    such a matrix does not represent a point of R^{3,1}.
    """
    X = np.asarray(X)
    if not np.iscomplexobj(X):
        X = X.astype(complex)
    herm = float(np.abs(X - np.conj(np.swapaxes(X, -1, -2))).max(initial=0.0))
    scale = max(1.0, float(np.abs(X).max(initial=0.0)))
    if herm > tol * scale:
        raise ValueError(f"matrix is not Hermitian (defect {herm:.3e}); not a point of R^3,1")
    out = np.empty(X.shape[:-2] + (4,), dtype=X.real.dtype)  # keeps extended precision
    out[..., 0] = 0.5 * (X[..., 0, 0].real + X[..., 1, 1].real)
    out[..., 3] = 0.5 * (X[..., 0, 0].real - X[..., 1, 1].real)
    out[..., 1] = X[..., 1, 0].real
    out[..., 2] = X[..., 1, 0].imag
    return out


def hermitian_inner(X, Y) -> np.ndarray:
    """The metric of R^{3,1} evaluated on matrix forms: ``-1/2 tr(X s Y^T s)``."""
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    prod = X @ SIGMA @ np.swapaxes(Y, -1, -2) @ SIGMA
    return -0.5 * np.trace(prod, axis1=-2, axis2=-1).real


def det2(A) -> np.ndarray:
    A = np.asarray(A)
    return A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]


def is_sl2(A, tol: float = ALGEBRA_TOL) -> bool:
    return bool(np.all(np.abs(det2(A) - 1.0) <= tol))


def act(A, X) -> np.ndarray:
    """The Lorentz action ``X -> A X conj(A)^T`` of SL2C on Hermitian matrices."""
    A = np.asarray(A, dtype=complex)
    return A @ X @ np.conj(np.swapaxes(A, -1, -2))


@dataclass(frozen=True)
class Circle2D:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be positive")

    def distance_defect(self, z) -> np.ndarray:
        return np.abs(np.abs(np.asarray(z) - self.center) - self.radius)


def circle_through(z1: complex, z2: complex, z3: complex) -> Circle2D:
    w = (z3 - z1) / (z2 - z1)
    if z1 == z2 or abs(w.imag) <= ALGEBRA_TOL * max(1.0, abs(w)):
        raise ValueError("points are collinear or coincident; no circumcircle")
    center = (z2 - z1) * (w - abs(w) ** 2) / (2j * w.imag) + z1
    return Circle2D(complex(center), float(abs(z1 - center)))


def circumcircle(points, tol: float = GEOMETRY_TOL) -> Circle2D:
    """Circle through four concircular points.

    The circle is fitted through the first three points; the fourth must lie on
    it to within ``tol * radius``.
    """
    z = [complex(p) for p in points]
    if len(z) != 4:
        raise ValueError("circumcircle expects four points")
    circle = circle_through(z[0], z[1], z[2])
    defect = float(circle.distance_defect(z[3]))
    if defect > tol * circle.radius:
        raise ValueError(f"fourth point is off the circle by {defect:.3e}; quad is not concircular")
    return circle
