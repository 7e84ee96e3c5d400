"""Static matplotlib figures of projected meshes and curvature fields, written to files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from mpl_toolkits.mplot3d.art3d import Poly3DCollection  # noqa: E402

from .lattice import LatticeDomain  # noqa: E402


def _quads(points, domain: LatticeDomain):
    nm, nn = domain.shape
    polys, labels = [], []
    for a in range(nm - 1):
        for b in range(nn - 1):
            quad = points[[a, a + 1, a + 1, a], [b, b, b + 1, b + 1]]
            if np.all(np.isfinite(quad)):
                polys.append(quad)
                labels.append(domain.label(a, b))
    return polys, labels


def plot_mesh(points, domain: LatticeDomain, path, fps_vertices=None, singular_faces=None,
              title: str | None = None, unit_sphere: bool = False):
    """Render a projected quad mesh; FPS vertices red, singular faces shaded dark.

    ``points`` has shape ``(Nm, Nn, 3)``.  ``unit_sphere`` draws the boundary of
    the Poincare ball for reference.
    """
    points = np.asarray(points, dtype=float)
    fps_vertices = fps_vertices or {}
    singular_faces = singular_faces or {}
    fig = plt.figure(figsize=(7, 6))
    ax = fig.add_subplot(projection="3d")
    polys, labels = _quads(points, domain)
    colors = ["#555555" if lab in singular_faces else "#9ecae1" for lab in labels]
    ax.add_collection3d(Poly3DCollection(polys, facecolors=colors, edgecolors="k", linewidths=0.3, alpha=0.85))
    if fps_vertices:
        idx = np.array([domain.index(m, n) for m, n in fps_vertices])
        sel = points[idx[:, 0], idx[:, 1]]
        sel = sel[np.all(np.isfinite(sel), axis=1)]
        ax.scatter(sel[:, 0], sel[:, 1], sel[:, 2], color="red", s=18, depthshade=False, label="FPS vertex")
        ax.legend(loc="upper left")
    if unit_sphere:
        u, v = np.mgrid[0:2 * np.pi:30j, 0:np.pi:15j]
        ax.plot_wireframe(np.cos(u) * np.sin(v), np.sin(u) * np.sin(v), np.cos(v), color="0.7", linewidth=0.3)
    finite = points[np.all(np.isfinite(points), axis=-1)]
    if finite.size:
        lo, hi = finite.min(axis=0), finite.max(axis=0)
        mid, half = (lo + hi) / 2, max(float((hi - lo).max()) / 2, 1e-9)
        ax.set_xlim(mid[0] - half, mid[0] + half)
        ax.set_ylim(mid[1] - half, mid[1] + half)
        ax.set_zlim(mid[2] - half, mid[2] + half)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_face_field(values, domain: LatticeDomain, path, label: str = "H", singular_faces=None):
    """Heat map of a per-face scalar over the lattice, singular faces outlined."""
    values = np.asarray(values, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 5))
    extent = (domain.m_min, domain.m_max, domain.n_min, domain.n_max)
    im = ax.imshow(values.T, origin="lower", extent=extent, cmap="viridis", aspect="equal")
    fig.colorbar(im, ax=ax, label=label)
    for m, n in (singular_faces or {}):
        ax.add_patch(plt.Rectangle((m, n), 1, 1, fill=False, edgecolor="red", linewidth=1.0))
    ax.set_xlabel("m")
    ax.set_ylabel("n")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
