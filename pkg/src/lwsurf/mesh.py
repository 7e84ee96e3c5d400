"""Quad meshes in a declared ambient space and per-edge scalar fields."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import inner, metric_for
from .lattice import LatticeDomain, face_corners

AMBIENTS = ("R3", "R21", "H3", "S21")
AMBIENT_DIM = {"R3": 3, "R21": 3, "H3": 4, "S21": 4}


@dataclass(frozen=True, eq=False)
class SpaceformMesh:
    """Vertex positions (and optionally unit normals) over a lattice domain.

    ``positions`` has shape ``(Nm, Nn, d)``.  For the Weingarten pair the
    "normal" of the H3 surface is its S21 partner and vice versa.
    ``normal_mask`` marks vertices where the normal is defined.
    """

    domain: LatticeDomain
    ambient: str
    positions: np.ndarray
    normals: np.ndarray | None = None
    normal_mask: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ambient not in AMBIENTS:
            raise ValueError(f"unknown ambient {self.ambient!r}")
        pos = np.asarray(self.positions, dtype=float)
        if pos.shape != self.domain.shape + (AMBIENT_DIM[self.ambient],):
            raise ValueError(f"positions shape {pos.shape} does not fit domain/ambient")
        object.__setattr__(self, "positions", pos)
        if self.normals is not None:
            nrm = np.asarray(self.normals, dtype=float)
            if nrm.shape != pos.shape:
                raise ValueError("normals must match positions")
            mask = (
                np.all(np.isfinite(nrm), axis=-1)
                if self.normal_mask is None
                else np.asarray(self.normal_mask, dtype=bool)
            )
            object.__setattr__(self, "normals", nrm)
            object.__setattr__(self, "normal_mask", mask)

    @property
    def metric(self) -> np.ndarray:
        return metric_for(self.ambient)

    @property
    def has_normals(self) -> bool:
        return self.normals is not None

    def inner(self, x, y) -> np.ndarray:
        return inner(x, y, self.metric)

    def df_h(self) -> np.ndarray:
        return self.positions[1:] - self.positions[:-1]

    def df_v(self) -> np.ndarray:
        return self.positions[:, 1:] - self.positions[:, :-1]

    def corners(self):
        return face_corners(self.positions)

    def with_positions(self, positions, normals=None, **meta) -> SpaceformMesh:
        m = dict(self.meta)
        m.update(meta)
        return replace(self, positions=positions, normals=normals,
                       normal_mask=None if normals is None else self.normal_mask, meta=m)

    def swapped(self, ambient: str) -> SpaceformMesh:
        """Exchange positions and normals (surface <-> Gauss map)."""
        if self.normals is None:
            raise ValueError("mesh has no normals to swap with")
        return SpaceformMesh(self.domain, ambient, self.normals, self.positions,
                             self.normal_mask, dict(self.meta))


@dataclass(frozen=True, eq=False)
class EdgeCurvatureField:
    """A real value per edge; NaN marks an absent (undefined) value.

    ``horizontal[a, b]`` belongs to edge ``(a, b)-(a+1, b)`` in array indices,
    ``vertical[a, b]`` to ``(a, b)-(a, b+1)``.  Infinite values mark edges whose
    curvature sphere is a point sphere.
    """

    horizontal: np.ndarray
    vertical: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "horizontal", np.asarray(self.horizontal, dtype=float))
        object.__setattr__(self, "vertical", np.asarray(self.vertical, dtype=float))

    def map(self, func) -> EdgeCurvatureField:
        return EdgeCurvatureField(func(self.horizontal), func(self.vertical))

    def reciprocal(self) -> EdgeCurvatureField:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.map(lambda k: 1.0 / k)

    def transpose(self) -> EdgeCurvatureField:
        return EdgeCurvatureField(self.vertical.T, self.horizontal.T)

    def defined(self) -> tuple[np.ndarray, np.ndarray]:
        return np.isfinite(self.horizontal), np.isfinite(self.vertical)

    def face_values(self):
        """``(k_ij, k_jk, k_kl, k_il)`` arrays over faces."""
        h, v = self.horizontal, self.vertical
        return h[:, :-1], v[1:, :], h[:, 1:], v[:-1, :]

    def max_rel_diff(self, other: EdgeCurvatureField) -> float:
        """Largest ``|a - b| / max(1, |a|)`` over edges defined in both fields."""
        worst = 0.0
        for a, b in ((self.horizontal, other.horizontal), (self.vertical, other.vertical)):
            ok = np.isfinite(a) & np.isfinite(b)
            if ok.any():
                worst = max(worst, float(np.max(np.abs(a[ok] - b[ok]) / np.maximum(1.0, np.abs(a[ok])))))
        return worst
