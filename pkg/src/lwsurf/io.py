"""Mesh and report files: JSON (full precision), OBJ and PLY (annotated), CSV tables.

JSON numbers are written with Python's shortest round-trip representation, so
floats survive a save/load cycle bit for bit.  Non-finite values are encoded as
``null`` (NaN) and the strings ``"inf"``/``"-inf"``.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .lattice import DiscreteHolomorphicFunction, LatticeDomain
from .mesh import SpaceformMesh

MESH_FORMAT = "lwsurf-mesh/1"
REPORT_FORMAT = "lwsurf-report/1"


def encode_array(a) -> list:
    """Nested lists with NaN -> None and +-inf -> "inf"/"-inf"."""
    a = np.asarray(a)
    if a.dtype == bool:
        return a.tolist()

    def enc(x):
        if isinstance(x, list):
            return [enc(v) for v in x]
        if np.isnan(x):
            return None
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(x)

    return enc(a.astype(float).tolist())


def decode_array(data, dtype=float) -> np.ndarray:
    def dec(x):
        if isinstance(x, list):
            return [dec(v) for v in x]
        if x is None:
            return float("nan")
        if isinstance(x, str):
            return float(x)
        return x

    return np.asarray(dec(data), dtype=dtype)


def _clean_meta(meta: dict) -> dict:
    return json.loads(json.dumps(meta, default=lambda o: o.tolist() if hasattr(o, "tolist") else str(o)))


def mesh_to_dict(mesh: SpaceformMesh, fn: DiscreteHolomorphicFunction | None = None) -> dict:
    out = {
        "format": MESH_FORMAT,
        "ambient": mesh.ambient,
        "domain": mesh.domain.to_dict(),
        "positions": encode_array(mesh.positions),
        "meta": _clean_meta(mesh.meta),
    }
    if mesh.normals is not None:
        out["normals"] = encode_array(mesh.normals)
        out["normal_mask"] = np.asarray(mesh.normal_mask).tolist()
    if fn is not None:
        out["g"] = fn.to_dict()
    return out


def mesh_from_dict(d: dict) -> tuple[SpaceformMesh, DiscreteHolomorphicFunction | None]:
    for key in ("ambient", "domain", "positions"):
        if key not in d:
            raise ValueError(f"mesh data is missing '{key}'")
    domain = LatticeDomain.from_dict(d["domain"])
    normals = decode_array(d["normals"]) if "normals" in d else None
    mask = np.asarray(d["normal_mask"], dtype=bool) if "normal_mask" in d else None
    mesh = SpaceformMesh(domain, d["ambient"], decode_array(d["positions"]), normals, mask, dict(d.get("meta", {})))
    fn = DiscreteHolomorphicFunction.from_dict(d["g"]) if "g" in d else None
    return mesh, fn


def save_mesh(path, mesh: SpaceformMesh, fn: DiscreteHolomorphicFunction | None = None) -> None:
    Path(path).write_text(json.dumps(mesh_to_dict(mesh, fn)), encoding="utf-8")


def load_mesh(path) -> tuple[SpaceformMesh, DiscreteHolomorphicFunction | None]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return mesh_from_dict(data)


def save_json(path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=1), encoding="utf-8")


def load_report(path) -> dict:
    """Read a report written by :func:`save_json`; numeric ``fields`` come back as arrays."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    fields = data.get("fields", {})
    data["fields"] = {k: decode_array(v) for k, v in fields.items()}
    return data


# --------------------------------------------------------------------------- OBJ / PLY


def _vertex_index(domain: LatticeDomain, a: int, b: int) -> int:
    return a * domain.shape[1] + b


def _quads(domain: LatticeDomain):
    nm, nn = domain.shape
    for a in range(nm - 1):
        for b in range(nn - 1):
            yield (a, b), [_vertex_index(domain, *ab) for ab in ((a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1))]


def _flat(points: np.ndarray) -> np.ndarray:
    return np.asarray(points, dtype=float).reshape(-1, 3)


def write_obj(path, points, domain: LatticeDomain, fps_vertices=None, singular_faces=None,
              header: str | None = None) -> None:
    """Quad-mesh OBJ; annotations go in comment records.

    ``fps_vertices`` maps vertex labels to directions, ``singular_faces`` maps
    face labels to criteria.  Vertices at infinity are written at the origin and
    listed in ``# infinite-vertex`` comments; faces touching them are omitted.
    """
    pts = _flat(points)
    finite = np.all(np.isfinite(pts), axis=1)
    fps_vertices = fps_vertices or {}
    singular_faces = singular_faces or {}
    lines = []
    if header:
        lines += [f"# {h}" for h in header.splitlines()]
    lines.append(f"# lattice m {domain.m_min} {domain.m_max} n {domain.n_min} {domain.n_max}")
    for idx, (x, y, z) in enumerate(pts):
        if finite[idx]:
            lines.append(f"v {x:.12g} {y:.12g} {z:.12g}")
        else:
            lines.append("v 0 0 0")
    for idx in np.nonzero(~finite)[0]:
        a, b = divmod(int(idx), domain.shape[1])
        lines.append(f"# infinite-vertex {idx + 1} {domain.label(a, b)[0]} {domain.label(a, b)[1]}")
    for (m, n), dirs in sorted(fps_vertices.items()):
        a, b = domain.index(m, n)
        lines.append(f"# singular-vertex {_vertex_index(domain, a, b) + 1} {m} {n} {','.join(dirs)}")
    face_no = 0
    for (a, b), quad in _quads(domain):
        if not finite[quad].all():
            continue
        face_no += 1
        lab = domain.label(a, b)
        if lab in singular_faces:
            lines.append(f"# singular-face {face_no} {lab[0]} {lab[1]} {','.join(singular_faces[lab])}")
        lines.append("f " + " ".join(str(q + 1) for q in quad))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_obj(path) -> dict:
    """Parse an OBJ written by :func:`write_obj` into vertices, faces and annotations."""
    verts, faces, sv, sf = [], [], {}, {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(x.split("/")[0]) - 1 for x in parts[1:]])
        elif parts[:2] == ["#", "singular-vertex"]:
            sv[(int(parts[3]), int(parts[4]))] = parts[5].split(",") if len(parts) > 5 else []
        elif parts[:2] == ["#", "singular-face"]:
            sf[(int(parts[3]), int(parts[4]))] = parts[5].split(",") if len(parts) > 5 else []
    return {"vertices": np.array(verts), "faces": faces, "singular_vertices": sv, "singular_faces": sf}


SINGULAR_COLOR = (255, 0, 0)
REGULAR_COLOR = (200, 200, 200)


def vertex_colors(domain: LatticeDomain, fps_vertices=None) -> np.ndarray:
    colors = np.tile(np.array(REGULAR_COLOR, dtype=np.uint8), (domain.shape[0] * domain.shape[1], 1))
    for m, n in (fps_vertices or {}):
        colors[_vertex_index(domain, *domain.index(m, n))] = SINGULAR_COLOR
    return colors


def write_ply(path, points, domain: LatticeDomain, fps_vertices=None) -> None:
    """ASCII PLY with quads; FPS vertices are coloured red."""
    pts = _flat(points)
    finite = np.all(np.isfinite(pts), axis=1)
    colors = vertex_colors(domain, fps_vertices)
    quads = [q for _, q in _quads(domain) if finite[q].all()]
    lines = ["ply", "format ascii 1.0", f"element vertex {len(pts)}",
             "property float x", "property float y", "property float z",
             "property uchar red", "property uchar green", "property uchar blue",
             f"element face {len(quads)}", "property list uchar int vertex_indices", "end_header"]
    for p, c, ok in zip(pts, colors, finite):
        x, y, z = p if ok else (0.0, 0.0, 0.0)
        lines.append(f"{x:.9g} {y:.9g} {z:.9g} {c[0]} {c[1]} {c[2]}")
    lines += ["4 " + " ".join(str(q) for q in quad) for quad in quads]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_ply_colors(path) -> np.ndarray:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    n = int(next(line.split()[2] for line in lines if line.startswith("element vertex")))
    start = lines.index("end_header") + 1
    return np.array([[int(x) for x in lines[start + i].split()[3:6]] for i in range(n)], dtype=np.uint8)


# --------------------------------------------------------------------------- CSV


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def vertex_rows(points, domain: LatticeDomain, fps_vertices=None):
    pts = np.asarray(points, dtype=float)
    fps_vertices = fps_vertices or {}
    for a in range(domain.shape[0]):
        for b in range(domain.shape[1]):
            m, n = domain.label(a, b)
            x, y, z = pts[a, b]
            yield [m, n, repr(float(x)), repr(float(y)), repr(float(z)), int((m, n) in fps_vertices),
                   ";".join(fps_vertices.get((m, n), []))]


VERTEX_CSV_HEADER = ["m", "n", "x", "y", "z", "fps", "directions"]
