"""Rectangular lattice domains and discrete holomorphic functions.

Vertex values are kept in arrays indexed ``[m - m_min, n - n_min]``.  A face is
labelled by its lower-left vertex ``i = (m, n)``; its corners run
counterclockwise ``i, j = (m+1, n), k = (m+1, n+1), l = (m, n+1)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

VALIDATE_TOL = 1e-12
LOAD_TOL = 1e-10


class LatticeValidationError(ValueError):
    """Raised when data fails the discrete holomorphicity conditions."""

    def __init__(self, message: str, faces=()):
        super().__init__(message)
        self.faces = list(faces)


@dataclass(frozen=True)
class LatticeDomain:
    m_min: int
    m_max: int
    n_min: int
    n_max: int

    def __post_init__(self):
        if self.m_max <= self.m_min or self.n_max <= self.n_min:
            raise ValueError("lattice domain needs m_max > m_min and n_max > n_min")

    @classmethod
    def square(cls, half_width: int) -> LatticeDomain:
        return cls(-half_width, half_width, -half_width, half_width)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m_max - self.m_min + 1, self.n_max - self.n_min + 1)

    @property
    def face_shape(self) -> tuple[int, int]:
        nm, nn = self.shape
        return (nm - 1, nn - 1)

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        m = np.arange(self.m_min, self.m_max + 1)
        n = np.arange(self.n_min, self.n_max + 1)
        return np.meshgrid(m, n, indexing="ij")

    def contains(self, m: int, n: int) -> bool:
        return self.m_min <= m <= self.m_max and self.n_min <= n <= self.n_max

    def index(self, m: int, n: int) -> tuple[int, int]:
        if not self.contains(m, n):
            raise IndexError(f"vertex {(m, n)} outside the domain")
        return (m - self.m_min, n - self.n_min)

    def label(self, a: int, b: int) -> tuple[int, int]:
        """Lattice label of array index ``(a, b)``."""
        return (int(a) + self.m_min, int(b) + self.n_min)

    def transpose(self) -> LatticeDomain:
        return LatticeDomain(self.n_min, self.n_max, self.m_min, self.m_max)

    def to_dict(self) -> dict:
        return {"m": [self.m_min, self.m_max], "n": [self.n_min, self.n_max]}

    @classmethod
    def from_dict(cls, d: dict) -> LatticeDomain:
        (m0, m1), (n0, n1) = d["m"], d["n"]
        return cls(int(m0), int(m1), int(n0), int(n1))


def face_corners(values: np.ndarray):
    """Split a vertex array into the four corner arrays ``i, j, k, l`` of every face."""
    return values[:-1, :-1], values[1:, :-1], values[1:, 1:], values[:-1, 1:]


def cross_ratio(gi, gj, gk, gl):
    """``(gi - gj)(gk - gl) / ((gj - gk)(gl - gi))``, elementwise."""
    gi, gj, gk, gl = (np.asarray(x, dtype=complex) for x in (gi, gj, gk, gl))
    den = (gj - gk) * (gl - gi)
    if np.any(den == 0):
        raise ZeroDivisionError("degenerate quad: coincident adjacent values in cross ratio")
    out = (gi - gj) * (gk - gl) / den
    return out.item() if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class DiscreteHolomorphicFunction:
    """Complex lattice data ``g`` with cross-ratio factorizing functions.

    ``alpha_h[m - m_min]`` lives on horizontal edges ``(m, n)-(m+1, n)`` and
    ``alpha_v[n - n_min]`` on vertical edges ``(m, n)-(m, n+1)``.
    """

    domain: LatticeDomain
    g: np.ndarray
    alpha_h: np.ndarray
    alpha_v: np.ndarray
    source: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = np.array(self.g, dtype=complex)
        ah = np.array(self.alpha_h, dtype=float).reshape(-1)
        av = np.array(self.alpha_v, dtype=float).reshape(-1)
        nm, nn = self.domain.shape
        if g.shape != (nm, nn):
            raise ValueError(f"g has shape {g.shape}, domain needs {(nm, nn)}")
        if ah.shape != (nm - 1,) or av.shape != (nn - 1,):
            raise ValueError("alpha_h needs one value per column of horizontal edges, alpha_v one per row")
        for arr in (g, ah, av):
            arr.setflags(write=False)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "alpha_h", ah)
        object.__setattr__(self, "alpha_v", av)

    def value(self, m: int, n: int) -> complex:
        return complex(self.g[self.domain.index(m, n)])

    @property
    def dg_h(self) -> np.ndarray:
        return self.g[1:, :] - self.g[:-1, :]

    @property
    def dg_v(self) -> np.ndarray:
        return self.g[:, 1:] - self.g[:, :-1]

    @property
    def alpha_h_edges(self) -> np.ndarray:
        """alpha_h broadcast to the horizontal-edge array shape."""
        return np.broadcast_to(self.alpha_h[:, None], self.dg_h.shape)

    @property
    def alpha_v_edges(self) -> np.ndarray:
        return np.broadcast_to(self.alpha_v[None, :], self.dg_v.shape)

    def face_ratio(self) -> np.ndarray:
        return self.alpha_h[:, None] / self.alpha_v[None, :]

    def transpose(self) -> DiscreteHolomorphicFunction:
        """Swap the roles of m and n; cross ratios invert, matching swapped alphas."""
        return DiscreteHolomorphicFunction(
            self.domain.transpose(), self.g.T, self.alpha_v, self.alpha_h, dict(self.source)
        )

    def to_dict(self) -> dict:
        rows = [[[float(z.real), float(z.imag)] for z in self.g[:, b]] for b in range(self.g.shape[1])]
        out = {
            "domain": self.domain.to_dict(),
            "g": rows,
            "alpha_h": [float(a) for a in self.alpha_h],
            "alpha_v": [float(a) for a in self.alpha_v],
        }
        if self.source:
            out["source"] = self.source
        return out

    @classmethod
    def from_dict(cls, d: dict) -> DiscreteHolomorphicFunction:
        for key in ("domain", "g", "alpha_h", "alpha_v"):
            if key not in d:
                raise ValueError(f"lattice data is missing '{key}'")
        domain = LatticeDomain.from_dict(d["domain"])
        nm, nn = domain.shape
        raw = np.asarray(d["g"], dtype=float)
        if raw.shape == (nn, nm, 2):
            pairs = raw
        elif raw.shape == (nm * nn, 2):
            pairs = raw.reshape(nn, nm, 2)
        else:
            raise ValueError(f"g has shape {raw.shape}; expected ({nn}, {nm}, 2) or ({nm * nn}, 2)")
        g = (pairs[..., 0] + 1j * pairs[..., 1]).T
        return cls(domain, g, d["alpha_h"], d["alpha_v"], dict(d.get("source", {})))


@dataclass
class ValidationReport:
    residual: np.ndarray  # per face, |cr - alpha_h/alpha_v|
    ratio_negative: np.ndarray  # per face
    dg_h_nonzero: np.ndarray
    dg_v_nonzero: np.ndarray
    tol: float
    domain: LatticeDomain

    @property
    def passed(self) -> bool:
        return bool(
            np.all(self.residual <= self.tol)
            and self.ratio_negative.all()
            and self.dg_h_nonzero.all()
            and self.dg_v_nonzero.all()
        )

    @property
    def max_residual(self) -> float:
        return float(np.nanmax(self.residual, initial=0.0))

    def failing_faces(self) -> list[tuple[int, int]]:
        bad = ~(self.residual <= self.tol) | ~self.ratio_negative
        return [self.domain.label(a, b) for a, b in zip(*np.nonzero(bad))]


def validate(fn: DiscreteHolomorphicFunction, tol: float = VALIDATE_TOL) -> ValidationReport:
    """Check ``dg != 0`` on edges and ``cr = alpha_h / alpha_v < 0`` on faces.

    The residual is taken relative to ``max(1, |alpha_h / alpha_v|)``.  Never raises.
    """
    gi, gj, gk, gl = face_corners(fn.g)
    ratio = fn.face_ratio()
    with np.errstate(divide="ignore", invalid="ignore"):
        cr = (gi - gj) * (gk - gl) / ((gj - gk) * (gl - gi))
        residual = np.abs(cr - ratio) / np.maximum(1.0, np.abs(ratio))
    residual = np.where(np.isfinite(residual), residual, np.inf)
    return ValidationReport(
        residual=residual,
        ratio_negative=np.isfinite(ratio) & (ratio < 0),
        dg_h_nonzero=fn.dg_h != 0,
        dg_v_nonzero=fn.dg_v != 0,
        tol=tol,
        domain=fn.domain,
    )


def gen_linear(c: complex, domain: LatticeDomain) -> DiscreteHolomorphicFunction:
    """``g = c (m + i n)``: the discrete Enneper data."""
    c = complex(c)
    if c == 0:
        raise ValueError("gen_linear needs c != 0")
    m, n = domain.grid()
    nm, nn = domain.shape
    return DiscreteHolomorphicFunction(
        domain, c * (m + 1j * n), np.ones(nm - 1), -np.ones(nn - 1),
        {"generator": "linear", "c": [c.real, c.imag]},
    )


def gen_exp(c1: float, c2: float, domain: LatticeDomain) -> DiscreteHolomorphicFunction:
    """``g = exp(c1 m + i c2 n)``, cross ratio ``-sinh^2(c1/2) / sin^2(c2/2)``."""
    a = np.sinh(c1 / 2.0) ** 2
    b = np.sin(c2 / 2.0) ** 2
    if c1 == 0 or a == 0:
        raise ValueError("gen_exp needs c1 != 0 (dg vanishes on horizontal edges)")
    if b < 1e-28:
        raise ValueError("gen_exp needs sin(c2/2) != 0 (dg vanishes on vertical edges)")
    m, n = domain.grid()
    nm, nn = domain.shape
    return DiscreteHolomorphicFunction(
        domain, np.exp(c1 * m + 1j * c2 * n), np.full(nm - 1, a), np.full(nn - 1, -b),
        {"generator": "exp", "c1": float(c1), "c2": float(c2)},
    )


def catenoid_c1(c2: float) -> float:
    """The ``c1`` making ``gen_exp(c1, c2)`` have cross ratio identically -1."""
    return 2.0 * float(np.arcsinh(abs(np.sin(c2 / 2.0))))


def mobius(fn: DiscreteHolomorphicFunction, a, b, c, d) -> DiscreteHolomorphicFunction:
    """Apply ``g -> (a g + b) / (c g + d)``; cross ratios and alphas are unchanged."""
    if a * d - b * c == 0:
        raise ValueError("Mobius transformation must have ad - bc != 0")
    den = c * fn.g + d
    if np.any(den == 0):
        raise ValueError("Mobius transformation sends a lattice value to infinity")
    src = dict(fn.source)
    src["mobius"] = [[complex(x).real, complex(x).imag] for x in (a, b, c, d)]
    return DiscreteHolomorphicFunction(fn.domain, (a * fn.g + b) / den, fn.alpha_h, fn.alpha_v, src)


def evolve(bottom_row, left_column, alpha_h, alpha_v, m_min: int = 0, n_min: int = 0) -> DiscreteHolomorphicFunction:
    """Solve the cross-ratio system from Cauchy data on two lattice axes.

    ``bottom_row`` holds ``g(m, n_min)`` and ``left_column`` holds ``g(m_min, n)``;
    their first entries must agree.  Each remaining vertex ``k`` follows from
    ``cr(g_i, g_j, g_k, g_l) = alpha_h / alpha_v`` on the face below-left of it.
    """
    row = np.asarray(bottom_row, dtype=complex)
    col = np.asarray(left_column, dtype=complex)
    if row[0] != col[0]:
        raise ValueError("bottom row and left column must share their corner value")
    ah = np.asarray(alpha_h, dtype=float)
    av = np.asarray(alpha_v, dtype=float)
    nm, nn = len(row), len(col)
    g = np.empty((nm, nn), dtype=complex)
    g[:, 0] = row
    g[0, :] = col
    for b in range(nn - 1):
        for a in range(nm - 1):
            r = ah[a] / av[b]
            gi, gj, gl = g[a, b], g[a + 1, b], g[a, b + 1]
            den = (gi - gj) + r * (gl - gi)
            if den == 0:
                raise ValueError(f"cross-ratio evolution is singular at face {(a + m_min, b + n_min)}")
            g[a + 1, b + 1] = (gl * (gi - gj) + r * gj * (gl - gi)) / den
    domain = LatticeDomain(m_min, m_min + nm - 1, n_min, n_min + nn - 1)
    return DiscreteHolomorphicFunction(domain, g, ah, av, {"generator": "evolve"})


def save(fn: DiscreteHolomorphicFunction, path) -> None:
    Path(path).write_text(json.dumps(fn.to_dict(), indent=1), encoding="utf-8")


def load(path, tol: float = LOAD_TOL) -> DiscreteHolomorphicFunction:
    """Read lattice JSON and require it to be discrete holomorphic.

    Raises ValueError on malformed data and LatticeValidationError (listing the
    offending faces) when validation fails.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    fn = DiscreteHolomorphicFunction.from_dict(data)
    report = validate(fn, tol)
    if not report.passed:
        faces = report.failing_faces()
        edges = int((~report.dg_h_nonzero).sum() + (~report.dg_v_nonzero).sum())
        raise LatticeValidationError(
            f"{path}: not discrete holomorphic; failing faces {faces[:10]}"
            + (f" (+{len(faces) - 10} more)" if len(faces) > 10 else "")
            + (f"; {edges} edges with dg = 0" if edges else ""),
            faces,
        )
    return fn
