"""Critical square-lattice boundary correlations on rectangles and the
continuum parallel-connection probability on the half-plane.

Lattice correlations come from a column transfer matrix in floating point.
The rectangle is mapped to the upper half-plane by ``sn``, with the
elliptic modulus fixed by the aspect ratio through the theta-function nome.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapacityError, OrderingError
from .linalg import det_exact, pfaffian_exact

X_CRITICAL = math.sqrt(2.0) - 1.0
MAX_TM_WIDTH = 20
AGM_TOL = 1e-15


# -- transfer matrix ---------------------------------------------------------------------


def _spins(m: int) -> np.ndarray:
    """``(m, 2^m)`` array of +-1 spins, row ``r`` from bit ``r`` of the state."""
    s = np.arange(1 << m)
    return 1.0 - 2.0 * ((s[None, :] >> np.arange(m)[:, None]) & 1)


def _apply_horizontal(v: np.ndarray, m: int, x: float) -> np.ndarray:
    """Multiply by the tensor power of ``[[1+x, 1-x], [1-x, 1+x]]``."""
    for r in range(m):
        t = v.reshape(-1, 2, 1 << r)
        a, b = t[:, 0, :], t[:, 1, :]
        t = np.stack(((1 + x) * a + (1 - x) * b, (1 - x) * a + (1 + x) * b), axis=1)
        v = t.reshape(-1)
    return v


def tm_boundary_correlation(rows: int, cols: int, a: tuple[int, int], b: tuple[int, int], x: float) -> float:
    """``<sigma_a sigma_b>`` on the free ``rows x cols`` grid with uniform
    ``x = tanh J``; sites are ``(row, col)`` on the outer face."""
    for r, c in (a, b):
        if not (0 <= r < rows and 0 <= c < cols):
            raise ValueError(f"site {(r, c)} outside the {rows}x{cols} grid")
        if r not in (0, rows - 1) and c not in (0, cols - 1):
            raise ValueError(f"site {(r, c)} is not on the outer face")
    if rows > cols:
        rows, cols = cols, rows
        a, b = (a[1], a[0]), (b[1], b[0])
    if rows > MAX_TM_WIDTH:
        raise CapacityError(f"transfer width {rows} exceeds {MAX_TM_WIDTH}")
    m = rows
    sp = _spins(m)
    vertical = np.ones(1 << m)
    for r in range(m - 1):
        vertical *= 1 + x * sp[r] * sp[r + 1]
    insert = [np.ones(1 << m) for _ in range(cols)]
    insert[a[1]] = insert[a[1]] * sp[a[0]]
    insert[b[1]] = insert[b[1]] * sp[b[0]]

    num = vertical * insert[0]
    den = vertical.copy()
    for c in range(1, cols):
        num = _apply_horizontal(num, m, x) * vertical * insert[c]
        den = _apply_horizontal(den, m, x) * vertical
        scale = den.max()
        num /= scale
        den /= scale
    return float(num.sum() / den.sum())


# -- elliptic functions ------------------------------------------------------------------


def agm(a: float, b: float) -> float:
    while abs(a - b) > AGM_TOL * a:
        a, b = (a + b) / 2, math.sqrt(a * b)
    return (a + b) / 2


def ellip_k(k: float) -> float:
    """Complete elliptic integral of the first kind, modulus ``k``."""
    if not 0 <= k < 1:
        raise ValueError(f"elliptic modulus {k} outside [0, 1)")
    return math.pi / (2 * agm(1.0, math.sqrt(1 - k * k)))


def ellip_sncndn(u: float, k: float) -> tuple[float, float, float]:
    """Jacobi ``sn, cn, dn`` for real ``u`` by the descending AGM scheme."""
    if not 0 <= k < 1:
        raise ValueError(f"elliptic modulus {k} outside [0, 1)")
    if k == 0:
        return math.sin(u), math.cos(u), 1.0
    a, b, c = [1.0], [math.sqrt(1 - k * k)], [k]
    while abs(c[-1]) > AGM_TOL:
        a_n, b_n = a[-1], b[-1]
        a.append((a_n + b_n) / 2)
        b.append(math.sqrt(a_n * b_n))
        c.append((a_n - b_n) / 2)
    n = len(a) - 1
    phi = (1 << n) * a[n] * u
    for i in range(n, 0, -1):
        phi = (phi + math.asin(c[i] / a[i] * math.sin(phi))) / 2
    sn, cn = math.sin(phi), math.cos(phi)
    return sn, cn, math.sqrt(1 - k * k * sn * sn)


def modulus_from_ratio(ratio: float) -> float:
    """Modulus ``k`` with ``K(k') / K(k) == ratio``, via the nome."""
    q = math.exp(-math.pi * ratio)
    theta2 = 2 * q ** 0.25 * sum(q ** (n * (n + 1)) for n in range(30))
    theta3 = 1 + 2 * sum(q ** (n * n) for n in range(1, 30))
    return (theta2 / theta3) ** 2


# -- rectangles ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RectDomain:
    """The open rectangle ``(0, width) x (0, height)``."""

    width: float
    height: float
    tol: float = field(default=1e-12, compare=False)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("rectangle sides must be positive")

    def side(self, z: complex) -> str:
        x, y = z.real, z.imag
        t = self.tol
        if abs(y) <= t and -t <= x <= self.width + t:
            return "bottom"
        if abs(x - self.width) <= t and -t <= y <= self.height + t:
            return "right"
        if abs(y - self.height) <= t and -t <= x <= self.width + t:
            return "top"
        if abs(x) <= t and -t <= y <= self.height + t:
            return "left"
        raise ValueError(f"{z} is not on the rectangle boundary")

    def perimeter_position(self, z: complex) -> float:
        """Counterclockwise arc length from the corner ``0``."""
        w, h = self.width, self.height
        s = self.side(z)
        if s == "bottom":
            return z.real
        if s == "right":
            return w + z.imag
        if s == "top":
            return w + h + (w - z.real)
        return 2 * w + h + (h - z.imag)

    @property
    def modulus(self) -> float:
        return modulus_from_ratio(2 * self.height / self.width)


def rect_to_halfplane(d: RectDomain, z: complex) -> float:
    """Image on the real line of a boundary point under the conformal map
    of ``d`` onto the upper half-plane sending the bottom side to
    ``[-1, 1]`` and the corners to ``+-1, +-1/k``.

    The top midpoint goes to infinity and raises.
    """
    k = d.modulus
    kp = math.sqrt(1 - k * k)
    kk = ellip_k(k)
    scale = 2 * kk / d.width
    s = d.side(z)
    if s == "bottom":
        return ellip_sncndn((z.real - d.width / 2) * scale, k)[0]
    if s in ("right", "left"):
        dn = ellip_sncndn(z.imag * scale, kp)[2]
        return 1 / dn if s == "right" else -1 / dn
    sn = ellip_sncndn((z.real - d.width / 2) * scale, k)[0]
    if abs(sn) < 1e-300:
        raise ValueError("the top midpoint maps to infinity")
    return 1 / (k * sn)


def cross_ratio(p1: float, p2: float, p3: float, p4: float) -> float:
    return (p1 - p3) * (p2 - p4) / ((p1 - p4) * (p2 - p3))


# -- continuum probability -----------------------------------------------------------------


def _cyclic_increasing(vals: Sequence[float]) -> bool:
    descents = sum(1 for i in range(len(vals)) if vals[i] >= vals[(i + 1) % len(vals)])
    return descents <= 1


def continuum_p(a: Sequence[float], b: Sequence[float]) -> float:
    """``det M / pf K`` with entries ``1 / |u - v|`` for real points such that
    ``a_1..a_k, b_k..b_1`` is counterclockwise on the extended real line."""
    a, b = list(a), list(b)
    if len(a) != len(b) or not a:
        raise ValueError("A and B must be nonempty and of equal size")
    pts = a + b[::-1]
    if len(set(pts)) != len(pts):
        raise ValueError("coincident marked points")
    if not _cyclic_increasing(pts):
        raise OrderingError("marked points are not in a_1..a_k, b_k..b_1 order")
    m = [[1 / abs(x - y) for y in b] for x in a]
    n = len(pts)
    kmat = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            kmat[i][j] = 1 / abs(pts[i] - pts[j])
            kmat[j][i] = -kmat[i][j]
    pf = pfaffian_exact(kmat, check_square=False)
    return float(np.linalg.det(np.array(m))) / pf


def scaled_ratio(m_entries, k_entries, c) -> tuple[Fraction, Fraction]:
    """``det(cM) / pf(cK)`` and ``det M / pf K``, exactly."""
    cm = [[c * x for x in row] for row in m_entries]
    ck = [[c * x for x in row] for row in k_entries]
    return det_exact(cm) / pfaffian_exact(ck), det_exact(m_entries) / pfaffian_exact(k_entries)


# -- lattice approximation ----------------------------------------------------------------


@dataclass(frozen=True)
class LatticeApprox:
    """Interior points ``eps * (i, j)`` of the rectangle, as a grid with
    ``rows x cols`` sites; site ``(r, c)`` sits at ``eps * (c + 1, r + 1)``."""

    domain: RectDomain
    eps: float
    rows: int
    cols: int
    x: float = X_CRITICAL

    @classmethod
    def of(cls, d: RectDomain, eps: float) -> "LatticeApprox":
        nx_ = math.ceil(d.width / eps - 1e-9) - 1
        ny_ = math.ceil(d.height / eps - 1e-9) - 1
        if nx_ < 1 or ny_ < 1:
            raise ValueError(f"eps = {eps} leaves no interior lattice points")
        return cls(d, eps, ny_, nx_)

    def position(self, site: tuple[int, int]) -> tuple[float, float]:
        return (self.eps * (site[1] + 1), self.eps * (site[0] + 1))

    def outer_sites(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(self.rows) for c in range(self.cols)
                if r in (0, self.rows - 1) or c in (0, self.cols - 1)]

    def nearest(self, z: complex) -> tuple[int, int]:
        """Nearest outer-face site; ties go to the smaller coordinates."""
        def key(site):
            px, py = self.position(site)
            return (round(math.hypot(px - z.real, py - z.imag), 12), px, py)
        return min(self.outer_sites(), key=key)


def lattice_p(d: RectDomain, eps: float, a: Sequence[complex], b: Sequence[complex]) -> float:
    """``det M / pf K`` built from transfer-matrix correlations at ``x_c``."""
    lat = LatticeApprox.of(d, eps)
    sa = [lat.nearest(z) for z in a]
    sb = [lat.nearest(z) for z in b]
    pts = sa + sb[::-1]
    if len(set(pts)) != len(pts):
        raise ValueError("marked points collide after discretization")
    cache: dict = {}

    def corr(p, q):
        key = (min(p, q), max(p, q))
        if key not in cache:
            cache[key] = tm_boundary_correlation(lat.rows, lat.cols, p, q, lat.x)
        return cache[key]

    m = [[corr(p, q) for q in sb] for p in sa]
    n = len(pts)
    kmat = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            kmat[i][j] = corr(pts[i], pts[j])
            kmat[j][i] = -kmat[i][j]
    return float(np.linalg.det(np.array(m))) / pfaffian_exact(kmat, check_square=False)


def _check_rect_order(d: RectDomain, a: Sequence[complex], b: Sequence[complex]) -> None:
    pos = [d.perimeter_position(z) for z in list(a) + list(b)[::-1]]
    if not _cyclic_increasing(pos) or len(set(pos)) != len(pos):
        raise OrderingError("marked points are not in a_1..a_k, b_k..b_1 counterclockwise order")


@dataclass(frozen=True)
class ConvergenceRow:
    eps: float
    lattice_p: float
    continuum_p: float

    @property
    def gap(self) -> float:
        return abs(self.lattice_p - self.continuum_p)


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple[ConvergenceRow, ...]

    @property
    def gaps(self) -> list[float]:
        return [r.gap for r in self.rows]

    @property
    def non_increasing(self) -> bool:
        g = self.gaps
        return all(g[i + 1] <= g[i] for i in range(len(g) - 1))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eps", "lattice_p", "continuum_p", "gap"])
        for r in self.rows:
            w.writerow([repr(r.eps), repr(r.lattice_p), repr(r.continuum_p), repr(r.gap)])
        return buf.getvalue()


def convergence_study(d: RectDomain, a: Sequence[complex], b: Sequence[complex], eps_list: Sequence[float]) -> ConvergenceTable:
    """One row per lattice spacing; :attr:`ConvergenceTable.non_increasing`
    reports whether the gap shrinks along the ladder."""
    _check_rect_order(d, a, b)
    cont = continuum_p([rect_to_halfplane(d, z) for z in a], [rect_to_halfplane(d, z) for z in b])
    rows = []
    for eps in eps_list:
        rows.append(ConvergenceRow(eps, lattice_p(d, eps, a, b), cont))
    return ConvergenceTable(tuple(rows))


UNIT_SQUARE = RectDomain(1.0, 1.0)
SQUARE_K2_A = (complex(0.25, 0), complex(0.75, 0))
SQUARE_K2_B = (complex(0.25, 1), complex(0.75, 1))
EPS_LADDER = (1 / 8, 1 / 12, 1 / 16, 1 / 20)
