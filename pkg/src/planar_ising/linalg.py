"""Boundary correlation matrices, exact determinants and Pfaffians, pairing
expansions, minor certificates and disjoint-path criteria."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

import networkx as nx

from .errors import CapacityError, OrderingError
from .even import correlation
from .graph import PlanarGraph, build_directed_modification, check_contiguous

MAX_BIJECTION_K = 8
MAX_PAIRING_POINTS = 12
MAX_MINOR_K = 6


@dataclass(frozen=True)
class CorrelationMatrix:
    kind: str
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def submatrix(self, ri: Sequence[int], ci: Sequence[int]) -> list[list[Fraction]]:
        return [[self.entries[r][c] for c in ci] for r in ri]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.kind] + [str(c) for c in self.cols])
        for r, row in zip(self.rows, self.entries):
            w.writerow([str(r)] + [str(x) for x in row])
        return buf.getvalue()


# -- exact determinant and Pfaffian ---------------------------------------------------


def det_exact(m) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination."""
    if isinstance(m, CorrelationMatrix):
        m = m.entries
    a = [list(row) for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * Fraction(a[n - 1][n - 1])


def _check_skew(a) -> None:
    n = len(a)
    if n % 2:
        raise ValueError(f"Pfaffian of odd dimension {n}")
    for i in range(n):
        if len(a[i]) != n:
            raise ValueError("Pfaffian of a non-square matrix")
        for j in range(n):
            if a[i][j] != -a[j][i]:
                raise ValueError(f"matrix is not skew-symmetric at ({i}, {j})")


def pfaffian_exact(m, check_square: bool = True):
    """Pfaffian by expansion along the first row; asserts ``pf^2 == det``."""
    if isinstance(m, CorrelationMatrix):
        m = m.entries
    _check_skew(m)
    memo: dict = {}

    def pf(idx: tuple[int, ...]):
        if not idx:
            return 1
        if idx in memo:
            return memo[idx]
        first, rest = idx[0], idx[1:]
        total = 0
        for pos, j in enumerate(rest):
            if m[first][j] == 0:
                continue
            sub = rest[:pos] + rest[pos + 1:]
            term = m[first][j] * pf(sub)
            total = total - term if pos % 2 else total + term
        memo[idx] = total
        return total

    value = pf(tuple(range(len(m))))
    if check_square and len(m) <= 12:
        assert value * value == det_exact(m), "pf^2 != det"
    return value


# -- matrices ---------------------------------------------------------------------------


def _boundary_sorted(g: PlanarGraph, vs: Iterable[int]) -> tuple[int, ...]:
    idx = g.boundary_index
    vs = list(vs)
    for v in vs:
        if v not in idx:
            raise OrderingError(f"vertex {v} is not on the boundary")
    return tuple(sorted(vs, key=idx.__getitem__))


def sign_exponent(g: PlanarGraph, a: Iterable[int], l: int, j: int) -> int:
    """Sign exponent for row index ``l`` and column index ``j`` (both
    0-based positions in the boundary listing) for source set ``a``."""
    n = len(g.boundary)
    if not (0 <= l < n and 0 <= j < n):
        raise IndexError(f"boundary index out of range 0..{n - 1}")
    rows = {g.boundary_index[v] for v in a}
    lo, hi = min(l, j), max(l, j)
    s = sum(1 for r in rows if lo < r < hi)
    wj = g.boundary[j][0]
    in_a = g.boundary_index[wj] in rows
    if in_a and g.color[wj] == "o" and j < l:
        s += 1
    if in_a and g.color[wj] == "b" and j > l:
        s += 1
    return s


def build_N(g: PlanarGraph, a: Iterable[int], b: Iterable[int]) -> CorrelationMatrix:
    """Signed matrix with rows ``a`` and columns ``b``, both in boundary order."""
    rows = _boundary_sorted(g, a)
    cols = _boundary_sorted(g, b)
    idx = g.boundary_index
    entries = []
    for r in rows:
        row = []
        for c in cols:
            s = sign_exponent(g, rows, idx[r], idx[c])
            row.append((-1) ** s * correlation(g, r, c))
        entries.append(tuple(row))
    return CorrelationMatrix("N", rows, cols, tuple(entries))


def build_M(g: PlanarGraph, a: Sequence[int], b: Sequence[int]) -> CorrelationMatrix:
    """Unsigned matrix for ``a_1..a_k, b_k..b_1`` counterclockwise."""
    check_contiguous(g, a, b)
    entries = tuple(tuple(correlation(g, x, y) for y in b) for x in a)
    return CorrelationMatrix("M", tuple(a), tuple(b), entries)


def build_K(g: PlanarGraph, s: Iterable[int]) -> CorrelationMatrix:
    """Skew matrix over ``s`` in counterclockwise boundary order."""
    vs = _boundary_sorted(g, s)
    n = len(vs)
    entries = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c = correlation(g, vs[i], vs[j])
            entries[i][j] = c
            entries[j][i] = -c
    return CorrelationMatrix("K", vs, vs, tuple(tuple(r) for r in entries))


def contiguous_configurations(g: PlanarGraph, k: int):
    """Every ``(a, b)`` with ``a_1..a_k, b_k..b_1`` counterclockwise."""
    w = g.boundary_vertices
    for sub in combinations(w, 2 * k):
        for r in range(2 * k):
            seq = sub[r:] + sub[:r]
            yield tuple(seq[:k]), tuple(reversed(seq[k:]))


# -- pairings ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Pairing:
    """A perfect matching of points placed counterclockwise on a disk;
    ``pairs`` holds position indices into ``points``."""

    points: tuple[tuple[str, int], ...]
    pairs: tuple[tuple[int, int], ...]

    @property
    def xing(self) -> int:
        return xing(self.pairs)


def xing(pairs: Sequence[tuple[int, int]]) -> int:
    """Number of crossing chords among ``pairs`` of circle positions."""
    norm = [tuple(sorted(p)) for p in pairs]
    count = 0
    for (p, q), (r, s) in combinations(norm, 2):
        if (p < r < q) != (p < s < q):
            count += 1
    return count


def disk_placement(g: PlanarGraph, a: Iterable[int], b: Iterable[int]) -> list[tuple[str, int]]:
    """Points ``("A", v)`` and ``("B", v)`` counterclockwise; a vertex in
    both sets gets two adjacent copies ordered by its color."""
    a, b = set(a), set(b)
    out = []
    for v, color in g.boundary:
        if v in a and v in b:
            out += [("B", v), ("A", v)] if color == "o" else [("A", v), ("B", v)]
        elif v in a:
            out.append(("A", v))
        elif v in b:
            out.append(("B", v))
    return out


def expand_det_via_pairings(g: PlanarGraph, a: Iterable[int], b: Iterable[int]) -> Fraction:
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise ValueError("|A| != |B|")
    if len(a) > MAX_BIJECTION_K:
        raise CapacityError(f"bijection expansion capped at k = {MAX_BIJECTION_K}")
    pts = disk_placement(g, a, b)
    pos = {p: i for i, p in enumerate(pts)}
    total = Fraction(0)
    for image in permutations(b):
        pairs = [(pos["A", x], pos["B", y]) for x, y in zip(a, image)]
        term = Fraction(1)
        for x, y in zip(a, image):
            term *= correlation(g, x, y)
        total += -term if xing(pairs) % 2 else term
    return total


def perfect_matchings(items: Sequence):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        for m in perfect_matchings(rest[:i] + rest[i + 1:]):
            yield ((first, partner),) + m


def expand_pf_via_pairings(g: PlanarGraph, s: Iterable[int]) -> Fraction:
    vs = _boundary_sorted(g, s)
    if len(vs) % 2:
        raise ValueError("odd number of points")
    if len(vs) > MAX_PAIRING_POINTS:
        raise CapacityError(f"pairing expansion capped at {MAX_PAIRING_POINTS} points")
    total = Fraction(0)
    for m in perfect_matchings(tuple(range(len(vs)))):
        term = Fraction(1)
        for i, j in m:
            term *= correlation(g, vs[i], vs[j])
        total += -term if xing(m) % 2 else term
    return total


# -- minors and path criteria ------------------------------------------------------


@dataclass(frozen=True)
class MinorReport:
    minors: tuple[tuple[tuple[int, ...], tuple[int, ...], Fraction], ...]

    @property
    def min_minor(self) -> Fraction:
        return min(m[2] for m in self.minors)

    @property
    def witness(self):
        return min(self.minors, key=lambda m: m[2])[:2]

    @property
    def nonnegative(self) -> bool:
        return self.min_minor >= 0

    @property
    def positive(self) -> bool:
        return self.min_minor > 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rows", "cols", "minor"])
        for r, c, v in self.minors:
            w.writerow(["+".join(map(str, r)), "+".join(map(str, c)), str(v)])
        return buf.getvalue()


def all_minors_nonneg(m: CorrelationMatrix) -> MinorReport:
    """Every square minor of ``m``; rows and columns are reported as labels."""
    nr, nc = m.size
    if max(nr, nc) > MAX_MINOR_K:
        raise CapacityError(f"minor enumeration capped at k = {MAX_MINOR_K}")
    out = []
    for size in range(1, min(nr, nc) + 1):
        for ri in combinations(range(nr), size):
            for ci in combinations(range(nc), size):
                v = det_exact(m.submatrix(ri, ci))
                out.append((tuple(m.rows[i] for i in ri), tuple(m.cols[j] for j in ci), v))
    return MinorReport(tuple(out))


def disjoint_paths_exist(g: PlanarGraph, a: Iterable[int], b: Iterable[int]) -> bool:
    """Whether ``|a|`` pairwise vertex-disjoint paths join ``a`` to ``b``.

    A vertex in both sets is its own length-0 path and is removed first.
    """
    a, b = set(a), set(b)
    if len(a) != len(b):
        raise ValueError("|A'| != |B'|")
    shared = a & b
    a, b = a - shared, b - shared
    if not a:
        return True
    net = nx.DiGraph()
    for v in range(g.vertex_count):
        if v not in shared:
            net.add_edge(("in", v), ("out", v), capacity=1)
    for e in g.edges:
        if e.u in shared or e.v in shared:
            continue
        net.add_edge(("out", e.u), ("in", e.v), capacity=1)
        net.add_edge(("out", e.v), ("in", e.u), capacity=1)
    for v in a:
        net.add_edge("s", ("in", v), capacity=1)
    for v in b:
        net.add_edge(("out", v), "t", capacity=1)
    value, _ = nx.maximum_flow(net, "s", "t")
    return value == len(a)


def alternating_path_criterion(g: PlanarGraph, a: Iterable[int], b: Iterable[int]) -> bool:
    """Whether some alternating flow joins ``a`` to ``b`` (early exit)."""
    from .flows import enumerate_flows

    d = build_directed_modification(g)
    return next(enumerate_flows(d, a, b), None) is not None
