"""Small planar graphs used by the verification suites and the tests."""

from __future__ import annotations

import math
from fractions import Fraction

from .graph import PlanarGraph, from_coordinates

MIXED = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(3, 5),
         Fraction(1, 4), Fraction(2, 3), Fraction(3, 7), Fraction(1, 5)]


def _weights(m, x):
    if x is None:
        return [MIXED[i % len(MIXED)] for i in range(m)]
    return [Fraction(x)] * m


def single_edge(x=None) -> PlanarGraph:
    return from_coordinates([(0, 0), (1, 0)], [(0, 1)], _weights(1, x))


def path3(x=None) -> PlanarGraph:
    """a - m - b with vertices 0, 1, 2."""
    return from_coordinates([(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)], _weights(2, x))


def path(n, x=None) -> PlanarGraph:
    coords = [(i, 0) for i in range(n)]
    return from_coordinates(coords, [(i, i + 1) for i in range(n - 1)], _weights(n - 1, x))


def triangle(x=None) -> PlanarGraph:
    return from_coordinates([(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 2), (2, 0)], _weights(3, x))


def cycle(n, x=None) -> PlanarGraph:
    coords = [(math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)]
    return from_coordinates(coords, [(i, (i + 1) % n) for i in range(n)], _weights(n, x))


def four_cycle(x=None) -> PlanarGraph:
    """Vertices 0, 1, 2, 3 counterclockwise."""
    return from_coordinates(
        [(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2), (2, 3), (3, 0)], _weights(4, x)
    )


def k4(x=None) -> PlanarGraph:
    """Outer triangle 0, 1, 2 with the center vertex 3."""
    coords = [(0, 0), (4, 0), (2, 4), (2, 1.5)]
    edges = [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)]
    return from_coordinates(coords, edges, _weights(6, x))


def wheel(n=5, x=None) -> PlanarGraph:
    """Hub 0 with rim 1..n."""
    coords = [(0.0, 0.0)] + [
        (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)
    ]
    edges = [(0, i + 1) for i in range(n)] + [(i + 1, (i + 1) % n + 1) for i in range(n)]
    return from_coordinates(coords, edges, _weights(2 * n, x))


def theta(x=None) -> PlanarGraph:
    """Poles 0 and 1 joined by three paths of length two through 2, 3, 4."""
    coords = [(-1, 0), (1, 0), (0, 1), (0, 0), (0, -1)]
    edges = [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]
    return from_coordinates(coords, edges, _weights(6, x))


def grid(rows, cols, x=None) -> PlanarGraph:
    """Square grid; vertex ``r * cols + c`` sits at column ``c``, row ``r``."""
    coords = [(c, r) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return from_coordinates(coords, edges, _weights(len(edges), x))


def bowtie(x=None) -> PlanarGraph:
    """Two triangles sharing the cut vertex 2: (0, 1, 2) and (2, 3, 4)."""
    coords = [(0, 0), (1, 0), (1, 1), (2, 2), (1, 2)]
    edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]
    return from_coordinates(coords, edges, _weights(6, x))


def dumbbell(x=None) -> PlanarGraph:
    """Two 4-cycles joined by the bridge 2-4."""
    coords = [(0, 0), (1, -1), (2, 0), (1, 1), (3, 0), (4, -1), (5, 0), (4, 1)]
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6), (6, 7), (7, 4)]
    return from_coordinates(coords, edges, _weights(9, x))


def standard_corpus(x=None) -> dict[str, PlanarGraph]:
    """The eight graphs every exact identity is checked on."""
    return {
        "single_edge": single_edge(x),
        "path3": path3(x),
        "triangle": triangle(x),
        "four_cycle": four_cycle(x),
        "k4": k4(x),
        "grid3x3": grid(3, 3, x),
        "theta": theta(x),
        "wheel5": wheel(5, x),
    }


def two_colorings(g: PlanarGraph) -> list[PlanarGraph]:
    """All-white boundary and an alternating white/black boundary."""
    n = len(g.boundary)
    alt = ["o" if i % 2 == 0 else "b" for i in range(n)]
    if n == 1:
        alt = ["b"]
    return [g.with_coloring(["o"] * n), g.with_coloring(alt)]
