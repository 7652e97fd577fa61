"""Exact boundary two-point functions from the high-temperature expansion.

``even_polynomial(g, A)`` is the sum over edge sets whose odd-degree vertex
set is exactly ``A`` of the product of ``x_e``. The sets form a coset of the
cycle space, so they are enumerated as one fixed solution XOR every subset
of a fundamental-cycle basis (Gray-code order, one XOR per step).
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import CapacityError
from .graph import PlanarGraph, mask_to_ids

MAX_CYCLE_RANK = 28


@lru_cache(maxsize=None)
def spanning_tree(g: PlanarGraph):
    """BFS tree from vertex 0: ``(parent, parent_edge, depth)`` lists."""
    n = g.vertex_count
    parent = [-1] * n
    pedge = [-1] * n
    depth = [0] * n
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for eid in g.rotations[v]:
            w = g.edges[eid].other(v)
            if not seen[w]:
                seen[w] = True
                parent[w], pedge[w], depth[w] = v, eid, depth[v] + 1
                queue.append(w)
    return parent, pedge, depth


def tree_path_mask(g: PlanarGraph, a: int, b: int) -> int:
    parent, pedge, depth = spanning_tree(g)
    m = 0
    while a != b:
        if depth[a] >= depth[b]:
            m ^= 1 << pedge[a]
            a = parent[a]
        else:
            m ^= 1 << pedge[b]
            b = parent[b]
    return m


@lru_cache(maxsize=None)
def cycle_basis(g: PlanarGraph) -> tuple[int, ...]:
    """Fundamental cycles of the BFS tree, as edge bitmasks."""
    _, pedge, _ = spanning_tree(g)
    tree = set(pedge) - {-1}
    return tuple(
        tree_path_mask(g, e.u, e.v) | (1 << e.id) for e in g.edges if e.id not in tree
    )


def particular_solution(g: PlanarGraph, sources: Iterable[int]) -> int | None:
    """One edge set with odd-degree set ``sources``, or None if none exists."""
    srcs = sorted(set(sources))
    if len(srcs) % 2:
        return None
    m = 0
    for a, b in zip(srcs[::2], srcs[1::2]):
        m ^= tree_path_mask(g, a, b)
    return m


def even_masks(g: PlanarGraph, sources: Iterable[int]) -> Iterator[int]:
    """Bitmasks of every edge set whose odd-degree vertex set is ``sources``."""
    base = particular_solution(g, sources)
    if base is None:
        return
    basis = cycle_basis(g)
    if len(basis) > MAX_CYCLE_RANK:
        raise CapacityError(
            f"cycle rank {len(basis)} exceeds the enumeration cap {MAX_CYCLE_RANK}"
        )
    m = base
    yield m
    for i in range(1, 1 << len(basis)):
        # Gray code: flip the basis element at the lowest set bit of i
        m ^= basis[(i & -i).bit_length() - 1]
        yield m


def enumerate_even_subgraphs(g: PlanarGraph, sources: Iterable[int]) -> Iterator[frozenset[int]]:
    for m in even_masks(g, sources):
        yield mask_to_ids(m)


def mask_product(weights, mask: int):
    p = 1
    i = 0
    while mask:
        if mask & 1:
            p *= weights[i]
        mask >>= 1
        i += 1
    return p


@lru_cache(maxsize=None)
def _even_poly_cached(g: PlanarGraph, sources: frozenset[int]) -> Fraction:
    w = g.weights
    total = Fraction(0)
    for m in even_masks(g, sources):
        total += mask_product(w, m)
    return total


def even_polynomial(g: PlanarGraph, sources: Iterable[int]) -> Fraction:
    """Exact ``sum_{omega in E_A} prod_{e in omega} x_e`` (0 if infeasible)."""
    return _even_poly_cached(g, frozenset(sources))


def correlation(g: PlanarGraph, a: int, b: int) -> Fraction:
    """Exact ``<sigma_a sigma_b>`` with free boundary conditions."""
    if a == b:
        return Fraction(1)
    return even_polynomial(g, (a, b)) / even_polynomial(g, ())
