"""Double random currents through their (odd, even-positive) edge shadows.

An integer current is never stored: every event used here depends only on
the pair ``(omega1, omega2)`` of edges with odd and with even nonzero value.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import CapacityError, InfeasibleError
from .even import cycle_basis, even_masks, even_polynomial, particular_solution
from .graph import PlanarGraph, check_contiguous, components, ids_to_mask, mask_to_ids

MAX_GAMMA_EDGES = 24


@dataclass(frozen=True)
class OmegaPair:
    omega1: frozenset[int]
    omega2: frozenset[int]

    def __post_init__(self):
        if self.omega1 & self.omega2:
            raise ValueError("omega1 and omega2 must be disjoint")

    @classmethod
    def from_masks(cls, m1: int, m2: int) -> "OmegaPair":
        return cls(mask_to_ids(m1), mask_to_ids(m2))

    @classmethod
    def of(cls, omega1: Iterable[int] = (), omega2: Iterable[int] = ()) -> "OmegaPair":
        return cls(frozenset(omega1), frozenset(omega2))

    @property
    def edges(self) -> frozenset[int]:
        return self.omega1 | self.omega2

    @property
    def masks(self) -> tuple[int, int]:
        return ids_to_mask(self.omega1), ids_to_mask(self.omega2)

    def sources(self, g: PlanarGraph) -> frozenset[int]:
        deg: dict[int, int] = {}
        for eid in self.omega1:
            e = g.edges[eid]
            deg[e.u] = deg.get(e.u, 0) ^ 1
            deg[e.v] = deg.get(e.v, 0) ^ 1
        return frozenset(v for v, d in deg.items() if d)


# -- configuration space --------------------------------------------------------


def _subsets(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def gamma_masks(g: PlanarGraph, sources: Iterable[int]) -> Iterator[tuple[int, int]]:
    if g.edge_count > MAX_GAMMA_EDGES:
        raise CapacityError(
            f"|E| = {g.edge_count} exceeds the configuration-space cap {MAX_GAMMA_EDGES}"
        )
    full = (1 << g.edge_count) - 1
    for m1 in even_masks(g, sources):
        for m2 in _subsets(full & ~m1):
            yield m1, m2


def gamma_space(g: PlanarGraph, sources: Iterable[int]) -> Iterator[OmegaPair]:
    """Every ``(omega1, omega2)`` with ``omega1`` in ``E_A`` and ``omega2``
    disjoint from it, each once."""
    for m1, m2 in gamma_masks(g, sources):
        yield OmegaPair.from_masks(m1, m2)


# -- sourceless subgraph counts ---------------------------------------------------


def _rank_data(g: PlanarGraph, mask: int) -> tuple[int, int, int]:
    ids = mask_to_ids(mask)
    comp = components(g, ids)
    return len(ids), len(comp), len(set(comp.values()))


def count_sourceless(g: PlanarGraph, edges: Iterable[int] | int, brute: bool = False) -> int:
    """Number of even (sourceless) subsets of ``edges``.

    The default uses ``2 ** (|w| - |V(w)| + k(w))``; ``brute=True`` checks
    every subset instead.
    """
    mask = edges if isinstance(edges, int) else ids_to_mask(edges)
    if not brute:
        ne, nv, nc = _rank_data(g, mask)
        return 1 << (ne - nv + nc)
    ids = sorted(mask_to_ids(mask))
    count = 0
    for r in range(len(ids) + 1):
        for sub in combinations(ids, r):
            deg: dict[int, int] = {}
            for eid in sub:
                e = g.edges[eid]
                deg[e.u] = deg.get(e.u, 0) ^ 1
                deg[e.v] = deg.get(e.v, 0) ^ 1
            if not any(deg.values()):
                count += 1
    return count


# -- weights --------------------------------------------------------------------


def _dcurr_weight_masks(g: PlanarGraph, m1: int, m2: int) -> Fraction:
    w = Fraction(count_sourceless(g, m1 | m2))
    for e in g.edges:
        bit = 1 << e.id
        if m1 & bit:
            w *= e.x
        elif m2 & bit:
            w *= e.x * e.x
        else:
            w *= 1 - e.x * e.x
    return w


def double_current_weight(g: PlanarGraph, omega: OmegaPair) -> Fraction:
    """Unnormalized induced double-current weight of ``omega``."""
    return _dcurr_weight_masks(g, *omega.masks)


def double_current_norm(g: PlanarGraph, sources: Iterable[int]) -> Fraction:
    """Normalization ``S_A * S_empty`` of the induced double-current measure."""
    return even_polynomial(g, sources) * even_polynomial(g, ())


def double_current_distribution(g: PlanarGraph, sources: Iterable[int]) -> dict[OmegaPair, Fraction]:
    sources = frozenset(sources)
    z = double_current_norm(g, sources)
    if z == 0:
        raise InfeasibleError(f"no current has source set {sorted(sources)}")
    return {
        OmegaPair.from_masks(m1, m2): _dcurr_weight_masks(g, m1, m2) / z
        for m1, m2 in gamma_masks(g, sources)
    }


# -- events -----------------------------------------------------------------------


class Partition:
    """Connected components of ``omega1 | omega2``; untouched vertices are
    singletons."""

    def __init__(self, g: PlanarGraph, edge_mask: int):
        self._root = components(g, mask_to_ids(edge_mask))

    def root(self, v: int) -> int:
        return self._root.get(v, ~v)

    def connected(self, u: int, v: int) -> bool:
        return u == v or self.root(u) == self.root(v)


class Event:
    """Predicate on the component partition of ``omega1 | omega2``.

    Combine with ``&``, ``|`` and ``~``.
    """

    def __init__(self, test: Callable[[Partition], bool], name: str = "event"):
        self.test = test
        self.name = name

    def __call__(self, part: Partition) -> bool:
        return self.test(part)

    def holds(self, g: PlanarGraph, omega: OmegaPair) -> bool:
        return self.test(Partition(g, ids_to_mask(omega.edges)))

    def __and__(self, other: "Event") -> "Event":
        return Event(lambda p: self(p) and other(p), f"({self.name} & {other.name})")

    def __or__(self, other: "Event") -> "Event":
        return Event(lambda p: self(p) or other(p), f"({self.name} | {other.name})")

    def __invert__(self) -> "Event":
        return Event(lambda p: not self(p), f"~{self.name}")


TRUE = Event(lambda p: True, "true")


def connected(u: int, v: int) -> Event:
    return Event(lambda p: p.connected(u, v), f"{u}<->{v}")


def parallel_event(a: Sequence[int], b: Sequence[int]) -> Event:
    """``a_i`` connected to ``b_i`` for all i, and to no ``b_j`` with j != i."""
    a, b = tuple(a), tuple(b)

    def test(p: Partition) -> bool:
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                if p.connected(ai, bj) != (i == j):
                    return False
        return True

    return Event(test, "P[" + ",".join(map(str, a)) + "|" + ",".join(map(str, b)) + "]")


def all_connected(vertices: Sequence[int]) -> Event:
    vs = tuple(vertices)
    return Event(lambda p: all(p.connected(vs[0], v) for v in vs[1:]), "X[" + ",".join(map(str, vs)) + "]")


def double_current_prob(g: PlanarGraph, sources: Iterable[int], event: Event) -> Fraction:
    """Exact probability of ``event`` under the double current with sources ``A``."""
    sources = frozenset(sources)
    z = double_current_norm(g, sources)
    if z == 0:
        raise InfeasibleError(f"no current has source set {sorted(sources)}")
    total = Fraction(0)
    for m1, m2 in gamma_masks(g, sources):
        if event(Partition(g, m1 | m2)):
            total += _dcurr_weight_masks(g, m1, m2)
    return total / z


def event_probabilities(g: PlanarGraph, sources: Iterable[int], events: Sequence[Event]) -> list[Fraction]:
    """Several event probabilities from one pass over the configuration space."""
    sources = frozenset(sources)
    z = double_current_norm(g, sources)
    if z == 0:
        raise InfeasibleError(f"no current has source set {sorted(sources)}")
    totals = [Fraction(0)] * len(events)
    for m1, m2 in gamma_masks(g, sources):
        part = Partition(g, m1 | m2)
        hits = [i for i, ev in enumerate(events) if ev(part)]
        if hits:
            w = _dcurr_weight_masks(g, m1, m2)
            for i in hits:
                totals[i] += w
    return [t / z for t in totals]


def prob_parallel(g: PlanarGraph, a: Sequence[int], b: Sequence[int]) -> Fraction:
    """Probability of parallel disjoint connections ``a_i <-> b_i``."""
    check_contiguous(g, a, b)
    return double_current_prob(g, set(a) | set(b), parallel_event(a, b))


# -- single currents and the two-current convolution ------------------------------


def pythagorean_partner(x: Fraction) -> Fraction:
    """Rational ``y`` with ``x^2 + y^2 = 1``; ValueError if none exists."""
    t = 1 - x * x
    p, q = t.numerator, t.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp != p or rq * rq != q:
        raise ValueError(f"x = {x} has no rational partner y = sqrt(1 - x^2)")
    return Fraction(rp, rq)


def single_current_induced_weight(g: PlanarGraph, omega: OmegaPair, mode: str = "pythagorean"):
    """Unnormalized induced single-current weight of ``omega``.

    Uses ``y_e = 1 / cosh J_e = sqrt(1 - x_e^2)``; exact in ``"pythagorean"``
    mode, double precision in ``"float"`` mode.
    """
    if mode == "pythagorean":
        ys = [pythagorean_partner(e.x) for e in g.edges]
        xs = list(g.weights)
        w = Fraction(1)
    elif mode == "float":
        xs = [float(e.x) for e in g.edges]
        ys = [math.sqrt(1.0 - x * x) for x in xs]
        w = 1.0
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for e in g.edges:
        if e.id in omega.omega1:
            w *= xs[e.id]
        elif e.id in omega.omega2:
            w *= 1 - ys[e.id]
        else:
            w *= ys[e.id]
    return w


# parity classes of a current value on one edge
_ZERO, _ODD, _EVEN = 0, 1, 2


def _add_classes(a: int, b: int) -> int:
    if a == _ZERO:
        return b
    if b == _ZERO:
        return a
    if a == _ODD and b == _ODD:
        return _EVEN
    if a == _EVEN and b == _EVEN:
        return _EVEN
    return _ODD


def _single_distribution(g: PlanarGraph, sources) -> dict[tuple[int, int], Fraction]:
    ws = {}
    for m1, m2 in gamma_masks(g, sources):
        ws[m1, m2] = single_current_induced_weight(g, OmegaPair.from_masks(m1, m2))
    z = sum(ws.values(), Fraction(0))
    return {k: v / z for k, v in ws.items()}


def convolve_two_currents(g: PlanarGraph, sources: Iterable[int]) -> dict[OmegaPair, Fraction]:
    """Law of the shadow of ``n1 + n2`` for independent single currents with
    sources ``A`` and no sources, by direct convolution (exact, needs
    Pythagorean weights)."""
    sources = frozenset(sources)
    if particular_solution(g, sources) is None:
        raise InfeasibleError(f"no current has source set {sorted(sources)}")
    p1 = _single_distribution(g, sources)
    p2 = _single_distribution(g, ())
    m = g.edge_count
    out: dict[tuple[int, int], Fraction] = {}
    for (a1, a2), pa in p1.items():
        for (b1, b2), pb in p2.items():
            c1 = c2 = 0
            for i in range(m):
                bit = 1 << i
                ca = _ODD if a1 & bit else (_EVEN if a2 & bit else _ZERO)
                cb = _ODD if b1 & bit else (_EVEN if b2 & bit else _ZERO)
                c = _add_classes(ca, cb)
                if c == _ODD:
                    c1 |= bit
                elif c == _EVEN:
                    c2 |= bit
            key = (c1, c2)
            out[key] = out.get(key, Fraction(0)) + pa * pb
    return {OmegaPair.from_masks(*k): v for k, v in out.items()}


# -- sampling -------------------------------------------------------------------------


def sample_double_current(
    g: PlanarGraph,
    sources: Iterable[int],
    count: int,
    seed: int,
    mode: str = "exact",
) -> list[OmegaPair]:
    """Draw ``count`` configurations from the induced double-current law.

    ``"exact"`` samples i.i.d. from the enumerated categorical law;
    ``"mcmc"`` runs a Metropolis chain (see :func:`mcmc_chain`).
    """
    sources = frozenset(sources)
    if double_current_norm(g, sources) == 0:
        raise InfeasibleError(f"no current has source set {sorted(sources)}")
    rng = np.random.default_rng(seed)
    if mode == "exact":
        states = list(gamma_masks(g, sources))
        weights = np.array([float(_dcurr_weight_masks(g, *s)) for s in states])
        idx = rng.choice(len(states), size=count, p=weights / weights.sum())
        return [OmegaPair.from_masks(*states[i]) for i in idx]
    if mode == "mcmc":
        m = g.edge_count
        chain = mcmc_chain(g, sources, rng)
        for _ in range(10 * m * m):
            next(chain)
        out = []
        for _ in range(count):
            for _ in range(max(m * m, 1) - 1):
                next(chain)
            out.append(OmegaPair.from_masks(*next(chain)))
        return out
    raise ValueError(f"unknown mode {mode!r}")


def mcmc_chain(g: PlanarGraph, sources, rng) -> Iterator[tuple[int, int]]:
    """Metropolis-Hastings chain on the configuration space, one proposal
    per step.

    Moves: toggle one edge outside ``omega1`` in or out of ``omega2``; or
    XOR ``omega1`` with a fundamental cycle, sending each edge that leaves
    ``omega1`` to ``omega2`` or to the empty set with probability 1/2.
    """
    m1 = particular_solution(g, sources)
    m2 = 0
    basis = cycle_basis(g)
    m = g.edge_count
    weight = _dcurr_weight_masks(g, m1, m2)
    while True:
        if basis and rng.random() < 0.5:
            c = basis[rng.integers(len(basis))]
            new1 = m1 ^ c
            leaving = m1 & c
            entering = c & ~m1
            new2 = m2 & ~new1
            for i in range(m):
                bit = 1 << i
                if leaving & bit and rng.random() < 0.5:
                    new2 |= bit
            # reverse proposal randomizes the edges entering now
            correction = Fraction(2) ** (bin(leaving).count("1") - bin(entering).count("1"))
        elif m:
            bit = 1 << int(rng.integers(m))
            if m1 & bit:
                yield m1, m2
                continue
            new1, new2 = m1, m2 ^ bit
            correction = Fraction(1)
        else:
            yield m1, m2
            continue
        new_weight = _dcurr_weight_masks(g, new1, new2)
        ratio = new_weight / weight * correction
        if ratio >= 1 or rng.random() < float(ratio):
            m1, m2, weight = new1, new2, new_weight
        yield m1, m2


def write_samples_csv(path_or_file, g: PlanarGraph, samples: Sequence[OmegaPair], events: Sequence[Event]):
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sample_index", "omega1", "omega2"] + [ev.name for ev in events])
        for i, s in enumerate(samples):
            part = Partition(g, ids_to_mask(s.edges))
            w.writerow(
                [i, "+".join(map(str, sorted(s.omega1))), "+".join(map(str, sorted(s.omega2)))]
                + [int(ev(part)) for ev in events]
            )
    finally:
        if own:
            fh.close()
