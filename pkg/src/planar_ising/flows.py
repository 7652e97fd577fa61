"""Alternating flows on the directed modification.

A flow is encoded by one local state per base edge naming which of its
three directed copies are present. The alternation condition at a base
vertex is checked on the counterclockwise sequence of present directed
edges, stubs included.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

from .currents import OmegaPair, count_sourceless
from .errors import CapacityError
from .graph import (SNK, SRC, DirectedModification, PlanarGraph, components,
                    ids_to_mask, stub_sequence)

DEFAULT_NODE_BUDGET = 10**9


class State(IntEnum):
    EMPTY = 0
    M = 1
    S1 = 2
    S2 = 3
    S1S2M = 4
    MS1 = 5
    MS2 = 6


LABELS = {
    State.EMPTY: frozenset(),
    State.M: frozenset({"m"}),
    State.S1: frozenset({"s1"}),
    State.S2: frozenset({"s2"}),
    State.S1S2M: frozenset({"s1", "s2", "m"}),
    State.MS1: frozenset({"m", "s1"}),
    State.MS2: frozenset({"m", "s2"}),
}
ODD_STATES = frozenset({State.M, State.S1, State.S2, State.S1S2M})
EVEN_STATES = frozenset({State.MS1, State.MS2})


def alternates(seq: Sequence[int], cyclic: bool) -> bool:
    for i in range(len(seq) - 1):
        if seq[i] == seq[i + 1]:
            return False
    if cyclic and seq and (len(seq) % 2 or seq[0] == seq[-1]):
        return False
    return True


class _Local:
    """Per-vertex pattern tables for one directed modification."""

    def __init__(self, d: DirectedModification):
        self.d = d
        g = d.base
        # pattern[(eid, w)][state] -> directions at w in ccw order
        self.pattern = {}
        for e in g.edges:
            for w in (e.u, e.v):
                order = d.bundle_order(e.id, w)
                self.pattern[e.id, w] = {
                    s: tuple(d.direction(e.id, lab, w) for lab in order if lab in LABELS[s])
                    for s in State
                }
        self.state_weight = [
            {s: _state_weight(d, e.id, s) for s in State} for e in g.edges
        ]

    def sequence(self, v, states, stubs_used) -> list:
        """Blocks around ``v``; ``None`` marks an unassigned edge."""
        out = []
        for slot in self.d.slots[v]:
            if slot[0] == "e":
                s = states[slot[1]]
                out.append(None if s is None else self.pattern[slot[1], v][s])
            elif slot[0] == SRC:
                out.append((-1,) if stubs_used[0] else ())
            else:
                out.append((1,) if stubs_used[1] else ())
        return out


def _state_weight(d: DirectedModification, eid: int, s: State) -> Fraction:
    """Product of ``2 * x`` over the directed copies present in state ``s``."""
    w = Fraction(1)
    for lab in LABELS[s]:
        w *= 2 * d.weight(eid, lab)
    return w


def _blocks_ok(blocks) -> bool:
    """Check alternation of a cyclic list of direction blocks, where a
    ``None`` block is unknown and may hold anything."""
    if all(b is not None for b in blocks):
        flat = [x for b in blocks for x in b]
        return alternates(flat, cyclic=True)
    # rotate so an unknown block comes first, then check each known run
    k = next(i for i, b in enumerate(blocks) if b is None)
    rot = blocks[k:] + blocks[:k]
    run: list[int] = []
    for b in rot[1:] + [None]:
        if b is None:
            if not alternates(run, cyclic=False):
                return False
            run = []
        else:
            run.extend(b)
    return True


@dataclass(frozen=True)
class AlternatingFlow:
    modification: DirectedModification
    states: tuple[State, ...]
    sources: frozenset[int]
    sinks: frozenset[int]

    def directed_edges(self) -> list[tuple[str, int]]:
        out = [(lab, eid) for eid, s in enumerate(self.states) for lab in sorted(LABELS[s])]
        out += [(SRC, v) for v in sorted(self.sources)]
        out += [(SNK, v) for v in sorted(self.sinks)]
        return out

    @property
    def size(self) -> int:
        return len(self.directed_edges())

    def vertices(self) -> set:
        g = self.modification.base
        vs: set = set()
        for eid, s in enumerate(self.states):
            if s != State.EMPTY:
                vs.add(g.edges[eid].u)
                vs.add(g.edges[eid].v)
        vs |= set(self.sources) | {("+", v) for v in self.sources}
        vs |= set(self.sinks) | {("-", v) for v in self.sinks}
        return vs


def _check_sets(d: DirectedModification, a, b):
    a, b = frozenset(a), frozenset(b)
    if len(a) != len(b):
        raise ValueError(f"|A| = {len(a)} differs from |B| = {len(b)}")
    bset = set(d.base.boundary_vertices)
    if not (a | b) <= bset:
        raise ValueError(f"{sorted((a | b) - bset)} are not boundary vertices")
    return a, b


def _edge_order(g: PlanarGraph) -> list[int]:
    """Edges in BFS discovery order from vertex 0."""
    seen_v = {0}
    seen_e = set()
    order = []
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for eid in g.rotations[v]:
            if eid not in seen_e:
                seen_e.add(eid)
                order.append(eid)
            w = g.edges[eid].other(v)
            if w not in seen_v:
                seen_v.add(w)
                queue.append(w)
    return order


def enumerate_flows(
    d: DirectedModification,
    a: Iterable[int],
    b: Iterable[int],
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Iterator[AlternatingFlow]:
    """Every alternating flow using exactly the sources of ``A`` and the
    sinks of ``B``, each once, by backtracking over per-edge states."""
    a, b = _check_sets(d, a, b)
    g = d.base
    loc = _Local(d)
    order = _edge_order(g)
    states: list = [None] * g.edge_count
    stubs = {v: (v in a, v in b) for v in range(g.vertex_count)}
    nodes = 0

    def ok_at(v):
        return _blocks_ok(loc.sequence(v, states, stubs[v]))

    # vertices with no edges only see their stubs
    if g.edge_count == 0:
        if ok_at(0):
            yield AlternatingFlow(d, (), a, b)
        return

    def rec(i):
        nonlocal nodes
        if i == len(order):
            yield AlternatingFlow(d, tuple(states), a, b)
            return
        eid = order[i]
        e = g.edges[eid]
        for s in State:
            nodes += 1
            if nodes > node_budget:
                raise CapacityError(f"flow search exceeded {node_budget} nodes")
            states[eid] = s
            if ok_at(e.u) and ok_at(e.v):
                yield from rec(i + 1)
        states[eid] = None

    yield from rec(0)


def flow_weight(f: AlternatingFlow) -> Fraction:
    """``2^(|A| + |F| - |V(F)|)`` times the product of directed edge weights."""
    d = f.modification
    w = Fraction(1)
    for lab, key in f.directed_edges():
        if lab in ("m", "s1", "s2"):
            w *= d.weight(key, lab)
    exp = len(f.sources) + f.size - len(f.vertices())
    return w * Fraction(2) ** exp


def project_flow(f: AlternatingFlow) -> OmegaPair:
    o1 = [i for i, s in enumerate(f.states) if s in ODD_STATES]
    o2 = [i for i, s in enumerate(f.states) if s in EVEN_STATES]
    return OmegaPair.of(o1, o2)


def flow_dump_csv(f: AlternatingFlow) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["edge_id", "state"])
    for eid, s in enumerate(f.states):
        w.writerow([eid, s.name])
    return buf.getvalue()


# -- partition functions by frontier elimination ----------------------------------


class _Classes:
    """States merged by their effect on both endpoints.

    Alternation at a vertex only sees, for each bundle, its first and last
    direction (the bundle itself always alternates internally), so states
    with equal (first, last) at both ends are interchangeable and their
    weights add.
    """

    def __init__(self, loc: _Local, eid: int):
        g = loc.d.base
        e = g.edges[eid]
        groups: dict = {}
        for s in State:
            pu, pv = loc.pattern[eid, e.u][s], loc.pattern[eid, e.v][s]
            if not (alternates(pu, False) and alternates(pv, False)):
                continue
            key = (_ends(pu), _ends(pv))
            groups[key] = groups.get(key, Fraction(0)) + loc.state_weight[eid][s]
        self.keys = list(groups)
        self.weight = [groups[k] for k in self.keys]
        self.ends = {e.u: [k[0] for k in self.keys], e.v: [k[1] for k in self.keys]}


def _ends(p):
    return () if not p else (p[0], p[-1])


def _vertex_ok(blocks) -> bool:
    seq = [b for b in blocks if b]
    if not seq:
        return True
    for i, cur in enumerate(seq):
        if cur[1] == seq[(i + 1) % len(seq)][0]:
            return False
    # a single block must close up with itself
    return True


class FlowPartition:
    """Exact ``Z^{A,B}`` for one directed modification, by eliminating base
    vertices one at a time with the unassigned edges as the frontier.

    Equivalent to summing :func:`flow_weight` over :func:`enumerate_flows`.
    """

    def __init__(self, d: DirectedModification):
        self.d = d
        g = d.base
        loc = _Local(d)
        self.classes = [_Classes(loc, e.id) for e in g.edges]
        self.order = self._vertex_order(g)
        self._tables: dict = {}
        self._cache: dict = {}

    @staticmethod
    def _vertex_order(g: PlanarGraph) -> list[int]:
        order = []
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in sorted(g.neighbors[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return order

    def _table(self, step: int, stubs: tuple[bool, bool]):
        key = (step, stubs)
        if key in self._tables:
            return self._tables[key]
        d, g = self.d, self.d.base
        v = self.order[step]
        done = set(self.order[:step])
        inc = [s[1] for s in d.slots[v] if s[0] == "e"]
        closing = [eid for eid in inc if g.edges[eid].other(v) in done]
        new = [eid for eid in inc if g.edges[eid].other(v) not in done]
        table: dict = {}
        ranges = [range(len(self.classes[eid].keys)) for eid in closing + new]
        for combo in product(*ranges):
            cls = dict(zip(closing + new, combo))
            blocks = []
            present = False
            for slot in d.slots[v]:
                if slot[0] == "e":
                    blk = self.classes[slot[1]].ends[v][cls[slot[1]]]
                elif slot[0] == SRC:
                    blk = (-1, -1) if stubs[0] else ()
                else:
                    blk = (1, 1) if stubs[1] else ()
                present = present or bool(blk)
                blocks.append(blk)
            if not _vertex_ok(blocks):
                continue
            w = Fraction(1, 2) if present else Fraction(1)
            for eid, c in zip(new, combo[len(closing):]):
                w *= self.classes[eid].weight[c]
            table.setdefault(combo[: len(closing)], []).append((combo[len(closing):], w))
        out = (closing, new, table)
        self._tables[key] = out
        return out

    def z(self, a: Iterable[int], b: Iterable[int]) -> Fraction:
        a, b = _check_sets(self.d, a, b)
        key = (a, b)
        if key in self._cache:
            return self._cache[key]
        frontier: list[int] = []
        layer: dict = {(): Fraction(1)}
        for step, v in enumerate(self.order):
            closing, new, table = self._table(step, (v in a, v in b))
            pos = [frontier.index(eid) for eid in closing]
            keep = [i for i in range(len(frontier)) if frontier[i] not in closing]
            nxt: dict = {}
            for fkey, w in layer.items():
                opts = table.get(tuple(fkey[i] for i in pos))
                if not opts:
                    continue
                base = tuple(fkey[i] for i in keep)
                for add, f in opts:
                    k = base + add
                    nxt[k] = nxt.get(k, 0) + w * f
            frontier = [frontier[i] for i in keep] + new
            layer = nxt
            if not layer:
                break
        total = layer.get((), Fraction(0))
        result = Fraction(2) ** len(a) * total
        self._cache[key] = result
        return result


_PARTITIONS: dict = {}


def z_aflow(d: DirectedModification, a: Iterable[int], b: Iterable[int]) -> Fraction:
    """Exact alternating-flow partition function ``Z^{A,B}``."""
    fp = _PARTITIONS.get(d)
    if fp is None:
        fp = _PARTITIONS[d] = FlowPartition(d)
    return fp.z(a, b)


def z_aflow_enumerated(d: DirectedModification, a, b, node_budget=DEFAULT_NODE_BUDGET) -> Fraction:
    return sum((flow_weight(f) for f in enumerate_flows(d, a, b, node_budget)), Fraction(0))


def pushforward(d: DirectedModification, a, b, node_budget=DEFAULT_NODE_BUDGET) -> dict[OmegaPair, Fraction]:
    """Total flow weight over each fiber of :func:`project_flow`."""
    out: dict[OmegaPair, Fraction] = {}
    for f in enumerate_flows(d, a, b, node_budget):
        om = project_flow(f)
        out[om] = out.get(om, Fraction(0)) + flow_weight(f)
    return out


# -- closed form and support --------------------------------------------------------


def touching_components(g: PlanarGraph, omega: OmegaPair, marked: Iterable[int]) -> int:
    """Components of ``omega`` meeting ``marked``; marked vertices that
    ``omega`` does not cover count as their own component."""
    comp = components(g, omega.edges)
    roots = set()
    for v in marked:
        roots.add(comp.get(v, ("isolated", v)))
    return len(roots)


def induced_flow_weight(g: PlanarGraph, omega: OmegaPair, a: Iterable[int], b: Iterable[int]) -> Fraction:
    """Closed-form unnormalized weight of ``omega`` under the flow measure:
    ``2^(|A| - k') |E_0(omega)| prod x  prod x^2  prod (1 - x^2)``."""
    a, b = frozenset(a), frozenset(b)
    kp = touching_components(g, omega, a | b)
    w = Fraction(2) ** (len(a) - kp) * count_sourceless(g, ids_to_mask(omega.edges))
    for e in g.edges:
        if e.id in omega.omega1:
            w *= e.x
        elif e.id in omega.omega2:
            w *= e.x * e.x
        else:
            w *= 1 - e.x * e.x
    return w


def interlaces(g: PlanarGraph, omega: OmegaPair, a: Iterable[int], b: Iterable[int]) -> bool:
    """Whether, for every component of ``omega``, the sources of ``A`` and
    sinks of ``B`` attached to it alternate around the outer face.

    Marked vertices not covered by ``omega`` form their own components.
    """
    a, b = frozenset(a), frozenset(b)
    comp = components(g, omega.edges)
    seqs: dict = {}
    for v, sign in stub_sequence(g):
        used = (sign > 0 and v in a) or (sign < 0 and v in b)
        if used:
            seqs.setdefault(comp.get(v, ("isolated", v)), []).append(sign)
    return all(alternates(s, cyclic=True) for s in seqs.values())
