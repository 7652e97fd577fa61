"""Planar graphs with a rotation system, an ordered outer boundary, and the
directed modification used by the alternating-flow representation.

Edge strengths are stored as ``x = tanh J`` in exact rational form. Faces
are traced with the rule "arrive along an edge, leave along the next edge
counterclockwise", which walks the outer face counterclockwise.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import EmbeddingError, GraphFormatError, OrderingError

COLORS = ("o", "b")


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    x: Fraction

    def other(self, w: int) -> int:
        return self.v if w == self.u else self.u


@dataclass(frozen=True)
class EmbeddingReport:
    vertex_count: int
    edge_count: int
    face_count: int
    faces: tuple[tuple[int, ...], ...]
    outer_face: int
    # boundary vertex -> insertion index into its rotation (the outer corner)
    boundary_corners: tuple[tuple[int, int], ...]
    # every outer-face corner of every boundary vertex, in walk order
    outer_corner_options: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count


@dataclass(frozen=True)
class PlanarGraph:
    """Connected simple graph with a combinatorial embedding.

    ``rotations[v]`` lists the edge ids at ``v`` in counterclockwise order and
    ``boundary`` lists ``(vertex, color)`` pairs counterclockwise around the
    outer face. Construction checks the structural invariants; the embedding
    itself is checked by :func:`validate_embedding`.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    rotations: tuple[tuple[int, ...], ...]
    boundary: tuple[tuple[int, str], ...]

    def __post_init__(self):
        _check_structure(self)

    # -- basic accessors -------------------------------------------------
    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def boundary_vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.boundary)

    @cached_property
    def boundary_index(self) -> dict[int, int]:
        return {v: i for i, (v, _) in enumerate(self.boundary)}

    @cached_property
    def color(self) -> dict[int, str]:
        return dict(self.boundary)

    @cached_property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(e.x for e in self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self.edges[e].other(v) for e in rot)
            for v, rot in enumerate(self.rotations)
        )

    @cached_property
    def rotation_position(self) -> dict[tuple[int, int], int]:
        """Map ``(vertex, edge id)`` to the index of the edge in the rotation."""
        return {
            (v, e): i for v, rot in enumerate(self.rotations) for i, e in enumerate(rot)
        }

    @cached_property
    def embedding(self) -> EmbeddingReport:
        return validate_embedding(self)

    def with_coloring(self, colors: Sequence[str]) -> "PlanarGraph":
        """Same graph, boundary recolored in boundary order."""
        if len(colors) != len(self.boundary):
            raise GraphFormatError(
                f"coloring has {len(colors)} entries, boundary has {len(self.boundary)}"
            )
        boundary = tuple((v, c) for (v, _), c in zip(self.boundary, colors))
        return PlanarGraph(self.vertex_count, self.edges, self.rotations, boundary)

    def with_weights(self, weights: Sequence) -> "PlanarGraph":
        edges = tuple(
            Edge(e.id, e.u, e.v, Fraction(w)) for e, w in zip(self.edges, weights)
        )
        return PlanarGraph(self.vertex_count, edges, self.rotations, self.boundary)

    def rotate_boundary(self, shift: int) -> "PlanarGraph":
        """Same graph with the boundary listing started ``shift`` places later."""
        b = self.boundary[shift:] + self.boundary[:shift]
        return PlanarGraph(self.vertex_count, self.edges, self.rotations, b)


def _check_structure(g: PlanarGraph) -> None:
    n = g.vertex_count
    if not isinstance(n, int) or n < 1:
        raise GraphFormatError(f"vertex count must be a positive integer, got {n!r}")
    seen_pairs = set()
    for i, e in enumerate(g.edges):
        loc = f"edges[{i}]"
        if e.id != i:
            raise GraphFormatError(f"edge ids must be dense and sorted, got {e.id}", loc)
        for w in (e.u, e.v):
            if not 0 <= w < n:
                raise GraphFormatError(f"endpoint {w} out of range", loc)
        if e.u == e.v:
            raise GraphFormatError("loops are not supported", loc)
        pair = frozenset((e.u, e.v))
        if pair in seen_pairs:
            raise GraphFormatError("multi-edges are not supported", loc)
        seen_pairs.add(pair)
        if not isinstance(e.x, Fraction):
            raise GraphFormatError("weights must be exact rationals", loc)
        if not 0 < e.x < 1:
            raise GraphFormatError(f"weight {e.x} outside (0,1)", loc)
    if len(g.rotations) != n:
        raise GraphFormatError(f"expected {n} rotations, got {len(g.rotations)}", "rotations")
    incident = [set() for _ in range(n)]
    for e in g.edges:
        incident[e.u].add(e.id)
        incident[e.v].add(e.id)
    for v, rot in enumerate(g.rotations):
        if len(set(rot)) != len(rot) or set(rot) != incident[v]:
            raise GraphFormatError(
                f"rotation {list(rot)} does not list the incident edges {sorted(incident[v])}",
                f"rotations[{v}]",
            )
    if n > 1:
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for e in g.rotations[v]:
                w = g.edges[e].other(v)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != n:
            raise GraphFormatError("graph is disconnected")
    bverts = [v for v, _ in g.boundary]
    if len(set(bverts)) != len(bverts):
        raise GraphFormatError("boundary lists a vertex twice", "boundary")
    for i, (v, c) in enumerate(g.boundary):
        if not 0 <= v < n:
            raise GraphFormatError(f"boundary vertex {v} out of range", f"boundary[{i}]")
        if c not in COLORS:
            raise GraphFormatError(f"color must be 'o' or 'b', got {c!r}", f"boundary[{i}]")
    if not bverts:
        raise GraphFormatError("boundary is empty", "boundary")


# -- faces and the outer corner --------------------------------------------


def trace_faces(g: PlanarGraph) -> list[list[tuple[int, int]]]:
    """Faces as lists of darts ``(edge id, tail vertex)``."""
    pos = g.rotation_position
    unused = {(e.id, e.u) for e in g.edges} | {(e.id, e.v) for e in g.edges}
    faces = []
    while unused:
        start = min(unused)
        face = []
        dart = start
        while True:
            unused.discard(dart)
            face.append(dart)
            eid, tail = dart
            head = g.edges[eid].other(tail)
            rot = g.rotations[head]
            nxt = rot[(pos[head, eid] + 1) % len(rot)]
            dart = (nxt, head)
            if dart == start:
                break
        faces.append(face)
    return faces


def _face_corners(g: PlanarGraph, face) -> list[tuple[int, int]]:
    """Corners ``(vertex, insertion index)`` met along a face walk."""
    pos = g.rotation_position
    out = []
    for eid, tail in face:
        head = g.edges[eid].other(tail)
        out.append((head, pos[head, eid] + 1))
    return out


def _match_boundary(corners, listing) -> list[tuple[int, int]] | None:
    """Pick one corner per listed vertex so that walk order matches listing."""
    n, total = len(listing), len(corners)
    for s in range(total):
        if corners[s][0] != listing[0]:
            continue
        chosen = [corners[s]]
        j = 1
        for t in range(1, total):
            if j == n:
                break
            c = corners[(s + t) % total]
            if c[0] == listing[j]:
                chosen.append(c)
                j += 1
        if j == n:
            return chosen
    return None


def validate_embedding(g: PlanarGraph) -> EmbeddingReport:
    """Check Euler's formula and that the declared boundary is one face.

    Raises :class:`EmbeddingError` when either check fails.
    """
    listing = g.boundary_vertices
    if g.edge_count == 0:
        if listing != (0,):
            raise EmbeddingError("single-vertex graph must list vertex 0 as its boundary")
        return EmbeddingReport(1, 0, 1, ((),), 0, ((0, 0),), ((0, (0,)),))
    faces = trace_faces(g)
    chi = g.vertex_count - g.edge_count + len(faces)
    if chi != 2:
        raise EmbeddingError(
            f"rotation system is not planar: V - E + F = {chi} (F = {len(faces)})"
        )
    matches = []
    for fi, face in enumerate(faces):
        corners = _face_corners(g, face)
        if {v for v, _ in corners} != set(listing):
            continue
        chosen = _match_boundary(corners, listing)
        if chosen is not None:
            matches.append((fi, corners, chosen))
    if not matches:
        raise EmbeddingError(
            "boundary listing is not the counterclockwise vertex order of any face"
        )
    fi, corners, chosen = matches[0]
    options: dict[int, list[int]] = {}
    for v, p in corners:
        options.setdefault(v, []).append(p)
    return EmbeddingReport(
        vertex_count=g.vertex_count,
        edge_count=g.edge_count,
        face_count=len(faces),
        faces=tuple(tuple(d[0] for d in f) for f in faces),
        outer_face=fi,
        boundary_corners=tuple(chosen),
        outer_corner_options=tuple((v, tuple(ps)) for v, ps in options.items()),
    )


# -- parsing ------------------------------------------------------------------


def _parse_fraction(raw, loc) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise GraphFormatError(f"weight must be a rational string 'p/q', got {raw!r}", loc)
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise GraphFormatError(f"cannot parse weight {raw!r}: {exc}", loc) from None


def _require_int(raw, loc) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise GraphFormatError(f"expected an integer, got {raw!r}", loc)
    return raw


def parse_graph(text: str) -> PlanarGraph:
    """Parse and fully validate a JSON graph document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} col {exc.colno}") from None
    if not isinstance(doc, dict):
        raise GraphFormatError("top level must be an object")
    for key in ("vertices", "edges", "rotations", "boundary"):
        if key not in doc:
            raise GraphFormatError(f"missing key {key!r}")
    n = _require_int(doc["vertices"], "vertices")
    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        raise GraphFormatError("must be a list", "edges")
    edges = []
    for i, item in enumerate(raw_edges):
        loc = f"edges[{i}]"
        if not isinstance(item, dict) or not {"id", "u", "v", "x"} <= item.keys():
            raise GraphFormatError("edge needs keys id, u, v, x", loc)
        edges.append(
            Edge(
                _require_int(item["id"], loc + ".id"),
                _require_int(item["u"], loc + ".u"),
                _require_int(item["v"], loc + ".v"),
                _parse_fraction(item["x"], loc + ".x"),
            )
        )
    edges.sort(key=lambda e: e.id)
    raw_rot = doc["rotations"]
    if not isinstance(raw_rot, dict):
        raise GraphFormatError("must be an object keyed by vertex", "rotations")
    rotations = []
    for v in range(n):
        rot = raw_rot.get(str(v), [])
        if not isinstance(rot, list):
            raise GraphFormatError("must be a list of edge ids", f"rotations[{v}]")
        rotations.append(tuple(_require_int(e, f"rotations[{v}]") for e in rot))
    extra = set(raw_rot) - {str(v) for v in range(n)}
    if extra:
        raise GraphFormatError(f"unknown vertices {sorted(extra)}", "rotations")
    raw_b = doc["boundary"]
    if not isinstance(raw_b, list):
        raise GraphFormatError("must be a list", "boundary")
    boundary = []
    for i, item in enumerate(raw_b):
        if not isinstance(item, dict) or "v" not in item:
            raise GraphFormatError("entry needs key 'v'", f"boundary[{i}]")
        boundary.append((_require_int(item["v"], f"boundary[{i}].v"), item.get("color", "o")))
    g = PlanarGraph(n, tuple(edges), tuple(rotations), tuple(boundary))
    _ = g.embedding
    return g


def load_graph(path) -> PlanarGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def dump_graph(g: PlanarGraph) -> str:
    doc = {
        "vertices": g.vertex_count,
        "edges": [{"id": e.id, "u": e.u, "v": e.v, "x": str(e.x)} for e in g.edges],
        "rotations": {str(v): list(r) for v, r in enumerate(g.rotations)},
        "boundary": [{"v": v, "color": c} for v, c in g.boundary],
    }
    return json.dumps(doc, indent=1)


def from_coordinates(
    coords: Sequence[tuple[float, float]],
    edge_list: Sequence[tuple[int, int]],
    weights,
    colors: Sequence[str] | None = None,
) -> PlanarGraph:
    """Build a graph from a straight-line drawing.

    Rotations come from edge angles, the outer face is the face of largest
    signed area, and the boundary listing starts at its smallest vertex id.
    """
    if not isinstance(weights, (list, tuple)):
        weights = [weights] * len(edge_list)
    edges = tuple(
        Edge(i, u, v, Fraction(w)) for i, ((u, v), w) in enumerate(zip(edge_list, weights))
    )
    n = len(coords)
    inc = [[] for _ in range(n)]
    for e in edges:
        for a, b in ((e.u, e.v), (e.v, e.u)):
            dx = coords[b][0] - coords[a][0]
            dy = coords[b][1] - coords[a][1]
            inc[a].append((math.atan2(dy, dx), e.id))
    rotations = tuple(tuple(eid for _, eid in sorted(lst)) for lst in inc)
    if not edges:
        return PlanarGraph(1, (), ((),), ((0, (colors or "o")[0]),))
    probe = PlanarGraph(n, edges, rotations, ((0, "o"),))
    best = None
    for face in trace_faces(probe):
        area = 0.0
        for eid, tail in face:
            head = edges[eid].other(tail)
            (x0, y0), (x1, y1) = coords[tail], coords[head]
            area += x0 * y1 - x1 * y0
        if best is None or area > best[0] + 1e-12:
            best = (area, face)
    corners = _face_corners(probe, best[1])
    start = min(range(len(corners)), key=lambda i: (corners[i][0], i))
    order = []
    for i in range(len(corners)):
        v = corners[(start + i) % len(corners)][0]
        if v not in order:
            order.append(v)
    if colors is None:
        colors = ["o"] * len(order)
    boundary = tuple(zip(order, colors))
    g = PlanarGraph(n, edges, rotations, boundary)
    _ = g.embedding
    return g


# -- connectivity helpers -------------------------------------------------------


def components(g: PlanarGraph, edge_ids: Iterable[int]) -> dict[int, int]:
    """Union-find over the endpoints of ``edge_ids``; vertex -> root."""
    parent: dict[int, int] = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for eid in edge_ids:
        e = g.edges[eid]
        parent.setdefault(e.u, e.u)
        parent.setdefault(e.v, e.v)
        ra, rb = find(e.u), find(e.v)
        if ra != rb:
            parent[ra] = rb
    return {v: find(v) for v in parent}


def mask_to_ids(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def ids_to_mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def is_ccw_cyclic(g: PlanarGraph, seq: Sequence[int]) -> bool:
    """True when the distinct boundary vertices ``seq`` appear in this
    cyclic order counterclockwise around the outer face."""
    idx = g.boundary_index
    try:
        p = [idx[v] for v in seq]
    except KeyError:
        return False
    if len(set(p)) != len(p):
        return False
    if len(p) <= 2:
        return True
    descents = sum(1 for i in range(len(p)) if p[(i + 1) % len(p)] < p[i])
    return descents == 1


def check_contiguous(g: PlanarGraph, a: Sequence[int], b: Sequence[int]) -> None:
    """Raise unless ``a_1..a_k, b_k..b_1`` is counterclockwise on the boundary."""
    if len(a) != len(b):
        raise OrderingError(f"|A| = {len(a)} differs from |B| = {len(b)}")
    if set(a) & set(b):
        raise OrderingError("A and B must be disjoint")
    seq = list(a) + list(reversed(b))
    if not is_ccw_cyclic(g, seq):
        raise OrderingError(
            f"a_1..a_k, b_k..b_1 = {seq} is not a counterclockwise boundary order"
        )


def stub_sequence(g: PlanarGraph) -> list[tuple[int, int]]:
    """Sources (+1) and sinks (-1) counterclockwise around the outer face.

    A white boundary vertex has its sink immediately before its source, a
    black one immediately after.
    """
    out = []
    for v, c in g.boundary:
        pair = [(v, -1), (v, +1)] if c == "o" else [(v, +1), (v, -1)]
        out.extend(pair)
    return out


# -- directed modification -----------------------------------------------------

SRC = "src"
SNK = "snk"


@dataclass(frozen=True)
class DirectedModification:
    """Each edge becomes a middle edge tail->head plus two side edges
    head->tail; each boundary vertex gets a source stub and a sink stub in
    one of its outer-face corners.

    ``slots[v]`` is the counterclockwise sequence at ``v`` of ``("e", id)``,
    ``(SRC,)`` and ``(SNK,)`` entries.
    """

    base: PlanarGraph
    tails: tuple[int, ...]
    middle_weight: tuple[Fraction, ...]
    side_weight: tuple[Fraction, ...]
    slots: tuple[tuple[tuple, ...], ...]
    corners: tuple[tuple[int, int], ...] = field(default=())

    def head(self, eid: int) -> int:
        return self.base.edges[eid].other(self.tails[eid])

    def bundle_order(self, eid: int, w: int) -> tuple[str, str, str]:
        """Counterclockwise order of the three directed copies at endpoint ``w``."""
        return ("s2", "m", "s1") if w == self.base.edges[eid].u else ("s1", "m", "s2")

    def direction(self, eid: int, label: str, w: int) -> int:
        """+1 if the directed copy leaves ``w``, -1 if it enters."""
        out_of_tail = label == "m"
        at_tail = w == self.tails[eid]
        return 1 if out_of_tail == at_tail else -1

    def weight(self, eid: int, label: str) -> Fraction:
        return self.middle_weight[eid] if label == "m" else self.side_weight[eid]

    def directed_edges(self):
        """All directed edges as ``(label, tail, head, weight)``."""
        out = []
        for e in self.base.edges:
            t, h = self.tails[e.id], self.head(e.id)
            out.append((("m", e.id), t, h, self.middle_weight[e.id]))
            out.append((("s1", e.id), h, t, self.side_weight[e.id]))
            out.append((("s2", e.id), h, t, self.side_weight[e.id]))
        for v in self.base.boundary_vertices:
            out.append(((SRC, v), ("+", v), v, Fraction(1)))
            out.append(((SNK, v), v, ("-", v), Fraction(1)))
        return out

    def rotation_at(self, v: int) -> list[tuple]:
        """Counterclockwise directed-edge labels around base vertex ``v``."""
        out = []
        for slot in self.slots[v]:
            if slot[0] == "e":
                out.extend((lab, slot[1]) for lab in self.bundle_order(slot[1], v))
            else:
                out.append((slot[0], v))
        return out


def build_directed_modification(
    g: PlanarGraph,
    middle_orientations: Mapping[int, bool] | Sequence[bool] | None = None,
    corners: Mapping[int, int] | None = None,
) -> DirectedModification:
    """Construct the directed modification of ``g``.

    ``middle_orientations[e]`` true orients the middle edge ``u -> v``; the
    default orients every middle edge from the lower to the higher vertex id.
    ``corners`` optionally overrides, per boundary vertex, the rotation
    insertion index of its stubs (must be an outer-face corner).
    """
    emb = g.embedding
    tails = []
    for e in g.edges:
        if middle_orientations is None:
            forward = e.u < e.v
        else:
            forward = bool(middle_orientations[e.id])
        tails.append(e.u if forward else e.v)
    mid = tuple(e.x / (1 - e.x * e.x) for e in g.edges)
    side = tuple(e.x / 2 for e in g.edges)
    corner_of = dict(emb.boundary_corners)
    if corners:
        allowed = {v: set(ps) for v, ps in emb.outer_corner_options}
        for v, p in corners.items():
            if p not in allowed.get(v, ()):
                raise EmbeddingError(f"index {p} is not an outer-face corner of vertex {v}")
            corner_of[v] = p
    slots = []
    for v, rot in enumerate(g.rotations):
        seq: list[tuple] = [("e", eid) for eid in rot]
        if v in corner_of:
            stubs = [(SNK,), (SRC,)] if g.color[v] == "o" else [(SRC,), (SNK,)]
            p = corner_of[v]
            seq[p:p] = stubs
        slots.append(tuple(seq))
    return DirectedModification(
        base=g,
        tails=tuple(tails),
        middle_weight=mid,
        side_weight=side,
        slots=tuple(slots),
        corners=tuple(sorted(corner_of.items())),
    )


def alternative_corners(g: PlanarGraph) -> dict[int, int]:
    """For each boundary vertex with several outer-face corners, the last
    such corner in walk order instead of the one matched to the listing."""
    emb = g.embedding
    chosen = dict(emb.boundary_corners)
    out = {}
    for v, ps in emb.outer_corner_options:
        if len(ps) > 1:
            alt = [p for p in ps if p != chosen[v]]
            out[v] = alt[-1]
    return out
