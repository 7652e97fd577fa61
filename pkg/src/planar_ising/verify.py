"""Exhaustive identity checks over boundary subsets of one graph.

Each suite yields :class:`Check` records holding both sides of an exact
identity, so a report can show the counterexample when one fails.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator

from .currents import (OmegaPair, all_connected, double_current_norm, double_current_weight,
                       event_probabilities, gamma_space, parallel_event)
from .even import even_polynomial
from .flows import induced_flow_weight, interlaces, pushforward, z_aflow
from .graph import PlanarGraph, build_directed_modification
from .linalg import (all_minors_nonneg, build_K, build_M, build_N, contiguous_configurations,
                     det_exact, disjoint_paths_exist, pfaffian_exact)

SUITES = ("det", "pf", "flow", "dcurr", "tnn")
PUSHFORWARD_MAX_EDGES = 8
MAX_GAMMA_EDGES_VERIFY = 24


@dataclass(frozen=True)
class Check:
    suite: str
    identity: str
    inputs: str
    lhs: object
    rhs: object
    ok: bool


@dataclass
class VerifyConfig:
    k_max: int = 3
    pf_max: int = 6
    tnn_k_max: int = 4
    flow_k_max: int = 3
    suites: tuple[str, ...] = SUITES
    skipped: list[str] = field(default_factory=list)


def _fmt(vs) -> str:
    return "{" + ",".join(map(str, vs)) + "}"


def _pairs(g: PlanarGraph, k: int):
    w = g.boundary_vertices
    for a in combinations(w, k):
        for b in combinations(w, k):
            yield a, b


def det_suite(g: PlanarGraph, cfg: VerifyConfig) -> Iterator[Check]:
    d = build_directed_modification(g)
    z0 = z_aflow(d, (), ())
    for k in range(1, cfg.k_max + 1):
        for a, b in _pairs(g, k):
            dn = det_exact(build_N(g, a, b))
            ratio = z_aflow(d, a, b) / z0
            tag = f"A={_fmt(a)} B={_fmt(b)}"
            yield Check("det", "det N = Z[A,B]/Z[0,0]", tag, dn, ratio, dn == ratio)
            yield Check("det", "det N >= 0", tag, dn, 0, dn >= 0)


def pf_suite(g: PlanarGraph, cfg: VerifyConfig) -> Iterator[Check]:
    s0 = even_polynomial(g, ())
    w = g.boundary_vertices
    for size in range(2, min(cfg.pf_max, len(w)) + 1, 2):
        for s in combinations(w, size):
            pf = pfaffian_exact(build_K(g, s))
            rhs = even_polynomial(g, s) / s0
            yield Check("pf", "pf K = S[A]/S[0]", f"S={_fmt(s)}", pf, rhs, pf == rhs)


def flow_suite(g: PlanarGraph, cfg: VerifyConfig) -> Iterator[Check]:
    d = build_directed_modification(g)
    flipped = build_directed_modification(g, [e.u > e.v for e in g.edges])
    for k in range(0, cfg.flow_k_max + 1):
        for a, b in _pairs(g, k):
            tag = f"A={_fmt(a)} B={_fmt(b)}"
            z, zf = z_aflow(d, a, b), z_aflow(flipped, a, b)
            yield Check("flow", "Z invariant under middle-edge reversal", tag, z, zf, z == zf)
    if g.edge_count > PUSHFORWARD_MAX_EDGES:
        cfg.skipped.append(f"pushforward: |E| = {g.edge_count} > {PUSHFORWARD_MAX_EDGES}")
        return
    for k in range(0, min(cfg.flow_k_max, 2) + 1):
        for a, b in _pairs(g, k):
            yield from pushforward_checks(g, d, a, b)


def pushforward_checks(g: PlanarGraph, d, a, b) -> Iterator[Check]:
    """Per-configuration flow pushforward against the closed form, and the
    image against the interlacing configurations."""
    tag = f"A={_fmt(a)} B={_fmt(b)}"
    push = pushforward(d, a, b)
    prod = Fraction(1)
    for e in g.edges:
        prod *= 1 - e.x * e.x
    sym = set(a) ^ set(b)
    support = {om for om in gamma_space(g, sym) if interlaces(g, om, a, b)}
    ok_support = set(push) == support
    yield Check("flow", "flow image = interlacing configurations", tag,
                len(push), len(support), ok_support)
    bad = None
    for om in support | set(push):
        lhs = push.get(om, Fraction(0)) * prod
        rhs = induced_flow_weight(g, om, a, b)
        if lhs != rhs:
            bad = (om, lhs, rhs)
            break
    if bad is None:
        yield Check("flow", "flow pushforward = closed form", tag, "all", "all", True)
    else:
        yield Check("flow", "flow pushforward = closed form", f"{tag} omega={_omega_str(bad[0])}",
                    bad[1], bad[2], False)


def _omega_str(om: OmegaPair) -> str:
    return f"({_fmt(sorted(om.omega1))},{_fmt(sorted(om.omega2))})"


def dcurr_suite(g: PlanarGraph, cfg: VerifyConfig) -> Iterator[Check]:
    if g.edge_count > MAX_GAMMA_EDGES_VERIFY:
        cfg.skipped.append(f"dcurr: |E| = {g.edge_count} > {MAX_GAMMA_EDGES_VERIFY}")
        return
    w = g.boundary_vertices
    for size in range(0, min(2 * cfg.k_max, len(w)) + 1, 2):
        for s in combinations(w, size):
            total = sum((double_current_weight(g, om) for om in gamma_space(g, s)), Fraction(0))
            norm = double_current_norm(g, s)
            yield Check("dcurr", "sum of weights = S[A] S[0]", f"A={_fmt(s)}", total, norm, total == norm)
    for k in range(2, min(cfg.k_max, len(w) // 2) + 1):
        for a, b in contiguous_configurations(g, k):
            p = event_probabilities(g, set(a) | set(b), [parallel_event(a, b)])[0]
            rhs = det_exact(build_M(g, a, b)) / pfaffian_exact(build_K(g, set(a) | set(b)))
            yield Check("dcurr", "P(parallel) = det M / pf K", f"A={_fmt(a)} B={_fmt(b)}", p, rhs, p == rhs)
    if len(w) >= 4:
        for s in combinations(w, 4):
            aa, bb, cc, dd = s
            ps = event_probabilities(g, s, [parallel_event((aa, bb), (dd, cc)),
                                            parallel_event((aa, dd), (bb, cc)),
                                            all_connected(s)])
            yield Check("dcurr", "three k=2 events sum to 1", f"S={_fmt(s)}", sum(ps), 1, sum(ps) == 1)


def tnn_suite(g: PlanarGraph, cfg: VerifyConfig) -> Iterator[Check]:
    w = g.boundary_vertices
    for k in range(1, min(cfg.tnn_k_max, len(w) // 2) + 1):
        for a, b in contiguous_configurations(g, k):
            tag = f"A={_fmt(a)} B={_fmt(b)}"
            rep = all_minors_nonneg(build_M(g, a, b))
            yield Check("tnn", "all minors >= 0", tag, rep.min_minor, 0, rep.nonnegative)
            for rows, cols, v in rep.minors:
                paths = disjoint_paths_exist(g, rows, cols)
                yield Check("tnn", "minor > 0 iff disjoint paths", f"{tag} rows={_fmt(rows)} cols={_fmt(cols)}",
                            v, paths, (v > 0) == paths)


RUNNERS: dict[str, Callable[[PlanarGraph, VerifyConfig], Iterator[Check]]] = {
    "det": det_suite,
    "pf": pf_suite,
    "flow": flow_suite,
    "dcurr": dcurr_suite,
    "tnn": tnn_suite,
}


def run_suites(g: PlanarGraph, cfg: VerifyConfig) -> list[Check]:
    out: list[Check] = []
    for name in cfg.suites:
        out.extend(RUNNERS[name](g, cfg))
    return out


def checks_csv(checks: list[Check]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "identity", "inputs", "lhs", "rhs", "ok"])
    for c in checks:
        w.writerow([c.suite, c.identity, c.inputs, str(c.lhs), str(c.rhs), int(c.ok)])
    return buf.getvalue()
