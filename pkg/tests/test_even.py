import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from planar_ising import corpus
from planar_ising.errors import CapacityError
from planar_ising.even import correlation, cycle_basis, enumerate_even_subgraphs, even_polynomial

weights = st.fractions(Fraction(1, 50), Fraction(49, 50))


def spin_sum_correlation(g, a, b):
    """Brute-force spin sum in floating point with J = atanh(x)."""
    couplings = [(e.u, e.v, math.atanh(float(e.x))) for e in g.edges]
    num = den = 0.0
    for spins in itertools.product((1, -1), repeat=g.vertex_count):
        w = math.exp(sum(j * spins[u] * spins[v] for u, v, j in couplings))
        den += w
        num += spins[a] * spins[b] * w
    return num / den


def odd_vertices(g, edge_ids):
    deg = [0] * g.vertex_count
    for e in edge_ids:
        deg[g.edges[e].u] += 1
        deg[g.edges[e].v] += 1
    return {v for v, d in enumerate(deg) if d % 2}


def test_triangle_even_sets():
    g = corpus.triangle()
    assert set(enumerate_even_subgraphs(g, ())) == {frozenset(), frozenset({0, 1, 2})}
    # edges: 0 = 01, 1 = 12, 2 = 20
    assert set(enumerate_even_subgraphs(g, (0, 1))) == {frozenset({0}), frozenset({1, 2})}
    assert list(enumerate_even_subgraphs(g, (0,))) == []


def test_triangle_polynomials():
    g = corpus.triangle(Fraction(1, 2))
    assert even_polynomial(g, ()) == Fraction(9, 8)
    assert even_polynomial(g, (0, 1)) == Fraction(3, 4)
    assert correlation(g, 0, 1) == Fraction(2, 3)


def test_single_edge():
    g = corpus.single_edge(Fraction(2, 7))
    assert even_polynomial(g, (0, 1)) == Fraction(2, 7)
    assert correlation(corpus.single_edge(Fraction(1, 2)), 0, 1) == Fraction(1, 2)


def test_diagonal_is_one(standard):
    for g in standard.values():
        assert all(correlation(g, v, v) == 1 for v in range(g.vertex_count))


def test_empty_set_polynomial_at_least_one(standard):
    for g in standard.values():
        assert even_polynomial(g, ()) >= 1


@pytest.mark.parametrize("name", ["single_edge", "path3", "triangle", "four_cycle", "k4",
                                  "grid3x3", "theta", "wheel5"])
def test_spin_sum_oracle(standard, name):
    g = standard[name]
    for a, b in itertools.combinations(range(g.vertex_count), 2):
        exact = float(correlation(g, a, b))
        assert exact == pytest.approx(spin_sum_correlation(g, a, b), rel=1e-9)


def test_capacity_cap():
    g = corpus.grid(6, 7)
    assert len(cycle_basis(g)) == 30
    with pytest.raises(CapacityError):
        even_polynomial(g, ())


@given(st.integers(2, 3), st.integers(2, 4), st.data())
def test_even_sets_have_requested_sources(r, c, data):
    g = corpus.grid(r, c)
    a = data.draw(st.sets(st.integers(0, g.vertex_count - 1), max_size=4))
    sets = list(enumerate_even_subgraphs(g, a))
    if len(a) % 2:
        assert sets == []
        return
    assert len(sets) == len(set(sets)) == 2 ** len(cycle_basis(g))
    assert all(odd_vertices(g, s) == a for s in sets)


def _with_random_weights(g, data):
    xs = data.draw(st.lists(weights, min_size=g.edge_count, max_size=g.edge_count))
    return g.with_weights(xs)


small_graphs = st.sampled_from(["triangle", "four_cycle", "k4", "theta", "wheel5"])


@given(small_graphs, st.data())
def test_symmetry_and_range(name, data):
    g = _with_random_weights(corpus.standard_corpus()[name], data)
    for a, b in itertools.combinations(range(g.vertex_count), 2):
        c = correlation(g, a, b)
        assert c == correlation(g, b, a)
        assert 0 < c < 1


@given(small_graphs, st.data())
def test_griffiths(name, data):
    g = _with_random_weights(corpus.standard_corpus()[name], data)
    n = g.vertex_count
    for a, b, c in itertools.permutations(range(n), 3):
        assert correlation(g, a, b) >= correlation(g, a, c) * correlation(g, c, b)


@given(small_graphs, st.data())
def test_boundary_triple_inequalities(name, data):
    g = _with_random_weights(corpus.standard_corpus()[name], data)
    for a, b, c in itertools.permutations(g.boundary_vertices, 3):
        ab, ac, bc = correlation(g, a, b), correlation(g, a, c), correlation(g, b, c)
        assert 1 + ab > ac + bc
        assert 1 + ab * ab > ac * ac + bc * bc
