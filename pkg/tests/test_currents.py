import io
import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from planar_ising import corpus
from planar_ising.currents import (TRUE, OmegaPair, all_connected, connected, convolve_two_currents,
                                   count_sourceless, double_current_distribution, double_current_norm,
                                   double_current_prob, double_current_weight, event_probabilities,
                                   gamma_space, mcmc_chain, parallel_event, prob_parallel,
                                   sample_double_current, single_current_induced_weight,
                                   write_samples_csv)
from planar_ising.errors import CapacityError, InfeasibleError, OrderingError
from planar_ising.even import correlation, even_polynomial
from planar_ising.graph import from_coordinates
from planar_ising.linalg import build_K, build_M, det_exact, pfaffian_exact

import numpy as np

HALF = Fraction(1, 2)


def example_26(g, a, b, c, d):
    """The three k=2 probabilities from switching-lemma formulas."""
    ab, ac, ad = correlation(g, a, b), correlation(g, a, c), correlation(g, a, d)
    bc, bd, cd = correlation(g, b, c), correlation(g, b, d), correlation(g, c, d)
    pf = ab * cd + ad * bc - ac * bd
    return (ad * bc - ac * bd) / pf, (ab * cd - ac * bd) / pf, ac * bd / pf


def k2_events(a, b, c, d):
    return [parallel_event((a, b), (d, c)), parallel_event((a, d), (b, c)), all_connected((a, b, c, d))]


# -- configuration space -----------------------------------------------------------


def test_gamma_single_edge():
    g = corpus.single_edge()
    assert set(gamma_space(g, ())) == {OmegaPair.of(), OmegaPair.of((), (0,))}
    assert list(gamma_space(g, (0, 1))) == [OmegaPair.of((0,))]


def test_gamma_triangle_count():
    assert len(list(gamma_space(corpus.triangle(), ()))) == 9


def test_gamma_capacity():
    with pytest.raises(CapacityError):
        next(gamma_space(corpus.grid(4, 5), ()))


def test_omega_pair_disjoint():
    with pytest.raises(ValueError):
        OmegaPair.of((0,), (0,))


def test_omega_sources():
    g = corpus.triangle()
    assert OmegaPair.of((0,), (1,)).sources(g) == {0, 1}


# -- weights -----------------------------------------------------------------------


def test_double_current_weight_examples():
    g = corpus.single_edge(HALF)
    assert double_current_weight(g, OmegaPair.of((0,))) == HALF
    assert double_current_weight(g, OmegaPair.of()) == Fraction(3, 4)
    t = corpus.triangle(HALF)
    assert double_current_weight(t, OmegaPair.of((0, 1, 2))) == Fraction(1, 4)


def test_count_sourceless_examples():
    t = corpus.triangle()
    assert count_sourceless(t, (0, 1, 2)) == 2
    star = corpus.path(5)
    assert count_sourceless(star, range(4)) == 1
    th = corpus.theta()
    assert count_sourceless(th, range(6)) == count_sourceless(th, range(6), brute=True) == 4


@given(st.sets(st.integers(0, 16), max_size=17))
def test_count_sourceless_formula_matches_brute(ids):
    g = corpus.grid(3, 4)
    ids = {i for i in ids if i < g.edge_count}
    assert count_sourceless(g, ids) == count_sourceless(g, ids, brute=True)


@pytest.mark.parametrize("name", ["single_edge", "path3", "triangle", "four_cycle", "k4", "theta", "wheel5"])
def test_partition_of_unity(standard, name):
    g = standard[name]
    for size in range(0, 7, 2):
        for a in itertools.combinations(range(g.vertex_count), size):
            total = sum((double_current_weight(g, om) for om in gamma_space(g, a)), Fraction(0))
            assert total == double_current_norm(g, a)


# -- probabilities -----------------------------------------------------------------


def test_true_event_has_probability_one(standard):
    for g in standard.values():
        if g.edge_count <= 10:
            assert double_current_prob(g, (), TRUE) == 1


def test_forced_connection():
    assert double_current_prob(corpus.single_edge(HALF), (0, 1), connected(0, 1)) == 1


def test_infeasible_sources():
    with pytest.raises(InfeasibleError):
        double_current_prob(corpus.triangle(), (0,), TRUE)


def test_four_cycle_example_probabilities():
    g = corpus.four_cycle(HALF)
    probs = event_probabilities(g, (0, 1, 2, 3), k2_events(0, 1, 2, 3))
    assert probs == list(example_26(g, 0, 1, 2, 3))
    assert sum(probs) == 1


@given(st.lists(st.fractions(Fraction(1, 20), Fraction(19, 20)), min_size=6, max_size=6))
def test_k2_completeness_random_weights(xs):
    for g in (corpus.four_cycle().with_weights(xs[:4]), corpus.theta().with_weights(xs)):
        s = g.boundary_vertices[:4]
        probs = event_probabilities(g, s, k2_events(*s))
        assert sum(probs) == 1
        assert tuple(probs) == example_26(g, *s)


def test_prob_parallel_k1(standard):
    g = standard["four_cycle"]
    assert prob_parallel(g, (0,), (2,)) == 1


def test_prob_parallel_four_cycle():
    g = corpus.four_cycle(HALF)
    # a1=0, a2=1, b2=2, b1=3
    assert prob_parallel(g, (0, 1), (3, 2)) == example_26(g, 0, 1, 2, 3)[0]


def test_prob_parallel_grid_opposite_sides():
    g = corpus.grid(3, 3, HALF)
    a, b = (0, 1), (6, 7)  # bottom row left to right, top row: b1 above a1
    expected = det_exact(build_M(g, a, b)) / pfaffian_exact(build_K(g, a + b))
    assert prob_parallel(g, a, b) == expected
    assert 0 < expected < 1


def test_prob_parallel_rejects_bad_order():
    with pytest.raises(OrderingError):
        prob_parallel(corpus.four_cycle(), (0, 2), (1, 3))


# -- single currents and the convolution --------------------------------------------


def test_single_current_weights_pythagorean():
    g = corpus.single_edge(Fraction(3, 5))
    assert single_current_induced_weight(g, OmegaPair.of((0,))) == Fraction(3, 5)
    assert single_current_induced_weight(g, OmegaPair.of((), (0,))) == Fraction(1, 5)
    assert single_current_induced_weight(g, OmegaPair.of()) == Fraction(4, 5)


def test_single_current_requires_pythagorean():
    with pytest.raises(ValueError):
        single_current_induced_weight(corpus.single_edge(HALF), OmegaPair.of())


def test_single_current_float_mode():
    g = corpus.single_edge(HALF)
    w = single_current_induced_weight(g, OmegaPair.of(), mode="float")
    assert w == pytest.approx(math.sqrt(0.75), rel=1e-12)


def test_single_current_total_is_even_polynomial(standard):
    # with y = 1/cosh J the induced weights sum to S_A
    for name in ("triangle", "four_cycle", "theta"):
        g = standard[name].with_weights([Fraction(3, 5)] * standard[name].edge_count)
        for a in ((), g.boundary_vertices[:2]):
            total = sum((single_current_induced_weight(g, om) for om in gamma_space(g, a)), Fraction(0))
            assert total == even_polynomial(g, a)


def test_convolution_single_edge():
    g = corpus.single_edge(Fraction(3, 5))
    dist = convolve_two_currents(g, ())
    assert dist == {OmegaPair.of(): Fraction(16, 25), OmegaPair.of((), (0,)): Fraction(9, 25)}
    assert convolve_two_currents(g, (0, 1)) == {OmegaPair.of((0,)): 1}


@pytest.mark.parametrize("name", ["triangle", "four_cycle", "path3"])
def test_convolution_matches_closed_form(standard, name):
    g = standard[name].with_weights([Fraction(3, 5)] * standard[name].edge_count)
    for a in ((), g.boundary_vertices[:2]):
        assert convolve_two_currents(g, a) == double_current_distribution(g, a)


def test_triangle_convolution_has_nine_points():
    g = corpus.triangle(Fraction(3, 5))
    assert len(convolve_two_currents(g, ())) == 9


# -- sampling ----------------------------------------------------------------------


def test_point_mass_sampler():
    g = corpus.single_edge()
    assert set(sample_double_current(g, (0, 1), 50, seed=1)) == {OmegaPair.of((0,))}
    assert set(sample_double_current(g, (0, 1), 5, seed=1, mode="mcmc")) == {OmegaPair.of((0,))}


def test_sampler_deterministic():
    g = corpus.four_cycle()
    assert sample_double_current(g, (0, 2), 200, seed=9) == sample_double_current(g, (0, 2), 200, seed=9)
    assert sample_double_current(g, (0, 2), 50, seed=9, mode="mcmc") == \
        sample_double_current(g, (0, 2), 50, seed=9, mode="mcmc")


def test_triangle_cycle_frequency():
    g = corpus.triangle(HALF)
    n = 100_000
    target = OmegaPair.of((0, 1, 2))
    p = double_current_distribution(g, ())[target]
    hits = sum(s == target for s in sample_double_current(g, (), n, seed=2024))
    se = math.sqrt(float(p) * (1 - float(p)) / n)
    assert abs(hits / n - float(p)) < 3 * se


def test_mcmc_reaches_every_state():
    for g, a in ((corpus.triangle(), ()), (corpus.four_cycle(), (0, 1, 2, 3)), (corpus.k4(), (0, 1))):
        states = {om.masks for om in gamma_space(g, a)}
        seen = set()
        chain = mcmc_chain(g, a, np.random.default_rng(5))
        for _ in range(200_000):
            seen.add(next(chain))
            if seen == states:
                break
        assert seen == states


def test_mcmc_matches_exact_law():
    g = corpus.triangle(HALF)
    exact = double_current_distribution(g, ())
    n = 20_000
    counts: dict = {}
    for s in sample_double_current(g, (), n, seed=11, mode="mcmc"):
        counts[s] = counts.get(s, 0) + 1
    for om, p in exact.items():
        p = float(p)
        # thinned samples are nearly independent; allow a wide margin
        assert abs(counts.get(om, 0) / n - p) < 5 * math.sqrt(p * (1 - p) / n) + 0.005


def test_samples_csv():
    g = corpus.four_cycle()
    samples = [OmegaPair.of((0, 2)), OmegaPair.of((0, 1, 2, 3))]
    buf = io.StringIO()
    write_samples_csv(buf, g, samples, [connected(0, 3)])
    lines = buf.getvalue().splitlines()
    assert lines[0] == "sample_index,omega1,omega2,0<->3"
    assert lines[1] == "0,0+2,,0"
    assert lines[2] == "1,0+1+2+3,,1"
