import random
from fractions import Fraction
from math import comb

import pytest

from abeldyn import (
    Endomorphism,
    GradedAction,
    apply_Gr,
    compose,
    degree_sequence,
    delta,
    gr_correspondence,
    graded_action,
    graph,
    intersect,
    kunneth_projectors,
    lefschetz_number,
    lieberman_pushforward,
    multiplication_map,
    power,
    total_degree,
    transpose,
    transpose_graph,
)
from abeldyn.cli.sampling import SuiteParams, random_correspondence, random_endomorphism
from abeldyn.errors import InputError

from _oracles import E1, E2, E3, ECM1, ECM2, E1xE2, fixed_point_count

PARAMS = SuiteParams(entry_bound=2)


def test_graph_and_transpose_degrees_of_doubling():
    two = multiplication_map(2, E1)
    assert degree_sequence(transpose_graph(two)) == (4, 1)
    assert degree_sequence(graph(two)) == (1, 4)


def test_transpose_then_graph_is_degree_times_diagonal():
    two = multiplication_map(2, E1)
    assert compose(transpose_graph(two), graph(two)) == 4 * delta(E1)


def test_graphs_fuse_and_identities_drop():
    f = Endomorphism.from_integers(E2, [[1, 1], [0, 1]])
    assert compose(graph(f), graph(f)) == graph(f @ f)
    assert compose(graph(f), delta(E2)) == graph(f)
    assert transpose_graph(multiplication_map(1, E2)) == delta(E2)


def test_cm_example_degrees():
    phi = Endomorphism.diagonal(ECM2, [(1, 1), (1, 0)])
    assert degree_sequence(graph(phi)) == (2, 3, 4)
    assert total_degree(graph(phi)) == 12


@pytest.mark.parametrize("variety", [E1, E2, E3])
@pytest.mark.parametrize("m", [2, 3])
def test_lefschetz_number_of_multiplication(variety, m):
    assert lefschetz_number(graph(multiplication_map(m, variety))) == (m - 1) ** (2 * variety.n)


def test_intersections_on_curve():
    two = graph(multiplication_map(2, E1))
    assert intersect(two, two) == 0
    assert intersect(delta(E1), two) == 1


@pytest.mark.parametrize("variety", [E1, ECM1, E2])
def test_lefschetz_matches_brute_force_fixed_points(variety):
    rng = random.Random(11)
    checked = 0
    while checked < 4:
        f = random_endomorphism(variety, rng, 2)
        m = f.pullback.to_Matrix()
        det = abs(int((m - m.eye(m.rows)).det()))
        if det == 0 or det > (12 if variety.n > 1 else 40):
            continue
        assert lefschetz_number(graph(f)) == fixed_point_count(f)
        checked += 1


@pytest.mark.parametrize("variety", [E2, ECM2, E1xE2])
def test_transpose_is_poincare_adjoint(variety):
    rng = random.Random(5)
    for _ in range(5):
        c = random_correspondence(variety, rng, PARAMS)
        assert graded_action(transpose(c)) == graded_action(c).poincare_adjoint()
        assert transpose(transpose(c)) == c


@pytest.mark.parametrize("variety", [E2, ECM2, E1xE2])
def test_functoriality(variety):
    rng = random.Random(9)
    for _ in range(5):
        f = random_correspondence(variety, rng, PARAMS)
        g = random_correspondence(variety, rng, PARAMS)
        assert graded_action(compose(g, f)) == graded_action(f) @ graded_action(g)


def test_power_matches_action_power():
    rng = random.Random(2)
    c = random_correspondence(E2, rng, PARAMS)
    assert graded_action(power(c, 3)) == graded_action(c).power(3)
    assert power(c, 0) == delta(E2)


@pytest.mark.parametrize("r", [Fraction(1, 2), Fraction(2), Fraction(3, 5)])
def test_gr_scales_cohomology(r):
    rng = random.Random(3)
    c = random_correspondence(E2, rng, PARAMS)
    base = graded_action(c)
    assert graded_action(gr_correspondence(E2, r)) == GradedAction.scaling(base.model, r)
    assert apply_Gr(c, r) == GradedAction.scaling(base.model, r) @ base
    degs = degree_sequence(c)
    expected = sum(comb(2, j) * r ** (2 * j) * degs[j] for j in range(3))
    assert total_degree(compose(gr_correspondence(E2, r), c)) == expected


def test_gr_rejects_nonpositive_ratio():
    with pytest.raises(InputError):
        gr_correspondence(E1, 0)


def test_kunneth_projectors():
    radii = [Fraction(k) for k in (1, 2, 3)]
    projectors = kunneth_projectors(E1, radii)
    model = E1.cohomology
    for i, p in enumerate(projectors):
        for j in range(3):
            block = p[j].to_Matrix()
            if i == j:
                assert block == block.eye(model.dim(j))
            else:
                assert block.is_zero_matrix
    with pytest.raises(InputError):
        kunneth_projectors(E1, [1, 1, 2])


def test_lieberman_identity_on_doublings():
    # Γ_[n1]∘Γ_[n2]^T as the pushforward of Δ under ([n2], [n1])
    two, three = multiplication_map(2, E2), multiplication_map(3, E2)
    push = lieberman_pushforward(two, three, delta(E2))
    assert push == compose(graph(three), transpose_graph(two))
    expected = graded_action(transpose_graph(two)) @ graded_action(graph(three))
    assert graded_action(push) == expected


def test_effective_coefficients_required():
    with pytest.raises(InputError):
        Fraction(-1) * graph(multiplication_map(2, E1))
