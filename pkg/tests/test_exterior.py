from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from abeldyn._linalg import matrix
from abeldyn.errors import InputError, NotIsogenyError
from abeldyn.exterior import (
    CohomologyModel,
    GradedClass,
    exterior_power_matrix,
    integrate,
    poincare_gram,
    poincare_pairing,
    pushforward_matrix,
    wedge,
)


def test_betti_numbers():
    assert CohomologyModel(2).betti == (1, 4, 6, 4, 1)
    assert CohomologyModel(3).betti == tuple(comb(6, i) for i in range(7))


def test_theta_square_on_surface():
    model = CohomologyModel(2)
    assert model.theta_power(2) == 2 * model.orientation


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_theta_top_power_integrates_to_factorial(n):
    model = CohomologyModel(n)
    assert integrate(model.theta_power(n)) == factorial(n)


def test_anticommutation():
    model = CohomologyModel(1)
    assert model.b(1) ^ model.a(1) == -(model.a(1) ^ model.b(1))
    assert model.a(1) ^ model.a(1) == GradedClass.zero(2)


def test_pairing_rejects_non_complementary_degrees():
    model = CohomologyModel(2)
    with pytest.raises(InputError):
        poincare_pairing(model.a(1), model.a(2))


def test_dimension_cap():
    with pytest.raises(InputError):
        CohomologyModel(5)
    assert CohomologyModel(5, allow_large=True).dim(5) == comb(10, 5)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_poincare_gram_is_signed_permutation(n):
    for degree in range(2 * n + 1):
        rows = poincare_gram(2 * n, degree).to_Matrix().tolist()
        for row in rows:
            assert sorted(abs(x) for x in row)[-1] == 1
            assert sum(1 for x in row if x) == 1
        cols = list(zip(*rows))
        assert all(sum(1 for x in c if x) == 1 for c in cols)


small = st.integers(min_value=-3, max_value=3)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=16, max_size=16), st.lists(small, min_size=16, max_size=16),
       st.integers(min_value=0, max_value=4))
def test_compound_matrix_is_multiplicative(a, b, degree):
    A = matrix([a[4 * i: 4 * i + 4] for i in range(4)])
    B = matrix([b[4 * i: 4 * i + 4] for i in range(4)])
    assert exterior_power_matrix(A * B, degree) == exterior_power_matrix(A, degree) * exterior_power_matrix(B, degree)


def test_pushforward_of_multiplication_by_two():
    two = matrix([[2, 0], [0, 2]])
    assert pushforward_matrix(two, 1) == matrix([[2, 0], [0, 2]])
    assert pushforward_matrix(two, 0) == matrix([[4]])
    with pytest.raises(NotIsogenyError):
        pushforward_matrix(matrix([[1, 1], [1, 1]]), 1)


def test_wedge_is_associative_on_samples():
    model = CohomologyModel(2)
    x = model.a(1) + 2 * model.b(2)
    y = model.theta
    z = model.a(2) - model.b(1)
    assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))
    # z has degree 1 and x∧y degree 3, so moving z to the front costs (-1)^3
    assert integrate(x ^ y ^ z) == -integrate(z ^ x ^ y)


def test_pairing_vector_matches_gram():
    model = CohomologyModel(2)
    cls = GradedClass.from_vector(4, 2, [Fraction(i + 1) for i in range(6)])
    vec = model.pairing_vector(cls, 2)
    direct = [poincare_pairing(GradedClass.monomial(4, idx), cls) for idx in model.basis(2)]
    assert list(vec) == direct
