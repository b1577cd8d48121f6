from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from euclidtower.exact_linalg import (
    GF,
    QQ,
    Cyclotomic,
    DimensionMismatch,
    DomainError,
    ExactMatrix,
    FpElement,
    cyclotomics,
    inverse,
    jordan_block,
    kernel_basis,
    matmul,
    matrix_power,
    random_invertible,
    rank,
)


def test_rank_over_q():
    m = ExactMatrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2


def test_rank_depends_on_field():
    # det = 2: invertible over Q, singular over F_2
    m = [[1, 1], [1, -1]]
    assert rank(ExactMatrix(m)) == 2
    assert rank(ExactMatrix(m, GF(2))) == 1


def test_kernel_over_f2():
    f2 = GF(2)
    m = ExactMatrix([[1, 1, 0], [0, 1, 1]], f2)
    ker = kernel_basis(m)
    assert len(ker) == 1
    assert [x.value for x in ker[0]] == [1, 1, 1]


def test_kernel_vectors_are_annihilated():
    m = ExactMatrix([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1]])
    ker = kernel_basis(m)
    assert len(ker) == 4 - rank(m)
    for v in ker:
        for row in m.tolist():
            assert sum(a * b for a, b in zip(row, v)) == 0


def test_jordan_block_powers():
    j = jordan_block(3)
    assert [rank(matrix_power(j, k)) for k in range(4)] == [3, 2, 1, 0]
    assert matrix_power(j, 3) == ExactMatrix.zeros(3)


def test_random_invertible_is_seeded_and_invertible():
    a = random_invertible(4, seed=7)
    assert a == random_invertible(4, seed=7)
    assert rank(a) == 4
    assert matmul(a, inverse(a)) == ExactMatrix.identity(4)


def test_fractions_stay_exact():
    m = ExactMatrix([[Fraction(1, 3), 1], [1, 3]])
    assert rank(m) == 1


def test_dimension_and_domain_errors():
    with pytest.raises(DimensionMismatch):
        matmul(ExactMatrix([[1, 2]]), ExactMatrix([[1, 2]]))
    with pytest.raises(DomainError):
        FpElement(1, 2) + FpElement(1, 3)
    with pytest.raises(DomainError):
        QQ(FpElement(1, 2))
    with pytest.raises(DomainError):
        rank(ExactMatrix([[Cyclotomic(3, [1])]], cyclotomics(3)))
    with pytest.raises(ValueError):
        GF(4)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_roots_of_unity_sum_to_zero(p):
    total = sum((Cyclotomic.zeta_power(p, k) for k in range(p)), Cyclotomic(p))
    assert total == 0
    assert Cyclotomic.zeta_power(p, 1) * Cyclotomic.zeta_power(p, p - 1) == 1


def test_cyclotomic_division_roundtrip():
    z = Cyclotomic.zeta_power(5, 1)
    x = 3 + 2 * z - z * z * Fraction(1, 2)
    assert (x / x) == 1
    assert (x * x.inverse()) == 1
    assert str(Cyclotomic(3, [Fraction(1, 2), -1])) == "1/2 - z"


small_ints = st.integers(min_value=-3, max_value=3)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=4, max_size=4),
    st.integers(min_value=0, max_value=10_000),
)
def test_rank_invariant_under_invertible_change_of_basis(rows, seed):
    m = ExactMatrix(rows)
    p = random_invertible(4, seed)
    q = random_invertible(4, seed + 1)
    assert rank(matmul(matmul(p, m), q)) == rank(m)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small_ints, min_size=5, max_size=5), min_size=1, max_size=4))
def test_rank_nullity(rows):
    m = ExactMatrix(rows)
    assert rank(m) + len(kernel_basis(m)) == 5
