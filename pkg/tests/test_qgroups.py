import pytest
from hypothesis import given, settings, strategies as st

from qwonder import linalg
from qwonder.errors import UserInputError
from qwonder.ncalg import TensorElement
from qwonder.presentations import mat2, sl2, vinberg
from qwonder.qgroups import (
    IrrepVn, MatrixCoefficient, UqElement, UqTensor, act, antipode, cg_decompose, coefficient_coproduct,
    coefficient_to_element, coproduct, counit, filtration_dimension, hopf_failures, matrix_coefficient_rank,
    product_expansion, pw_component, pw_coordinates, pw_degree, specialize_coefficient, tensor_matrix, top_word,
    uq_antipode, uq_coproduct, uq_counit,
)
from qwonder.scalars import ONE, Q

E, F, K = UqElement.E(), UqElement.F(), UqElement.K()


def test_uq_relations():
    assert K * E == Q ** 2 * (E * K)
    assert K * F == Q ** -2 * (F * K)
    assert E * F - F * E == (K - K ** -1) / (Q - Q ** -1)
    assert K * K ** -1 == 1


def test_only_k_monomials_invert():
    with pytest.raises(UserInputError):
        E ** -1


def test_uq_hopf_maps():
    assert uq_coproduct(E) == UqTensor.pure(E, UqElement.one()) + UqTensor.pure(K, E)
    assert uq_counit(K) == 1
    assert uq_counit(E) == 0
    for x in (E, F, K, E * F):
        assert uq_coproduct(x).contract(uq_antipode) == UqElement.scalar(uq_counit(x))


def test_uq_coproduct_is_multiplicative():
    assert uq_coproduct(E * F) == uq_coproduct(E) * uq_coproduct(F)


def test_irrep_action():
    v1 = IrrepVn(1)
    assert act(F, v1, [1, 0]) == [0, 1]
    assert act(E, v1, [0, 1]) == [1, 0]
    assert act(K, v1, [1, 0]) == [Q, 0]
    v2 = IrrepVn(2)
    assert act(F * F, v2, [1, 0, 0]) == [0, 0, Q + Q ** -1]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_irreps_satisfy_the_relations(n):
    rep = IrrepVn(n)
    lhs = rep.matrix(E * F - F * E)
    rhs = rep.matrix((K - K ** -1) / (Q - Q ** -1))
    assert lhs == rhs


def test_clebsch_gordan_labels():
    assert cg_decompose(1, 1).labels() == [2, 0]
    assert cg_decompose(2, 1).labels() == [3, 1]
    assert cg_decompose(2, 2).labels() == [4, 2, 0]


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)])
def test_clebsch_gordan_maps_are_complementary(n, m):
    assert cg_decompose(n, m).check() == []


def test_coproduct_acts_on_tensor_products():
    x, y = E, F * K
    lhs = tensor_matrix(x * y, 1, 1)
    rhs = linalg.matmul(tensor_matrix(x, 1, 1), tensor_matrix(y, 1, 1))
    assert lhs == rhs


def test_low_matrix_coefficients():
    p = sl2()
    assert coefficient_to_element(MatrixCoefficient(1, 0, 0)) == p.gen('a')
    assert coefficient_to_element(MatrixCoefficient(1, 1, 0)) == p.gen('c')
    assert coefficient_to_element(MatrixCoefficient(0, 0, 0)) == 1
    with pytest.raises(UserInputError):
        MatrixCoefficient(1, 2, 0)


def test_top_words():
    p = sl2()
    assert top_word(2, 0, 0) == p.word('aa')
    assert top_word(2, 2, 2) == p.word('dd')
    assert top_word(2, 1, 1) == p.word('bc')


def test_matrix_coefficients_reach_their_top_word():
    for n in range(4):
        for i in range(n + 1):
            for j in range(n + 1):
                x = coefficient_to_element(MatrixCoefficient(n, i, j))
                assert not x.coefficient(top_word(n, i, j)).is_zero()
                assert x.max_length() == n


def test_peter_weyl_coordinates():
    p = sl2()
    assert pw_coordinates(p.gen('a')) == {1: {(0, 0): 1}}
    x = p.gen('d') * p.gen('a')
    coords = pw_coordinates(x)
    assert sorted(coords) == [0, 2]
    assert sum((pw_component(x, n) for n in coords), p.zero()) == x


def test_peter_weyl_degree_by_parity():
    p = sl2()
    x = p.gen('a') * p.gen('b') + p.gen('c')
    degrees = [(cls.representative.coords[0], n) for cls, n in pw_degree(x)]
    assert degrees == [(0, 2), (1, 1)]


def test_pw_needs_sl2():
    with pytest.raises(UserInputError):
        pw_coordinates(mat2().gen('a'))


@pytest.mark.parametrize("n,expected", [(0, 1), (1, 4), (2, 10), (3, 20)])
def test_filtration_dimensions(n, expected):
    assert filtration_dimension(n) == expected
    assert matrix_coefficient_rank(n) == expected


def test_product_expansion_reassembles_the_product():
    c1, c2 = MatrixCoefficient(1, 0, 0), MatrixCoefficient(1, 1, 1)
    expansion = product_expansion(c1, c2)
    assert set(expansion) == {(2, 1, 1), (0, 0, 0)}
    total = sl2().zero()
    for (nu, k, l), coeff in expansion.items():
        total = total + coefficient_to_element(MatrixCoefficient(nu, k, l)) * coeff
    assert total == coefficient_to_element(c1) * coefficient_to_element(c2)


def test_product_expansion_of_a_square():
    c = MatrixCoefficient(1, 0, 0)
    assert product_expansion(c, c) == {(2, 0, 0): ONE}


def test_matrix_coproduct():
    p = sl2()
    a, b, c = p.gen('a'), p.gen('b'), p.gen('c')
    assert coproduct(a) == TensorElement.pure(a, a) + TensorElement.pure(b, c)
    assert counit(a) == 1
    assert counit(b) == 0


def test_coefficient_coproduct_matches_the_matrix_coproduct():
    c = MatrixCoefficient(2, 0, 1)
    assert coefficient_coproduct(c) == coproduct(coefficient_to_element(c))


def test_vinberg_coproduct():
    v = vinberg()
    az, bz, cz = v.gen('az'), v.gen('bz'), v.gen('cz')
    assert coproduct(az) == TensorElement.pure(az, az) + TensorElement.pure(bz, cz)


def test_antipode():
    p = sl2()
    a, b, c, d = (p.gen(n) for n in 'abcd')
    assert antipode(a) == d
    assert antipode(b) == -(b / Q)
    assert antipode(a * b) == antipode(b) * antipode(a)
    with pytest.raises(UserInputError):
        antipode(mat2().gen('a'))


def test_hopf_axioms_on_sl2():
    p = sl2()
    for x in (p.gen('a') * p.gen('d'), p.gen('b') * p.gen('c') + Q * p.gen('a'), p.one()):
        assert hopf_failures(x) == []


def test_bialgebra_axioms_on_mat2():
    p = mat2()
    assert hopf_failures(p.gen('a') * p.gen('d') - p.gen('c')) == []


def test_specialize_coefficient():
    c = coefficient_to_element(MatrixCoefficient(2, 1, 1))
    classical = specialize_coefficient(c)
    assert classical == coefficient_to_element(MatrixCoefficient(2, 1, 1), classical=True)


sl2_words = st.lists(st.sampled_from('abcd'), min_size=0, max_size=3).map(''.join)


@settings(max_examples=25, deadline=None)
@given(st.lists(sl2_words, min_size=1, max_size=3))
def test_peter_weyl_components_sum_back(words):
    p = sl2()
    x = p.zero()
    for k, w in enumerate(words):
        x = x + p.monomial(w) * (k + 1)
    coords = pw_coordinates(x)
    assert sum((pw_component(x, n) for n in coords), p.zero()) == x
