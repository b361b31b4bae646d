import pytest
from hypothesis import given, settings, strategies as st

from qwonder.errors import UserInputError
from qwonder.lattice import Weight
from qwonder.ncalg import TensorElement
from qwonder.presentations import gr_sl2, mat2, p1p1, quantum_determinant, sl2, vinberg
from qwonder.qgroups import MatrixCoefficient, coefficient_coproduct, coefficient_to_element
from qwonder.reesgr import (
    DELTA, EMPTY, FilteredAlgebra, GrElement, OrbitAlgebraElement, ReesElement, gr_multiply, gr_to_homogeneous,
    gr_to_p1p1, level_membership, matq_to_vinberg, phi, phi_element, phi_multiplicativity_check, rees_coproduct,
    rees_counit, rees_multiply, rees_to_vinberg, vI_basis, vinberg_to_matq, vinberg_to_rees,
)
from qwonder.scalars import ONE, Q


def _rees(name):
    return ReesElement.generator(name)


def test_level_membership():
    p = sl2()
    a, d = p.gen('a'), p.gen('d')
    assert level_membership(a, 1)
    assert level_membership(a * d, 2)
    assert level_membership(a, 3)
    assert not level_membership(a, 2)
    assert not level_membership(a * d, 1)
    assert level_membership(p.one(), Weight.of(2))


def test_filtered_multiplication_adds_levels():
    f = FilteredAlgebra()
    a, b = f.base.gen('a'), f.base.gen('b')
    assert f.multiply(a, b) == a * b
    assert f.contains(a * b, 2)


def test_z_alone_is_not_in_the_rees_algebra():
    with pytest.raises(UserInputError):
        ReesElement.z_power(1)
    with pytest.raises(UserInputError):
        ReesElement({0: sl2().gen('a')})


def test_rees_products():
    az, bz, cz, dz = (_rees(n) for n in 'abcd')
    assert rees_multiply(az, dz) - Q * rees_multiply(bz, cz) == ReesElement.z_power(2)
    assert (az * dz).parts[2] == sl2().gen('a') * sl2().gen('d')
    assert ReesElement.z_power(2) * az == ReesElement({3: sl2().gen('a')})


def test_vinberg_matrix_identification():
    det = quantum_determinant(mat2())
    assert vinberg_to_matq(ReesElement.z_power(2)) == det
    assert matq_to_vinberg(det) == ReesElement.z_power(2)
    assert vinberg_to_matq(_rees('b')) == mat2().gen('b')
    x = _rees('a') * _rees('d') + ReesElement.z_power(4) + _rees('c')
    assert matq_to_vinberg(vinberg_to_matq(x)) == x


def test_vinberg_presentation_round_trip():
    v = vinberg()
    assert rees_to_vinberg(_rees('a')) == v.gen('az')
    assert rees_to_vinberg(ReesElement.z_power(2)) == quantum_determinant(v)
    y = v.gen('dz') * v.gen('az')
    assert vinberg_to_rees(y) == _rees('d') * _rees('a')


def test_matq_to_vinberg_needs_mat2():
    with pytest.raises(UserInputError):
        matq_to_vinberg(sl2().gen('a'))


def test_rees_bialgebra_maps():
    v = vinberg()
    az, bz, cz = v.gen('az'), v.gen('bz'), v.gen('cz')
    assert rees_coproduct(_rees('a')) == TensorElement.pure(az, az) + TensorElement.pure(bz, cz)
    assert rees_counit(_rees('a')) == 1
    assert rees_counit(_rees('b')) == 0
    assert rees_counit(ReesElement.z_power(2)) == 1


def test_gr_empty_relation():
    a, b, c, d = (GrElement.from_element(EMPTY, sl2().gen(n), 1) for n in 'abcd')
    assert a * d == Q * (b * c)
    assert d * a == Q ** -1 * (b * c)
    assert c * b == b * c
    assert a * b == Q * (b * a)


def test_gr_delta_keeps_everything():
    p = sl2()
    a, d = GrElement.from_element(DELTA, p.gen('a'), 1), GrElement.from_element(DELTA, p.gen('d'), 1)
    assert a * d == GrElement.from_element(DELTA, p.gen('a') * p.gen('d'))
    assert (a * d).parts == {0: p.gen('a') * p.gen('d')}


def test_gr_levels_are_checked():
    with pytest.raises(UserInputError):
        GrElement.from_element(EMPTY, sl2().gen('a') * sl2().gen('d'), 1)
    with pytest.raises(UserInputError):
        GrElement.from_element(EMPTY, mat2().gen('a'), 1)


def test_gr_subsets_must_match():
    x = GrElement.from_element(EMPTY, sl2().gen('a'), 1)
    y = GrElement.from_element(DELTA, sl2().gen('a'), 1)
    with pytest.raises(UserInputError):
        x * y
    with pytest.raises(UserInputError):
        gr_multiply(DELTA, x, x)


def test_gr_to_homogeneous_quotient():
    g = gr_sl2()
    a, d = (GrElement.from_element(EMPTY, sl2().gen(n), 1) for n in 'ad')
    assert gr_to_homogeneous(a * d) == Q * (g.gen('b') * g.gen('c'))
    with pytest.raises(UserInputError):
        gr_to_homogeneous(GrElement.one(DELTA))


def test_gr_to_p1p1():
    t = p1p1()
    a, d = (GrElement.from_element(EMPTY, sl2().gen(n), 1) for n in 'ad')
    assert gr_to_p1p1(a) == t.gen('x') * t.gen('u')
    lhs = gr_to_p1p1(a * d)
    rhs = gr_to_p1p1(a) * gr_to_p1p1(d)
    assert lhs == rhs


def test_vI_basis():
    assert vI_basis(2, EMPTY) == [[ONE, 0, 0]]
    assert len(vI_basis(2, DELTA)) == 3


def test_phi_on_generators():
    p = sl2()
    a = p.gen('a')
    assert phi(EMPTY, MatrixCoefficient(1, 0, 0)) == TensorElement.pure(a, a)
    c = MatrixCoefficient(2, 1, 0)
    assert phi(DELTA, c) == coefficient_coproduct(c)


def test_phi_element_of_a_gr_class():
    x = GrElement.from_element(EMPTY, sl2().gen('b'), 1)
    assert phi_element(x) == TensorElement.pure(sl2().gen('a'), sl2().gen('b'))


@pytest.mark.parametrize("subset", [EMPTY, DELTA])
def test_phi_is_multiplicative_on_low_coefficients(subset):
    c1 = MatrixCoefficient(1, 0, 1)
    c2 = MatrixCoefficient(1, 1, 0)
    assert phi_multiplicativity_check(subset, c1, c2)
    assert phi_multiplicativity_check(subset, c1, c1)


def test_orbit_algebra_weights():
    g = GrElement.from_element(DELTA, sl2().gen('a'), 1)
    x = OrbitAlgebraElement.pure(g, Weight.of(2))
    assert x.lambda_degrees() == [Weight.of(3)]
    assert (x * x).lambda_degrees() == [Weight.of(6)]
    with pytest.raises(UserInputError):
        OrbitAlgebraElement.pure(GrElement.from_element(EMPTY, sl2().gen('a'), 1), Weight.of(2))


def test_orbit_algebra_product_moves_the_root_part_into_kappa():
    p = sl2()
    a, d = p.gen('a'), p.gen('d')
    x = OrbitAlgebraElement.pure(GrElement.from_element(DELTA, a, 1), Weight.of(2))
    y = OrbitAlgebraElement.pure(GrElement.from_element(DELTA, d, 1), Weight.of(-2))
    product = x * y
    assert product == OrbitAlgebraElement.pure(GrElement.from_element(DELTA, a * d, 2), Weight.of(2))
    assert product.lambda_degrees() == [Weight.of(2)]


def _orbit_coefficient(subset, n, i, j, shift):
    c = coefficient_to_element(MatrixCoefficient(n, i, j))
    kappa = Weight.of(2 * shift if subset.members else 0)
    return OrbitAlgebraElement.pure(GrElement.from_element(subset, c, n), kappa)


orbit_coefficients = st.integers(min_value=0, max_value=2).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, n), st.integers(0, n), st.integers(-2, 2)))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([EMPTY, DELTA]), orbit_coefficients, orbit_coefficients)
def test_orbit_algebra_degrees_add(subset, first, second):
    x, y = _orbit_coefficient(subset, *first), _orbit_coefficient(subset, *second)
    [dx], [dy] = x.lambda_degrees(), y.lambda_degrees()
    product = x * y
    if product.parts:
        assert product.lambda_degrees() == [dx + dy]


def test_coefficients_inside_gr():
    c = coefficient_to_element(MatrixCoefficient(2, 0, 0))
    x = GrElement.from_element(EMPTY, c, 2)
    assert x.parts == {2: c}
