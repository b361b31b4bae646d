import pytest

from qwonder.contexts import (
    CONTEXT_NAMES, as_element, describe, evaluate, get_context, specialize_for_display,
)
from qwonder.errors import ExpressionSyntaxError, UserInputError
from qwonder.ncalg import LocalizedElement, TensorElement
from qwonder.presentations import mat2, sl2
from qwonder.qgroups import MatrixCoefficient, UqElement, UqTensor, coefficient_to_element
from qwonder.reesgr import GrElement, ReesElement
from qwonder.scalars import Q


def test_context_names():
    assert 'uq_classical' not in CONTEXT_NAMES
    assert get_context('grD_classical').classical
    assert not get_context('gr0').subset.members
    with pytest.raises(UserInputError):
        get_context('gl3')


def test_sl2_normal_form():
    assert evaluate('d*a', 'sl2').to_text() == "1 + q^-1*b*c"
    assert evaluate('a*d - q*b*c', 'sl2') == 1


def test_scalars_stay_scalars():
    assert evaluate('q', 'sl2_classical') == 1
    assert evaluate('(q^2 - 1)/(q - 1)', 'mat2') == Q + 1


def test_gl2_inverts_the_determinant():
    assert evaluate('D^-1*D', 'gl2') == 1
    x = evaluate('a*D^-1', 'gl2')
    assert isinstance(x, LocalizedElement)
    assert x.power == 1


def test_negative_powers_need_an_inverse():
    with pytest.raises(UserInputError):
        evaluate('a^-1', 'sl2')
    with pytest.raises(UserInputError):
        evaluate('0^-1', 'sl2')


def test_division_is_by_scalars_only():
    assert evaluate('a/q', 'mat2') == Q ** -1 * mat2().gen('a')
    with pytest.raises(UserInputError):
        evaluate('a/b', 'mat2')
    with pytest.raises(UserInputError):
        evaluate('a/0', 'mat2')


def test_unknown_symbols():
    with pytest.raises(UserInputError):
        evaluate('x', 'mat2')
    with pytest.raises(UserInputError):
        evaluate('a', 'uq')
    with pytest.raises(UserInputError):
        evaluate('D', 'mat2')


def test_syntax_errors_pass_through():
    with pytest.raises(ExpressionSyntaxError):
        evaluate('a +', 'mat2')


def test_gr_contexts():
    assert evaluate('a*d', 'gr0') == evaluate('q*b*c', 'gr0')
    x = evaluate('a*d', 'grD')
    assert isinstance(x, GrElement)
    assert x.parts == {0: sl2().gen('a') * sl2().gen('d')}


def test_gr_wrappers_in_sl2():
    assert evaluate('gr[]{a}*gr[]{d}', 'sl2') == evaluate('q*gr[]{b*c}', 'sl2')
    with pytest.raises(UserInputError):
        evaluate('gr[]{a}', 'mat2')


def test_vinberg_context():
    assert evaluate('az*dz - q*bz*cz', 'vinberg') == ReesElement.z_power(2)
    assert evaluate('az', 'vinberg') == ReesElement.generator('a')
    with pytest.raises(UserInputError):
        evaluate('z', 'vinberg')
    with pytest.raises(UserInputError):
        evaluate('a', 'vinberg')


def test_matrix_coefficients():
    assert evaluate('c[1;0,0]', 'sl2') == sl2().gen('a')
    assert evaluate('c[2;0,0]', 'sl2') == coefficient_to_element(MatrixCoefficient(2, 0, 0))
    with pytest.raises(UserInputError):
        evaluate('c[1;0,0]', 'mat2')


def test_uq_context():
    E, F, K = UqElement.E(), UqElement.F(), UqElement.K()
    assert evaluate('E*F - F*E', 'uq') == (K - K ** -1) / (Q - Q ** -1)
    assert evaluate('E|K', 'uq') == UqTensor.pure(E, K)


def test_tensors():
    p = mat2()
    assert evaluate('a|b', 'mat2') == TensorElement.pure(p.gen('a'), p.gen('b'))
    assert evaluate('a|b|c', 'mat2').factors == (p, p, p)


def test_as_element_lifts_scalars():
    assert isinstance(as_element(Q, 'gl2'), LocalizedElement)
    assert isinstance(as_element(2, 'vinberg'), ReesElement)
    assert isinstance(as_element(2, 'gr0'), GrElement)
    assert as_element(2, 'uq') == UqElement.scalar(2)
    a = mat2().gen('a')
    assert as_element(a, 'mat2') is a


def test_specialize_for_display():
    x = evaluate('q*a + q^-1*b', 'mat2')
    p = mat2()
    assert specialize_for_display(x, 2) == 2 * p.gen('a') + p.gen('b') / 2
    with pytest.raises(UserInputError):
        specialize_for_display(object(), 2)


def test_describe():
    data = describe(evaluate('az', 'vinberg'), 'vinberg')
    assert data['vinberg'] == 'az'
    assert describe(evaluate('q', 'mat2_classical'), 'mat2_classical')['text'] == '1'
    assert describe(evaluate('a', 'mat2'), 'mat2')['text'] == 'a'
