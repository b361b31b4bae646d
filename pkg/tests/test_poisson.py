import pytest

from qwonder.contexts import gl2_localization
from qwonder.errors import UserInputError
from qwonder.poisson import (
    PoissonPresentation, bracket, bracket_with_inverse, filtration_compatible, localized_bracket,
    poisson_structure, rees_bracket, semiclassical_check, semiclassical_limit, semiclassical_pairs,
)
from qwonder.presentations import mat2, quantum_determinant, sl2, vinberg
from qwonder.reesgr import ReesElement


def test_generator_brackets_on_matrices():
    p = mat2(True)
    a, b, c, d = (p.gen(n) for n in 'abcd')
    assert bracket(a, b) == a * b
    assert bracket(b, a) == -(a * b)
    assert bracket(b, c).is_zero()
    assert bracket(a, d) == 2 * b * c


def test_leibniz_rule():
    p = sl2(True)
    a, b, c = p.gen('a'), p.gen('b'), p.gen('c')
    assert bracket(a * b, c) == a * bracket(b, c) + bracket(a, c) * b


def test_determinant_is_a_casimir():
    pp = poisson_structure('mat2')
    assert pp.is_casimir(quantum_determinant(mat2(True)))
    assert not pp.is_casimir(mat2(True).gen('a'))


def test_vinberg_structure_uses_renamed_generators():
    v = vinberg(True)
    assert bracket(v.gen('az'), v.gen('dz')) == 2 * v.gen('bz') * v.gen('cz')


def test_shipped_structures_satisfy_jacobi():
    for name in ('mat2', 'sl2', 'vinberg'):
        pp = poisson_structure(name)
        assert pp.jacobi_failures([pp.base.gen(g) for g in pp.base.generators]) == []


def test_classical_suffix_is_accepted():
    assert poisson_structure('sl2_classical') is poisson_structure('sl2')
    with pytest.raises(UserInputError):
        poisson_structure('gr_sl2')


def test_bad_tables_are_rejected():
    base = mat2(True)
    with pytest.raises(UserInputError, match="Jacobi"):
        PoissonPresentation(base, {('a', 'b'): {'b': 1}, ('b', 'c'): {'a': 1}})
    with pytest.raises(UserInputError, match="antisymmetric"):
        PoissonPresentation(base, {('a', 'b'): {'ab': 1}, ('b', 'a'): {'ab': 1}})
    with pytest.raises(UserInputError):
        PoissonPresentation(base, {('a', 'a'): {'b': 1}})
    with pytest.raises(UserInputError):
        PoissonPresentation(mat2(), {})


def test_bracket_rejects_foreign_elements():
    pp = poisson_structure('mat2')
    with pytest.raises(UserInputError):
        pp.bracket(sl2(True).gen('a'), mat2(True).gen('b'))


def test_rees_bracket():
    p = sl2(True)
    az, dz = ReesElement.generator('a', True), ReesElement.generator('d', True)
    assert rees_bracket(az, dz) == ReesElement({2: 2 * p.gen('b') * p.gen('c')})
    with pytest.raises(UserInputError):
        rees_bracket(ReesElement.generator('a'), ReesElement.generator('d'))


def test_bracket_with_an_inverse_of_the_determinant():
    pp = poisson_structure('mat2')
    loc = gl2_localization(True)
    assert bracket_with_inverse(pp, mat2(True).gen('a'), loc, 1).is_zero()


def test_localized_bracket():
    pp = poisson_structure('mat2')
    loc = gl2_localization(True)
    p = loc.base
    a, b = p.gen('a'), p.gen('b')
    x = loc.element(a, 1)
    y = loc.element(b)
    assert localized_bracket(pp, x, y) == loc.element(a * b, 1)
    with pytest.raises(UserInputError):
        localized_bracket(pp, a, y)


def test_filtration_compatibility():
    p = sl2(True)
    a, d = p.gen('a'), p.gen('d')
    assert filtration_compatible(a, d, 1, 1)
    with pytest.raises(UserInputError):
        filtration_compatible(a * d, d, 1, 1)


@pytest.mark.parametrize("x,y,limit", [('a', 'b', 'a*b'), ('a', 'd', '2*b*c'), ('b', 'c', '0')])
def test_semiclassical_limits_match_the_bracket(x, y, limit):
    result = semiclassical_check(x, y, 'mat2')
    assert result.passed
    assert result.to_json()['limit'].replace(' ', '') == limit


def test_semiclassical_limit_needs_a_quantum_presentation():
    p = sl2(True)
    with pytest.raises(UserInputError):
        semiclassical_limit(p.gen('a'), p.gen('b'))


def test_semiclassical_pairs():
    assert semiclassical_pairs('sl2') == [('a', 'b'), ('a', 'c'), ('a', 'd'), ('b', 'c'), ('b', 'd'), ('c', 'd')]
    assert semiclassical_pairs('vinberg')[0] == ('az', 'bz')
