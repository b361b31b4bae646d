from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings, strategies as st

from qwonder.errors import UserInputError
from qwonder.lattice import Weight
from qwonder.presentations import mat2, p1p1, sl2
from qwonder.projcat import (
    GradedModulePresentation, action_matrix, direct_sum, free_module, graded_dimensions, graded_piece,
    homomorphism_matrices, is_torsion, proj_equiv_check, quotient_module, shift,
)


@pytest.fixture
def free():
    return free_module(mat2())


@pytest.fixture
def augmentation(free):
    p = mat2()
    return quotient_module(free, [p.gen(n) for n in 'abcd'])


def test_free_module_pieces(free):
    assert graded_dimensions(free, [0, 1, 2]) == {Weight.of(0): 1, Weight.of(1): 4, Weight.of(2): 10}
    assert graded_piece(free, -1).dimension == 0


def test_shift_moves_generators_down(free):
    shifted = shift(free, 1)
    assert shifted.degree_of('e0') == Weight.of(-1)
    assert graded_piece(shifted, 0).dimension == 4


def test_quotient_by_a_generator(free):
    m = quotient_module(free, [mat2().gen('a')])
    assert graded_piece(m, 1).dimension == 3
    assert graded_piece(m, 2).dimension == 6
    basis = graded_piece(m, 1).basis_text(m)
    assert len(basis) == 3
    assert 'e0*a' not in basis


def test_relations_must_be_homogeneous(free):
    p = mat2()
    with pytest.raises(UserInputError):
        quotient_module(free, [p.gen('a') + p.gen('a') * p.gen('b')])


def test_bare_relations_need_a_cyclic_module(free):
    with pytest.raises(UserInputError):
        quotient_module(direct_sum(free, free), [mat2().gen('a')])


def test_module_construction_errors():
    with pytest.raises(UserInputError):
        free_module(sl2())
    with pytest.raises(UserInputError):
        GradedModulePresentation(mat2(), [('e', 0), ('e', 1)])
    with pytest.raises(UserInputError):
        GradedModulePresentation(mat2(), [('e', 0)], [{'f': mat2().gen('a')}])


def test_direct_sum_labels(free, augmentation):
    total = direct_sum(free, augmentation)
    assert total.labels == ['0.e0', '1.e0']
    assert graded_piece(total, 0).dimension == 2
    assert graded_piece(total, 1).dimension == 4


def test_bigraded_modules():
    m = free_module(p1p1(), degrees=[(0, 0)])
    assert graded_piece(m, (1, 1)).dimension == 4
    with pytest.raises(UserInputError):
        graded_piece(m, 1)


def test_action_matrix(free):
    p = mat2()
    assert action_matrix(free, 0, p.gen('a')) == [[1], [0], [0], [0]]
    with pytest.raises(UserInputError):
        action_matrix(free, 0, sl2().gen('a'))


def test_augmentation_module_is_torsion(augmentation):
    certificate = is_torsion(augmentation, 0, 4)
    assert certificate.verdict == 'torsion'
    assert certificate.witness_degree == Weight.of(1)
    assert certificate.to_json()['verdict'] == 'torsion'


def test_free_module_is_not_torsion(free):
    certificate = is_torsion(free, 0, 4)
    assert certificate.verdict == 'not_torsion'
    assert all(n > 0 for _, n in certificate.checked)


def test_band_base_must_be_reachable():
    m = free_module(mat2(), degrees=[2])
    with pytest.raises(UserInputError):
        is_torsion(m, 0, 4)


def test_torsion_starting_above_the_origin(free):
    p = mat2()
    squares = quotient_module(free, [x * y for x in (p.gen(n) for n in 'abcd') for y in (p.gen(n) for n in 'abcd')])
    certificate = is_torsion(squares, 0, 4)
    assert certificate.verdict == 'torsion'
    assert certificate.witness_degree == Weight.of(2)
    assert certificate.checked[:2] == [(Weight.of(0), 1), (Weight.of(1), 4)]


@settings(max_examples=8, deadline=None)
@given(st.integers(min_value=1, max_value=3))
def test_shifted_torsion_module_vanishes_past_its_generator(s):
    p = mat2()
    m = shift(quotient_module(free_module(p), [p.gen(n) for n in 'abcd']), -s)
    with pytest.raises(UserInputError):
        is_torsion(m, 0, 4)
    certificate = is_torsion(m, s, 4)
    assert certificate.verdict == 'torsion'
    assert certificate.witness_degree == Weight.of(s + 1)
    assert certificate.checked[0] == (Weight.of(s), 1)
    assert set(graded_dimensions(m, range(s + 1, s + 4)).values()) == {0}


def test_adding_a_torsion_summand_is_invisible_in_proj(free, augmentation):
    source = direct_sum(free, augmentation)
    images = {'0.e0': {'e0': mat2().one()}, '1.e0': {}}
    high = homomorphism_matrices(source, free, images, [1, 2])
    assert proj_equiv_check(source, free, high, 1)
    low = homomorphism_matrices(source, free, images, [0, 1, 2])
    assert not proj_equiv_check(source, free, low, 0)


def test_proj_equiv_check_rejects_misshapen_maps(free):
    with pytest.raises(UserInputError):
        proj_equiv_check(free, free, {1: [[1]]}, 1)


def test_homomorphism_images_must_have_the_right_degree(free):
    with pytest.raises(UserInputError):
        homomorphism_matrices(free, free, {'e0': {'e0': mat2().gen('a')}}, [0, 1])


def test_module_files(free):
    m = GradedModulePresentation.from_json({
        'algebra': 'mat2',
        'generators': [{'label': 'e0', 'degree': 0}],
        'relations': [{'e0': 'a'}],
    })
    assert graded_piece(m, 1).dimension == 3
    again = GradedModulePresentation.from_json(m.to_json())
    assert graded_piece(again, 2).dimension == 6


def test_module_files_over_vinberg():
    m = GradedModulePresentation.from_json({
        'algebra': 'vinberg',
        'generators': [{'label': 'e', 'degree': 0}],
        'relations': [{'e': 'az'}],
    })
    assert graded_piece(m, 1).dimension == 3


def test_module_files_need_a_parsing_context():
    with pytest.raises(UserInputError):
        GradedModulePresentation.from_json({
            'algebra': 'gr_sl2',
            'generators': [{'label': 'e', 'degree': 0}],
            'relations': [{'e': 'a'}],
        })


def test_graded_pieces_are_shared_across_threads(augmentation):
    degrees = [0, 1, 2, 3] * 4
    with ThreadPoolExecutor(max_workers=4) as executor:
        dims = list(executor.map(lambda d: graded_piece(augmentation, d).dimension, degrees))
    assert dims == [1, 0, 0, 0] * 4
    assert graded_piece(augmentation, 2) is graded_piece(augmentation, 2)
