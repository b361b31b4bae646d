import pytest
from hypothesis import given, settings, strategies as st

from qwonder.errors import UserInputError
from qwonder.lattice import SL2, RootSubset, Weight, WeightLattice, coset_class, dominance_leq, lower_set, quotient_leq

EMPTY = RootSubset.empty()


def test_weight_arithmetic():
    w = Weight.of(1, 2)
    assert w + Weight.of(0, 1) == Weight.of(1, 3)
    assert (w - w).is_zero()
    assert w.scale(2) == Weight.of(2, 4)
    assert (-w).to_json() == [-1, -2]
    assert str(Weight.of(3)) == '3'
    with pytest.raises(UserInputError):
        w + Weight.of(1)


def test_sl2_dominance_steps_by_the_root():
    assert dominance_leq(Weight.of(0), Weight.of(2))
    assert dominance_leq(Weight.of(1), Weight.of(5))
    assert not dominance_leq(Weight.of(1), Weight.of(2))
    assert not dominance_leq(Weight.of(4), Weight.of(2))


def test_sl2_lower_set():
    assert lower_set(Weight.of(4)) == {Weight.of(4), Weight.of(2), Weight.of(0)}
    assert lower_set(Weight.of(3)) == {Weight.of(3), Weight.of(1)}


def test_lower_set_needs_a_dominant_weight():
    with pytest.raises(UserInputError):
        lower_set(Weight.of(-1))


def test_delta_is_every_root():
    assert SL2.delta == RootSubset.of(1)
    assert WeightLattice.sl3().delta == RootSubset.of(1, 2)


def test_coset_classes_of_sl2():
    assert coset_class(Weight.of(5), EMPTY).representative == Weight.of(5)
    assert coset_class(Weight.of(5), SL2.delta).representative == Weight.of(1)
    assert coset_class(Weight.of(-4), SL2.delta).representative == Weight.of(0)
    assert SL2.in_sublattice(Weight.of(6), SL2.delta)
    assert not SL2.in_sublattice(Weight.of(6), EMPTY)


def test_quotient_order():
    low, high = coset_class(Weight.of(1), EMPTY), coset_class(Weight.of(3), EMPTY)
    assert quotient_leq(low, high)
    assert not quotient_leq(high, low)
    # modulo every root all weights of one parity are comparable both ways
    low, high = coset_class(Weight.of(1), SL2.delta), coset_class(Weight.of(3), SL2.delta)
    assert low == high
    assert quotient_leq(high, low)


def test_quotient_order_needs_matching_subsets():
    with pytest.raises(UserInputError):
        quotient_leq(coset_class(Weight.of(1), EMPTY), coset_class(Weight.of(1), SL2.delta))


def test_sl3_root_lattice():
    sl3 = WeightLattice.sl3()
    assert sl3.in_sublattice(Weight.of(1, 1), sl3.delta)
    assert not sl3.in_sublattice(Weight.of(1, 0), sl3.delta)
    assert sl3.dominance_leq(Weight.of(0, 0), Weight.of(1, 1))
    assert not sl3.dominance_leq(Weight.of(2, 0), Weight.of(1, 1))
    assert sl3.lower_set(Weight.of(1, 1)) == {Weight.of(0, 0), Weight.of(1, 1)}


def test_coset_representatives():
    assert [c.representative for c in SL2.coset_representatives(SL2.delta, 3)] == [Weight.of(0), Weight.of(1)]
    assert len(SL2.coset_representatives(EMPTY, 2)) == 5
    sl3 = WeightLattice.sl3()
    assert len(sl3.coset_representatives(sl3.delta, 2)) == 3


def test_subset_indices_are_checked():
    with pytest.raises(UserInputError):
        coset_class(Weight.of(1), RootSubset.of(2))


def test_dependent_roots_are_rejected():
    with pytest.raises(UserInputError):
        WeightLattice([(2, 0), (4, 0)])


@given(st.integers(min_value=-20, max_value=20))
def test_coset_representative_is_reduced(n):
    rep = coset_class(Weight.of(n), SL2.delta).representative
    assert rep.coords[0] in (0, 1)
    assert (n - rep.coords[0]) % 2 == 0


@given(st.integers(min_value=0, max_value=12), st.integers(min_value=0, max_value=12))
def test_dominance_is_parity_and_size(m, n):
    assert dominance_leq(Weight.of(m), Weight.of(n)) == (m <= n and (n - m) % 2 == 0)


def test_sl3_lower_set_reaches_past_the_largest_coordinate():
    sl3 = WeightLattice.sl3()
    expected = {Weight.of(0, 0), Weight.of(1, 1), Weight.of(2, 2), Weight.of(3, 0), Weight.of(0, 3)}
    assert sl3.lower_set(Weight.of(2, 2)) == expected
    assert sl3.dominance_leq(Weight.of(3, 0), Weight.of(2, 2))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=4), st.integers(min_value=0, max_value=4))
def test_sl3_lower_set_matches_a_wide_search(m, n):
    sl3 = WeightLattice.sl3()
    lam = Weight.of(m, n)
    box = 2 * (m + n) + 1
    wide = {Weight.of(i, j) for i in range(box) for j in range(box) if sl3.dominance_leq(Weight.of(i, j), lam)}
    assert sl3.lower_set(lam) == wide
