import pytest
from hypothesis import given, settings, strategies as st

from qwonder.errors import ExpressionSyntaxError
from qwonder.parser import Add, Gr, MatCoeff, Mul, Neg, Number, Power, Symbol, Tensor, parse, to_text


def test_identifiers_split_into_letters():
    assert parse("ab") == Mul((('*', Symbol('a')), ('*', Symbol('b'))))
    assert parse("2a") == Mul((('*', Number(2)), ('*', Symbol('a'))))


def test_precedence():
    tree = parse("a + b*c^2")
    assert tree == Add((('+', Symbol('a')),
                        ('+', Mul((('*', Symbol('b')), ('*', Power(Symbol('c'), 2)))))))


def test_negative_exponents():
    assert parse("q^-1") == Power(Symbol('q'), -1)
    assert parse("D^(-2)") == Power(Symbol('D'), -2)


def test_unary_minus():
    assert parse("-a*b") == Mul((('*', Neg(Symbol('a'))), ('*', Symbol('b'))))


def test_tensor_binds_tighter_than_product():
    tree = parse("2*a|b")
    assert tree == Mul((('*', Number(2)), ('*', Tensor((Symbol('a'), Symbol('b'))))))
    assert parse("a|b|c") == Tensor((Symbol('a'), Symbol('b'), Symbol('c')))


def test_matrix_coefficients():
    assert parse("c[2;0,1]") == MatCoeff(2, 0, 1)
    assert parse("bc[1;0,0]") == Mul((('*', Symbol('b')), ('*', MatCoeff(1, 0, 0))))


def test_gr_wrappers():
    assert parse("gr[1]{a*d}") == Gr((1,), Mul((('*', Symbol('a')), ('*', Symbol('d')))))
    assert parse("gr[]{b}") == Gr((), Symbol('b'))


def test_printer_output():
    assert to_text(parse("(a + b)*c")) == "(a + b)*c"
    assert to_text(parse("a|b")) == "(a)|(b)"
    assert to_text(parse("(a^2)^3")) == "(a^2)^3"


@pytest.mark.parametrize("text,line,column", [
    ("a + ", 1, 5),
    ("(a", 1, 3),
    ("a\n+ )", 2, 3),
    ("a $ b", 1, 3),
    ("", 1, 1),
    ("x[1]", 1, 2),
])
def test_syntax_errors_carry_positions(text, line, column):
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse(text)
    assert (excinfo.value.line, excinfo.value.column) == (line, column)


def test_exponent_must_be_an_integer():
    with pytest.raises(ExpressionSyntaxError):
        parse("a^b")


letters = st.sampled_from(list("abdqxyzEFKD"))
leaves = st.one_of(
    st.integers(min_value=0, max_value=99).map(Number),
    letters.map(Symbol),
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).map(lambda t: MatCoeff(*t)),
)


def _extend(children):
    ops = st.sampled_from(['*', '/'])
    signs = st.sampled_from(['+', '-'])
    return st.one_of(
        st.tuples(children, st.integers(-3, 5)).map(lambda t: Power(*t)),
        children.map(Neg),
        st.lists(st.tuples(ops, children), min_size=2, max_size=3)
          .map(lambda fs: Mul((('*', fs[0][1]),) + tuple(fs[1:]))),
        st.lists(st.tuples(signs, children), min_size=2, max_size=3)
          .map(lambda ts: Add((('+', ts[0][1]),) + tuple(ts[1:]))),
        st.lists(children, min_size=2, max_size=3).map(lambda fs: Tensor(tuple(fs))),
        st.tuples(st.sampled_from([(), (1,)]), children).map(lambda t: Gr(*t)),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(trees)
def test_print_then_parse_is_identity(tree):
    assert parse(to_text(tree)) == tree
