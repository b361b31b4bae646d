"""
EXPRESSION PARSER
Recursive-descent parser and printer for the element grammar:

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/' | juxtaposition) unary)*
    unary   := '-' unary | tensor
    tensor  := power ('|' power)*
    power   := atom ['^' exponent]
    atom    := NUMBER | letter | 'c[' n ';' i ',' j ']' | 'gr[' I ']{' sum '}' | '(' sum ')'

Identifiers are split into single-letter symbols, so 'ab' means a*b.
The printer is the inverse of the parser on every tree it produces.
"""
import logging
from dataclasses import dataclass
from typing import Tuple, Union

from .errors import ExpressionSyntaxError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Number:
    value: int


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class MatCoeff:
    """Matrix coefficient c[n;i,j] of the irreducible module of highest weight n"""
    n: int
    row: int
    col: int


@dataclass(frozen=True)
class Power:
    base: 'Node'
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: 'Node'


@dataclass(frozen=True)
class Mul:
    factors: Tuple[Tuple[str, 'Node'], ...]


@dataclass(frozen=True)
class Add:
    terms: Tuple[Tuple[str, 'Node'], ...]


@dataclass(frozen=True)
class Tensor:
    factors: Tuple['Node', ...]


@dataclass(frozen=True)
class Gr:
    subset: Tuple[int, ...]
    body: 'Node'


Node = Union[Number, Symbol, MatCoeff, Power, Neg, Mul, Add, Tensor, Gr]

ATOMS = (Number, Symbol, MatCoeff, Gr)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_PUNCT = {'+', '-', '*', '/', '^', '|', '(', ')', '[', ']', '{', '}', ';', ','}


def tokenize(text):
    """Split text into tokens; letters become one token each"""
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == '\n':
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token('NUMBER', text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            follows_bracket = j < n and text[j] == '['
            if follows_bracket and word == 'gr':
                tokens.append(Token('GR', word, line, col))
            elif follows_bracket and word.endswith('c'):
                for k, letter in enumerate(word[:-1]):
                    tokens.append(Token('IDENT', letter, line, col + k))
                tokens.append(Token('COEF', 'c', line, col + len(word) - 1))
            elif follows_bracket:
                raise ExpressionSyntaxError(f"Unexpected '[' after '{word}'", line, col + len(word))
            else:
                for k, letter in enumerate(word):
                    tokens.append(Token('IDENT', letter, line, col + k))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ExpressionSyntaxError(f"Unexpected character '{ch}'", line, col)
    tokens.append(Token('EOF', '', line, col))
    return tokens


class ExpressionParser:
    """Recursive-descent parser over a token list"""

    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self):
        return self.tokens[self.pos]

    def _advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _expect(self, kind):
        tok = self.current
        if tok.kind != kind:
            found = tok.text or 'end of input'
            raise ExpressionSyntaxError(f"Expected '{kind}' but found '{found}'", tok.line, tok.column)
        return self._advance()

    def parse(self):
        if self.current.kind == 'EOF':
            raise ExpressionSyntaxError("Empty expression", self.current.line, self.current.column)
        node = self._sum()
        if self.current.kind != 'EOF':
            tok = self.current
            raise ExpressionSyntaxError(f"Unexpected '{tok.text}'", tok.line, tok.column)
        return node

    def _sum(self):
        terms = [('+', self._product())]
        while self.current.kind in ('+', '-'):
            op = self._advance().kind
            terms.append((op, self._product()))
        if len(terms) == 1:
            return terms[0][1]
        return Add(tuple(terms))

    def _starts_atom(self):
        return self.current.kind in ('NUMBER', 'IDENT', 'COEF', 'GR', '(')

    def _product(self):
        factors = [('*', self._unary())]
        while True:
            if self.current.kind in ('*', '/'):
                op = self._advance().kind
                factors.append((op, self._unary()))
            elif self._starts_atom():
                factors.append(('*', self._unary()))
            else:
                break
        if len(factors) == 1:
            return factors[0][1]
        return Mul(tuple(factors))

    def _unary(self):
        if self.current.kind == '-':
            self._advance()
            return Neg(self._unary())
        return self._tensor()

    def _tensor(self):
        factors = [self._power()]
        while self.current.kind == '|':
            self._advance()
            factors.append(self._power())
        if len(factors) == 1:
            return factors[0]
        return Tensor(tuple(factors))

    def _power(self):
        base = self._atom()
        if self.current.kind != '^':
            return base
        self._advance()
        return Power(base, self._exponent())

    def _exponent(self):
        wrapped = self.current.kind == '('
        if wrapped:
            self._advance()
        sign = 1
        if self.current.kind == '-':
            self._advance()
            sign = -1
        value = sign * int(self._expect('NUMBER').text)
        if wrapped:
            self._expect(')')
        return value

    def _int(self):
        sign = 1
        if self.current.kind == '-':
            self._advance()
            sign = -1
        return sign * int(self._expect('NUMBER').text)

    def _atom(self):
        tok = self.current
        if tok.kind == 'NUMBER':
            self._advance()
            return Number(int(tok.text))
        if tok.kind == 'IDENT':
            self._advance()
            return Symbol(tok.text)
        if tok.kind == 'COEF':
            self._advance()
            self._expect('[')
            n = self._int()
            self._expect(';')
            i = self._int()
            self._expect(',')
            j = self._int()
            self._expect(']')
            return MatCoeff(n, i, j)
        if tok.kind == 'GR':
            self._advance()
            self._expect('[')
            members = []
            if self.current.kind != ']':
                members.append(self._int())
                while self.current.kind == ',':
                    self._advance()
                    members.append(self._int())
            self._expect(']')
            self._expect('{')
            body = self._sum()
            self._expect('}')
            return Gr(tuple(sorted(set(members))), body)
        if tok.kind == '(':
            self._advance()
            node = self._sum()
            self._expect(')')
            return node
        found = tok.text or 'end of input'
        raise ExpressionSyntaxError(f"Unexpected '{found}'", tok.line, tok.column)


def parse(text):
    """Parse an expression into a syntax tree"""
    return ExpressionParser(text).parse()


def to_text(node):
    """Print a syntax tree so that parse(to_text(node)) == node"""
    if isinstance(node, Number):
        return str(node.value)
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, MatCoeff):
        return f"c[{node.n};{node.row},{node.col}]"
    if isinstance(node, Gr):
        return f"gr[{','.join(str(m) for m in node.subset)}]{{{to_text(node.body)}}}"
    if isinstance(node, Power):
        base = to_text(node.base)
        if not isinstance(node.base, ATOMS):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Tensor):
        return '|'.join(f"({to_text(f)})" for f in node.factors)
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        if isinstance(node.operand, (Mul, Add)):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Mul):
        parts = []
        for idx, (op, factor) in enumerate(node.factors):
            text = to_text(factor)
            if isinstance(factor, (Mul, Add)):
                text = f"({text})"
            parts.append(text if idx == 0 else f"{op}{text}")
        return ''.join(parts)
    if isinstance(node, Add):
        parts = []
        for idx, (op, term) in enumerate(node.terms):
            text = to_text(term)
            if isinstance(term, Add):
                text = f"({text})"
            parts.append(text if idx == 0 else f" {op} {text}")
        return ''.join(parts)
    raise TypeError(f"Not a syntax tree node: {node!r}")
