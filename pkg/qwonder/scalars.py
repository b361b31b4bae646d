"""
Exact scalars over the rational function field QQ(q)
q is always formal; numbers only appear through explicit evaluation.
"""
import logging
from fractions import Fraction

from sympy import QQ, Rational, Symbol

from .errors import UserInputError

logger = logging.getLogger(__name__)

Q_SYMBOL = Symbol('q')
FIELD = QQ.frac_field(Q_SYMBOL)
_FRAC = FIELD.field
_Q = _FRAC.gens[0]


def _to_qq(value):
    """Coerce int / Rational / Fraction-like into a QQ domain element"""
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Rational):
        return QQ(int(value.p), int(value.q))
    if hasattr(value, 'numerator') and hasattr(value, 'denominator'):
        return QQ(int(value.numerator), int(value.denominator))
    raise UserInputError(f"Cannot interpret {value!r} as an exact rational")


def _poly_terms(poly):
    """(exponent, QQ coefficient) pairs of a univariate sympy PolyElement"""
    return [(monom[0] if monom else 0, coeff) for monom, coeff in poly.items()]


class QLaurent:
    """Laurent polynomial in q with exact rational coefficients"""

    __slots__ = ('_coeffs', '_hash')

    def __init__(self, coeffs=None):
        clean = {}
        for exp, c in (coeffs or {}).items():
            c = _to_qq(c)
            if c:
                clean[int(exp)] = c
        self._coeffs = clean
        self._hash = None

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    def items(self):
        return sorted(self._coeffs.items(), reverse=True)

    def is_zero(self):
        return not self._coeffs

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, QQ.zero) + c
        return QLaurent(out)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, QQ.zero) + c1 * c2
        return QLaurent(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, QRational):
            return self.to_rational() == other
        try:
            other = _as_laurent(other)
        except UserInputError:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.items()))
        return self._hash

    def evaluate(self, value):
        value = _to_qq(value)
        total = QQ.zero
        for e, c in self._coeffs.items():
            if e < 0 and not value:
                raise UserInputError("Laurent polynomial has a pole at q=0")
            total += c * value ** e
        return QQ.to_sympy(total)

    def to_rational(self):
        value = _FRAC.zero
        for e, c in self._coeffs.items():
            value += _FRAC.ground_new(c) * _Q ** e
        return QRational._wrap(value)

    def to_text(self):
        return _laurent_text(self.items())

    def to_json(self):
        return [[e, str(QQ.to_sympy(c))] for e, c in self.items()]

    def __repr__(self):
        return f"QLaurent({self.to_text()})"


def _as_laurent(value):
    if isinstance(value, QLaurent):
        return value
    return QLaurent({0: value})


def _coeff_text(c):
    return str(QQ.to_sympy(c))


def _laurent_text(items):
    """Render [(exp, coeff)] (descending) as e.g. '3*q^2 - q^-1'"""
    if not items:
        return '0'
    parts = []
    for idx, (e, c) in enumerate(items):
        negative = c < 0
        mag = -c if negative else c
        if e == 0:
            body = _coeff_text(mag)
        else:
            power = 'q' if e == 1 else f"q^{e}"
            body = power if mag == 1 else f"{_coeff_text(mag)}*{power}"
        if idx == 0:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return ''.join(parts)


class QRational:
    """
    Element of QQ(q) kept in canonical (cancelled) form by sympy's fraction field.
    Hashable and immutable; the universal coefficient type of the package.
    """

    __slots__ = ('_value',)

    def __init__(self, value=0):
        self._value = _coerce_field(value)

    @classmethod
    def _wrap(cls, value):
        obj = object.__new__(cls)
        obj._value = value
        return obj

    @property
    def value(self):
        """Underlying sympy fraction-field element"""
        return self._value

    def is_zero(self):
        return not self._value

    def is_one(self):
        return self._value == _FRAC.one

    def __bool__(self):
        return bool(self._value)

    def __add__(self, other):
        other = _maybe_field(other)
        if other is None:
            return NotImplemented
        return QRational._wrap(self._value + other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe_field(other)
        if other is None:
            return NotImplemented
        return QRational._wrap(self._value - other)

    def __rsub__(self, other):
        other = _maybe_field(other)
        if other is None:
            return NotImplemented
        return QRational._wrap(other - self._value)

    def __mul__(self, other):
        other = _maybe_field(other)
        if other is None:
            return NotImplemented
        return QRational._wrap(self._value * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _maybe_field(other)
        if other is None:
            return NotImplemented
        if not other:
            raise UserInputError("Division by zero in QQ(q)")
        return QRational._wrap(self._value / other)

    def __rtruediv__(self, other):
        if not self._value:
            raise UserInputError("Division by zero in QQ(q)")
        return QRational._wrap(_coerce_field(other) / self._value)

    def __neg__(self):
        return QRational._wrap(-self._value)

    def __pow__(self, n):
        if n < 0 and not self._value:
            raise UserInputError("Zero has no inverse")
        return QRational._wrap(self._value ** int(n))

    def __eq__(self, other):
        other = _maybe_field(other)
        if other is None:
            return NotImplemented
        return self._value == other

    def __hash__(self):
        return hash(self._value)

    def _laurent_parts(self):
        """
        Canonical numerator/denominator as QLaurent pairs: the denominator's
        lowest term is q^0 with coefficient 1.
        """
        num = _poly_terms(self._value.numer)
        den = _poly_terms(self._value.denom)
        shift = min(e for e, _ in den)
        lead = [c for e, c in den if e == shift][0]
        num_l = QLaurent({e - shift: c / lead for e, c in num})
        den_l = QLaurent({e - shift: c / lead for e, c in den})
        return num_l, den_l

    def numerator(self):
        return self._laurent_parts()[0]

    def denominator(self):
        return self._laurent_parts()[1]

    def is_laurent(self):
        return len(self._value.denom) == 1

    def evaluate(self, value):
        """Exact value at q = value (a rational); raises on poles"""
        value = _to_qq(value)
        num = sum((c * value ** e for e, c in _poly_terms(self._value.numer)), QQ.zero)
        den = sum((c * value ** e for e, c in _poly_terms(self._value.denom)), QQ.zero)
        if not den:
            raise UserInputError(f"{self.to_text()} has a pole at q={QQ.to_sympy(value)}")
        return QQ.to_sympy(num / den)

    def to_text(self):
        num, den = self._laurent_parts()
        if den == QLaurent({0: 1}):
            return num.to_text()
        return f"({num.to_text()})/({den.to_text()})"

    def to_json(self):
        num, den = self._laurent_parts()
        return {'num': num.to_json(), 'den': den.to_json()}

    @classmethod
    def from_json(cls, data):
        def build(pairs):
            return QLaurent({int(e): Rational(c) for e, c in pairs}).to_rational()
        den = build(data['den'])
        if den.is_zero():
            raise UserInputError("Denominator must be nonzero")
        return build(data['num']) / den

    @classmethod
    def parse(cls, text):
        """Parse a scalar written in the expression grammar, e.g. '3*q^2 - q^-1'"""
        from .contexts import evaluate_scalar
        from .parser import parse
        return evaluate_scalar(parse(text))

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"QRational({self.to_text()})"


def _maybe_field(value):
    """Field element for scalar-like values, None for anything else"""
    if isinstance(value, (QRational, QLaurent, int, Rational, Fraction)) or isinstance(value, FIELD.dtype):
        return _coerce_field(value)
    return None


def _coerce_field(value):
    if isinstance(value, QRational):
        return value._value
    if isinstance(value, FIELD.dtype):
        return value
    if isinstance(value, QLaurent):
        return value.to_rational()._value
    return _FRAC.ground_new(_to_qq(value))


ZERO = QRational._wrap(_FRAC.zero)
ONE = QRational._wrap(_FRAC.one)
Q = QRational._wrap(_Q)


def q_power(k):
    """q^k as a QRational"""
    return QRational._wrap(_Q ** int(k))


def quantum_integer(n):
    """[n] = (q^n - q^-n)/(q - q^-1) expanded as a Laurent polynomial"""
    n = int(n)
    if n == 0:
        return QLaurent()
    sign = 1 if n > 0 else -1
    m = abs(n)
    return QLaurent({m - 1 - 2 * k: sign for k in range(m)})


def quantum_factorial(n):
    """[n]! = [1][2]...[n] as a QRational"""
    out = ONE
    for k in range(1, int(n) + 1):
        out = out * quantum_integer(k)
    return out


def eval_at_one(x):
    """Exact rational value of x at q = 1"""
    return QRational(x).evaluate(1)


def semiclassical_coefficient(x):
    """
    Value of x/(q-1) at q=1 for x vanishing at q=1.
    Uses the derivative of the numerator since the numerator has a root at 1.
    """
    x = QRational(x)
    num = _poly_terms(x.value.numer)
    den = _poly_terms(x.value.denom)
    den_at_one = sum((c for _, c in den), QQ.zero)
    num_at_one = sum((c for _, c in num), QQ.zero)
    if not den_at_one:
        raise UserInputError(f"{x.to_text()} has a pole at q=1")
    if num_at_one:
        raise UserInputError(f"{x.to_text()} does not vanish at q=1 (value {QQ.to_sympy(num_at_one / den_at_one)})")
    derivative = sum((e * c for e, c in num), QQ.zero)
    return QQ.to_sympy(derivative / den_at_one)


def as_scalar(value):
    """QRational for scalar-like values, None for anything else"""
    v = _maybe_field(value)
    return None if v is None else QRational._wrap(v)


def _signed_coefficient(c):
    """(negative, text) for a coefficient; text is '' for a unit coefficient"""
    if c.is_laurent():
        num = c.numerator()
        items = num.items()
        if len(items) == 1:
            e, v = items[0]
            negative = v < 0
            text = QLaurent({e: -v if negative else v}).to_text()
            return negative, ('' if text == '1' else text)
        return False, f"({num.to_text()})"
    return False, f"({c.to_text()})"


def format_linear_combination(pairs):
    """
    Render [(QRational, body)] as '1 + q^-1*b*c'
    An empty body stands for the unit.
    """
    parts = []
    for coeff, body in pairs:
        negative, text = _signed_coefficient(coeff)
        if text and body:
            term = f"{text}*{body}"
        else:
            term = text or body or '1'
        if not parts:
            parts.append(f"-{term}" if negative else term)
        else:
            parts.append(f" - {term}" if negative else f" + {term}")
    return ''.join(parts) or '0'
