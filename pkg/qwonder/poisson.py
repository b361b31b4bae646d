"""
Classical Poisson brackets
Quadratic bracket on O(Mat2), O(SL2) and the classical Vinberg algebra,
its Leibniz extension, the rule for brackets with inverses of a central
element, and the comparison with the first-order term of quantum commutators.
"""
import logging
import threading
from dataclasses import dataclass
from itertools import combinations_with_replacement

from cachetools import LRUCache, cached

from .errors import InvariantViolation, UserInputError
from .ncalg import AlgebraElement, LocalizedElement
from .presentations import VINBERG_NAMES, get_presentation
from .reesgr import ReesElement, level_membership
from .scalars import ZERO, QRational, semiclassical_coefficient

logger = logging.getLogger(__name__)

# {x, y} on the matrix entries, written as (coefficient, word) sums
MATRIX_TABLE = {
    ('a', 'b'): [(1, 'ab')],
    ('a', 'c'): [(1, 'ac')],
    ('b', 'c'): [],
    ('b', 'd'): [(1, 'bd')],
    ('c', 'd'): [(1, 'cd')],
    ('a', 'd'): [(2, 'bc')],
}


class PoissonPresentation:
    """A commutative (q = 1) presentation with a bracket table on generator pairs"""

    def __init__(self, base, table, check_jacobi=True):
        if not base.classical:
            raise UserInputError(f"Poisson brackets live on q = 1 presentations, not {base.name}")
        self.base = base
        self._table = {}
        for (x, y), value in table.items():
            if not isinstance(value, AlgebraElement):
                value = base.element({base.word(w): c for w, c in value.items()})
            i, j = base.word(x)[0], base.word(y)[0]
            if i == j and not value.is_zero():
                raise UserInputError(f"{{{x},{x}}} must vanish")
            if (j, i) in self._table and self._table[(j, i)] != -value:
                raise UserInputError(f"Bracket table is not antisymmetric on {x}, {y}")
            self._table[(i, j)] = value
            self._table[(j, i)] = -value
        if check_jacobi:
            failures = self.jacobi_failures([base.gen(g) for g in base.generators])
            if failures:
                raise UserInputError(f"Bracket table violates the Jacobi identity on {failures[0]}")
        logger.debug(f"Poisson structure on {base.name} with {len(table)} table entries")

    def generator_bracket(self, i, j):
        return self._table.get((i, j), self.base.zero())

    def _word_bracket(self, u, v):
        p = self.base
        out = {}
        for s, x in enumerate(u):
            for t, y in enumerate(v):
                value = self.generator_bracket(x, y)
                if value.is_zero():
                    continue
                rest = u[:s] + u[s + 1:] + v[:t] + v[t + 1:]
                for w, c in value.terms().items():
                    out[rest + w] = out.get(rest + w, ZERO) + c
        return AlgebraElement(p, out)

    def bracket(self, x, y):
        """Bilinear, antisymmetric Leibniz extension of the table"""
        for z in (x, y):
            if z.presentation != self.base:
                raise UserInputError(f"Bracket on {self.base.name} applied to an element of {z.presentation.name}")
        out = self.base.zero()
        for u, cu in x.terms().items():
            for v, cv in y.terms().items():
                if u and v:
                    out = out + self._word_bracket(u, v) * (cu * cv)
        return out

    def jacobi_failures(self, elements):
        """Triples (by text) where {x,{y,z}} + {y,{z,x}} + {z,{x,y}} does not vanish"""
        failures = []
        for x, y, z in combinations_with_replacement(elements, 3):
            total = (self.bracket(x, self.bracket(y, z)) + self.bracket(y, self.bracket(z, x))
                     + self.bracket(z, self.bracket(x, y)))
            if not total.is_zero():
                failures.append((x.to_text(), y.to_text(), z.to_text()))
        return failures

    def is_casimir(self, x):
        return all(self.bracket(x, self.base.gen(g)).is_zero() for g in self.base.generators)


def _matrix_table(names):
    return {(names[x], names[y]): {tuple(names[ch] for ch in word): c for c, word in value}
            for (x, y), value in MATRIX_TABLE.items()}


def poisson_structure(name):
    """Shipped Poisson structure: 'mat2', 'sl2' or 'vinberg' (always at q = 1)"""
    name = name[:-len('_classical')] if name.endswith('_classical') else name
    if name not in ('mat2', 'sl2', 'vinberg'):
        raise UserInputError(f"No Poisson structure is shipped for '{name}'")
    return _build_structure(name)


@cached(cache=LRUCache(maxsize=8), lock=threading.Lock())
def _build_structure(name):
    base = get_presentation(f"{name}_classical")
    names = VINBERG_NAMES if name == 'vinberg' else {g: g for g in 'abcd'}
    return PoissonPresentation(base, _matrix_table(names))


def bracket(x, y):
    """{x, y} on the shipped structure of x's presentation"""
    return poisson_structure(x.presentation.name).bracket(x, y)


def rees_bracket(x, y):
    """{f z^n, g z^m} = {f, g} z^(n+m) on the classical Rees algebra"""
    if not (x.classical and y.classical):
        raise UserInputError("The Rees bracket is defined at q = 1")
    pp = poisson_structure('sl2')
    x, y = x.validated(), y.validated()
    out = {}
    for n, f in x.parts.items():
        for m, g in y.parts.items():
            value = pp.bracket(f, g)
            out[n + m] = out[n + m] + value if n + m in out else value
    result = ReesElement(out, pp.base, check=False)
    for n, f in result.parts.items():
        if not level_membership(f, n):
            raise InvariantViolation(f"Bracket left filtration level {n}")
    return result


def bracket_with_inverse(pp, x, loc, k):
    """{x, r^-k} = -k r^(-k-1) {x, r}"""
    r = loc.inverted
    return LocalizedElement(loc, pp.bracket(x, r) * (-k), k + 1)


def localized_bracket(pp, x, y):
    """
    Bracket on the localization at a central element r:
    {f r^-k, g r^-l} = {f, g} r^(-k-l) + (k f {g, r} - l g {f, r}) r^(-k-l-1)
    """
    if not isinstance(x, LocalizedElement) or not isinstance(y, LocalizedElement):
        raise UserInputError("localized_bracket expects localized elements")
    loc = x.localization
    r = loc.inverted
    if y.localization.inverted != r:
        raise UserInputError("Localized elements invert different elements")
    if r.presentation != pp.base:
        raise UserInputError("Localization is not over the Poisson presentation")
    f, k = x.numerator, x.power
    g, l = y.numerator, y.power
    first = LocalizedElement(loc, pp.bracket(f, g), k + l)
    second = LocalizedElement(loc, f * pp.bracket(g, r) * k - g * pp.bracket(f, r) * l, k + l + 1)
    return first + second


def filtration_compatible(x, y, n, m):
    """{x, y} lies in level n + m of O(SL2) when x, y lie in levels n and m"""
    if not (level_membership(x, n) and level_membership(y, m)):
        raise UserInputError(f"Inputs are not in levels {n} and {m}")
    return level_membership(poisson_structure('sl2').bracket(x, y), n + m)


@dataclass
class SemiclassicalResult:
    x: str
    y: str
    commutator: AlgebraElement
    limit: AlgebraElement
    expected: AlgebraElement

    @property
    def passed(self):
        return self.limit == self.expected

    def to_json(self):
        return {'x': self.x, 'y': self.y,
                'commutator': self.commutator.to_text(),
                'limit': self.limit.to_text(),
                'bracket': self.expected.to_text(),
                'passed': self.passed}


def semiclassical_limit(x, y):
    """lim_{q -> 1} (xy - yx)/(q - 1), as an element of the q = 1 presentation"""
    p = x.presentation
    if p.classical:
        raise UserInputError("The semiclassical limit needs a quantum presentation")
    target = get_presentation(f"{p.name}_classical")
    commutator = x * y - y * x
    terms = {}
    for w, c in commutator.terms().items():
        try:
            terms[w] = QRational(semiclassical_coefficient(c))
        except UserInputError as e:
            raise InvariantViolation(f"Commutator of {x.to_text()} and {y.to_text()} is not O(q-1): {e}") from e
    return commutator, AlgebraElement(target, terms)


def semiclassical_check(x_name, y_name, presentation='sl2'):
    """Compare the semiclassical limit of [x, y] with the classical bracket {x, y}"""
    p = get_presentation(presentation)
    x, y = p.gen(x_name), p.gen(y_name)
    commutator, limit = semiclassical_limit(x, y)
    pp = poisson_structure(p.name)
    expected = pp.bracket(pp.base.gen(x_name), pp.base.gen(y_name))
    result = SemiclassicalResult(x_name, y_name, commutator, limit, expected)
    logger.debug(f"Semiclassical {{{x_name},{y_name}}} in {p.name}: {limit.to_text()} "
                 f"({'ok' if result.passed else 'MISMATCH'})")
    return result


def semiclassical_pairs(presentation):
    names = [VINBERG_NAMES[g] for g in 'abcd'] if presentation.startswith('vinberg') else list('abcd')
    return [(names[i], names[j]) for i in range(4) for j in range(i + 1, 4)]
