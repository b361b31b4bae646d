"""
Rewriting-based noncommutative algebras
Presentations by generators and oriented rules, normal forms, confluence
checking, gradings, central localization and Veronese extraction.
"""
import heapq
import logging
import operator
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from cachetools import LRUCache, cachedmethod

from . import linalg
from .engine_config import EngineConfig
from .errors import InvariantViolation, StepBudgetExceeded, UserInputError
from .lattice import Weight
from .scalars import ONE, Q, ZERO, QRational, as_scalar, format_linear_combination

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Tuple[Tuple[Word, QRational], ...]


@dataclass
class Ambiguity:
    """An overlap or inclusion of rule left-hand sides whose two reductions disagree"""
    word: str
    kind: str
    first_rule: int
    second_rule: int
    first_result: 'AlgebraElement'
    second_result: 'AlgebraElement'

    def to_json(self):
        return {
            'word': self.word,
            'kind': self.kind,
            'rules': [self.first_rule, self.second_rule],
            'first_result': self.first_result.to_text(),
            'second_result': self.second_result.to_text(),
        }


class Presentation:
    """
    Algebra given by generators and rewriting rules lhs -> rhs.

    The monomial order is weighted degree first, then lexicographic on the
    generator order. Every rule must strictly decrease in that order.
    """

    def __init__(self, name, generators, rules, weights=None, grading=None, validate=True, classical=False):
        self.name = name
        self.classical = classical
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise UserInputError(f"Duplicate generators in {name}")
        self._index = {g: i for i, g in enumerate(self.generators)}
        weights = weights or {}
        self.weights = tuple(int(weights.get(g, 1)) for g in self.generators)
        if any(w <= 0 for w in self.weights):
            raise UserInputError("Order weights must be positive")
        self.grading = None
        if grading is not None:
            missing = [g for g in self.generators if g not in grading]
            if missing:
                raise UserInputError(f"Grading misses generators {missing}")
            self.grading = tuple(g if isinstance(g, Weight) else Weight.of(g)
                                 for g in (grading[name] for name in self.generators))
        self.rules = tuple(self._make_rule(lhs, rhs) for lhs, rhs in rules)
        if validate:
            self._validate()
        self._by_first: Dict[int, List[Rule]] = {}
        for rule in self.rules:
            self._by_first.setdefault(rule.lhs[0], []).append(rule)
        self._nf_cache = LRUCache(maxsize=EngineConfig.get_cache_size())
        self._nf_lock = threading.Lock()
        self._words_cache = {}
        self._words_lock = threading.Lock()
        logger.debug(f"Presentation {name}: {len(self.generators)} generators, {len(self.rules)} rules")

    # -- construction -------------------------------------------------

    def word(self, spec):
        """Word from a tuple of names/indices or a string of generator names"""
        if isinstance(spec, str):
            spec = spec.split() if ' ' in spec.strip() else (list(spec) if spec not in self._index else [spec])
        out = []
        for item in spec:
            if isinstance(item, int):
                if not 0 <= item < len(self.generators):
                    raise UserInputError(f"Generator index {item} out of range for {self.name}")
                out.append(item)
            elif item in self._index:
                out.append(self._index[item])
            else:
                raise UserInputError(f"Unknown symbol '{item}' for {self.name}")
        return tuple(out)

    def _make_rule(self, lhs, rhs):
        lhs = self.word(lhs)
        if not lhs:
            raise UserInputError("Rule left-hand side must be nonempty")
        terms = {}
        for w, c in dict(rhs).items():
            w = self.word(w)
            c = QRational(c)
            if not c.is_zero():
                terms[w] = terms.get(w, ZERO) + c
        ordered = tuple(sorted(((w, c) for w, c in terms.items() if not c.is_zero()),
                               key=lambda wc: self.order_key(wc[0])))
        return Rule(lhs, ordered)

    def _validate(self):
        for idx, rule in enumerate(self.rules):
            for w, _ in rule.rhs:
                if self.order_key(w) >= self.order_key(rule.lhs):
                    raise UserInputError(
                        f"Rule {idx} ({self.word_text(rule.lhs)}) does not decrease: "
                        f"{self.word_text(w) or '1'} is not smaller")
        for i, r1 in enumerate(self.rules):
            for j, r2 in enumerate(self.rules):
                if i != j and _find(r1.lhs, r2.lhs):
                    raise UserInputError(
                        f"Rule left-hand sides are nested: {self.word_text(r2.lhs)} in {self.word_text(r1.lhs)}")

    @classmethod
    def from_text(cls, text):
        """
        Build a presentation from the declarative format:

            presentation mat2
            generators a b c d
            order a=1 b=1 c=1 d=1
            grading a=1 b=1 c=1 d=1
            rule ba -> q^-1*ab

        Generators are single letters; right-hand sides use the expression grammar.
        """
        from .parser import parse
        name, generators, weights, grading, raw_rules = None, None, {}, None, []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            keyword, _, rest = line.partition(' ')
            rest = rest.strip()
            if keyword == 'presentation':
                name = rest
            elif keyword == 'generators':
                generators = rest.split()
            elif keyword == 'order':
                weights = {k: int(v) for k, v in _pairs(rest, lineno)}
            elif keyword == 'grading':
                grading = {k: Weight.of(*(int(x) for x in v.split(','))) for k, v in _pairs(rest, lineno)}
            elif keyword == 'rule':
                lhs, arrow, rhs = rest.partition('->')
                if not arrow:
                    raise UserInputError(f"Line {lineno}: rule needs '->'")
                raw_rules.append((lhs.replace(' ', ''), rhs.strip(), lineno))
            else:
                raise UserInputError(f"Line {lineno}: unknown keyword '{keyword}'")
        if not name or not generators:
            raise UserInputError("Presentation text needs 'presentation' and 'generators' lines")
        if any(len(g) != 1 for g in generators):
            raise UserInputError("Presentation text supports single-letter generators only")
        rules = []
        for lhs, rhs, lineno in raw_rules:
            try:
                terms = _evaluate_free(parse(rhs), generators)
            except UserInputError as e:
                raise UserInputError(f"Line {lineno}: {e}") from e
            rules.append((tuple(lhs), terms))
        return cls(name, generators, rules, weights=weights, grading=grading)

    def to_text(self):
        lines = [f"presentation {self.name}", f"generators {' '.join(self.generators)}"]
        if any(w != 1 for w in self.weights):
            lines.append('order ' + ' '.join(f"{g}={w}" for g, w in zip(self.generators, self.weights)))
        if self.grading is not None:
            lines.append('grading ' + ' '.join(f"{g}={','.join(str(c) for c in d.coords)}"
                                               for g, d in zip(self.generators, self.grading)))
        for rule in self.rules:
            rhs = format_linear_combination([(c, self.word_expression(w)) for w, c in rule.rhs])
            lines.append(f"rule {''.join(self.generators[i] for i in rule.lhs)} -> {rhs}")
        return '\n'.join(lines) + '\n'

    def renamed(self, mapping, name):
        """Same rules with generators renamed"""
        new_gens = [mapping.get(g, g) for g in self.generators]
        rules = [(tuple(new_gens[i] for i in r.lhs),
                  {tuple(new_gens[i] for i in w): c for w, c in r.rhs}) for r in self.rules]
        weights = dict(zip(new_gens, self.weights))
        grading = dict(zip(new_gens, self.grading)) if self.grading is not None else None
        return Presentation(name, new_gens, rules, weights=weights, grading=grading, classical=self.classical)

    # -- identity -----------------------------------------------------

    def _signature(self):
        return (self.name, self.generators, self.rules, self.weights, self.grading, self.classical)

    @property
    def q(self):
        """The deformation parameter as seen by this presentation (1 when classical)"""
        return ONE if self.classical else Q

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self is other or self._signature() == other._signature()

    def __hash__(self):
        return hash((self.name, self.generators))

    def __repr__(self):
        return f"Presentation({self.name})"

    # -- words --------------------------------------------------------

    def order_key(self, word):
        return (sum(self.weights[i] for i in word), word)

    def _heap_key(self, word):
        return (-sum(self.weights[i] for i in word), tuple(-i for i in word))

    def word_text(self, word):
        """Word as 'a^2 b' (JSON schema)"""
        parts = []
        for gen, run in _runs(word):
            name = self.generators[gen]
            parts.append(name if run == 1 else f"{name}^{run}")
        return ' '.join(parts)

    def word_expression(self, word):
        """Word in the expression grammar, e.g. 'a^2*b'"""
        parts = []
        for gen, run in _runs(word):
            name = self.generators[gen]
            if len(name) == 1:
                parts.append(name if run == 1 else f"{name}^{run}")
            else:
                parts.extend([name] * run)
        return '*'.join(parts)

    @property
    def is_graded(self):
        return self.grading is not None

    def degree(self, word):
        if self.grading is None:
            raise UserInputError(f"Presentation {self.name} is not graded")
        total = Weight((0,) * self.grading[0].rank)
        for i in word:
            total = total + self.grading[i]
        return total

    def _leftmost_match(self, word):
        for pos, letter in enumerate(word):
            for rule in self._by_first.get(letter, ()):
                end = pos + len(rule.lhs)
                if word[pos:end] == rule.lhs:
                    return pos, rule
        return None

    # -- normal forms -------------------------------------------------

    def _rewrite(self, terms):
        """Exhaustive leftmost rewriting, largest words first so like terms merge"""
        budget = EngineConfig.get_step_budget()
        steps = 0
        pending = {}
        heap = []
        result = {}

        def push(word, coeff):
            if word in pending:
                pending[word] = pending[word] + coeff
            else:
                pending[word] = coeff
                heapq.heappush(heap, (self._heap_key(word), word))

        for w, c in terms.items():
            push(w, c)
        while heap:
            _, word = heapq.heappop(heap)
            coeff = pending.pop(word)
            if coeff.is_zero():
                continue
            match = self._leftmost_match(word)
            if match is None:
                result[word] = result.get(word, ZERO) + coeff
                continue
            steps += 1
            if steps > budget:
                raise StepBudgetExceeded(
                    f"Normal form in {self.name} exceeded {budget} rewrite steps; the rules may not terminate")
            pos, rule = match
            prefix, suffix = word[:pos], word[pos + len(rule.lhs):]
            for rw, rc in rule.rhs:
                push(prefix + rw + suffix, coeff * rc)
        return {w: c for w, c in result.items() if not c.is_zero()}

    @cachedmethod(operator.attrgetter('_nf_cache'), lock=operator.attrgetter('_nf_lock'))
    def _reduce_word(self, word):
        return tuple(self._rewrite({word: ONE}).items())

    def normal_form_terms(self, terms):
        """Normal form of a linear combination {word: coeff}"""
        out = {}
        for w, c in terms.items():
            c = QRational(c)
            if c.is_zero():
                continue
            for nw, nc in self._reduce_word(tuple(w)):
                out[nw] = out.get(nw, ZERO) + c * nc
        return {w: c for w, c in out.items() if not c.is_zero()}

    def apply_rule_at(self, rule, word, pos):
        """One rewriting step with the given rule at the given position, then normal form"""
        prefix, suffix = word[:pos], word[pos + len(rule.lhs):]
        return AlgebraElement(self, {prefix + rw + suffix: rc for rw, rc in rule.rhs})

    def normal_words(self, length):
        """All normal words of the given length, in increasing order"""
        length = int(length)
        with self._words_lock:
            cached = self._words_cache.get(length)
        if cached is not None:
            return cached
        if length == 0:
            words = [()]
        else:
            words = []
            for w in self.normal_words(length - 1):
                for g in range(len(self.generators)):
                    candidate = w + (g,)
                    if not any(candidate[-len(r.lhs):] == r.lhs
                               for r in self.rules if len(r.lhs) <= len(candidate)):
                        words.append(candidate)
            words.sort(key=self.order_key)
        with self._words_lock:
            self._words_cache.setdefault(length, words)
        return words

    # -- elements -----------------------------------------------------

    def element(self, terms=None):
        return AlgebraElement(self, terms or {})

    def one(self):
        return AlgebraElement(self, {(): ONE}, normalized=True)

    def zero(self):
        return AlgebraElement(self, {}, normalized=True)

    def scalar(self, value):
        return AlgebraElement(self, {(): QRational(value)})

    def gen(self, name):
        return AlgebraElement(self, {self.word(name): ONE})

    def monomial(self, spec, coeff=1):
        return AlgebraElement(self, {self.word(spec): QRational(coeff)})


def _pairs(text, lineno):
    out = []
    for item in text.split():
        key, eq, value = item.partition('=')
        if not eq:
            raise UserInputError(f"Line {lineno}: expected name=value, got '{item}'")
        out.append((key, value))
    return out


def _runs(word):
    runs = []
    for g in word:
        if runs and runs[-1][0] == g:
            runs[-1][1] += 1
        else:
            runs.append([g, 1])
    return [(g, n) for g, n in runs]


def _find(haystack, needle):
    """All start positions of needle inside haystack"""
    n = len(needle)
    return [i for i in range(len(haystack) - n + 1) if haystack[i:i + n] == needle]


def _evaluate_free(node, generators):
    """Evaluate a syntax tree in the free algebra on single-letter generators"""
    from . import parser as ast

    def scalar_of(terms):
        if set(terms) - {()}:
            raise UserInputError("Division and negative powers apply to scalars only")
        value = terms.get((), ZERO)
        if value.is_zero():
            raise UserInputError("Division by zero")
        return value

    def mul(x, y):
        out = {}
        for w1, c1 in x.items():
            for w2, c2 in y.items():
                out[w1 + w2] = out.get(w1 + w2, ZERO) + c1 * c2
        return out

    def walk(n):
        if isinstance(n, ast.Number):
            return {(): QRational(n.value)}
        if isinstance(n, ast.Symbol):
            if n.name == 'q':
                return {(): Q}
            if n.name not in generators:
                raise UserInputError(f"Unknown symbol '{n.name}'")
            return {(n.name,): ONE}
        if isinstance(n, ast.Neg):
            return {w: -c for w, c in walk(n.operand).items()}
        if isinstance(n, ast.Add):
            out = {}
            for op, term in n.terms:
                for w, c in walk(term).items():
                    out[w] = out.get(w, ZERO) + (c if op == '+' else -c)
            return out
        if isinstance(n, ast.Mul):
            out = {(): ONE}
            for op, factor in n.factors:
                value = walk(factor)
                if op == '/':
                    value = {(): ONE / scalar_of(value)}
                out = mul(out, value)
            return out
        if isinstance(n, ast.Power):
            base = walk(n.base)
            if n.exponent < 0:
                base = {(): ONE / scalar_of(base)}
            out = {(): ONE}
            for _ in range(abs(n.exponent)):
                out = mul(out, base)
            return out
        raise UserInputError(f"Unsupported construct in a rule: {type(n).__name__}")

    return {w: c for w, c in walk(node).items() if not c.is_zero()}


class AlgebraElement:
    """Sparse linear combination of normal words of a presentation"""

    __slots__ = ('presentation', '_terms', '_hash')

    def __init__(self, presentation, terms=None, normalized=False):
        self.presentation = presentation
        terms = {tuple(w): QRational(c) for w, c in (terms or {}).items()}
        if normalized:
            self._terms = {w: c for w, c in terms.items() if not c.is_zero()}
        else:
            self._terms = presentation.normal_form_terms(terms)
        self._hash = None

    def _new(self, terms):
        return AlgebraElement(self.presentation, terms, normalized=True)

    def _same(self, other):
        if self.presentation != other.presentation:
            raise UserInputError(
                f"Presentation mismatch: {self.presentation.name} vs {other.presentation.name}")

    def terms(self):
        return dict(self._terms)

    def items(self):
        """(word, coeff) pairs in increasing monomial order"""
        key = self.presentation.order_key
        return sorted(self._terms.items(), key=lambda wc: key(wc[0]))

    def words(self):
        return [w for w, _ in self.items()]

    def coefficient(self, word):
        if not isinstance(word, tuple) or (word and not isinstance(word[0], int)):
            word = self.presentation.word(word)
        return self._terms.get(word, ZERO)

    def is_zero(self):
        return not self._terms

    def is_scalar(self):
        return set(self._terms) <= {()}

    def scalar_part(self):
        return self._terms.get((), ZERO)

    def max_length(self):
        """Length of the longest word, -1 for zero"""
        return max((len(w) for w in self._terms), default=-1)

    def lengths(self):
        return sorted({len(w) for w in self._terms})

    def part_of_length(self, length):
        return self._new({w: c for w, c in self._terms.items() if len(w) == length})

    def degrees(self):
        return sorted({self.presentation.degree(w) for w in self._terms}, key=lambda d: d.coords)

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        degrees = self.degrees()
        if len(degrees) != 1:
            raise UserInputError("Element is not homogeneous")
        return degrees[0]

    def map_coefficients(self, fn):
        return self._new({w: fn(c) for w, c in self._terms.items()})

    def __add__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            other = self.presentation.scalar(scalar)
        elif not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, ZERO) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement) and as_scalar(other) is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            return self._new({w: c * scalar for w, c in self._terms.items()})
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return NotImplemented

    def __rmul__(self, other):
        scalar = as_scalar(other)
        if scalar is None:
            return NotImplemented
        return self._new({w: scalar * c for w, c in self._terms.items()})

    def __truediv__(self, other):
        scalar = as_scalar(other)
        if scalar is None:
            return NotImplemented
        return self * (ONE / scalar)

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise UserInputError("Negative powers are only defined in a localization")
        out = self.presentation.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            other = self.presentation.scalar(scalar)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.presentation == other.presentation and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def to_text(self):
        p = self.presentation
        return format_linear_combination([(c, p.word_expression(w)) for w, c in self.items()])

    def to_json(self):
        p = self.presentation
        return {'terms': [{'coeff': c.to_json(), 'word': p.word_text(w)} for w, c in self.items()]}

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"AlgebraElement({self.presentation.name}: {self.to_text()})"


def normal_form(p, x):
    """Normal form of a word spec, a {word: coeff} map or an element"""
    if isinstance(x, AlgebraElement):
        if x.presentation != p:
            raise UserInputError(f"Presentation mismatch: {x.presentation.name} vs {p.name}")
        return AlgebraElement(p, x._terms)
    if isinstance(x, dict):
        return AlgebraElement(p, {p.word(w): c for w, c in x.items()})
    return AlgebraElement(p, {p.word(x): ONE})


def multiply(x, y):
    """Normal form of the product x*y"""
    x._same(y)
    out = {}
    for w1, c1 in x._terms.items():
        for w2, c2 in y._terms.items():
            w = w1 + w2
            out[w] = out.get(w, ZERO) + c1 * c2
    return AlgebraElement(x.presentation, out)


def check_local_confluence(p):
    """Every overlap and inclusion ambiguity of the rules whose reductions disagree"""
    failures = []
    checked = 0
    for i, r1 in enumerate(p.rules):
        for j, r2 in enumerate(p.rules):
            l1, l2 = r1.lhs, r2.lhs
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    word = l1 + l2[k:]
                    checked += 1
                    left = p.apply_rule_at(r1, word, 0)
                    right = p.apply_rule_at(r2, word, len(l1) - k)
                    if left != right:
                        failures.append(Ambiguity(p.word_text(word), 'overlap', i, j, left, right))
            if i == j or len(l2) > len(l1) or (l1 == l2 and j < i):
                continue
            for pos in _find(l1, l2):
                checked += 1
                left = p.apply_rule_at(r1, l1, 0)
                right = p.apply_rule_at(r2, l1, pos)
                if left != right:
                    failures.append(Ambiguity(p.word_text(l1), 'inclusion', i, j, left, right))
    logger.info(f"Confluence check for {p.name}: {checked} ambiguities, {len(failures)} unresolved")
    return failures


def is_central(p, x):
    """True iff x commutes with every generator"""
    for name in p.generators:
        g = p.gen(name)
        if x * g != g * x:
            return False
    return True


def specialize_at_one(p, name=None):
    """The presentation with q set to 1 in every rule"""
    rules = [(r.lhs, {w: QRational(c.evaluate(1)) for w, c in r.rhs}) for r in p.rules]
    weights = dict(zip(p.generators, p.weights))
    grading = dict(zip(p.generators, p.grading)) if p.grading is not None else None
    return Presentation(name or f"{p.name}_classical", p.generators, rules,
                        weights=weights, grading=grading, classical=True)


def _as_weight(p, lam):
    if isinstance(lam, Weight):
        return lam
    if isinstance(lam, int):
        return Weight((lam,))
    return Weight.of(*lam)


def _length_bound(p, lam, horizon):
    """Longest word that can have degree lam, checked against the horizon"""
    heights = [sum(d.coords) for d in p.grading]
    if min(heights) <= 0:
        if horizon is None:
            raise UserInputError(f"Grading of {p.name} does not bound word lengths; a horizon is required")
        logger.warning(f"Grading of {p.name} does not bound word lengths; enumerating up to {horizon}")
        return horizon
    target = sum(lam.coords)
    if target < 0:
        return -1
    needed = target // min(heights)
    if horizon is not None and needed > horizon:
        raise UserInputError(f"Horizon {horizon} too small for degree {lam}: words up to length {needed} needed")
    return needed


def graded_basis(p, lam, horizon=None):
    """Normal words of degree lam"""
    if not p.is_graded:
        raise UserInputError(f"Presentation {p.name} is not graded")
    lam = _as_weight(p, lam)
    bound = _length_bound(p, lam, horizon)
    return [w for n in range(bound + 1) for w in p.normal_words(n) if p.degree(w) == lam]


def graded_component(x, lam):
    """Sum of the terms of x whose degree is lam"""
    p = x.presentation
    if not p.is_graded:
        raise UserInputError(f"Presentation {p.name} is not graded")
    lam = _as_weight(p, lam)
    return x._new({w: c for w, c in x._terms.items() if p.degree(w) == lam})


def dimension_of_graded_piece(p, lam, horizon=None):
    return len(graded_basis(p, lam, horizon))


@dataclass
class VeronesePiece:
    n: int
    degree: Weight
    dimension: int
    basis: List[str] = field(default_factory=list)

    def to_json(self):
        return {'n': self.n, 'degree': self.degree.to_json(), 'dimension': self.dimension, 'basis': self.basis}


def veronese(p, lam, max_n, horizon=None):
    """Graded pieces R_{n lam} for n = 0..max_n"""
    lam = _as_weight(p, lam)
    pieces = []
    for n in range(int(max_n) + 1):
        degree = lam.scale(n)
        basis = graded_basis(p, degree, horizon)
        pieces.append(VeronesePiece(n, degree, len(basis), [p.word_text(w) or '1' for w in basis]))
    logger.info(f"Veronese of {p.name} along {lam}: dims {[piece.dimension for piece in pieces]}")
    return pieces


class TensorElement:
    """Element of A_1 ⊗ ... ⊗ A_k stored on tuples of normal words"""

    __slots__ = ('factors', '_terms')

    def __init__(self, factors, terms=None):
        self.factors = tuple(factors)
        self._terms = {tuple(k): QRational(c) for k, c in (terms or {}).items()}
        self._terms = {k: c for k, c in self._terms.items() if not c.is_zero()}

    @classmethod
    def pure(cls, *elements):
        """x_1 ⊗ ... ⊗ x_k"""
        terms = {(): ONE}
        for x in elements:
            nxt = {}
            for key, c in terms.items():
                for w, cx in x._terms.items():
                    nxt[key + (w,)] = nxt.get(key + (w,), ZERO) + c * cx
            terms = nxt
        return cls([x.presentation for x in elements], terms)

    @classmethod
    def zero(cls, factors):
        return cls(factors, {})

    def _same(self, other):
        if self.factors != other.factors:
            raise UserInputError("Tensor factor mismatch")

    def items(self):
        keys = [p.order_key for p in self.factors]
        return sorted(self._terms.items(),
                      key=lambda kc: tuple(k(w) for k, w in zip(keys, kc[0])))

    def terms(self):
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._same(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, ZERO) + c
        return TensorElement(self.factors, out)

    def __neg__(self):
        return TensorElement(self.factors, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            return TensorElement(self.factors, {k: c * scalar for k, c in self._terms.items()})
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._same(other)
        out = TensorElement.zero(self.factors)
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                parts = [AlgebraElement(p, {w1 + w2: ONE}) for p, w1, w2 in zip(self.factors, k1, k2)]
                out = out + TensorElement.pure(*parts) * (c1 * c2)
        return out

    def __rmul__(self, other):
        scalar = as_scalar(other)
        if scalar is None:
            return NotImplemented
        return self * scalar

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.factors == other.factors and self._terms == other._terms

    __hash__ = None

    def map_factor(self, index, fn):
        """Apply a linear map fn: word -> AlgebraElement | TensorElement to one factor"""
        out = None
        for key, c in self._terms.items():
            image = fn(key[index])
            pieces = [AlgebraElement(p, {w: ONE}, normalized=True) for p, w in zip(self.factors, key)]
            parts = pieces[:index] + [image] + pieces[index + 1:]
            term = tensor_product(*parts) * c
            out = term if out is None else out + term
        if out is None:
            template = [TensorElement.pure(p.one()) for p in self.factors]
            template[index] = fn(())
            return tensor_product(*template) * ZERO
        return out

    def contract(self):
        """Multiply the factors together (all factors must share one presentation)"""
        p = self.factors[0]
        if any(f != p for f in self.factors):
            raise UserInputError("Contraction needs a single presentation")
        out = {}
        for key, c in self._terms.items():
            w = tuple(i for part in key for i in part)
            out[w] = out.get(w, ZERO) + c
        return AlgebraElement(p, out)

    def to_text(self):
        pairs = []
        for key, c in self.items():
            body = '|'.join(f"({p.word_expression(w) or '1'})" for p, w in zip(self.factors, key))
            pairs.append((c, body))
        return format_linear_combination(pairs)

    def to_json(self):
        return {'terms': [{'coeff': c.to_json(),
                           'words': [p.word_text(w) for p, w in zip(self.factors, key)]}
                          for key, c in self.items()]}

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"TensorElement({self.to_text()})"


def tensor_product(*parts):
    """Tensor product of elements and tensors, flattening nested factors"""
    out = None
    for part in parts:
        if isinstance(part, AlgebraElement):
            part = TensorElement.pure(part)
        if out is None:
            out = part
            continue
        terms = {}
        for k1, c1 in out._terms.items():
            for k2, c2 in part._terms.items():
                terms[k1 + k2] = terms.get(k1 + k2, ZERO) + c1 * c2
        out = TensorElement(out.factors + part.factors, terms)
    return out


class CentralLocalization:
    """A graded presentation with one central element inverted"""

    def __init__(self, base, inverted):
        if inverted.presentation != base:
            raise UserInputError("Inverted element belongs to another presentation")
        if inverted.is_zero():
            raise UserInputError("Cannot invert zero")
        if not is_central(base, inverted):
            raise UserInputError(f"{inverted.to_text()} is not central in {base.name}")
        self.base = base
        self.inverted = inverted

    def element(self, x, power=0):
        """x * r^(-power)"""
        return LocalizedElement(self, x, power)

    def inverse_power(self, k):
        return LocalizedElement(self, self.base.one(), k)

    def one(self):
        return LocalizedElement(self, self.base.one(), 0)


class LocalizedElement:
    """numerator * r^(-power) with r central"""

    __slots__ = ('localization', 'numerator', 'power')

    def __init__(self, localization, numerator, power=0):
        if numerator.presentation != localization.base:
            raise UserInputError("Numerator belongs to another presentation")
        power = int(power)
        r = localization.inverted
        if power < 0:
            numerator = numerator * (r ** (-power))
            power = 0
        self.localization = localization
        self.numerator = numerator
        self.power = power

    def _lift(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            return LocalizedElement(self.localization, self.localization.base.scalar(scalar), 0)
        if isinstance(other, AlgebraElement):
            return LocalizedElement(self.localization, other, 0)
        if isinstance(other, LocalizedElement):
            if other.localization.base != self.localization.base or \
                    other.localization.inverted != self.localization.inverted:
                raise UserInputError("Localization mismatch")
            return other
        return None

    def _common(self, other):
        r = self.localization.inverted
        k = max(self.power, other.power)
        return self.numerator * (r ** (k - self.power)), other.numerator * (r ** (k - other.power)), k

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        x, y, k = self._common(other)
        return LocalizedElement(self.localization, x + y, k)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedElement(self.localization, -self.numerator, self.power)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return LocalizedElement(self.localization, self.numerator * other.numerator, self.power + other.power)

    def __rmul__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return lifted * self

    def __pow__(self, n):
        n = int(n)
        if n >= 0:
            out = self.localization.one()
            for _ in range(n):
                out = out * self
            return out
        return self.inverse() ** (-n)

    def inverse(self):
        """Inverse of a power of the inverted element times a nonzero scalar"""
        loc = self.localization
        r = loc.inverted
        num = self.numerator
        if num.is_zero():
            raise UserInputError("Zero is not invertible")
        step = r.max_length()
        k = num.max_length() // step if step > 0 else 0
        rk = r ** k
        word, coeff = rk.items()[-1]
        ratio = num.coefficient(word) / coeff
        if ratio.is_zero() or num != rk * ratio:
            raise UserInputError(f"{self.to_text()} is not invertible in the localization")
        return LocalizedElement(loc, loc.base.scalar(ONE / ratio) * (r ** self.power), k)

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        x, y, _ = self._common(other)
        return x == y

    __hash__ = None

    def is_zero(self):
        return self.numerator.is_zero()

    def degree(self):
        """Degree of the numerator minus power times the degree of r"""
        d = self.numerator.degree()
        return d - self.localization.inverted.degree().scale(self.power)

    def to_text(self):
        num = self.numerator.to_text()
        if self.power == 0:
            return num
        den = self.localization.inverted.to_text()
        return f"({num})*({den})^-{self.power}"

    def to_json(self):
        data = self.numerator.to_json()
        data['inverse_power'] = self.power
        return data

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LocalizedElement({self.to_text()})"


@dataclass
class Stratum:
    length: int
    dimension: int
    basis: List[str]
    relations: List[str]

    def to_json(self):
        return {'stratum': self.length, 'dimension': self.dimension,
                'basis': self.basis, 'relations': self.relations}


@dataclass
class DegreeZeroDescription:
    localization: CentralLocalization
    strata: List[Stratum]

    @property
    def dimensions(self):
        return [s.dimension for s in self.strata]

    @property
    def generators(self):
        """Basis of the first stratum past degree zero that is nonempty"""
        for s in self.strata[1:]:
            if s.dimension:
                return s.basis
        return []

    def to_json(self):
        return {'inverted': self.localization.inverted.to_text(),
                'dimensions': self.dimensions,
                'generators': self.generators,
                'strata': [s.to_json() for s in self.strata]}


def _coordinate_rows(elements, columns):
    index = {w: i for i, w in enumerate(columns)}
    rows = []
    for x in elements:
        row = [ZERO] * len(columns)
        for w, c in x._terms.items():
            if w not in index:
                raise InvariantViolation("Element leaves the expected graded piece")
            row[index[w]] = c
        rows.append(row)
    return rows


def localize_and_degree_zero(loc, horizon):
    """
    Degree-zero part of R[r^-1] by strata: stratum m is R_{k deg r} r^-k with
    m = k * height(deg r), modulo the image r * R_{(k-1) deg r} of the stratum below.
    Relations list those images, written in the numerator words.
    """
    p = loc.base
    r = loc.inverted
    if not p.is_graded:
        raise UserInputError(f"Presentation {p.name} is not graded")
    if not r.is_homogeneous():
        raise UserInputError("Inverted element must be homogeneous")
    delta = r.degree()
    height = sum(delta.coords)
    horizon = int(horizon)
    strata = []
    if height == 0:
        basis = graded_basis(p, delta.scale(0), horizon)
        strata.append(Stratum(0, len(basis), [p.word_text(w) or '1' for w in basis], []))
        return DegreeZeroDescription(loc, strata)
    if height < 0:
        raise UserInputError("Inverted element must have degree of positive height")
    for m in range(horizon + 1):
        if m % height:
            strata.append(Stratum(m, 0, [], []))
            continue
        k = m // height
        words = graded_basis(p, delta.scale(k))
        columns = sorted(words, key=p.order_key, reverse=True)
        if k == 0:
            strata.append(Stratum(m, len(words), [p.word_text(w) or '1' for w in words], []))
            continue
        below = graded_basis(p, delta.scale(k - 1))
        images = [r * AlgebraElement(p, {w: ONE}, normalized=True) for w in below]
        rows = _coordinate_rows(images, columns)
        _, pivots = linalg.row_reduce(rows, len(columns)) if rows else ([], ())
        kept = [columns[j] for j in range(len(columns)) if j not in pivots]
        kept.sort(key=p.order_key)
        denom = f"*({r.to_text()})^-{k}"
        strata.append(Stratum(m, len(kept),
                              [f"({p.word_expression(w) or '1'}){denom}" for w in kept],
                              [x.to_text() for x in images]))
    logger.info(f"Degree-zero strata of {p.name}[({r.to_text()})^-1]: {[s.dimension for s in strata]}")
    return DegreeZeroDescription(loc, strata)


def normal_words(p, length):
    return p.normal_words(length)


def from_text(text):
    return Presentation.from_text(text)


def specialize_element(x, target):
    """Image of x in the q = 1 presentation target (same generators)"""
    p = x.presentation
    if target.generators != p.generators:
        raise UserInputError(f"Cannot specialize {p.name} into {target.name}: generators differ")
    return AlgebraElement(target, {w: QRational(c.evaluate(1)) for w, c in x._terms.items()})


def transport(x, target, letter_map=None):
    """
    Image of x under the algebra map sending each generator to a word or element of target
    letter_map: generator name -> AlgebraElement of target (default: same name)
    """
    p = x.presentation
    images = []
    for name in p.generators:
        image = (letter_map or {}).get(name)
        if image is None:
            image = target.gen(name)
        images.append(image)
    out = target.zero()
    for w, c in x._terms.items():
        term = target.one()
        for i in w:
            term = term * images[i]
        out = out + term * c
    return out
