"""
Quantum SL2
U_q(sl2) in PBW form, its irreducible modules V_n, Clebsch-Gordan data,
matrix coefficients realised inside O_q(SL2), the bialgebra maps and the
Peter-Weyl decomposition of O_q(SL2).
"""
import logging
import threading
from dataclasses import dataclass
from typing import Dict, List, Tuple

from cachetools import LRUCache, cached

from . import linalg
from .errors import InvariantViolation, UserInputError
from .lattice import SL2, Weight
from .ncalg import AlgebraElement, TensorElement, specialize_element
from .presentations import matrix_generators, sl2
from .scalars import ONE, Q, ZERO, QRational, as_scalar, format_linear_combination, q_power, quantum_integer

logger = logging.getLogger(__name__)

Pbw = Tuple[int, int, int]

_LOCK = threading.Lock


def _qint(n):
    return quantum_integer(n).to_rational()


# ---------------------------------------------------------------------------
# U_q(sl2)
# ---------------------------------------------------------------------------

class UqElement:
    """Linear combination of PBW monomials F^a K^b E^c"""

    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        clean = {}
        for key, c in (terms or {}).items():
            a, b, e = (int(v) for v in key)
            if a < 0 or e < 0:
                raise UserInputError("PBW exponents of E and F must be nonnegative")
            c = QRational(c)
            if not c.is_zero():
                clean[(a, b, e)] = clean.get((a, b, e), ZERO) + c
        self._terms = {k: c for k, c in clean.items() if not c.is_zero()}

    @classmethod
    def E(cls):
        return cls({(0, 0, 1): ONE})

    @classmethod
    def F(cls):
        return cls({(1, 0, 0): ONE})

    @classmethod
    def K(cls, power=1):
        return cls({(0, power, 0): ONE})

    @classmethod
    def one(cls):
        return cls({(0, 0, 0): ONE})

    @classmethod
    def scalar(cls, value):
        return cls({(0, 0, 0): QRational(value)})

    def items(self):
        return sorted(self._terms.items())

    def terms(self):
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            other = UqElement.scalar(scalar)
        if not isinstance(other, UqElement):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, ZERO) + c
        return UqElement(out)

    __radd__ = __add__

    def __neg__(self):
        return UqElement({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            return UqElement({k: c * scalar for k, c in self._terms.items()})
        if isinstance(other, UqElement):
            return uq_multiply(self, other)
        return NotImplemented

    def __rmul__(self, other):
        scalar = as_scalar(other)
        if scalar is None:
            return NotImplemented
        return self * scalar

    def __truediv__(self, other):
        scalar = as_scalar(other)
        if scalar is None:
            return NotImplemented
        return self * (ONE / scalar)

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            if len(self._terms) == 1:
                (a, b, e), c = next(iter(self._terms.items()))
                if a == 0 and e == 0:
                    return UqElement({(0, -b, 0): ONE / c}) ** (-n)
            raise UserInputError("Only K^b monomials are invertible in U_q(sl2)")
        out = UqElement.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            other = UqElement.scalar(scalar)
        if not isinstance(other, UqElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def to_text(self):
        pairs = []
        for (a, b, e), c in self.items():
            parts = []
            if a:
                parts.append('F' if a == 1 else f"F^{a}")
            if b:
                parts.append('K' if b == 1 else f"K^{b}")
            if e:
                parts.append('E' if e == 1 else f"E^{e}")
            pairs.append((c, '*'.join(parts)))
        return format_linear_combination(pairs)

    def to_json(self):
        return {'terms': [{'coeff': c.to_json(), 'pbw': list(k)} for k, c in self.items()]}

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"UqElement({self.to_text()})"


@cached(cache={}, lock=_LOCK())
def _e_power_f_power(c, a):
    """E^c F^a in PBW form, as a tuple of ((x, y, z), coeff)"""
    if c == 0 or a == 0:
        return (((a, 0, c), ONE),)
    out = {}

    def add(key, value):
        out[key] = out.get(key, ZERO) + value

    for (x, y, z), coeff in _e_power_f_power(c - 1, a):
        add((x, y, z + 1), coeff)
    factor = _qint(a) / (Q - Q ** -1)
    for (x, y, z), coeff in _e_power_f_power(c - 1, a - 1):
        add((x, y + 1, z), coeff * factor * q_power(1 - a) * q_power(-2 * z))
        add((x, y - 1, z), -coeff * factor * q_power(a - 1) * q_power(2 * z))
    return tuple((k, v) for k, v in sorted(out.items()) if not v.is_zero())


def uq_multiply(x, y):
    """PBW normal form of x*y using KE = q^2 EK, KF = q^-2 FK and [E,F] = (K - K^-1)/(q - q^-1)"""
    out = {}
    for (a, b, c), cx in x._terms.items():
        for (a2, b2, c2), cy in y._terms.items():
            for (xx, yy, zz), coeff in _e_power_f_power(c, a2):
                key = (a + xx, b + yy + b2, zz + c2)
                value = cx * cy * coeff * q_power(-2 * b * xx) * q_power(-2 * zz * b2)
                out[key] = out.get(key, ZERO) + value
    return UqElement(out)


class UqTensor:
    """Element of U_q(sl2) ⊗ U_q(sl2) on pairs of PBW monomials"""

    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        self._terms = {k: QRational(c) for k, c in (terms or {}).items() if not QRational(c).is_zero()}

    @classmethod
    def pure(cls, x, y):
        return cls({(k1, k2): c1 * c2 for k1, c1 in x._terms.items() for k2, c2 in y._terms.items()})

    def __add__(self, other):
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, ZERO) + c
        return UqTensor(out)

    def __mul__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            return UqTensor({k: c * scalar for k, c in self._terms.items()})
        out = UqTensor()
        for (l1, r1), c1 in self._terms.items():
            for (l2, r2), c2 in other._terms.items():
                left = UqElement({l1: ONE}) * UqElement({l2: ONE})
                right = UqElement({r1: ONE}) * UqElement({r2: ONE})
                out = out + UqTensor.pure(left, right) * (c1 * c2)
        return out

    def __eq__(self, other):
        if not isinstance(other, UqTensor):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def items(self):
        return sorted(self._terms.items())

    def contract(self, left_map=None):
        """m(f ⊗ id) for a linear map f on the left factor"""
        out = UqElement()
        for (k1, k2), c in self._terms.items():
            left = UqElement({k1: ONE})
            if left_map is not None:
                left = left_map(left)
            out = out + left * UqElement({k2: ONE}) * c
        return out

    def to_text(self):
        pairs = [(c, f"({UqElement({k1: ONE}).to_text()})|({UqElement({k2: ONE}).to_text()})")
                 for (k1, k2), c in self.items()]
        return format_linear_combination(pairs)

    def to_json(self):
        return {'terms': [{'coeff': c.to_json(), 'pbw': [list(k1), list(k2)]} for (k1, k2), c in self.items()]}


def _uq_generator_coproduct(name, power=1):
    E, F, K = UqElement.E(), UqElement.F(), UqElement.K
    if name == 'E':
        return UqTensor.pure(E, UqElement.one()) + UqTensor.pure(K(), E)
    if name == 'F':
        return UqTensor.pure(F, K(-1)) + UqTensor.pure(UqElement.one(), F)
    return UqTensor.pure(K(power), K(power))


def uq_coproduct(x):
    """Δ(E) = E⊗1 + K⊗E, Δ(F) = F⊗K^-1 + 1⊗F, Δ(K) = K⊗K, extended multiplicatively"""
    out = UqTensor()
    for (a, b, e), c in x._terms.items():
        term = UqTensor.pure(UqElement.one(), UqElement.one())
        for _ in range(a):
            term = term * _uq_generator_coproduct('F')
        if b:
            term = term * _uq_generator_coproduct('K', b)
        for _ in range(e):
            term = term * _uq_generator_coproduct('E')
        out = out + term * c
    return out


def uq_counit(x):
    return sum((c for (a, b, e), c in x._terms.items() if a == 0 and e == 0), ZERO)


def uq_antipode(x):
    """S(E) = -K^-1 E, S(F) = -F K, S(K) = K^-1, anti-multiplicative"""
    s_e = -(UqElement.K(-1) * UqElement.E())
    s_f = -(UqElement.F() * UqElement.K())
    out = UqElement()
    for (a, b, e), c in x._terms.items():
        term = (s_e ** e) * UqElement.K(-b) * (s_f ** a)
        out = out + term * c
    return out


# ---------------------------------------------------------------------------
# Irreducible modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IrrepVn:
    """V_n with basis v_0..v_n, v_k of weight n - 2k"""
    highest_weight: int

    def __post_init__(self):
        if self.highest_weight < 0:
            raise UserInputError("Highest weight must be nonnegative")

    @property
    def dimension(self):
        return self.highest_weight + 1

    def weight(self, k):
        return self.highest_weight - 2 * k

    def basis_vector(self, k):
        vec = [ZERO] * self.dimension
        vec[k] = ONE
        return vec

    def generator_matrix(self, name, power=1):
        """Matrix of E, F or K^power in the basis v_0..v_n"""
        n = self.highest_weight
        dim = self.dimension
        mat = linalg.zeros(dim, dim)
        if name == 'E':
            for k in range(1, dim):
                mat[k - 1][k] = _qint(n - k + 1)
        elif name == 'F':
            for k in range(dim - 1):
                mat[k + 1][k] = _qint(k + 1)
        elif name == 'K':
            for k in range(dim):
                mat[k][k] = q_power(power * (n - 2 * k))
        else:
            raise UserInputError(f"Unknown U_q(sl2) generator '{name}'")
        return mat

    def matrix(self, x):
        """Action matrix of a U_q(sl2) element"""
        dim = self.dimension
        out = linalg.zeros(dim, dim)
        e_mat, f_mat = self.generator_matrix('E'), self.generator_matrix('F')
        for (a, b, e), c in x._terms.items():
            mono = linalg.identity(dim)
            for _ in range(a):
                mono = linalg.matmul(mono, f_mat)
            mono = linalg.matmul(mono, self.generator_matrix('K', b))
            for _ in range(e):
                mono = linalg.matmul(mono, e_mat)
            out = [[o + c * m for o, m in zip(orow, mrow)] for orow, mrow in zip(out, mono)]
        return out


def act(x, rep, vector):
    """x . vector in V_n"""
    vector = [QRational(v) for v in vector]
    if len(vector) != rep.dimension:
        raise UserInputError(f"Vector of length {len(vector)} is not in V_{rep.highest_weight}")
    return linalg.apply(rep.matrix(x), vector)


def _kron(a, b):
    return [[x * y for x in arow for y in brow] for arow in a for brow in b]


def tensor_matrix(x, n, m):
    """Action matrix of x on V_n ⊗ V_m through the coproduct; basis (i, j) -> i*(m+1)+j"""
    vn, vm = IrrepVn(n), IrrepVn(m)
    dim = vn.dimension * vm.dimension
    out = linalg.zeros(dim, dim)
    for (k1, k2), c in uq_coproduct(x)._terms.items():
        block = _kron(vn.matrix(UqElement({k1: ONE})), vm.matrix(UqElement({k2: ONE})))
        out = [[o + c * v for o, v in zip(orow, brow)] for orow, brow in zip(out, block)]
    return out


# ---------------------------------------------------------------------------
# Clebsch-Gordan
# ---------------------------------------------------------------------------

@dataclass
class CGSummand:
    k: int
    inclusion: List[List[QRational]]
    projection: List[List[QRational]]

    def to_json(self):
        return {'k': self.k,
                'inclusion': [[x.to_text() for x in row] for row in self.inclusion],
                'projection': [[x.to_text() for x in row] for row in self.projection]}


@dataclass
class CGDecomposition:
    n: int
    m: int
    summands: List[CGSummand]

    @property
    def dimension(self):
        return (self.n + 1) * (self.m + 1)

    def summand(self, k):
        for s in self.summands:
            if s.k == k:
                return s
        raise UserInputError(f"V_{k} does not occur in V_{self.n} ⊗ V_{self.m}")

    def labels(self):
        return [s.k for s in self.summands]

    def check(self):
        """Failed invariants as messages (empty when all hold)"""
        failures = []
        for s in self.summands:
            if s.k > self.n + self.m or (self.n + self.m - s.k) % 2:
                failures.append(f"summand {s.k} has the wrong weight")
            for t in self.summands:
                prod = linalg.matmul(s.projection, t.inclusion)
                expected = linalg.identity(s.k + 1) if s.k == t.k else linalg.zeros(s.k + 1, t.k + 1)
                if prod != expected:
                    failures.append(f"pi_{s.k} o iota_{t.k} is not {'identity' if s.k == t.k else 'zero'}")
        total = linalg.zeros(self.dimension, self.dimension)
        for s in self.summands:
            block = linalg.matmul(s.inclusion, s.projection)
            total = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(total, block)]
        if not linalg.is_identity(total):
            failures.append("sum of iota_k pi_k is not the identity")
        return failures

    def to_json(self):
        return {'n': self.n, 'm': self.m, 'summands': [s.to_json() for s in self.summands]}


@cached(cache=LRUCache(maxsize=256), lock=_LOCK())
def cg_decompose(n, m):
    """
    V_n ⊗ V_m = ⊕ V_k, k = n+m, n+m-2, ..., |n-m|.
    Highest vectors are kernels of E on each weight space, normalised so the first
    nonzero coordinate is 1; the rest of each copy is F^j u / [j]!.
    """
    n, m = int(n), int(m)
    if n < 0 or m < 0:
        raise UserInputError("Highest weights must be nonnegative")
    dim = (n + 1) * (m + 1)
    e_mat = tensor_matrix(UqElement.E(), n, m)
    f_mat = tensor_matrix(UqElement.F(), n, m)

    def weight(idx):
        i, j = divmod(idx, m + 1)
        return (n - 2 * i) + (m - 2 * j)

    copies = []
    for k in range(n + m, abs(n - m) - 1, -2):
        space = [idx for idx in range(dim) if weight(idx) == k]
        target = [idx for idx in range(dim) if weight(idx) == k + 2]
        rows = [[e_mat[t][s] for s in space] for t in target]
        kernel = linalg.nullspace(rows, len(space))
        if len(kernel) != 1:
            raise InvariantViolation(f"E-kernel of weight {k} in V_{n}⊗V_{m} has dimension {len(kernel)}")
        u = [ZERO] * dim
        for idx, value in zip(space, kernel[0]):
            u[idx] = value
        lead = next(v for v in u if not v.is_zero())
        u = [v / lead for v in u]
        vectors = [u]
        for j in range(1, k + 1):
            vectors.append([v / _qint(j) for v in linalg.apply(f_mat, vectors[-1])])
        copies.append((k, vectors))

    by_label = dict(copies)
    # change of basis is block diagonal in the weight; invert weight by weight
    projections = {k: [[ZERO] * dim for _ in range(k + 1)] for k, _ in copies}
    for w in sorted({weight(idx) for idx in range(dim)}):
        coords = [idx for idx in range(dim) if weight(idx) == w]
        cols = [(k, j) for k, vectors in copies for j in range(k + 1) if k - 2 * j == w]
        block = [[by_label[k][j][idx] for (k, j) in cols] for idx in coords]
        inv = linalg.inverse(block)
        for r, (k, j) in enumerate(cols):
            for c, idx in enumerate(coords):
                projections[k][j][idx] = inv[r][c]

    summands = []
    for k, vectors in copies:
        inclusion = [[vectors[j][idx] for j in range(k + 1)] for idx in range(dim)]
        summands.append(CGSummand(k, inclusion, projections[k]))
    logger.debug(f"Clebsch-Gordan V_{n} ⊗ V_{m} = {' + '.join(f'V_{k}' for k, _ in copies)}")
    return CGDecomposition(n, m, summands)


# ---------------------------------------------------------------------------
# Matrix coefficients in O_q(SL2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixCoefficient:
    """c^{V_n}_{f_row, v_col}"""
    n: int
    row: int
    col: int

    def __post_init__(self):
        if self.n < 0 or not (0 <= self.row <= self.n and 0 <= self.col <= self.n):
            raise UserInputError(f"Matrix coefficient c[{self.n};{self.row},{self.col}] out of range")

    @property
    def rep(self):
        return IrrepVn(self.n)

    def bidegree(self):
        """(left weight, right weight)"""
        return (self.n - 2 * self.row, self.n - 2 * self.col)

    def to_text(self):
        return f"c[{self.n};{self.row},{self.col}]"


_V1_NAMES = {(0, 0): 'a', (0, 1): 'b', (1, 0): 'c', (1, 1): 'd'}


@cached(cache=LRUCache(maxsize=4096), lock=_LOCK())
def _coefficient_terms(n, i, j, classical):
    p = sl2(classical)
    if n == 0:
        return p.one()
    if n == 1:
        return p.gen(_V1_NAMES[(i, j)])
    top = cg_decompose(n - 1, 1).summand(n)
    out = p.zero()
    for kl, pi_value in enumerate(top.projection[i]):
        if pi_value.is_zero():
            continue
        k, l = divmod(kl, 2)
        for kl2 in range(2 * n):
            iota_value = top.inclusion[kl2][j]
            if iota_value.is_zero():
                continue
            k2, l2 = divmod(kl2, 2)
            coeff = pi_value * iota_value
            if classical:
                coeff = QRational(coeff.evaluate(1))
            out = out + _coefficient_terms(n - 1, k, k2, classical) * p.gen(_V1_NAMES[(l, l2)]) * coeff
    return out


def coefficient_to_element(c, classical=False):
    """Matrix coefficient as an element of O_q(SL2) (or O(SL2) when classical)"""
    if not isinstance(c, MatrixCoefficient):
        c = MatrixCoefficient(*c)
    return _coefficient_terms(c.n, c.row, c.col, bool(classical))


def top_word(n, i, j):
    """The unique normal word of length n and bidegree (n-2i, n-2j)"""
    if i + j <= n:
        names = 'b' * j + 'c' * i + 'a' * (n - i - j)
    else:
        names = 'b' * (n - i) + 'c' * (n - j) + 'd' * (i + j - n)
    return sl2().word(tuple(names))


def _top_indices(p, word):
    counts = {g: 0 for g in 'abcd'}
    for letter in word:
        counts[p.generators[letter]] += 1
    n = len(word)
    if counts['d'] == 0:
        return n, counts['c'], counts['b']
    return n, n - counts['b'], n - counts['c']


def _check_sl2(x):
    p = x.presentation
    if p.name not in ('sl2', 'sl2_classical'):
        raise UserInputError(f"Expected an element of O_q(SL2), got {p.name}")
    return p.classical


def pw_coordinates(x):
    """Coordinates of x in the matrix-coefficient basis: {n: {(i, j): coeff}}"""
    classical = _check_sl2(x)
    p = x.presentation
    remaining = x
    coords = {}
    while not remaining.is_zero():
        level = remaining.max_length()
        top = remaining.part_of_length(level)
        found = {}
        for word, coeff in top.items():
            n, i, j = _top_indices(p, word)
            element = coefficient_to_element(MatrixCoefficient(n, i, j), classical)
            lead = element.coefficient(word)
            if lead.is_zero():
                raise InvariantViolation(f"c[{n};{i},{j}] does not reach its top word")
            alpha = coeff / lead
            found[(i, j)] = alpha
            remaining = remaining - element * alpha
        coords[level] = found
        if remaining.max_length() >= level:
            raise InvariantViolation(f"Peter-Weyl elimination did not lower the level below {level}")
    return coords


def pw_component(x, n):
    """Component of x in the span of the c^{V_n} coefficients"""
    classical = _check_sl2(x)
    n = int(n)
    if n < 0:
        raise UserInputError("Peter-Weyl index must be dominant")
    out = x.presentation.zero()
    for (i, j), alpha in pw_coordinates(x).get(n, {}).items():
        out = out + coefficient_to_element(MatrixCoefficient(n, i, j), classical) * alpha
    return out


def pw_degree(x):
    """Per parity class of word length: (class modulo the root lattice, longest word length)"""
    _check_sl2(x)
    out = []
    for parity in (0, 1):
        lengths = [len(w) for w in x.terms() if len(w) % 2 == parity]
        if lengths:
            out.append((SL2.coset_class(Weight((parity,)), SL2.delta), max(lengths)))
    return out


def filtration_dimension(n, classical=False):
    """Number of normal words of length <= n and parity n: dim O_q(SL2)_{<= n}"""
    p = sl2(classical)
    return sum(len(p.normal_words(k)) for k in range(n % 2, n + 1, 2))


def matrix_coefficient_rank(n, classical=False):
    """Rank of the matrix coefficients c^{V_m}, m <= n, m = n mod 2, computed per bidegree"""
    groups: Dict[Tuple[int, int], List[AlgebraElement]] = {}
    for m in range(n % 2, n + 1, 2):
        for i in range(m + 1):
            for j in range(m + 1):
                groups.setdefault((m - 2 * i, m - 2 * j), []).append(
                    coefficient_to_element(MatrixCoefficient(m, i, j), classical))
    total = 0
    for elements in groups.values():
        words = sorted({w for x in elements for w in x.terms()})
        index = {w: k for k, w in enumerate(words)}
        rows = []
        for x in elements:
            row = [ZERO] * len(words)
            for w, c in x.terms().items():
                row[index[w]] = c
            rows.append(row)
        total += linalg.rank(rows, len(words))
    return total


# ---------------------------------------------------------------------------
# Bialgebra structure on O_q(Mat2), O_q(SL2) and O_q(V_SL2)
# ---------------------------------------------------------------------------

_POSITIONS = {'a': (0, 0), 'b': (0, 1), 'c': (1, 0), 'd': (1, 1)}


def _entry_positions(p):
    gens = matrix_generators(p)
    out = {}
    for name, g in zip('abcd', gens):
        (word, _), = g.terms().items()
        out[word[0]] = _POSITIONS[name]
    return out, gens


def coproduct(x):
    """Δ(t_ij) = Σ_k t_ik ⊗ t_kj, extended multiplicatively"""
    p = x.presentation
    positions, gens = _entry_positions(p)
    entry = {pos: g for pos, g in zip(_POSITIONS.values(), gens)}
    letter_images = {}
    for letter, (i, j) in positions.items():
        letter_images[letter] = sum((TensorElement.pure(entry[(i, k)], entry[(k, j)]) for k in range(2)),
                                    TensorElement.zero((p, p)))
    out = TensorElement.zero((p, p))
    for word, c in x.terms().items():
        term = TensorElement.pure(p.one(), p.one())
        for letter in word:
            term = term * letter_images[letter]
        out = out + term * c
    return out


def counit(x):
    """ε(t_ij) = δ_ij"""
    positions, _ = _entry_positions(x.presentation)
    total = ZERO
    for word, c in x.terms().items():
        if all(positions[letter][0] == positions[letter][1] for letter in word):
            total = total + c
    return total


def antipode(x):
    """S(a) = d, S(b) = -q^-1 b, S(c) = -q c, S(d) = a, anti-multiplicative (O_q(SL2) only)"""
    p = x.presentation
    if p.name not in ('sl2', 'sl2_classical'):
        raise UserInputError(f"The antipode is defined on O_q(SL2) only, not on {p.name}")
    a, b, c, d = matrix_generators(p)
    q = p.q
    images = {'a': d, 'b': -(b / q), 'c': -(c * q), 'd': a}
    by_letter = {p.word(name)[0]: images[name] for name in 'abcd'}
    out = p.zero()
    for word, coeff in x.terms().items():
        term = p.one()
        for letter in reversed(word):
            term = term * by_letter[letter]
        out = out + term * coeff
    return out


def hopf_failures(x):
    """Hopf axioms checked on x; returns failure messages"""
    p = x.presentation
    failures = []
    delta = coproduct(x)
    left = delta.map_factor(0, lambda w: coproduct(AlgebraElement(p, {w: ONE})))
    right = delta.map_factor(1, lambda w: coproduct(AlgebraElement(p, {w: ONE})))
    if left != right:
        failures.append(f"coassociativity fails on {x.to_text()}")
    eps = counit
    if delta.map_factor(0, lambda w: p.one() * eps(AlgebraElement(p, {w: ONE}))).contract() != x:
        failures.append(f"left counit fails on {x.to_text()}")
    if delta.map_factor(1, lambda w: p.one() * eps(AlgebraElement(p, {w: ONE}))).contract() != x:
        failures.append(f"right counit fails on {x.to_text()}")
    if p.name in ('sl2', 'sl2_classical'):
        unit = p.one() * eps(x)
        if delta.map_factor(0, lambda w: antipode(AlgebraElement(p, {w: ONE}))).contract() != unit:
            failures.append(f"left antipode identity fails on {x.to_text()}")
        if delta.map_factor(1, lambda w: antipode(AlgebraElement(p, {w: ONE}))).contract() != unit:
            failures.append(f"right antipode identity fails on {x.to_text()}")
    return failures


def coefficient_coproduct(c, classical=False):
    """Σ_k c_{i,k} ⊗ c_{k,j}"""
    p = sl2(classical)
    out = TensorElement.zero((p, p))
    for k in range(c.n + 1):
        out = out + TensorElement.pure(coefficient_to_element(MatrixCoefficient(c.n, c.row, k), classical),
                                       coefficient_to_element(MatrixCoefficient(c.n, k, c.col), classical))
    return out


def product_expansion(c1, c2, keep=None):
    """
    c1 * c2 expanded through V_n ⊗ V_m = ⊕ V_nu:
    Σ_nu Σ_{k,l} iota_nu[(i,i'),k] pi_nu[l,(j,j')] c^{V_nu}_{k,l}
    as {(nu, k, l): coeff}; keep restricts the summands nu.
    """
    cg = cg_decompose(c1.n, c2.n)
    row = c1.row * (c2.n + 1) + c2.row
    col = c1.col * (c2.n + 1) + c2.col
    out = {}
    for s in cg.summands:
        if keep is not None and s.k not in keep:
            continue
        for k in range(s.k + 1):
            iota = s.inclusion[row][k]
            if iota.is_zero():
                continue
            for l in range(s.k + 1):
                pi = s.projection[l][col]
                if not pi.is_zero():
                    out[(s.k, k, l)] = out.get((s.k, k, l), ZERO) + iota * pi
    return out


def specialize_coefficient(x):
    """O_q(SL2) element at q = 1"""
    return specialize_element(x, sl2(True))
