"""
Peter-Weyl filtration and what is built from it
Rees algebra (quantum Vinberg semigroup) and its identification with
quantum 2x2 matrices, partial associated graded algebras gr_I, the
quantum-orbit algebras gr_I ⊗ C[Λ_I] and the map Φ into O_q(SL2) ⊗ O_q(SL2).
"""
import logging
from typing import Dict

from . import linalg
from .errors import InvariantViolation, UserInputError
from .lattice import SL2, RootSubset, Weight
from .ncalg import AlgebraElement, TensorElement, transport
from .presentations import VINBERG_NAMES, mat2, matrix_generators, p1p1, quantum_determinant, sl2, vinberg
from .qgroups import (
    IrrepVn, MatrixCoefficient, coefficient_to_element, coproduct, counit, product_expansion, pw_component,
    pw_coordinates, pw_degree,
)
from .scalars import ONE, ZERO, as_scalar

logger = logging.getLogger(__name__)


def _level(lam):
    if isinstance(lam, Weight):
        SL2.check_weight(lam)
        return lam.coords[0]
    return int(lam)


def _is_sl2(p):
    return p.name in ('sl2', 'sl2_classical')


def level_membership(x, lam):
    """True iff x lies in O_q(SL2)_{<= lam}: every word has length mu with mu <= lam in dominance order"""
    if not _is_sl2(x.presentation):
        raise UserInputError(f"Expected an element of O_q(SL2), got {x.presentation.name}")
    n = _level(lam)
    if n < 0:
        return x.is_zero()
    top = Weight((n,))
    return all(SL2.dominance_leq(Weight((len(w),)), top) for w in x.terms())


class FilteredAlgebra:
    """O_q(SL2) (or its q = 1 specialization) with the Peter-Weyl filtration"""

    def __init__(self, classical=False):
        self.base = sl2(classical)

    def level(self, x):
        return pw_degree(x)

    def contains(self, x, lam):
        return level_membership(x, lam)

    def multiply(self, x, y):
        """x*y, checking that levels add"""
        product = x * y
        bound = {cls.representative: n for cls, n in self.level(x)}
        other = {cls.representative: n for cls, n in self.level(y)}
        for p1, n1 in bound.items():
            for p2, n2 in other.items():
                if not level_membership(_parity_part(x, p1) * _parity_part(y, p2), n1 + n2):
                    raise InvariantViolation(f"Product of levels {n1} and {n2} leaves level {n1 + n2}")
        return product


def _parity_part(x, parity):
    rep = parity.coords[0] if isinstance(parity, Weight) else int(parity)
    return x._new({w: c for w, c in x.terms().items() if len(w) % 2 == rep % 2})


# ---------------------------------------------------------------------------
# Rees algebra
# ---------------------------------------------------------------------------

class ReesElement:
    """Finite sum Σ f_n z^n with f_n in O_q(SL2)_{<= n}"""

    __slots__ = ('base', 'parts')

    def __init__(self, parts, base=None, check=True):
        parts = dict(parts)
        if base is None:
            if not parts:
                raise UserInputError("An empty Rees element needs an explicit base presentation")
            base = next(iter(parts.values())).presentation
        if not _is_sl2(base):
            raise UserInputError(f"Rees parts live in O_q(SL2), not {base.name}")
        clean = {}
        for n, f in parts.items():
            n = _level(n)
            if f.presentation != base:
                raise UserInputError("Rees parts from different presentations")
            if f.is_zero():
                continue
            if check and not level_membership(f, n):
                raise UserInputError(f"{f.to_text()} is not in filtration level {n}, so {f.to_text()}*z^{n} "
                                     f"is not in the Rees algebra")
            clean[n] = f
        self.base = base
        self.parts: Dict[int, AlgebraElement] = clean

    @classmethod
    def generator(cls, name, classical=False):
        """az, bz, cz or dz"""
        p = sl2(classical)
        return cls({1: p.gen(name)}, p)

    @classmethod
    def z_power(cls, n, classical=False):
        p = sl2(classical)
        return cls({n: p.one()}, p)

    @classmethod
    def one(cls, classical=False):
        return cls.z_power(0, classical)

    @property
    def classical(self):
        return self.base.classical

    def validated(self):
        return ReesElement(self.parts, self.base, check=True)

    def is_zero(self):
        return not self.parts

    def degrees(self):
        return sorted(self.parts)

    def __add__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            other = ReesElement({0: self.base.scalar(scalar)}, self.base, check=False)
        if not isinstance(other, ReesElement):
            return NotImplemented
        out = dict(self.parts)
        for n, f in other.parts.items():
            out[n] = out[n] + f if n in out else f
        return ReesElement(out, self.base, check=False)

    __radd__ = __add__

    def __neg__(self):
        return ReesElement({n: -f for n, f in self.parts.items()}, self.base, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            return ReesElement({n: f * scalar for n, f in self.parts.items()}, self.base, check=False)
        if isinstance(other, ReesElement):
            return rees_multiply(self, other, check=False)
        return NotImplemented

    def __rmul__(self, other):
        scalar = as_scalar(other)
        if scalar is None:
            return NotImplemented
        return self * scalar

    def __pow__(self, n):
        out = ReesElement.one(self.classical)
        for _ in range(int(n)):
            out = out * self
        return out

    def __eq__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            other = ReesElement({0: self.base.scalar(scalar)}, self.base, check=False)
        if not isinstance(other, ReesElement):
            return NotImplemented
        return self.base == other.base and self.parts == other.parts

    __hash__ = None

    def to_text(self):
        if not self.parts:
            return '0'
        pieces = []
        for n in sorted(self.parts):
            f = self.parts[n].to_text()
            pieces.append(f"({f})*z^{n}" if n else f"({f})")
        return ' + '.join(pieces)

    def to_json(self):
        return {'parts': [dict(degree=n, **self.parts[n].to_json()) for n in sorted(self.parts)]}

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"ReesElement({self.to_text()})"


def rees_multiply(x, y, check=True):
    """(f z^n)(g z^m) = (f g) z^(n+m)"""
    if x.base != y.base:
        raise UserInputError("Rees elements over different presentations")
    if check:
        x, y = x.validated(), y.validated()
    out = {}
    for n, f in x.parts.items():
        for m, g in y.parts.items():
            fg = f * g
            out[n + m] = out[n + m] + fg if n + m in out else fg
    result = ReesElement(out, x.base, check=False)
    if check:
        for n, f in result.parts.items():
            if not level_membership(f, n):
                raise InvariantViolation(f"Rees product left level {n}")
    return result


def _matrix_letters(target):
    """sl2 letter -> matrix generator of target"""
    return dict(zip('abcd', matrix_generators(target)))


def vinberg_to_matq(x):
    """f z^n -> Σ c_w w D_q^((n - |w|)/2) in O_q(Mat2)"""
    x = x.validated()
    target = mat2(x.classical)
    letters = _matrix_letters(target)
    det = quantum_determinant(target)
    out = target.zero()
    for n, f in x.parts.items():
        for word, c in f.terms().items():
            image = target.one()
            for i in word:
                image = image * letters[f.presentation.generators[i]]
            out = out + image * (det ** ((n - len(word)) // 2)) * c
    return out


def matq_to_vinberg(y):
    """Inverse of vinberg_to_matq: the degree-n part Y_n goes to (Y_n mod (D_q - 1)) z^n"""
    p = y.presentation
    if p.name not in ('mat2', 'mat2_classical'):
        raise UserInputError(f"Expected an element of O_q(Mat2), got {p.name}")
    base = sl2(p.classical)
    parts = {}
    for word, c in y.terms().items():
        n = len(word)
        image = transport(AlgebraElement(p, {word: c}, normalized=True), base)
        parts[n] = parts[n] + image if n in parts else image
    result = ReesElement(parts, base, check=False)
    try:
        return result.validated()
    except UserInputError as e:
        raise InvariantViolation(f"matq_to_vinberg left the Rees algebra: {e}") from e


def rees_to_vinberg(x):
    """The Rees element as an element of the presentation on az, bz, cz, dz"""
    target = vinberg(x.classical)
    letter_map = {name: target.gen(VINBERG_NAMES[name]) for name in 'abcd'}
    return transport(vinberg_to_matq(x), target, letter_map)


def vinberg_to_rees(y):
    p = y.presentation
    source = mat2(p.classical)
    back = {VINBERG_NAMES[name]: source.gen(name) for name in 'abcd'}
    return matq_to_vinberg(transport(y, source, back))


def rees_coproduct(x):
    """Δ(f z^n) = Δ(f)(z^n ⊗ z^n), written in az, bz, cz, dz on both sides"""
    x = x.validated()
    target = vinberg(x.classical)
    out = TensorElement.zero((target, target))
    for n, f in x.parts.items():
        for (w1, w2), c in coproduct(f).terms().items():
            left = AlgebraElement(x.base, {w1: ONE}, normalized=True)
            right = AlgebraElement(x.base, {w2: ONE}, normalized=True)
            if not (level_membership(left, n) and level_membership(right, n)):
                raise InvariantViolation(f"Coproduct of level {n} leaves the level")
            out = out + TensorElement.pure(rees_to_vinberg(ReesElement({n: left}, x.base)),
                                           rees_to_vinberg(ReesElement({n: right}, x.base))) * c
    return out


def rees_counit(x):
    """ε(f z^n) = ε(f)"""
    return sum((counit(f) for f in x.validated().parts.values()), ZERO)


# ---------------------------------------------------------------------------
# Associated graded
# ---------------------------------------------------------------------------

def _check_rank_one_subset(subset):
    SL2.check_subset(subset)
    return subset


def _kept_levels(subset, lam, mu, candidates):
    """nu in candidates with lam + mu - nu in Λ_I"""
    total = Weight((lam + mu,))
    return [nu for nu in candidates if SL2.in_sublattice(total - Weight((nu,)), subset)]


class GrElement:
    """
    Element of gr_I(O_q(SL2)): for each level lam a residue modulo the levels
    strictly below lam in the order on Λ/Λ_I.
    parts maps lam to an O_q(SL2) element in the span of the c^{V_nu}, lam - nu in Λ_I.
    """

    __slots__ = ('subset', 'parts', 'base')

    def __init__(self, subset, parts, base):
        self.subset = _check_rank_one_subset(subset)
        self.base = base
        self.parts = {}
        for lam, f in parts.items():
            lam = self._key(lam)
            if f.is_zero():
                continue
            self.parts[lam] = self.parts[lam] + f if lam in self.parts else f
        self.parts = {k: f for k, f in self.parts.items() if not f.is_zero()}

    def _key(self, lam):
        return SL2.coset_class(Weight((_level(lam),)), self.subset).representative.coords[0]

    @classmethod
    def from_element(cls, subset, x, level=None):
        """Image of x in gr_I, x taken in level `level` (default: its own level per parity class)"""
        subset = _check_rank_one_subset(subset)
        if not _is_sl2(x.presentation):
            raise UserInputError(f"gr is built from O_q(SL2), not {x.presentation.name}")
        if level is not None:
            pieces = [(_level(level), x)]
        else:
            pieces = [(n, _parity_part(x, cls_.representative)) for cls_, n in pw_degree(x)]
        parts = {}
        for lam, piece in pieces:
            if not level_membership(piece, lam):
                raise UserInputError(f"{piece.to_text()} is not in filtration level {lam}")
            levels = _kept_levels(subset, lam, 0, range(lam % 2, lam + 1, 2))
            residue = piece.presentation.zero()
            for nu in levels:
                residue = residue + pw_component(piece, nu)
            parts[lam] = residue
        return cls(subset, parts, x.presentation)

    @classmethod
    def one(cls, subset, classical=False):
        p = sl2(classical)
        return cls(subset, {0: p.one()}, p)

    def is_zero(self):
        return not self.parts

    def _same(self, other):
        if self.subset != other.subset:
            raise UserInputError(f"gr subset mismatch: {self.subset} vs {other.subset}")
        if self.base != other.base:
            raise UserInputError("gr elements over different presentations")

    def __add__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            other = GrElement(self.subset, {0: self.base.scalar(scalar)}, self.base)
        if not isinstance(other, GrElement):
            return NotImplemented
        self._same(other)
        out = dict(self.parts)
        for k, f in other.parts.items():
            out[k] = out[k] + f if k in out else f
        return GrElement(self.subset, out, self.base)

    __radd__ = __add__

    def __neg__(self):
        return GrElement(self.subset, {k: -f for k, f in self.parts.items()}, self.base)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            return GrElement(self.subset, {k: f * scalar for k, f in self.parts.items()}, self.base)
        if isinstance(other, GrElement):
            return gr_multiply(self.subset, self, other)
        return NotImplemented

    def __rmul__(self, other):
        scalar = as_scalar(other)
        if scalar is None:
            return NotImplemented
        return self * scalar

    def __pow__(self, n):
        out = GrElement.one(self.subset, self.base.classical)
        for _ in range(int(n)):
            out = out * self
        return out

    def __eq__(self, other):
        scalar = as_scalar(other)
        if scalar is not None:
            other = GrElement(self.subset, {0: self.base.scalar(scalar)}, self.base)
        if not isinstance(other, GrElement):
            return NotImplemented
        return self.subset == other.subset and self.parts == other.parts

    __hash__ = None

    def to_text(self):
        members = ','.join(str(m) for m in sorted(self.subset.members))
        if not self.parts:
            return f"gr[{members}]{{0}}"
        return ' + '.join(f"gr[{members}]{{{self.parts[k].to_text()}}}" for k in sorted(self.parts))

    def to_json(self):
        return {'subset': self.subset.to_json(),
                'parts': [dict(level=k, **self.parts[k].to_json()) for k in sorted(self.parts)]}

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"GrElement({self.to_text()})"


def _split_levels(f, subset):
    """(level, piece) pairs: for I = ∅ each c^{V_n} block is its own level"""
    if subset.members:
        return [(n, _parity_part(f, cls_.representative)) for cls_, n in pw_degree(f)]
    return [(n, pw_component(f, n)) for n in sorted(pw_coordinates(f))]


def gr_multiply(subset, x, y):
    """Products of representatives, keeping the c^{V_nu} components with lam + mu - nu in Λ_I"""
    x._same(y)
    if x.subset != subset:
        raise UserInputError(f"gr subset mismatch: {x.subset} vs {subset}")
    out = {}
    for _, f in x.parts.items():
        for lam, f_piece in _split_levels(f, subset):
            for _, g in y.parts.items():
                for mu, g_piece in _split_levels(g, subset):
                    product = f_piece * g_piece
                    coords = pw_coordinates(product)
                    kept = _kept_levels(subset, lam, mu, sorted(coords))
                    residue = x.base.zero()
                    for nu in kept:
                        residue = residue + pw_component(product, nu)
                    key = lam + mu
                    out[key] = out[key] + residue if key in out else residue
    return GrElement(subset, out, x.base)


def gr_to_homogeneous(x):
    """gr_∅ element as an element of O_q(Mat2)/(D_q): the top-length part of each residue"""
    from .presentations import gr_sl2
    if x.subset.members:
        raise UserInputError("Only gr with I = ∅ is graded by word length")
    target = gr_sl2(x.base.classical)
    out = target.zero()
    for lam, f in x.parts.items():
        out = out + transport(f.part_of_length(lam), target)
    return out


def gr_to_p1p1(x):
    """a -> x u, b -> x w, c -> y u, d -> y w on top-length parts (I = ∅ only)"""
    if x.subset.members:
        raise UserInputError("gr_to_p1p1 is defined for I = ∅ only")
    target = p1p1(x.base.classical)
    g = target.gen
    letter_map = {'a': g('x') * g('u'), 'b': g('x') * g('w'), 'c': g('y') * g('u'), 'd': g('y') * g('w')}
    out = target.zero()
    for lam, f in x.parts.items():
        out = out + transport(f.part_of_length(lam), target, letter_map)
    return out


# ---------------------------------------------------------------------------
# Quantum-orbit algebras and Φ
# ---------------------------------------------------------------------------

class OrbitAlgebraElement:
    """Element of gr_I(O_q(SL2)) ⊗ C[Λ_I], stored as kappa in Λ_I -> gr part"""

    __slots__ = ('subset', 'parts')

    def __init__(self, subset, parts):
        self.subset = _check_rank_one_subset(subset)
        clean = {}
        for kappa, g in parts.items():
            kappa = kappa if isinstance(kappa, Weight) else Weight((int(kappa),))
            if not SL2.in_sublattice(kappa, self.subset):
                raise UserInputError(f"{kappa} is not in the root sublattice spanned by {self.subset}")
            if g.subset != self.subset:
                raise UserInputError("gr part has the wrong subset")
            if not g.is_zero():
                clean[kappa] = clean[kappa] + g if kappa in clean else g
        self.parts = {k: g for k, g in clean.items() if not g.is_zero()}

    @classmethod
    def pure(cls, g, kappa=0):
        return cls(g.subset, {kappa: g})

    def lambda_degrees(self):
        """Total Λ-degrees (class part plus kappa) of the pieces"""
        out = set()
        for kappa, g in self.parts.items():
            for lam in g.parts:
                out.add(Weight((lam,)) + kappa)
        return sorted(out, key=lambda w: w.coords)

    def __add__(self, other):
        out = dict(self.parts)
        for k, g in other.parts.items():
            out[k] = out[k] + g if k in out else g
        return OrbitAlgebraElement(self.subset, out)

    def __mul__(self, other):
        return orbit_algebra_multiply(self.subset, self, other)

    def __eq__(self, other):
        if not isinstance(other, OrbitAlgebraElement):
            return NotImplemented
        return self.subset == other.subset and self.parts == other.parts

    __hash__ = None

    def to_text(self):
        if not self.parts:
            return '0'
        return ' + '.join(f"({self.parts[k].to_text()})|(e^{k})"
                          for k in sorted(self.parts, key=lambda w: w.coords))

    def to_json(self):
        return {'subset': self.subset.to_json(),
                'parts': [{'kappa': k.to_json(), 'gr': self.parts[k].to_json()}
                          for k in sorted(self.parts, key=lambda w: w.coords)]}


def orbit_algebra_multiply(subset, x, y):
    if x.subset != subset or y.subset != subset:
        raise UserInputError("Orbit algebra elements over different subsets")
    out = {}
    for k1, g1 in x.parts.items():
        for l1, f1 in g1.parts.items():
            for k2, g2 in y.parts.items():
                for l2, f2 in g2.parts.items():
                    # gr keys are coset representatives: the part of l1 + l2 in Λ_I moves into kappa
                    total = Weight((l1 + l2,))
                    key = k1 + k2 + (total - SL2.coset_class(total, subset).representative)
                    product = gr_multiply(subset, GrElement(subset, {l1: f1}, g1.base),
                                          GrElement(subset, {l2: f2}, g2.base))
                    out[key] = out[key] + product if key in out else product
    return OrbitAlgebraElement(subset, out)


def vI_basis(n, subset):
    """
    Basis of (V_n)_I as coordinate vectors: the U_q(u_I)-invariants, i.e. the
    kernel of E when I = ∅ and all of V_n when I = Δ.
    """
    subset = _check_rank_one_subset(subset)
    rep = IrrepVn(int(n))
    if subset.members:
        return linalg.identity(rep.dimension)
    kernel = linalg.nullspace(rep.generator_matrix('E'), rep.dimension)
    if kernel != [rep.basis_vector(0)]:
        raise InvariantViolation(f"Kernel of E on V_{n} is not the highest-weight line")
    return kernel


def _basis_indices(n, subset):
    return [vec.index(ONE) for vec in vI_basis(n, subset)]


def phi(subset, c, classical=False):
    """Φ(c_{f,v}) = Σ_i c_{f,e_i} ⊗ c_{e^i,v} over the basis e_i of (V_n)_I"""
    if not isinstance(c, MatrixCoefficient):
        c = MatrixCoefficient(*c)
    p = sl2(classical)
    out = TensorElement.zero((p, p))
    for k in _basis_indices(c.n, subset):
        out = out + TensorElement.pure(coefficient_to_element(MatrixCoefficient(c.n, c.row, k), classical),
                                       coefficient_to_element(MatrixCoefficient(c.n, k, c.col), classical))
    return out


def phi_element(x):
    """Φ extended linearly to a gr element through Peter-Weyl coordinates"""
    p = x.base
    out = TensorElement.zero((p, p))
    for f in x.parts.values():
        for n, block in pw_coordinates(f).items():
            for (i, j), alpha in block.items():
                out = out + phi(x.subset, MatrixCoefficient(n, i, j), p.classical) * alpha
    return out


def phi_sides(subset, c1, c2, classical=False):
    """(Φ of the gr-product expanded through Clebsch-Gordan data, Φ(c1)·Φ(c2))"""
    subset = _check_rank_one_subset(subset)
    p = sl2(classical)
    candidates = range(abs(c1.n - c2.n), c1.n + c2.n + 1, 2)
    keep = set(_kept_levels(subset, c1.n, c2.n, candidates))
    lhs = TensorElement.zero((p, p))
    for (nu, k, l), coeff in product_expansion(c1, c2, keep).items():
        if classical:
            coeff = coeff.evaluate(1)
        lhs = lhs + phi(subset, MatrixCoefficient(nu, k, l), classical) * coeff
    rhs = phi(subset, c1, classical) * phi(subset, c2, classical)
    return lhs, rhs


def phi_multiplicativity_check(subset, c1, c2, classical=False):
    lhs, rhs = phi_sides(subset, c1, c2, classical)
    ok = lhs == rhs
    if not ok:
        logger.debug(f"Φ multiplicativity fails for {c1.to_text()}, {c2.to_text()} at I={subset}")
    return ok


EMPTY = RootSubset.empty()
DELTA = SL2.delta
