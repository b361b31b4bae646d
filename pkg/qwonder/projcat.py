"""
Graded modules
Finitely presented right modules over graded presentations: graded pieces,
shifts, direct sums, degreewise action and homomorphism matrices, torsion
certificates and witness checks for equality in the Proj quotient category.
"""
import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from cachetools import LRUCache

from . import linalg
from .engine_config import EngineConfig
from .errors import UserInputError
from .lattice import Weight
from .ncalg import AlgebraElement, graded_basis
from .scalars import ONE, ZERO

logger = logging.getLogger(__name__)

Column = Tuple[int, Tuple[int, ...]]


def _weight(value):
    if isinstance(value, Weight):
        return value
    if isinstance(value, int):
        return Weight((value,))
    return Weight.of(*value)


class GradedModulePresentation:
    """
    M = (⊕ e_i R) / (relation rows) R for a graded presentation R.
    generators: (label, degree); relations: {label: element of R}.
    """

    def __init__(self, algebra, generators, relations=()):
        if not algebra.is_graded:
            raise UserInputError(f"Presentation {algebra.name} is not graded")
        self.algebra = algebra
        self.generators = tuple((str(label), _weight(deg)) for label, deg in generators)
        labels = [label for label, _ in self.generators]
        if len(set(labels)) != len(labels):
            raise UserInputError("Module generator labels must be distinct")
        self._index = {label: i for i, label in enumerate(labels)}
        self.relations = tuple(self._check_row(dict(row)) for row in relations)
        self._pieces = LRUCache(maxsize=EngineConfig.get_cache_size())
        self._pieces_lock = threading.Lock()

    def _check_row(self, row):
        degrees = set()
        clean = {}
        for label, x in row.items():
            if label not in self._index:
                raise UserInputError(f"Relation uses unknown generator '{label}'")
            if x.presentation != self.algebra:
                raise UserInputError("Relation entry belongs to another presentation")
            if x.is_zero():
                continue
            if not x.is_homogeneous():
                raise UserInputError(f"Relation entry {x.to_text()} is not homogeneous")
            degrees.add(self.generators[self._index[label]][1] + x.degree())
            clean[label] = x
        if len(degrees) > 1:
            raise UserInputError(f"Relation row is not homogeneous: degrees {sorted(str(d) for d in degrees)}")
        return clean

    def row_degree(self, row):
        label, x = next(iter(row.items()))
        return self.generators[self._index[label]][1] + x.degree()

    @property
    def labels(self):
        return [label for label, _ in self.generators]

    def degree_of(self, label):
        return self.generators[self._index[label]][1]

    def to_json(self):
        return {'algebra': self.algebra.name,
                'generators': [{'label': label, 'degree': deg.to_json()} for label, deg in self.generators],
                'relations': [{label: x.to_text() for label, x in row.items()} for row in self.relations]}

    @classmethod
    def from_json(cls, data):
        """Module file: algebra name, generator degrees and relation rows in the expression grammar"""
        from .contexts import CONTEXT_NAMES, evaluate
        from .presentations import get_presentation
        from .reesgr import ReesElement, rees_to_vinberg
        algebra = get_presentation(data['algebra'])
        context = data.get('context', data['algebra'])
        if context not in CONTEXT_NAMES:
            raise UserInputError(f"Relations over {algebra.name} need a 'context' to be parsed in")
        generators = [(g['label'], g['degree']) for g in data['generators']]
        relations = []
        for row in data.get('relations', []):
            parsed = {}
            for label, text in row.items():
                value = evaluate(text, context)
                if isinstance(value, ReesElement):
                    value = rees_to_vinberg(value)
                if not isinstance(value, AlgebraElement) or value.presentation != algebra:
                    raise UserInputError(f"Relation entry '{text}' is not an element of {algebra.name}")
                parsed[label] = value
            relations.append(parsed)
        return cls(algebra, generators, relations)

    def __repr__(self):
        return f"GradedModulePresentation({self.algebra.name}, {len(self.generators)} gens, {len(self.relations)} rels)"


@dataclass
class GradedPiece:
    degree: Weight
    columns: List[Column]
    reduced_relations: List[List]
    pivots: Tuple[int, ...]
    basis: List[int] = field(default_factory=list)

    @property
    def dimension(self):
        return len(self.basis)

    def coordinates(self, vector):
        """Coordinates of a spanning-set vector in the quotient basis"""
        v = list(vector)
        for row, pivot in zip(self.reduced_relations, self.pivots):
            factor = v[pivot]
            if not factor.is_zero():
                v = [a - factor * b for a, b in zip(v, row)]
        return [v[j] for j in self.basis]

    def basis_text(self, module):
        out = []
        for j in self.basis:
            gen, word = self.columns[j]
            label = module.generators[gen][0]
            w = module.algebra.word_expression(word)
            out.append(f"{label}*{w}" if w else label)
        return out


def _column_index(columns):
    return {c: i for i, c in enumerate(columns)}


def _spanning_columns(module, degree, horizon):
    columns = []
    for gen, (_, nu) in enumerate(module.generators):
        if nu.rank != degree.rank:
            raise UserInputError(f"Degree {degree} has the wrong rank for {module.algebra.name}")
        for word in graded_basis(module.algebra, degree - nu, horizon):
            columns.append((gen, word))
    return columns


def _vector(module, terms, index):
    """Spanning-set coordinates of Σ e_gen * x"""
    vec = [ZERO] * len(index)
    for (gen, word), c in terms.items():
        vec[index[(gen, word)]] = vec[index[(gen, word)]] + c
    return vec


def _row_times(module, row, u):
    """relation row times the word u, as {(gen, word): coeff}"""
    p = module.algebra
    out = {}
    for label, x in row.items():
        gen = module._index[label]
        for w, c in (x * AlgebraElement(p, {u: ONE}, normalized=True)).terms().items():
            out[(gen, w)] = out.get((gen, w), ZERO) + c
    return out


def graded_piece(module, degree, horizon=None):
    """Basis of M_degree: spanning products e_i * word modulo the relation rows times words"""
    degree = _weight(degree)
    key = (degree, horizon)
    with module._pieces_lock:
        cached = module._pieces.get(key)
    if cached is not None:
        return cached
    columns = _spanning_columns(module, degree, horizon)
    index = _column_index(columns)
    rows = []
    for row in module.relations:
        if not row:
            continue
        delta = module.row_degree(row)
        if delta.rank != degree.rank:
            continue
        for u in graded_basis(module.algebra, degree - delta, horizon):
            rows.append(_vector(module, _row_times(module, row, u), index))
    reduced, pivots = linalg.row_reduce(rows, len(columns)) if rows and columns else ([], ())
    basis = [j for j in range(len(columns)) if j not in pivots]
    piece = GradedPiece(degree, columns, reduced, tuple(pivots), basis)
    with module._pieces_lock:
        module._pieces[key] = piece
    logger.debug(f"M_{degree} of {module!r}: {len(columns)} spanning, dimension {piece.dimension}")
    return piece


def free_module(algebra, degrees=(0,), labels=None):
    """Free right module on generators of the given degrees"""
    labels = labels or [f"e{i}" for i in range(len(degrees))]
    return GradedModulePresentation(algebra, list(zip(labels, degrees)))


def quotient_module(module, rows):
    """module / (rows) R; rows given as {label: element} or a bare element for a single generator"""
    extra = []
    for row in rows:
        if isinstance(row, AlgebraElement):
            if len(module.generators) != 1:
                raise UserInputError("Bare relation elements need a cyclic module")
            row = {module.generators[0][0]: row}
        extra.append(row)
    return GradedModulePresentation(module.algebra, module.generators, module.relations + tuple(extra))


def direct_sum(*modules):
    """M_1 ⊕ ... ⊕ M_k with labels prefixed by the summand index"""
    algebra = modules[0].algebra
    if any(m.algebra != algebra for m in modules):
        raise UserInputError("Direct sum of modules over different algebras")
    generators, relations = [], []
    for k, m in enumerate(modules):
        generators.extend((f"{k}.{label}", deg) for label, deg in m.generators)
        relations.extend({f"{k}.{label}": x for label, x in row.items()} for row in m.relations)
    return GradedModulePresentation(algebra, generators, relations)


def shift(module, lam):
    """M[lam] with M[lam]_mu = M_(lam + mu): generator degrees move by -lam"""
    lam = _weight(lam)
    return GradedModulePresentation(module.algebra, [(label, deg - lam) for label, deg in module.generators],
                                    module.relations)


def action_matrix(module, degree, x, horizon=None):
    """Matrix of right multiplication by a homogeneous x from M_degree to M_(degree + deg x)"""
    if x.presentation != module.algebra:
        raise UserInputError("Acting element belongs to another presentation")
    degree = _weight(degree)
    if x.is_zero():
        raise UserInputError("Acting element must be nonzero and homogeneous")
    source = graded_piece(module, degree, horizon)
    target = graded_piece(module, degree + x.degree(), horizon)
    index = _column_index(target.columns)
    p = module.algebra
    cols = []
    for j in source.basis:
        gen, word = source.columns[j]
        image = AlgebraElement(p, {word: ONE}, normalized=True) * x
        terms = {(gen, w): c for w, c in image.terms().items()}
        cols.append(target.coordinates(_vector(module, terms, index)))
    return [[col[i] for col in cols] for i in range(target.dimension)]


def homomorphism_matrices(source, target, images, degrees, horizon=None):
    """
    Degreewise matrices of the module map sending generator label -> images[label]
    (a {target label: element} row) on the given degrees.
    """
    if source.algebra != target.algebra:
        raise UserInputError("Homomorphism between modules over different algebras")
    p = source.algebra
    out = {}
    for degree in degrees:
        degree = _weight(degree)
        src = graded_piece(source, degree, horizon)
        dst = graded_piece(target, degree, horizon)
        index = _column_index(dst.columns)
        cols = []
        for j in src.basis:
            gen, word = src.columns[j]
            label = source.generators[gen][0]
            terms = {}
            for t_label, x in images.get(label, {}).items():
                t_gen = target._index[t_label]
                for w, c in (x * AlgebraElement(p, {word: ONE}, normalized=True)).terms().items():
                    if (t_gen, w) not in index:
                        raise UserInputError(f"Image of {label} is not homogeneous of the right degree")
                    terms[(t_gen, w)] = terms.get((t_gen, w), ZERO) + c
            cols.append(dst.coordinates(_vector(target, terms, index)))
        out[degree] = [[col[i] for col in cols] for i in range(dst.dimension)]
    return out


@dataclass
class TorsionCertificate:
    verdict: str
    band_base: Weight
    checked: List[Tuple[Weight, int]]
    witness_degree: Optional[Weight] = None
    witness_basis: List[str] = field(default_factory=list)
    band: List[Weight] = field(default_factory=list)

    def to_json(self):
        return {
            'verdict': self.verdict,
            'band_base': self.band_base.to_json(),
            'checked': [{'degree': d.to_json(), 'dimension': n} for d, n in self.checked],
            'witness_degree': self.witness_degree.to_json() if self.witness_degree is not None else None,
            'witness_basis': self.witness_basis,
            'band': [d.to_json() for d in self.band],
        }


def _generator_degrees(algebra):
    degrees = sorted(set(algebra.grading), key=lambda d: d.coords)
    if any(d.is_zero() for d in degrees):
        raise UserInputError(f"{algebra.name} has generators of degree zero; the band argument needs positive degrees")
    return degrees


def is_torsion(module, band_base, horizon):
    """
    Band certificate: if M_mu = 0 for some mu above every generator degree along
    the ray band_base + k*(sum of algebra generator degrees), every higher piece
    is a multiple of M_mu and vanishes. A module nonzero along the whole ray up to
    the horizon is reported not_torsion; nothing checkable gives unknown.
    """
    p = module.algebra
    band_base = _weight(band_base)
    if horizon is None:
        horizon = EngineConfig.get_default_horizon()
    steps = _generator_degrees(p)
    direction = steps[0]
    for s in steps[1:]:
        direction = direction + s
    for label, nu in module.generators:
        if not graded_basis(p, band_base - nu, horizon):
            raise UserInputError(f"Generator {label} of degree {nu} does not reach the band base {band_base}")
    checked = []
    k = 0
    while True:
        mu = band_base + direction.scale(k)
        try:
            piece = graded_piece(module, mu, horizon)
        except UserInputError:
            break
        checked.append((mu, piece.dimension))
        if piece.dimension == 0:
            band = [mu] + [mu + s for s in steps]
            try:
                dims = [graded_piece(module, d, horizon).dimension for d in band[1:]]
            except UserInputError:
                dims = []
            checked.extend(zip(band[1:], dims))
            if any(dims):
                raise UserInputError(f"Degree {mu} vanishes but a degree above it does not; "
                                     "the algebra is not generated in the listed degrees")
            logger.info(f"Torsion certificate: M_{mu} = 0")
            return TorsionCertificate('torsion', band_base, checked, mu, [], band)
        k += 1
        if k > horizon:
            break
    if len(checked) >= 2:
        last, _ = checked[-1]
        basis = graded_piece(module, last, horizon).basis_text(module)
        logger.info(f"No vanishing degree up to {last}; reporting not_torsion")
        return TorsionCertificate('not_torsion', band_base, checked, last, basis)
    return TorsionCertificate('unknown', band_base, checked)


def proj_equiv_check(source, target, maps, lam, horizon=None):
    """
    True iff the degreewise matrices (target_mu x source_mu) are bijective on every
    given degree mu >= lam and commute with every algebra generator between given degrees.
    """
    p = source.algebra
    if target.algebra != p:
        raise UserInputError("Modules over different algebras")
    lam = _weight(lam)
    maps = {_weight(d): m for d, m in maps.items()}
    for mu, matrix in maps.items():
        src = graded_piece(source, mu, horizon)
        dst = graded_piece(target, mu, horizon)
        if len(matrix) != dst.dimension or any(len(row) != src.dimension for row in matrix):
            raise UserInputError(f"Map at degree {mu} is not homogeneous: expected "
                                 f"{dst.dimension}x{src.dimension}")
        if not graded_basis(p, mu - lam, horizon) and mu != lam:
            raise UserInputError(f"Degree {mu} is not above {lam}")
        if src.dimension != dst.dimension or linalg.rank(matrix, src.dimension) != src.dimension:
            logger.info(f"Map is not bijective at degree {mu}")
            return False
    for mu, matrix in maps.items():
        for name in p.generators:
            g = p.gen(name)
            nxt = mu + g.degree()
            if nxt not in maps:
                continue
            left = linalg.matmul(maps[nxt], action_matrix(source, mu, g, horizon))
            right = linalg.matmul(action_matrix(target, mu, g, horizon), matrix)
            if left != right:
                logger.info(f"Map does not commute with {name} at degree {mu}")
                return False
    return True


def graded_dimensions(module, degrees, horizon=None) -> Dict[Weight, int]:
    return {_weight(d): graded_piece(module, d, horizon).dimension for d in degrees}
