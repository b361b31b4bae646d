"""
Weight lattices, dominance order, quotient orders modulo root sublattices
and lower-set enumeration.

Weights are integer vectors in fundamental-weight coordinates; simple roots
are given in the same coordinates (rows of the Cartan matrix).
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np
from sympy import Matrix, floor
from sympy.matrices.normalforms import hermite_normal_form

from .errors import UserInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Weight:
    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coords', tuple(int(c) for c in self.coords))

    @classmethod
    def of(cls, *coords):
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = coords[0]
        return cls(tuple(coords))

    @property
    def rank(self):
        return len(self.coords)

    def _check(self, other):
        if self.rank != other.rank:
            raise UserInputError(f"Weight dimension mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other):
        self._check(other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Weight(tuple(-a for a in self.coords))

    def scale(self, n):
        return Weight(tuple(n * a for a in self.coords))

    def is_zero(self):
        return not any(self.coords)

    def is_dominant(self):
        return all(c >= 0 for c in self.coords)

    def to_json(self):
        return list(self.coords)

    def __str__(self):
        if self.rank == 1:
            return str(self.coords[0])
        return '(' + ','.join(str(c) for c in self.coords) + ')'


@dataclass(frozen=True)
class RootSubset:
    members: FrozenSet[int]

    @classmethod
    def of(cls, *members):
        return cls(frozenset(int(m) for m in members))

    @classmethod
    def empty(cls):
        return cls(frozenset())

    def to_json(self):
        return sorted(self.members)

    def __str__(self):
        return '{' + ','.join(str(m) for m in sorted(self.members)) + '}'


class WeightLattice:
    """Weight lattice Λ of rank r with simple roots α_1..α_r"""

    def __init__(self, simple_roots, name=None):
        roots = tuple(tuple(int(c) for c in root) for root in simple_roots)
        if not roots:
            raise UserInputError("A weight lattice needs at least one simple root")
        rank = len(roots[0])
        if any(len(r) != rank for r in roots):
            raise UserInputError("Simple roots must all have the lattice rank as length")
        self._roots_matrix = Matrix(roots).T
        if self._roots_matrix.rank() != len(roots):
            raise UserInputError("Simple roots must be linearly independent")
        self.rank = rank
        self.simple_roots = tuple(Weight(r) for r in roots)
        self.name = name or f"rank-{rank}"
        self._hnf_cache: Dict[FrozenSet[int], Optional[List[Tuple[int, List[int]]]]] = {}

    @classmethod
    def sl2(cls):
        return cls([(2,)], name='SL2')

    @classmethod
    def sl3(cls):
        return cls([(2, -1), (-1, 2)], name='SL3')

    @property
    def delta(self):
        """The full set of simple-root indices (1-based)"""
        return RootSubset(frozenset(range(1, len(self.simple_roots) + 1)))

    def weight(self, *coords):
        w = Weight.of(*coords)
        self.check_weight(w)
        return w

    def zero(self):
        return Weight((0,) * self.rank)

    def fundamental_weight(self, i):
        return Weight(tuple(1 if k == i - 1 else 0 for k in range(self.rank)))

    def check_weight(self, w):
        if w.rank != self.rank:
            raise UserInputError(f"Weight {w} has length {w.rank}, lattice {self.name} has rank {self.rank}")

    def check_subset(self, subset):
        bad = [m for m in subset.members if not 1 <= m <= len(self.simple_roots)]
        if bad:
            raise UserInputError(f"Root indices {bad} outside 1..{len(self.simple_roots)}")

    def root_coefficients(self, w):
        """
        Rational coefficients n_i with w = sum n_i alpha_i, or None when w is
        outside the rational span of the simple roots.
        """
        self.check_weight(w)
        try:
            solution, params = self._roots_matrix.gauss_jordan_solve(Matrix(w.coords))
        except ValueError:
            return None
        if params.shape[0]:
            return None
        return [solution[i] for i in range(solution.shape[0])]

    def dominance_leq(self, mu, lam):
        """mu <= lam iff lam - mu is a nonnegative integer combination of simple roots"""
        coeffs = self.root_coefficients(lam - mu)
        if coeffs is None:
            return False
        return all(c.is_integer and c >= 0 for c in coeffs)

    def quotient_leq(self, mu, lam):
        """Order on Λ/Λ_I: coefficients of roots in I unconstrained, others nonnegative"""
        if mu.subset != lam.subset:
            raise UserInputError(f"Subset mismatch: {mu.subset} vs {lam.subset}")
        coeffs = self.root_coefficients(lam.representative - mu.representative)
        if coeffs is None:
            return False
        for i, c in enumerate(coeffs, start=1):
            if not c.is_integer:
                return False
            if i not in mu.subset.members and c < 0:
                return False
        return True

    def lower_set(self, lam, horizon=None):
        """
        All dominant mu with mu <= lam, found as lam - Σ n_i α_i.
        A dominant mu needs n_i no larger than the i-th root coefficient of lam;
        when lam has none (roots not spanning), each n_i runs up to horizon.
        """
        self.check_weight(lam)
        if not lam.is_dominant():
            raise UserInputError(f"Weight {lam} is not dominant")
        if self.rank == 1:
            step = self.simple_roots[0].coords[0]
            return {Weight((m,)) for m in range(lam.coords[0], -1, -abs(step))}
        coeffs = self.root_coefficients(lam)
        if coeffs is not None:
            bounds = [max(int(floor(c)), 0) for c in coeffs]
        else:
            bounds = [max(lam.coords) if horizon is None else horizon] * len(self.simple_roots)
        found = set()
        for idx in np.ndindex(*(b + 1 for b in bounds)):
            mu = lam
            for n, root in zip(idx, self.simple_roots):
                mu = mu - root.scale(int(n))
            if mu.is_dominant():
                found.add(mu)
        logger.debug(f"lower_set({lam}) with root bounds {bounds}: {len(found)} weights")
        return found

    def _sublattice_basis(self, subset):
        """Hermite basis of span_Z{alpha_i : i in I} as (pivot row, column) pairs"""
        key = subset.members
        if key in self._hnf_cache:
            return self._hnf_cache[key]
        if not key:
            self._hnf_cache[key] = None
            return None
        cols = Matrix([self.simple_roots[i - 1].coords for i in sorted(key)]).T
        hnf = hermite_normal_form(cols)
        basis = []
        for j in range(hnf.shape[1]):
            column = [int(hnf[i, j]) for i in range(hnf.shape[0])]
            nonzero = [i for i, v in enumerate(column) if v]
            if nonzero:
                basis.append((nonzero[-1], column))
        basis.sort(key=lambda pc: pc[0])
        self._hnf_cache[key] = basis
        return basis

    def coset_class(self, lam, subset):
        """Canonical representative of lam modulo Λ_I"""
        self.check_weight(lam)
        self.check_subset(subset)
        basis = self._sublattice_basis(subset)
        if basis is None:
            return QuotientClass(lam, subset)
        v = np.array(lam.coords, dtype=object)
        for pivot, column in reversed(basis):
            col = np.array(column, dtype=object)
            if col[pivot] < 0:
                col = -col
            v = v - (v[pivot] // col[pivot]) * col
        return QuotientClass(Weight(tuple(int(x) for x in v)), subset)

    def in_sublattice(self, w, subset):
        """True iff w lies in Λ_I"""
        return self.coset_class(w, subset).representative.is_zero()

    def coset_representatives(self, subset, horizon):
        """Distinct classes of Λ/Λ_I met by weights with every coordinate in [-horizon, horizon]"""
        found = {}
        for idx in np.ndindex(*((2 * horizon + 1,) * self.rank)):
            cls = self.coset_class(Weight(tuple(int(i) - horizon for i in idx)), subset)
            found[cls.representative] = cls
        return [found[rep] for rep in sorted(found, key=lambda w: w.coords)]


@dataclass(frozen=True)
class QuotientClass:
    """Class [λ]_I; equality is by canonical representative (construct via coset_class)"""
    representative: Weight
    subset: RootSubset

    def to_json(self):
        return {'representative': self.representative.to_json(), 'subset': self.subset.to_json()}

    def __str__(self):
        return f"[{self.representative}]_{self.subset}"


SL2 = WeightLattice.sl2()


def dominance_leq(mu, lam, lattice=SL2):
    return lattice.dominance_leq(mu, lam)


def quotient_leq(mu, lam, lattice=SL2):
    return lattice.quotient_leq(mu, lam)


def lower_set(lam, horizon=None, lattice=SL2):
    return lattice.lower_set(lam, horizon)


def coset_class(lam, subset, lattice=SL2):
    return lattice.coset_class(lam, subset)
