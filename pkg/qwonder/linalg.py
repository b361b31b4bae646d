"""
Exact linear algebra over QQ(q)
Thin layer over sympy's DomainMatrix; inputs and outputs are lists of QRational.
"""
import logging

from sympy.polys.matrices import DomainMatrix

from .errors import InvariantViolation, UserInputError
from .scalars import FIELD, QRational, ZERO

logger = logging.getLogger(__name__)


def _to_domain(rows, ncols=None):
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    data = []
    for row in rows:
        if len(row) != ncols:
            raise UserInputError(f"Ragged matrix: expected {ncols} columns, got {len(row)}")
        data.append([QRational(x).value for x in row])
    return DomainMatrix(data, (nrows, ncols), FIELD)


def _from_domain(dm):
    nrows, ncols = dm.shape
    return [[QRational._wrap(dm[i, j].element) for j in range(ncols)] for i in range(nrows)]


def identity(n):
    return [[QRational(1) if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(nrows, ncols):
    return [[ZERO] * ncols for _ in range(nrows)]


def matmul(a, b):
    """Product of two list-of-rows matrices"""
    if not a or not b:
        return []
    inner = len(b)
    if len(a[0]) != inner:
        raise UserInputError(f"Shape mismatch {len(a)}x{len(a[0])} * {inner}x{len(b[0])}")
    out = []
    for row in a:
        acc = [ZERO] * len(b[0])
        for k, x in enumerate(row):
            if x.is_zero():
                continue
            for j, y in enumerate(b[k]):
                if not y.is_zero():
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def apply(matrix, vector):
    """matrix * column vector"""
    return [sum((m * v for m, v in zip(row, vector) if not m.is_zero() and not v.is_zero()), ZERO)
            for row in matrix]


def inverse(rows):
    n = len(rows)
    if n == 0:
        return []
    dm = _to_domain(rows)
    if dm.shape[0] != dm.shape[1]:
        raise UserInputError("Only square matrices can be inverted")
    if dm.rank() != n:
        raise UserInputError("Matrix is singular")
    return _from_domain(dm.inv())


def rank(rows, ncols=None):
    if not rows:
        return 0
    return _to_domain(rows, ncols).rank()


def row_reduce(rows, ncols=None):
    """Reduced row echelon form: (nonzero rows, pivot column indices)"""
    if not rows:
        return [], ()
    rref, pivots = _to_domain(rows, ncols).rref()
    reduced = _from_domain(rref)[:len(pivots)]
    return reduced, tuple(pivots)


def nullspace(rows, ncols=None):
    """Basis (list of vectors) of {x : rows * x = 0}"""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return identity(ncols)
    reduced, pivots = row_reduce(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = QRational(1)
        for r, p in enumerate(pivots):
            vec[p] = -reduced[r][f]
        basis.append(vec)
    return basis


def solve(rows, rhs):
    """Unique solution x of rows * x = rhs; raises if none or not unique"""
    n = len(rows[0]) if rows else 0
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = row_reduce(augmented, n + 1)
    if n in pivots:
        raise UserInputError("Linear system is inconsistent")
    if len(pivots) != n:
        raise InvariantViolation("Linear system has no unique solution")
    x = [ZERO] * n
    for r, p in enumerate(pivots):
        x[p] = reduced[r][n]
    return x


def is_identity(rows):
    return all((x.is_one() if i == j else x.is_zero())
               for i, row in enumerate(rows) for j, x in enumerate(row))
