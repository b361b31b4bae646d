"""
Shipped presentations
Quantum 2x2 matrices, quantum SL2, the homogeneous quotient by the quantum
determinant, the quantum P1 x P1 coordinate ring and the quantum Vinberg
algebra, each with its classical (q = 1) variant.
"""
import logging
import threading

from cachetools import cached, LRUCache

from .errors import UserInputError
from .ncalg import Presentation, specialize_at_one

logger = logging.getLogger(__name__)

MAT2_TEXT = """
presentation mat2
generators a b c d
grading a=1 b=1 c=1 d=1
rule ba -> q^-1*ab
rule ca -> q^-1*ac
rule cb -> bc
rule db -> q^-1*bd
rule dc -> q^-1*cd
rule da -> ad - (q - q^-1)*bc
"""

# b < c < a < d keeps the determinant rules confluent; normal words are
# b^j c^k a^i and b^j c^k d^l.
SL2_TEXT = """
presentation sl2
generators b c a d
order b=1 c=1 a=2 d=2
rule ab -> q*ba
rule ac -> q*ca
rule cb -> bc
rule db -> q^-1*bd
rule dc -> q^-1*cd
rule ad -> 1 + q*bc
rule da -> 1 + q^-1*bc
"""

GR_SL2_TEXT = """
presentation gr_sl2
generators b c a d
grading b=1 c=1 a=1 d=1
rule ab -> q*ba
rule ac -> q*ca
rule cb -> bc
rule db -> q^-1*bd
rule dc -> q^-1*cd
rule ad -> q*bc
rule da -> q^-1*bc
"""

P1P1_TEXT = """
presentation p1p1
generators x y u w
grading x=1,0 y=1,0 u=0,1 w=0,1
rule yx -> q^-1*xy
rule wu -> q^-1*uw
rule ux -> xu
rule uy -> yu
rule wx -> xw
rule wy -> yw
"""

VINBERG_NAMES = {'a': 'az', 'b': 'bz', 'c': 'cz', 'd': 'dz'}

_TEXTS = {
    'mat2': MAT2_TEXT,
    'sl2': SL2_TEXT,
    'gr_sl2': GR_SL2_TEXT,
    'p1p1': P1P1_TEXT,
}

QUANTUM_NAMES = ('mat2', 'sl2', 'gr_sl2', 'p1p1', 'vinberg')
PRESENTATION_NAMES = QUANTUM_NAMES + tuple(f"{n}_classical" for n in QUANTUM_NAMES)


@cached(cache=LRUCache(maxsize=32), lock=threading.Lock())
def get_presentation(name):
    """Shipped presentation by name, e.g. 'sl2' or 'vinberg_classical'"""
    if name.endswith('_classical'):
        base = name[:-len('_classical')]
        if base not in QUANTUM_NAMES:
            raise UserInputError(f"Unknown presentation '{name}'")
        return specialize_at_one(get_presentation(base), name)
    if name == 'vinberg':
        return get_presentation('mat2').renamed(VINBERG_NAMES, 'vinberg')
    if name not in _TEXTS:
        raise UserInputError(f"Unknown presentation '{name}'. Known: {', '.join(PRESENTATION_NAMES)}")
    p = Presentation.from_text(_TEXTS[name])
    logger.info(f"Built presentation {name}")
    return p


def mat2(classical=False):
    return get_presentation('mat2_classical' if classical else 'mat2')


def sl2(classical=False):
    return get_presentation('sl2_classical' if classical else 'sl2')


def gr_sl2(classical=False):
    return get_presentation('gr_sl2_classical' if classical else 'gr_sl2')


def p1p1(classical=False):
    return get_presentation('p1p1_classical' if classical else 'p1p1')


def vinberg(classical=False):
    return get_presentation('vinberg_classical' if classical else 'vinberg')


def matrix_generators(p):
    """The four matrix entries of p in the order a, b, c, d"""
    names = ('a', 'b', 'c', 'd')
    if 'az' in p.generators:
        names = tuple(VINBERG_NAMES[n] for n in names)
    missing = [n for n in names if n not in p.generators]
    if missing:
        raise UserInputError(f"Presentation {p.name} has no matrix generators {missing}")
    return tuple(p.gen(n) for n in names)


def quantum_determinant(p):
    """D_q = ad - q bc"""
    a, b, c, d = matrix_generators(p)
    return a * d - p.q * (b * c)
