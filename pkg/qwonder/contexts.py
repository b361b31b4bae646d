"""
Evaluation contexts
Turn expression trees into values of the selected algebra: O_q(Mat2), O_q(SL2),
O_q(GL2), the Rees/Vinberg algebra, gr_∅ and gr_Δ, quantum P1 x P1, U_q(sl2),
and the q = 1 variants of each.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from . import parser as ast
from .errors import UserInputError
from .lattice import SL2, RootSubset
from .ncalg import AlgebraElement, CentralLocalization, LocalizedElement, TensorElement, tensor_product
from .presentations import get_presentation, quantum_determinant
from .qgroups import MatrixCoefficient, UqElement, UqTensor, coefficient_to_element
from .reesgr import GrElement, ReesElement, rees_to_vinberg
from .scalars import ONE, Q, QRational, as_scalar

logger = logging.getLogger(__name__)

BASE_CONTEXTS = ('mat2', 'sl2', 'gl2', 'vinberg', 'gr0', 'grD', 'p1p1', 'uq')
CONTEXT_NAMES = BASE_CONTEXTS + tuple(f"{n}_classical" for n in BASE_CONTEXTS if n != 'uq')


@dataclass(frozen=True)
class Context:
    name: str
    kind: str
    classical: bool

    @property
    def q(self):
        return ONE if self.classical else Q

    @property
    def presentation(self):
        """Presentation the context's symbols live in (None for U_q(sl2))"""
        if self.kind == 'uq':
            return None
        base = {'gl2': 'mat2', 'vinberg': 'sl2', 'gr0': 'sl2', 'grD': 'sl2'}.get(self.kind, self.kind)
        return get_presentation(f"{base}_classical" if self.classical else base)

    @property
    def subset(self) -> Optional[RootSubset]:
        if self.kind == 'gr0':
            return RootSubset.empty()
        if self.kind == 'grD':
            return SL2.delta
        return None


def get_context(name):
    if name not in CONTEXT_NAMES:
        raise UserInputError(f"Unknown context '{name}'. Known: {', '.join(CONTEXT_NAMES)}")
    classical = name.endswith('_classical')
    kind = name[:-len('_classical')] if classical else name
    return Context(name, kind, classical)


def gl2_localization(classical=False):
    """O_q(GL2) = O_q(Mat2)[D_q^-1]"""
    p = get_presentation('mat2_classical' if classical else 'mat2')
    return CentralLocalization(p, quantum_determinant(p))


def evaluate_scalar(node):
    """Value of a tree built from integers and q only"""
    if isinstance(node, ast.Number):
        return QRational(node.value)
    if isinstance(node, ast.Symbol):
        if node.name == 'q':
            return Q
        raise UserInputError(f"'{node.name}' is not a scalar")
    if isinstance(node, ast.Neg):
        return -evaluate_scalar(node.operand)
    if isinstance(node, ast.Add):
        total = QRational(0)
        for op, term in node.terms:
            value = evaluate_scalar(term)
            total = total + value if op == '+' else total - value
        return total
    if isinstance(node, ast.Mul):
        out = ONE
        for op, factor in node.factors:
            value = evaluate_scalar(factor)
            out = out * value if op == '*' else out / value
        return out
    if isinstance(node, ast.Power):
        return evaluate_scalar(node.base) ** node.exponent
    raise UserInputError(f"Unsupported construct in a scalar: {type(node).__name__}")


class Evaluator:
    """Walks an expression tree in one context"""

    def __init__(self, context):
        self.context = context if isinstance(context, Context) else get_context(context)
        kind = self.context.kind
        self._loc = gl2_localization(self.context.classical) if kind == 'gl2' else None

    def evaluate(self, node):
        value = self._walk(node)
        if isinstance(value, ReesElement):
            value = value.validated()
        return value

    def _symbol(self, name):
        ctx = self.context
        if name == 'q':
            return ctx.q
        kind = ctx.kind
        if kind == 'uq':
            if name == 'E':
                return UqElement.E()
            if name == 'F':
                return UqElement.F()
            if name == 'K':
                return UqElement.K()
            raise UserInputError(f"Unknown symbol '{name}' in context {ctx.name} (use E, F, K)")
        p = ctx.presentation
        if kind == 'gl2' and name == 'D':
            return self._loc.element(quantum_determinant(p))
        if kind == 'vinberg' and name == 'z':
            return ReesElement({1: p.one()}, p, check=False)
        if name not in p.generators:
            raise UserInputError(f"Unknown symbol '{name}' in context {ctx.name}")
        x = p.gen(name)
        if kind == 'gl2':
            return self._loc.element(x)
        if kind == 'vinberg':
            return ReesElement({0: x}, p, check=False)
        if ctx.subset is not None:
            return GrElement.from_element(ctx.subset, x, 1)
        return x

    def _coefficient(self, node):
        ctx = self.context
        if ctx.kind not in ('sl2', 'gr0', 'grD'):
            raise UserInputError(f"Matrix coefficients are elements of O_q(SL2), not of context {ctx.name}")
        x = coefficient_to_element(MatrixCoefficient(node.n, node.row, node.col), ctx.classical)
        if ctx.subset is not None:
            return GrElement.from_element(ctx.subset, x, node.n)
        return x

    def _gr(self, node):
        ctx = self.context
        if ctx.kind not in ('sl2', 'gr0', 'grD'):
            raise UserInputError(f"gr[...] wrappers need an O_q(SL2) based context, not {ctx.name}")
        subset = RootSubset.of(*node.subset)
        SL2.check_subset(subset)
        inner = Evaluator(get_context('sl2_classical' if ctx.classical else 'sl2'))._walk(node.body)
        scalar = as_scalar(inner)
        if scalar is not None:
            inner = ctx.presentation.scalar(scalar)
        if not isinstance(inner, AlgebraElement):
            raise UserInputError("The body of gr[...] must be an element of O_q(SL2)")
        return GrElement.from_element(subset, inner)

    def _walk(self, node):
        if isinstance(node, ast.Number):
            return QRational(node.value)
        if isinstance(node, ast.Symbol):
            return self._symbol(node.name)
        if isinstance(node, ast.MatCoeff):
            return self._coefficient(node)
        if isinstance(node, ast.Gr):
            return self._gr(node)
        if isinstance(node, ast.Neg):
            return -self._walk(node.operand)
        if isinstance(node, ast.Add):
            total = None
            for op, term in node.terms:
                value = self._walk(term)
                if op == '-':
                    value = -value
                total = value if total is None else _binary(total, value, '+')
            return total
        if isinstance(node, ast.Mul):
            out = None
            for op, factor in node.factors:
                value = self._walk(factor)
                if out is None:
                    out = value
                elif op == '/':
                    scalar = as_scalar(value)
                    if scalar is None:
                        raise UserInputError("Division is only by scalars")
                    if scalar.is_zero():
                        raise UserInputError("Division by zero")
                    out = _binary(out, ONE / scalar, '*')
                else:
                    out = _binary(out, value, '*')
            return out
        if isinstance(node, ast.Power):
            return self._power(self._walk(node.base), node.exponent)
        if isinstance(node, ast.Tensor):
            return self._tensor([self._walk(f) for f in node.factors])
        raise UserInputError(f"Unsupported expression node {type(node).__name__}")

    def _power(self, base, exponent):
        scalar = as_scalar(base)
        if scalar is not None:
            if exponent < 0 and scalar.is_zero():
                raise UserInputError("Zero has no inverse")
            return scalar ** exponent
        if exponent < 0 and not isinstance(base, (LocalizedElement, UqElement)):
            raise UserInputError(f"Negative powers are not defined in context {self.context.name}")
        return base ** exponent

    def _tensor(self, parts):
        if all(isinstance(x, UqElement) for x in parts) and len(parts) == 2:
            return UqTensor.pure(*parts)
        p = self.context.presentation
        lifted = []
        for x in parts:
            scalar = as_scalar(x)
            if scalar is not None:
                x = p.scalar(scalar)
            if isinstance(x, ReesElement):
                x = rees_to_vinberg(x.validated())
            if not isinstance(x, (AlgebraElement, TensorElement)):
                raise UserInputError(f"Tensor factors must be algebra elements in context {self.context.name}")
            lifted.append(x)
        return tensor_product(*lifted)


def _binary(x, y, op):
    try:
        result = x + y if op == '+' else x * y
    except TypeError as e:
        raise UserInputError(f"Cannot combine {type(x).__name__} and {type(y).__name__}") from e
    return result


def evaluate(text, context):
    """Parse text and evaluate it in the named context"""
    node = text if not isinstance(text, str) else ast.parse(text)
    value = Evaluator(context).evaluate(node)
    logger.debug(f"Evaluated {text!r} in {context}")
    return value


def as_element(value, context):
    """Lift scalars into the context's algebra"""
    ctx = context if isinstance(context, Context) else get_context(context)
    scalar = as_scalar(value)
    if scalar is None:
        return value
    if ctx.kind == 'uq':
        return UqElement.scalar(scalar)
    p = ctx.presentation
    if ctx.kind == 'gl2':
        return gl2_localization(ctx.classical).element(p.scalar(scalar))
    if ctx.kind == 'vinberg':
        return ReesElement({0: p.scalar(scalar)}, p)
    if ctx.subset is not None:
        return GrElement.from_element(ctx.subset, p.scalar(scalar), 0)
    return p.scalar(scalar)


def _specialize(c, value):
    return QRational(c.evaluate(value))


def specialize_for_display(x, value):
    """Copy of x with every coefficient evaluated at q = value"""
    if isinstance(x, QRational):
        return _specialize(x, value)
    if isinstance(x, AlgebraElement):
        return x.map_coefficients(lambda c: _specialize(c, value))
    if isinstance(x, TensorElement):
        return TensorElement(x.factors, {k: _specialize(c, value) for k, c in x.terms().items()})
    if isinstance(x, LocalizedElement):
        return LocalizedElement(x.localization, specialize_for_display(x.numerator, value), x.power)
    if isinstance(x, ReesElement):
        return ReesElement({n: specialize_for_display(f, value) for n, f in x.parts.items()}, x.base, check=False)
    if isinstance(x, GrElement):
        return GrElement(x.subset, {k: specialize_for_display(f, value) for k, f in x.parts.items()}, x.base)
    if isinstance(x, UqElement):
        return UqElement({k: _specialize(c, value) for k, c in x.terms().items()})
    raise UserInputError(f"Cannot specialize a {type(x).__name__}")


def describe(value, context):
    """JSON-ready description of a computed value"""
    ctx = context if isinstance(context, Context) else get_context(context)
    scalar = as_scalar(value)
    if scalar is not None:
        return {'context': ctx.name, 'text': scalar.to_text(), 'scalar': scalar.to_json()}
    data = {'context': ctx.name, 'text': value.to_text()}
    data.update(value.to_json())
    if isinstance(value, ReesElement):
        data['vinberg'] = rees_to_vinberg(value).to_text()
    return data
