"""
Command-line front end
Subcommands evaluate expressions in an algebra context and print deterministic
JSON on stdout. Exit codes: 0 success, 1 user error, 2 internal invariant
violation, 3 failed verification suite.
"""
import argparse
import json
import logging
import sys

import pandas as pd
from sympy import Rational

from .contexts import CONTEXT_NAMES, as_element, describe, evaluate, get_context, specialize_for_display
from .engine_config import EngineConfig
from .errors import ExpressionSyntaxError, QwonderError, UserInputError, VerificationFailure
from .lattice import Weight
from .ncalg import LocalizedElement, dimension_of_graded_piece, specialize_element, veronese
from .poisson import bracket, localized_bracket, poisson_structure, rees_bracket, semiclassical_limit
from .presentations import PRESENTATION_NAMES, get_presentation
from .projcat import GradedModulePresentation, is_torsion
from .qgroups import filtration_dimension, pw_coordinates, pw_degree
from .reesgr import DELTA, EMPTY, GrElement, ReesElement, phi_element, rees_multiply, rees_to_vinberg
from .verification import SUITES, verify

logger = logging.getLogger(__name__)

SUBSETS = {'empty': EMPTY, 'delta': DELTA}


def configure_logging(verbose=False):
    level = logging.DEBUG if verbose else getattr(logging, EngineConfig.get_log_level(), logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def _parse_degree(value):
    """'3' -> 3, '1,2' -> (1, 2); lists and ints pass through"""
    if isinstance(value, (int, list, tuple, Weight)):
        return value
    try:
        parts = [int(p) for p in str(value).replace('(', '').replace(')', '').split(',')]
    except ValueError:
        raise UserInputError(f"Degree '{value}' must be an integer or a comma-separated integer vector")
    return parts[0] if len(parts) == 1 else tuple(parts)


def _q_value(params):
    raw = params.get('q_eval')
    if raw is None:
        return None
    try:
        return Rational(str(raw))
    except (TypeError, ValueError, SyntaxError):
        raise UserInputError(f"--q-eval expects an exact rational, got '{raw}'")


def _horizon(params):
    horizon = params.get('horizon')
    return int(horizon) if horizon is not None else EngineConfig.get_default_horizon()


def _result(value, context, params):
    data = describe(value, context)
    q_value = _q_value(params)
    if q_value is not None:
        data['specialized'] = {'q': str(q_value), 'text': specialize_for_display(value, q_value).to_text()}
    return data


def _evaluate(params, key, context):
    text = params.get(key)
    if text is None:
        raise UserInputError(f"Missing argument '{key}'")
    return evaluate(str(text), context)


def _require(context, kinds, command):
    ctx = get_context(context)
    if ctx.kind not in kinds:
        raise UserInputError(f"'{command}' needs a context of kind {', '.join(kinds)}, not {ctx.name}")
    return ctx


# ---------------------------------------------------------------------------
# Commands (params mirror the CLI arguments; the Flask app posts the same keys)
# ---------------------------------------------------------------------------

def cmd_nf(params):
    context = params.get('context') or 'sl2'
    value = _evaluate(params, 'expr', context)
    return _result(value, context, params)


def cmd_mul(params):
    context = params.get('context') or 'sl2'
    x = as_element(_evaluate(params, 'left', context), context)
    y = as_element(_evaluate(params, 'right', context), context)
    try:
        value = x * y
    except TypeError as e:
        raise UserInputError(f"Cannot multiply {type(x).__name__} by {type(y).__name__}") from e
    return _result(value, context, params)


def cmd_pw(params):
    context = params.get('context') or 'sl2'
    _require(context, ('sl2',), 'pw')
    x = as_element(_evaluate(params, 'expr', context), context)
    coords = pw_coordinates(x)
    blocks = [{'n': n, 'row': i, 'col': j, 'coeff': alpha.to_text()}
              for n in sorted(coords) for (i, j), alpha in sorted(coords[n].items())]
    levels = [{'class': cls.to_json(), 'level': n} for cls, n in pw_degree(x)]
    return {'context': context, 'text': x.to_text(), 'coordinates': blocks, 'levels': levels}


def cmd_rees_mul(params):
    context = params.get('context') or 'vinberg'
    _require(context, ('vinberg',), 'rees-mul')
    x = as_element(_evaluate(params, 'left', context), context)
    y = as_element(_evaluate(params, 'right', context), context)
    return _result(rees_multiply(x, y), context, params)


def _gr_context(params):
    subset = params.get('subset') or 'empty'
    if subset not in SUBSETS:
        raise UserInputError(f"Subset must be one of {', '.join(SUBSETS)}, not '{subset}'")
    name = 'gr0' if subset == 'empty' else 'grD'
    return f"{name}_classical" if params.get('classical') else name


def cmd_gr_mul(params):
    context = _gr_context(params)
    x = as_element(_evaluate(params, 'left', context), context)
    y = as_element(_evaluate(params, 'right', context), context)
    return _result(x * y, context, params)


def cmd_phi(params):
    context = _gr_context(params)
    x = as_element(_evaluate(params, 'expr', context), context)
    if not isinstance(x, GrElement):
        raise UserInputError("Phi is applied to elements of gr")
    image = phi_element(x)
    data = {'context': context, 'input': x.to_text(), 'text': image.to_text()}
    data.update(image.to_json())
    return data


def cmd_poisson(params):
    context = params.get('context') or 'sl2_classical'
    ctx = _require(context, ('mat2', 'sl2', 'gl2', 'vinberg'), 'poisson')
    x = as_element(_evaluate(params, 'left', context), context)
    y = as_element(_evaluate(params, 'right', context), context)
    if ctx.classical:
        if isinstance(x, ReesElement):
            value = rees_bracket(x, y)
        elif isinstance(x, LocalizedElement):
            value = localized_bracket(poisson_structure('mat2'), x, y)
        else:
            value = bracket(x, y)
        return _result(value, context, params)
    if ctx.kind == 'gl2':
        raise UserInputError("Semiclassical limits are computed in mat2, sl2 or vinberg")
    if isinstance(x, ReesElement):
        x, y = rees_to_vinberg(x), rees_to_vinberg(y)
    commutator, limit = semiclassical_limit(x, y)
    classical = get_presentation(f"{x.presentation.name}_classical")
    expected = bracket(specialize_element(x, classical), specialize_element(y, classical))
    return {'context': context,
            'commutator': commutator.to_text(),
            'limit': limit.to_text(),
            'bracket': expected.to_text(),
            'passed': limit == expected}


def cmd_torsion(params):
    module = params.get('module')
    if isinstance(module, str):
        try:
            with open(module, 'r', encoding='utf-8') as f:
                module = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise UserInputError(f"Cannot read module file {module}: {e}")
    if not isinstance(module, dict):
        raise UserInputError("torsion needs a module description")
    try:
        presentation = GradedModulePresentation.from_json(module)
    except KeyError as e:
        raise UserInputError(f"Module description is missing {e}")
    horizon = _horizon(params)
    cert = is_torsion(presentation, _parse_degree(params.get('band_base', 0)), horizon)
    data = {'module': presentation.to_json(), 'horizon': horizon}
    data.update(cert.to_json())
    return data


def dimension_table(p, degrees, horizon=None):
    """pandas table of graded dimensions (filtration levels for O_q(SL2))"""
    rows = []
    for degree in degrees:
        if p.name in ('sl2', 'sl2_classical'):
            if not isinstance(degree, int):
                raise UserInputError("O_q(SL2) levels are integers")
            dimension = filtration_dimension(degree, p.classical)
        else:
            dimension = dimension_of_graded_piece(p, degree, horizon)
        rows.append({'degree': degree if isinstance(degree, int) else str(Weight.of(degree)),
                     'dimension': dimension})
    return pd.DataFrame(rows, columns=['degree', 'dimension'])


def _records(frame):
    return [{k: v.item() if hasattr(v, 'item') else v for k, v in row.items()}
            for row in frame.to_dict(orient='records')]


def cmd_dims(params):
    name = params.get('presentation') or 'sl2'
    p = get_presentation(name)
    degree = _parse_degree(params.get('degree', 0))
    horizon = params.get('horizon')
    degrees = list(range(degree + 1)) if isinstance(degree, int) else [degree]
    table = dimension_table(p, degrees, horizon)
    return {'presentation': name,
            'degree': degree if isinstance(degree, int) else list(degree),
            'dimension': int(table['dimension'].iloc[-1]),
            'table': _records(table)}


def cmd_veronese(params):
    name = params.get('presentation') or 'vinberg'
    p = get_presentation(name)
    lam = _parse_degree(params.get('lam', 1))
    max_n = int(params.get('max_n', 3))
    pieces = veronese(p, lam, max_n, params.get('horizon'))
    frame = pd.DataFrame([{'n': piece.n, 'dimension': piece.dimension} for piece in pieces],
                         columns=['n', 'dimension'])
    return {'presentation': name,
            'lambda': list(lam) if isinstance(lam, tuple) else lam,
            'dimensions': [int(d) for d in frame['dimension']],
            'pieces': [piece.to_json() for piece in pieces]}


def cmd_verify(params):
    suite = params.get('suite') or 'all'
    if suite != 'all' and suite not in SUITES:
        raise UserInputError(f"Unknown suite '{suite}'. Known: {', '.join(SUITES)}, all")
    return verify(suite, int(params.get('jobs') or 1))


COMMANDS = {
    'nf': cmd_nf,
    'mul': cmd_mul,
    'pw': cmd_pw,
    'rees-mul': cmd_rees_mul,
    'gr-mul': cmd_gr_mul,
    'phi': cmd_phi,
    'poisson': cmd_poisson,
    'torsion': cmd_torsion,
    'dims': cmd_dims,
    'veronese': cmd_veronese,
    'verify': cmd_verify,
}


def run_command(name, params):
    """Run a subcommand on a parameter dict; raises the package's errors"""
    if name not in COMMANDS:
        raise UserInputError(f"Unknown subcommand '{name}'. Known: {', '.join(COMMANDS)}")
    logger.debug(f"Running {name} with {params}")
    return COMMANDS[name](dict(params))


def error_payload(e):
    data = {'error': str(e)}
    if isinstance(e, ExpressionSyntaxError):
        data.update(line=e.line, column=e.column)
    return data


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--context', choices=CONTEXT_NAMES, help='algebra context for expressions')
    common.add_argument('--q-eval', dest='q_eval', help='also print the result at q = this rational')
    common.add_argument('--horizon', type=int, help='longest word enumerated by graded computations')
    output = common.add_mutually_exclusive_group()
    output.add_argument('--json', dest='pretty', action='store_false', default=False, help='compact JSON (default)')
    output.add_argument('--pretty', dest='pretty', action='store_true', help='indented JSON')
    common.add_argument('--verbose', '-v', action='store_true', help='debug logging on stderr')

    parser = argparse.ArgumentParser(prog='qwonder', description='Quantum Vinberg and wonderful-compactification algebra engine')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('nf', parents=[common], help='normal form of an expression')
    p.add_argument('context_name', metavar='CONTEXT', choices=CONTEXT_NAMES)
    p.add_argument('expr')

    p = sub.add_parser('mul', parents=[common], help='product of two expressions')
    p.add_argument('context_name', metavar='CONTEXT', choices=CONTEXT_NAMES)
    p.add_argument('left')
    p.add_argument('right')

    p = sub.add_parser('pw', parents=[common], help='Peter-Weyl coordinates in O_q(SL2)')
    p.add_argument('expr')

    p = sub.add_parser('rees-mul', parents=[common], help='product in the Rees algebra')
    p.add_argument('left')
    p.add_argument('right')

    for name, help_text in (('gr-mul', 'product in gr_I'), ('phi', 'Phi of a gr_I element')):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument('subset', choices=list(SUBSETS))
        if name == 'gr-mul':
            p.add_argument('left')
            p.add_argument('right')
        else:
            p.add_argument('expr')
        p.add_argument('--classical', action='store_true', help='work at q = 1')

    p = sub.add_parser('poisson', parents=[common], help='Poisson bracket or semiclassical limit')
    p.add_argument('left')
    p.add_argument('right')

    p = sub.add_parser('torsion', parents=[common], help='torsion certificate for a graded module file')
    p.add_argument('module', help='JSON module description')
    p.add_argument('--band-base', dest='band_base', default='0')

    p = sub.add_parser('dims', parents=[common], help='graded dimensions up to a degree')
    p.add_argument('presentation', choices=PRESENTATION_NAMES)
    p.add_argument('degree')

    p = sub.add_parser('veronese', parents=[common], help='Veronese pieces along a degree')
    p.add_argument('presentation', choices=PRESENTATION_NAMES)
    p.add_argument('lam', metavar='LAMBDA')
    p.add_argument('max_n', type=int)

    p = sub.add_parser('verify', parents=[common], help='run named verification suites')
    p.add_argument('suite', nargs='?', default='all', choices=list(SUITES) + ['all'])
    p.add_argument('--jobs', type=int, default=1)
    return parser


def _params(args):
    params = {k: v for k, v in vars(args).items() if k not in ('command', 'pretty', 'verbose', 'context_name')}
    if getattr(args, 'context_name', None):
        params['context'] = args.context_name
    return params


def emit(data, pretty=False):
    print(json.dumps(data, sort_keys=True, indent=2 if pretty else None, ensure_ascii=False))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        data = run_command(args.command, _params(args))
        code = 0
    except VerificationFailure as e:
        logger.error(str(e))
        data, code = e.report, e.exit_code
    except QwonderError as e:
        level = logging.INFO if isinstance(e, UserInputError) else logging.ERROR
        logger.log(level, f"{args.command} failed: {e}")
        data, code = error_payload(e), e.exit_code
    emit(data, args.pretty)
    return code
