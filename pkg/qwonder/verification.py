"""
Verification suites
Named, self-contained checks of the algebraic identities the engine relies on.
Each suite returns a report {'suite', 'passed', 'seconds', 'checks': [{name, passed, detail}]};
suites share only immutable presentation tables and may run concurrently.
"""
import logging
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from itertools import product

import pandas as pd

from . import linalg
from .contexts import gl2_localization
from .errors import QwonderError, UserInputError, VerificationFailure
from .ncalg import AlgebraElement, check_local_confluence, graded_basis, is_central, \
    localize_and_degree_zero, specialize_element, veronese
from .poisson import filtration_compatible, poisson_structure, semiclassical_check, semiclassical_pairs
from .presentations import gr_sl2, mat2, p1p1, quantum_determinant, sl2, vinberg
from .projcat import direct_sum, free_module, graded_dimensions, homomorphism_matrices, is_torsion, \
    proj_equiv_check, quotient_module
from .qgroups import IrrepVn, MatrixCoefficient, UqElement, cg_decompose, coefficient_coproduct, \
    coefficient_to_element, coproduct, filtration_dimension, hopf_failures, matrix_coefficient_rank, \
    tensor_matrix, uq_antipode, uq_coproduct, uq_counit
from .reesgr import DELTA, EMPTY, GrElement, ReesElement, gr_to_p1p1, matq_to_vinberg, phi, \
    phi_multiplicativity_check, rees_coproduct, rees_counit, rees_multiply, rees_to_vinberg, vinberg_to_matq
from .scalars import ONE, Q, ZERO, QRational, q_power

logger = logging.getLogger(__name__)

PW_DIMENSIONS = [1, 4, 10, 20, 35, 56, 84]
HOPF_SAMPLES = 20
HOPF_SEED = 20240


def _check(name, passed, detail=''):
    return {'name': name, 'passed': bool(passed), 'detail': str(detail)}


def _generators(p):
    return [p.gen(name) for name in p.generators]


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def confluence_suite():
    """Every shipped presentation resolves all of its ambiguities"""
    checks = []
    for name in ('mat2', 'sl2', 'gr_sl2', 'p1p1', 'vinberg'):
        for classical in (False, True):
            p = {'mat2': mat2, 'sl2': sl2, 'gr_sl2': gr_sl2, 'p1p1': p1p1, 'vinberg': vinberg}[name](classical)
            failures = check_local_confluence(p)
            checks.append(_check(f"{p.name} locally confluent", not failures,
                                 '; '.join(f.word for f in failures[:3])))
    return checks


def centrality_suite():
    checks = []
    for p in (mat2(), mat2(True)):
        det = quantum_determinant(p)
        checks.append(_check(f"D_q central in {p.name}", is_central(p, det), det.to_text()))
    v = vinberg()
    z2 = quantum_determinant(v)
    checks.append(_check("z^2 central in vinberg", is_central(v, z2), z2.to_text()))
    z2_rees = rees_to_vinberg(ReesElement.z_power(2))
    checks.append(_check("z^2 is the quantum determinant of az, bz, cz, dz", z2_rees == z2, z2_rees.to_text()))
    a = mat2().gen('a')
    checks.append(_check("a is not central in mat2", not is_central(mat2(), a)))
    return checks


def filtration_dims_suite(max_n=6):
    """dim O_q(SL2)_{<= n} by normal-word count and by matrix-coefficient rank"""
    checks = []
    for n in range(max_n + 1):
        by_words = filtration_dimension(n)
        by_coefficients = matrix_coefficient_rank(n)
        expected = PW_DIMENSIONS[n] if n < len(PW_DIMENSIONS) else by_words
        checks.append(_check(f"level {n}", by_words == by_coefficients == expected,
                             f"words={by_words} coefficients={by_coefficients} expected={expected}"))
    return checks


def vinberg_matrix_iso_suite(max_n=6, classical=False):
    checks = []
    gens = {name: ReesElement.generator(name, classical) for name in 'abcd'}
    images = {name: vinberg_to_matq(x) for name, x in gens.items()}
    for x, y in product('abcd', repeat=2):
        lhs = vinberg_to_matq(rees_multiply(gens[x], gens[y]))
        rhs = images[x] * images[y]
        checks.append(_check(f"{x}z*{y}z", lhs == rhs, lhs.to_text()))
    det = quantum_determinant(mat2(classical))
    checks.append(_check("z^2 maps to D_q", vinberg_to_matq(ReesElement.z_power(2, classical)) == det))
    for n in range(max_n + 1):
        rees_dim = filtration_dimension(n, classical)
        mat_dim = len(graded_basis(mat2(classical), n))
        vin_dim = len(graded_basis(vinberg(classical), n))
        checks.append(_check(f"degree {n} dimension", rees_dim == mat_dim == vin_dim == PW_DIMENSIONS[n],
                             f"rees={rees_dim} mat2={mat_dim} vinberg={vin_dim}"))
    v = vinberg(classical)
    for name in 'abcd':
        expected = coproduct(v.gen(f"{name}z"))
        got = rees_coproduct(gens[name])
        checks.append(_check(f"coproduct of {name}z", got == expected, got.to_text()))
        checks.append(_check(f"counit of {name}z", rees_counit(gens[name]) == (ONE if name in 'ad' else ZERO)))
    sample = gens['a'] * gens['d'] + ReesElement.z_power(2, classical) * v.q + gens['b']
    back = matq_to_vinberg(vinberg_to_matq(sample))
    checks.append(_check("matq_to_vinberg inverts vinberg_to_matq", back == sample, back.to_text()))
    return checks


def associated_graded_suite(max_n=5):
    checks = []
    p = sl2()
    bars = {name: GrElement.from_element(EMPTY, p.gen(name), 1) for name in 'abcd'}
    for x, y in product('abcd', repeat=2):
        lhs = gr_to_p1p1(bars[x] * bars[y])
        rhs = gr_to_p1p1(bars[x]) * gr_to_p1p1(bars[y])
        checks.append(_check(f"gr {x}*{y} in p1p1", lhs == rhs, lhs.to_text()))
    ad = bars['a'] * bars['d']
    qbc = bars['b'] * bars['c'] * Q
    checks.append(_check("a*d = q*b*c in gr", ad == qbc, ad.to_text()))
    v = vinberg()
    z2 = quotient_module(free_module(v), [quantum_determinant(v)])
    dims = graded_dimensions(z2, range(max_n + 1))
    for n in range(max_n + 1):
        gr_dim = len(graded_basis(gr_sl2(), n))
        level_dim = filtration_dimension(n) - (filtration_dimension(n - 2) if n >= 2 else 0)
        quotient_dim = list(dims.values())[n]
        checks.append(_check(f"gr degree {n} dimension", gr_dim == level_dim == quotient_dim == (n + 1) ** 2,
                             f"gr_sl2={gr_dim} levels={level_dim} vinberg/(z^2)={quotient_dim}"))
    return checks


def semiclassical_suite():
    checks = []
    for presentation in ('sl2', 'vinberg'):
        for x, y in semiclassical_pairs(presentation):
            result = semiclassical_check(x, y, presentation)
            checks.append(_check(f"{presentation} {{{x},{y}}}", result.passed,
                                 f"limit={result.limit.to_text()} bracket={result.expected.to_text()}"))
    pp = poisson_structure('sl2')
    checks.append(_check("sl2 bracket satisfies Jacobi", not pp.jacobi_failures(_generators(pp.base))))
    classical = sl2(True)
    a, d = classical.gen('a'), classical.gen('d')
    checks.append(_check("{a, d} stays in level 2", filtration_compatible(a, d, 1, 1)))
    det = quantum_determinant(mat2(True))
    checks.append(_check("det is a Casimir of O(Mat2)", poisson_structure('mat2').is_casimir(det)))
    return checks


def _random_element(p, rng, max_length=3):
    words = [w for n in range(max_length + 1) for w in p.normal_words(n)]
    terms = {}
    for w in rng.sample(words, rng.randint(1, 3)):
        terms[w] = QRational(rng.randint(-3, 3) or 1) * p.q ** rng.randint(-1, 1)
    return AlgebraElement(p, terms)


def hopf_suite(samples=HOPF_SAMPLES, seed=HOPF_SEED, classical=False):
    checks = []
    p = sl2(classical)
    elements = _generators(p)
    rng = random.Random(seed)
    elements += [_random_element(p, rng) for _ in range(samples)]
    for x in elements:
        failures = hopf_failures(x)
        checks.append(_check(f"Hopf axioms on {x.to_text()}", not failures, '; '.join(failures)))
    if classical:
        return checks
    for x in (UqElement.E(), UqElement.F(), UqElement.K(), UqElement.E() * UqElement.F()):
        unit = UqElement.scalar(uq_counit(x))
        left = uq_coproduct(x).contract(uq_antipode)
        checks.append(_check(f"U_q antipode identity on {x.to_text()}", left == unit, left.to_text()))
    return checks


def orbit_phi_suite(max_n=2):
    checks = []
    coefficients = [MatrixCoefficient(n, i, j) for n in range(max_n + 1) for i in range(n + 1) for j in range(n + 1)]
    for subset, label in ((EMPTY, 'empty'), (DELTA, 'delta')):
        failed = [f"{c1.to_text()}*{c2.to_text()}" for c1, c2 in product(coefficients, repeat=2)
                  if not phi_multiplicativity_check(subset, c1, c2)]
        checks.append(_check(f"Phi multiplicative for I={label}", not failed, ', '.join(failed[:5])))
    mismatched = []
    for c in coefficients:
        image = phi(DELTA, c)
        if image != coefficient_coproduct(c) or image != coproduct(coefficient_to_element(c)):
            mismatched.append(c.to_text())
    checks.append(_check("Phi for I=delta is the coproduct", not mismatched, ', '.join(mismatched)))
    return checks


def torsion_suite(horizon=4):
    checks = []
    v = vinberg()
    free = free_module(v)
    augmentation = quotient_module(free, list(_generators(v)))
    cert = is_torsion(augmentation, 0, horizon)
    checks.append(_check("R/(az,bz,cz,dz)R is torsion", cert.verdict == 'torsion', cert.verdict))
    cert = is_torsion(free, 0, horizon)
    checks.append(_check("R is not torsion", cert.verdict == 'not_torsion', cert.verdict))
    z2 = quotient_module(free, [quantum_determinant(v)])
    cert = is_torsion(z2, 0, horizon)
    checks.append(_check("R/(z^2)R is not torsion", cert.verdict == 'not_torsion', cert.verdict))
    dims = list(graded_dimensions(z2, range(horizon + 1)).values())
    checks.append(_check("R/(z^2)R dimensions", dims == [(n + 1) ** 2 for n in range(horizon + 1)], dims))
    summed = direct_sum(free, augmentation)
    images = {'0.e0': {'e0': v.one()}, '1.e0': {}}
    degrees = list(range(1, 3))
    maps = homomorphism_matrices(summed, free, images, degrees, horizon)
    checks.append(_check("R + torsion equals R in Proj", proj_equiv_check(summed, free, maps, 1, horizon)))
    maps0 = homomorphism_matrices(summed, free, images, [0], horizon)
    checks.append(_check("projection is not bijective in degree 0",
                         not proj_equiv_check(summed, free, maps0, 0, horizon)))
    return checks


def classical_limit_suite(max_n=4):
    checks = []
    for p in (mat2(True), sl2(True), vinberg(True), p1p1(True)):
        gens = _generators(p)
        commutative = all(x * y == y * x for x in gens for y in gens)
        checks.append(_check(f"{p.name} commutative", commutative))
        checks.append(_check(f"{p.name} locally confluent", not check_local_confluence(p)))
    for n in range(max_n + 1):
        words = filtration_dimension(n, True)
        rank = matrix_coefficient_rank(n, True)
        checks.append(_check(f"classical level {n}", words == rank == PW_DIMENSIONS[n], f"{words} / {rank}"))
    mismatched = []
    for n in range(3):
        for i, j in product(range(n + 1), repeat=2):
            c = MatrixCoefficient(n, i, j)
            if specialize_element(coefficient_to_element(c), sl2(True)) != coefficient_to_element(c, True):
                mismatched.append(c.to_text())
    checks.append(_check("quantum coefficients specialize to classical ones", not mismatched, ', '.join(mismatched)))
    for n in range(max_n + 1):
        dim = len(graded_basis(gr_sl2(True), n))
        checks.append(_check(f"classical gr degree {n}", dim == (n + 1) ** 2, dim))
    failed = [f"{c1.to_text()}*{c2.to_text()}"
              for c1, c2 in product([MatrixCoefficient(1, i, j) for i in range(2) for j in range(2)], repeat=2)
              if not phi_multiplicativity_check(EMPTY, c1, c2, classical=True)]
    checks.append(_check("classical Phi multiplicative for I=empty", not failed, ', '.join(failed)))
    for c in hopf_suite(samples=HOPF_SAMPLES // 4, classical=True):
        checks.append(dict(c, name=f"q=1 {c['name']}"))
    for c in vinberg_matrix_iso_suite(max_n, classical=True):
        checks.append(dict(c, name=f"q=1 {c['name']}"))
    return checks


def veronese_suite(max_n=3):
    checks = []
    for classical in (False, True):
        p = vinberg(classical)
        dims = [piece.dimension for piece in veronese(p, 1, max_n)]
        expected = [(n + 1) * (n + 2) * (n + 3) // 6 for n in range(max_n + 1)]
        checks.append(_check(f"Veronese of {p.name} along 1", dims == expected, dims))
    description = localize_and_degree_zero(gl2_localization(), 4)
    checks.append(_check("degree-zero strata of O_q(GL2)", description.dimensions == [1, 0, 9, 0, 25],
                         description.dimensions))
    return checks


def _relation_failures(n):
    rep = IrrepVn(n)
    e, f = rep.generator_matrix('E'), rep.generator_matrix('F')
    k, k_inv = rep.generator_matrix('K'), rep.generator_matrix('K', -1)
    failures = []
    if not linalg.is_identity(linalg.matmul(k, k_inv)):
        failures.append('K K^-1 = 1')
    q2, qm2 = q_power(2), q_power(-2)
    if linalg.matmul(linalg.matmul(k, e), k_inv) != [[x * q2 for x in row] for row in e]:
        failures.append('K E K^-1 = q^2 E')
    if linalg.matmul(linalg.matmul(k, f), k_inv) != [[x * qm2 for x in row] for row in f]:
        failures.append('K F K^-1 = q^-2 F')
    ef = linalg.matmul(e, f)
    fe = linalg.matmul(f, e)
    scale = ONE / (Q - ONE / Q)
    bracket = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(ef, fe)]
    expected = [[(a - b) * scale for a, b in zip(r1, r2)] for r1, r2 in zip(k, k_inv)]
    if bracket != expected:
        failures.append('[E,F] = (K - K^-1)/(q - q^-1)')
    x = UqElement.E() * UqElement.F() + UqElement.K(2)
    y = UqElement.F() * UqElement.K()
    if rep.matrix(x * y) != linalg.matmul(rep.matrix(x), rep.matrix(y)):
        failures.append('PBW product agrees with matrix product')
    return failures


def irreps_suite(max_n=6):
    checks = []
    for n in range(max_n + 1):
        failures = _relation_failures(n)
        checks.append(_check(f"U_q(sl2) relations on V_{n}", not failures, '; '.join(failures)))
    for n in range(max_n + 1):
        for m in range(max_n + 1 - n):
            failures = cg_decompose(n, m).check()
            checks.append(_check(f"Clebsch-Gordan V_{n} x V_{m}", not failures, '; '.join(failures)))
    x, y = UqElement.E(), UqElement.F()
    lhs = tensor_matrix(x * y, 1, 2)
    rhs = linalg.matmul(tensor_matrix(x, 1, 2), tensor_matrix(y, 1, 2))
    checks.append(_check("coproduct is multiplicative on V_1 x V_2", lhs == rhs))
    return checks


SUITES = {
    'confluence': confluence_suite,
    'centrality': centrality_suite,
    'filtration-dims': filtration_dims_suite,
    'vinberg-matrix-iso': vinberg_matrix_iso_suite,
    'associated-graded': associated_graded_suite,
    'semiclassical': semiclassical_suite,
    'hopf': hopf_suite,
    'orbit-phi': orbit_phi_suite,
    'torsion': torsion_suite,
    'classical-limit': classical_limit_suite,
    'veronese': veronese_suite,
    'irreps': irreps_suite,
}

_log_lock = threading.Lock()


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------

def run_suite(name, raise_on_failure=False):
    """Run one suite; QwonderErrors inside a suite become a failed check"""
    if name not in SUITES:
        raise UserInputError(f"Unknown suite '{name}'. Known: {', '.join(SUITES)}, all")
    started = time.perf_counter()
    try:
        checks = SUITES[name]()
    except QwonderError as e:
        logger.exception(f"Suite {name} raised")
        checks = [_check('suite completed', False, f"{type(e).__name__}: {e}")]
    report = {
        'suite': name,
        'passed': all(c['passed'] for c in checks),
        'seconds': round(time.perf_counter() - started, 3),
        'checks': checks,
    }
    with _log_lock:
        if report['passed']:
            logger.info(f"Suite {name}: {len(checks)} checks passed in {report['seconds']}s")
        else:
            failed = [c['name'] for c in checks if not c['passed']]
            logger.error(f"Suite {name}: {len(failed)} of {len(checks)} checks failed: {failed}")
    if raise_on_failure and not report['passed']:
        raise VerificationFailure(report)
    return report


def run_all(jobs=1, names=None):
    """Run suites (all by default) on a thread pool; reports come back in registry order"""
    names = list(names or SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UserInputError(f"Unknown suites: {', '.join(unknown)}")
    jobs = max(1, int(jobs))
    logger.info(f"Running {len(names)} suites with {jobs} workers")
    reports = {}
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        future_to_suite = {executor.submit(run_suite, name): name for name in names}
        for future in as_completed(future_to_suite):
            name = future_to_suite[future]
            reports[name] = future.result()
    return [reports[name] for name in names]


def summary_frame(reports):
    """One row per suite: checks run, checks failed, pass flag and wall time"""
    rows = [{
        'suite': r['suite'],
        'checks': len(r['checks']),
        'failed': sum(1 for c in r['checks'] if not c['passed']),
        'passed': r['passed'],
        'seconds': r.get('seconds', 0.0),
    } for r in reports]
    return pd.DataFrame(rows, columns=['suite', 'checks', 'failed', 'passed', 'seconds'])


def verify(name='all', jobs=1):
    """
    Aggregate report for one suite or 'all'.
    Raises VerificationFailure carrying the aggregate when any check fails.
    """
    names = list(SUITES) if name == 'all' else [name]
    reports = run_all(jobs, names)
    frame = summary_frame(reports)
    logger.info(f"Verification summary:\n{frame.to_string(index=False)}")
    # wall times stay in the log so the JSON is reproducible
    stable = frame.drop(columns=['seconds'])
    aggregate = {
        'suite': name,
        'passed': bool(stable['passed'].all()),
        'summary': [{key: value.item() if hasattr(value, 'item') else value for key, value in row.items()}
                    for row in stable.to_dict(orient='records')],
        'reports': [{key: value for key, value in r.items() if key != 'seconds'} for r in reports],
        'checks': [dict(c, name=f"{r['suite']}: {c['name']}") for r in reports for c in r['checks']],
    }
    if not aggregate['passed']:
        raise VerificationFailure(aggregate)
    return aggregate
