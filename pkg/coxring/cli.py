"""
Command-line front end: ``coxring [--fixture NAME | --document PATH] [--json]
[-v] COMMAND [options]``.

Exit codes are 0 on success, 1 when the input is invalid or a check fails
and 2 when a computation hits a safety limit.
"""
import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import pandas as pd
import yaml

from . import __version__, config
from .abgroup import (AbelianGroup, GroupHom, hom_kernel, smith_normal_form)
from .document import open_document
from .exceptions import ComputationAborted, CoxRingError, ValidationError
from .galois import (check_action, cocycle_from_n, induce_action,
                     invariant_ring, twist_action)
from .lattice import FiberMonoid, fiber_points, hilbert_basis
from .numfield import render_scalar, sum_of_two_squares
from .polyalg import render_monomial
from .torsor import (coverage_check, expand_monomial_ideal,
                     generated_in_degree, irrelevant_ideal, irrelevant_strings,
                     param_enumerate, param_project_and_verify,
                     radical_equal_modulo)
from .veronese import (check_relations, compose, identity_pullback,
                       minimize_generators, pullback_general,
                       veronese_subalgebra)

logger = logging.getLogger(__name__)

COMMANDS = ('snf', 'kernel', 'fiber', 'hilbert', 'veronese', 'pullback',
            'minimize', 'check-action', 'descend', 'twist', 'cocycle-from-n',
            'two-squares', 'irrelevant', 'generated-in-degree',
            'check-relations', 'param-check')


@dataclass
class Report:
    """What a command prints: summary lines, tables and JSON records."""
    command: str
    code: int = 0
    lines: list = field(default_factory=list)
    tables: list = field(default_factory=list)
    records: list = field(default_factory=list)

    def table(self, title, rows, columns=None):
        self.tables.append((title, pd.DataFrame(rows, columns=columns)))

    def text(self):
        out = list(self.lines)
        for title, df in self.tables:
            out.append('')
            out.append(title)
            out.append(df.to_string(index=False) if len(df) else '(none)')
        return '\n'.join(out)

    def json(self):
        return json.dumps({'command': self.command, 'exit_code': self.code,
                           'summary': self.lines, 'records': self.records},
                          indent=2, sort_keys=True)


# argument helpers


def _need(flags, name):
    value = flags.get(name)
    if value is None:
        raise ValidationError('--%s is required' % name.replace('_', '-'))
    return value


def _ints(text):
    return tuple(int(v) for v in str(text).replace(',', ' ').split())


def _degree(doc, text, group):
    if text in doc.degrees:
        return doc.degrees[text]
    try:
        return group.element(_ints(text))
    except ValueError:
        raise ValidationError('%r is neither a named degree nor a vector'
                              % text)


def _matrix(flags, doc):
    if flags.get('matrix') is not None:
        rows = yaml.safe_load(flags['matrix'])
        if not isinstance(rows, list) or not all(isinstance(r, list)
                                                 for r in rows):
            raise ValidationError('--matrix must be a list of rows')
        return [[int(v) for v in row] for row in rows]
    return [list(row) for row in doc.get('homs', _need(flags, 'hom')).matrix]


def _hom(flags, doc):
    if flags.get('hom') is not None:
        return doc.get('homs', flags['hom'])
    rows = _matrix(flags, doc)
    ncols = len(rows[0]) if rows else 0
    return GroupHom(AbelianGroup(ncols), AbelianGroup(len(rows)), rows)


def _vector(v):
    return [int(x) for x in v.coords]


def _render_vector(v):
    return '(%s)' % ', '.join(str(x) for x in v.coords)


def _names(flags):
    names = flags.get('names')
    return [n.strip() for n in names.split(',')] if names else None


# reports shared by several commands

def _pullback_report(report, pr):
    P = pr.presentation
    report.lines.append('%d generators, %d relations (bound %d) over %s'
                        % (P.nvars, len(P.relations), pr.degree_bound_used,
                           P.tower))
    rows = []
    for name, d, img in zip(P.names, P.degrees, pr.generator_images):
        image = img.render(pr.ambient.names)
        rows.append((name, _render_vector(d), image))
        report.records.append({'kind': 'generator', 'name': name,
                               'degree': _vector(d), 'image': image})
    report.table('generators', rows, ['name', 'degree', 'image'])
    rels = [g.render(P.names) for g in P.relations]
    report.table('relations', [(r,) for r in rels], ['relation'])
    report.records.extend({'kind': 'relation', 'relation': r} for r in rels)
    matrix = [[d.coords[i] for d in P.degrees] for i in range(P.group.ngens)]
    report.table('degree matrix', matrix, list(P.names))
    report.records.append({'kind': 'degree_matrix', 'rows': matrix})


def _ring_pullback(flags, doc):
    R = doc.get('rings', _need(flags, 'ring'))
    bound = flags.get('bound')
    cap = flags.get('cap')
    if flags.get('subgroup') is not None:
        H = doc.get('subgroups', flags['subgroup'])
        return veronese_subalgebra(R, H, bound, _names(flags), cap)
    if flags.get('hom') is not None:
        return pullback_general(R, doc.get('homs', flags['hom']), bound,
                                _names(flags), cap)
    return identity_pullback(R, bound)


def _action(flags, doc):
    name = _need(flags, 'action')
    return name, doc.get('actions', name), doc.ring_of(name)


def _plus_minus(R):
    if R.nvars != 10:
        raise ValidationError('cocycles from four values need a ring with '
                              'variables in plus/minus pairs for five '
                              'divisors, %s has %d variables'
                              % (R.names, R.nvars))
    return list(R.names[0::2]), list(R.names[1::2])


def _cocycle(flags, doc, action, R):
    if flags.get('cocycle') is not None:
        return doc.get('cocycles', flags['cocycle'])
    values = flags.get('values')
    if values:
        plus, minus = _plus_minus(R)
        sigma = cocycle_from_n([Fraction(v) for v in values], R, plus, minus,
                               action.group)
        if sigma is None:
            raise ValidationError('%s admits no cocycle: the product is not '
                                  'a sum of two squares' % ' '.join(values))
        return sigma
    return None


# commands

def cmd_snf(flags, doc, report):
    U, S, V = smith_normal_form(_matrix(flags, doc))
    diag = [int(S[i, i]) for i in range(min(S.shape))]
    invariants = [d for d in diag if d]
    report.lines.append('invariant factors: %s'
                        % (', '.join(str(d) for d in invariants) or 'none'))
    for title, M in (('U', U), ('S', S), ('V', V)):
        rows = [[int(v) for v in row] for row in M]
        report.table(title, rows)
        report.records.append({'matrix': title, 'rows': rows})
    report.records.append({'invariant_factors': invariants})


def cmd_kernel(flags, doc, report):
    f = _hom(flags, doc)
    K, inclusion = hom_kernel(f)
    report.lines.append('kernel %s in %s' % (K, f.domain))
    rows = []
    for j, c in enumerate(inclusion.columns()):
        rows.append((j, _render_vector(c)))
        report.records.append({'generator': j, 'vector': _vector(c)})
    report.table('generators', rows, ['generator', 'vector'])


def cmd_fiber(flags, doc, report):
    if flags.get('ring') is not None:
        R = doc.get('rings', flags['ring'])
        Q, names = R.degree_matrix, R.names
    else:
        Q = _hom(flags, doc)
        names = ['x%d' % (k + 1) for k in range(Q.domain.ngens)]
    d = _degree(doc, _need(flags, 'degree'), Q.codomain)
    points = fiber_points(Q, d, flags.get('cap'))
    report.lines.append('%d monomials of degree %s' % (len(points),
                                                       _render_vector(d)))
    for e in points:
        report.records.append({'exponent': list(e),
                               'monomial': render_monomial(e, names) or '1'})
    report.table('monomials', [(r['monomial'], r['exponent'])
                               for r in report.records],
                 ['monomial', 'exponent'])


def cmd_hilbert(flags, doc, report):
    R = doc.get('rings', _need(flags, 'ring'))
    H = doc.get('subgroups', _need(flags, 'subgroup'))
    basis = hilbert_basis(FiberMonoid(R.degree_matrix, H),
                          config.get('cap', flags.get('cap')))
    report.lines.append('Hilbert basis: %d elements' % len(basis))
    rows = []
    for e in basis:
        mono = render_monomial(e, R.names)
        d = R.degree_of(e)
        rows.append((mono, _render_vector(d)))
        report.records.append({'exponent': list(e), 'monomial': mono,
                               'degree': _vector(d)})
    report.table('generators', rows, ['monomial', 'degree'])


def cmd_veronese(flags, doc, report):
    _need(flags, 'subgroup')
    _pullback_report(report, _ring_pullback(flags, doc))


def cmd_pullback(flags, doc, report):
    _need(flags, 'hom')
    _pullback_report(report, _ring_pullback(flags, doc))


def cmd_minimize(flags, doc, report):
    pr = _ring_pullback(flags, doc)
    before = pr.presentation.nvars
    pr = minimize_generators(pr, flags.get('bound'))
    report.lines.append('removed %d of %d generators'
                        % (before - pr.presentation.nvars, before))
    _pullback_report(report, pr)


def cmd_check_action(flags, doc, report):
    name, a, R = _action(flags, doc)
    result = check_action(R, a, flags.get('cap'))
    report.records = result.records()
    report.lines.append('action %s on %s: %d checks, %d failed'
                        % (name, doc.links[('actions', name)],
                           len(result.checks), len(result.failures())))
    report.table('checks', [(c.name, c.generator, c.passed, c.witness)
                            for c in result.checks],
                 ['check', 'generator', 'passed', 'witness'])
    if not result.ok:
        report.code = 1


def cmd_descend(flags, doc, report):
    name, a, R = _action(flags, doc)
    sigma = _cocycle(flags, doc, a, R)
    if sigma is not None:
        a = twist_action(a, sigma)
    bound = flags.get('bound')
    cap = flags.get('cap')
    minimize = not flags.get('no_minimize')
    if flags.get('subgroup') is not None:
        # minimize only after descent, conjugate generators stay paired
        pr = veronese_subalgebra(R, doc.get('subgroups', flags['subgroup']),
                                 bound, None, cap)
        descended = invariant_ring(pr, induce_action(pr, a), bound, cap)
    else:
        pr = identity_pullback(R, bound)
        descended = invariant_ring(R, a, bound, cap)
    if minimize:
        descended = minimize_generators(descended)
    if pr.ambient is not pr.presentation:
        descended = compose(descended, pr)
    report.lines.append('descended by %s%s' % (
        name, ' twisted by a cocycle' if sigma is not None else ''))
    _pullback_report(report, descended)


def cmd_twist(flags, doc, report):
    name, a, R = _action(flags, doc)
    sigma = _cocycle(flags, doc, a, R)
    if sigma is None:
        raise ValidationError('twist needs --cocycle or four values')
    twisted = twist_action(a, sigma)
    report.lines.append('action %s twisted' % name)
    rows = []
    for k, g in enumerate(twisted.generators):
        for i, (j, c) in enumerate(zip(g.permutation, g.scalars)):
            rows.append((k, R.names[i], R.names[j], render_scalar(c)))
            report.records.append({'generator': k, 'variable': R.names[i],
                                   'image': R.names[j],
                                   'scalar': render_scalar(c)})
    report.table('generator maps', rows,
                 ['generator', 'variable', 'image', 'scalar'])


def cmd_cocycle_from_n(flags, doc, report):
    values = flags.get('values') or []
    if len(values) != 4:
        raise ValidationError('cocycle-from-n takes four values, got %d'
                              % len(values))
    n = [Fraction(v) for v in values]
    name, a, R = _action(flags, doc)
    plus, minus = _plus_minus(R)
    sigma = cocycle_from_n(n, R, plus, minus, a.group)
    product = n[0] * n[1] * n[2] * n[3]
    if sigma is None:
        report.lines.append('%s is not a sum of two squares; no cocycle'
                            % product)
        report.records.append({'n': [str(v) for v in n], 'exists': False})
        return
    report.lines.append('cocycle for n = %s on %s'
                        % (', '.join(str(v) for v in n), name))
    rows = []
    for k, row in enumerate(sigma.values):
        for j, v in enumerate(row):
            rows.append((k, j, render_scalar(v)))
            report.records.append({'generator': k, 'basis': j,
                                   'value': render_scalar(v)})
    report.table('values', rows, ['generator', 'basis', 'value'])


def _square(x):
    return ('%s^2' if x.denominator == 1 else '(%s)^2') % x


def cmd_two_squares(flags, doc, report):
    values = flags.get('values') or []
    if len(values) != 1:
        raise ValidationError('two-squares takes one value')
    q = Fraction(values[0])
    found = sum_of_two_squares(q)
    if found is None:
        report.lines.append('%s is not a sum of two squares' % q)
        report.records.append({'q': str(q), 'exists': False})
        return
    alpha, beta = found
    report.lines.append('%s = %s + %s' % (q, _square(alpha), _square(beta)))
    report.records.append({'q': str(q), 'exists': True,
                           'alpha': str(alpha), 'beta': str(beta)})


def cmd_irrelevant(flags, doc, report):
    scheme = None
    if flags.get('scheme') is not None:
        scheme = doc.get('param_schemes', flags['scheme'])
        R = scheme.presentation
        m = scheme.ample_degree
    else:
        R = doc.get('rings', _need(flags, 'ring'))
        m = _degree(doc, _need(flags, 'degree'), R.group)
    ideal = irrelevant_ideal(R, m, flags.get('cap'))
    monomials = irrelevant_strings(R, ideal)
    report.lines.append('irrelevant ideal in degree %s: %d generators'
                        % (_render_vector(m), len(ideal)))
    report.records.extend({'monomial': s} for s in monomials)
    report.table('generators', [(s,) for s in monomials], ['monomial'])
    if scheme is not None and scheme.coprimality_clauses:
        factors = []
        for i, e in scheme.coprimality_clauses:
            var = tuple(int(k == i) for k in range(R.nvars))
            factors.append([var, e])
        same = radical_equal_modulo(R, ideal, expand_monomial_ideal(factors))
        report.lines.append('radical equals the product of the coprimality '
                            'ideals: %s' % ('yes' if same else 'no'))
        report.records.append({'coprimality_radical_equal': same})


def cmd_generated_in_degree(flags, doc, report):
    R = doc.get('rings', _need(flags, 'ring'))
    m = _degree(doc, _need(flags, 'degree'), R.group)
    result = generated_in_degree(R, m, flags.get('steps'), flags.get('cap'))
    report.lines.append('generated in degree %s up to %d steps: %s'
                        % (_render_vector(m), result.steps,
                           'yes' if result.generated else 'no'))
    report.records = list(result.rows)
    report.table('multiplication maps', result.rows)
    if not result.generated:
        report.code = 1


def cmd_check_relations(flags, doc, report):
    pr = _ring_pullback(flags, doc)
    if not flags.get('no_minimize') and flags.get('subgroup') is not None:
        pr = minimize_generators(pr)
    rows = check_relations(pr, flags.get('cap'))
    bad = [r for r, ok in rows if not ok]
    report.lines.append('%d relations, %d not in the ambient ideal'
                        % (len(rows), len(bad)))
    report.records = [{'relation': r, 'member': ok} for r, ok in rows]
    report.table('relations', rows, ['relation', 'member'])
    if bad:
        report.code = 1


def cmd_param_check(flags, doc, report):
    name = _need(flags, 'scheme')
    ps = doc.get('param_schemes', name)
    height = config.get('height', flags.get('height'))
    tuples = param_enumerate(ps, height)
    result = param_project_and_verify(ps, tuples)
    report.lines.append('%s: %d parameter tuples of height <= %d, %d points, '
                        '%d violations' % (name, len(tuples), height,
                                           len(result.points),
                                           len(result.violations)))
    report.lines.extend(ps.clause_strings())
    report.records = result.records()
    report.table('points', [(str(p),) for p in result.points], ['point'])
    if flags.get('coverage'):
        cov = coverage_check(ps, flags['coverage'])
        report.lines.append('surface points of height <= %d: %d, missing at '
                            'parameter height %d: %d'
                            % (cov.surface_height, len(cov.surface),
                               cov.param_height, len(cov.missing)))
        report.records.extend({'missing': list(p)} for p in cov.missing)
        if not cov.covered:
            report.code = 1
    if not result.ok:
        report.code = 1


_DISPATCH = {
    'snf': cmd_snf,
    'kernel': cmd_kernel,
    'fiber': cmd_fiber,
    'hilbert': cmd_hilbert,
    'veronese': cmd_veronese,
    'pullback': cmd_pullback,
    'minimize': cmd_minimize,
    'check-action': cmd_check_action,
    'descend': cmd_descend,
    'twist': cmd_twist,
    'cocycle-from-n': cmd_cocycle_from_n,
    'two-squares': cmd_two_squares,
    'irrelevant': cmd_irrelevant,
    'generated-in-degree': cmd_generated_in_degree,
    'check-relations': cmd_check_relations,
    'param-check': cmd_param_check,
}


def run_command(cmd, doc, flags):
    """
    Run one command against a document

    Parameters
    ----------
    cmd: str
        one of ``COMMANDS``
    doc: Document
    flags: dict or argparse.Namespace
        option values by destination name (``ring``, ``subgroup``, ``bound``
        ...); missing options are None

    Returns
    -------
    (exit code, Report)
    """
    if isinstance(flags, argparse.Namespace):
        flags = vars(flags)
    report = Report(cmd)
    try:
        if cmd not in _DISPATCH:
            raise ValidationError('unknown command %r; expected one of %s'
                                  % (cmd, ', '.join(COMMANDS)))
        _DISPATCH[cmd](flags, doc, report)
    except ValidationError as e:
        logger.debug('validation failure in %s', cmd, exc_info=True)
        report.code = 1
        report.lines.append('error: %s' % e)
    except ComputationAborted as e:
        report.code = 2
        report.lines.append('aborted: %s' % e)
    return report.code, report


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _global_options(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    source = parser.add_mutually_exclusive_group()
    source.add_argument('--fixture', default=default,
                        help='bundled fixture name (dp4, chatelet, p1xp1)')
    source.add_argument('--document', default=default,
                        help='path of a YAML document')
    parser.add_argument('--json', action='store_true',
                        default=argparse.SUPPRESS if suppress else False,
                        help='emit machine-readable records')
    parser.add_argument('-v', '--verbose', action='count',
                        default=argparse.SUPPRESS if suppress else 0,
                        help='log at INFO, twice for DEBUG')


def build_parser():
    parser = _ArgumentParser(prog='coxring',
                             description='Exact computations with Cox rings')
    parser.add_argument('--version', action='version', version=__version__)
    _global_options(parser, False)
    common = _ArgumentParser(add_help=False)
    _global_options(common, True)
    common.add_argument('--ring')
    common.add_argument('--subgroup')
    common.add_argument('--hom')
    common.add_argument('--degree',
                        help='named degree or comma-separated vector')
    common.add_argument('--bound', type=int,
                        help='relation-discovery total degree bound '
                             '(default %d)' % config.DEFAULTS['bound'])
    common.add_argument('--cap', type=int,
                        help='enumeration safety cap (default %d)'
                             % config.DEFAULTS['cap'])
    common.add_argument('--height', type=int)
    common.add_argument('--scheme')
    common.add_argument('--action')
    common.add_argument('--cocycle')
    common.add_argument('--matrix', help='integer matrix, e.g. [[2,4],[6,8]]')
    common.add_argument('--steps', type=int)
    common.add_argument('--names', help='comma-separated generator names')
    common.add_argument('--no-minimize', action='store_true')
    common.add_argument('--coverage', type=int,
                        help='surface height for a coverage check')
    common.add_argument('values', nargs='*',
                        help='numbers for two-squares, cocycle-from-n and '
                             'twist')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ValidationError as e:
        parser.print_usage(sys.stderr)
        print('coxring: error: %s' % e, file=sys.stderr)
        return 1
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose,
                                                              2)]
    logging.basicConfig(level=level,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        doc = open_document(args.fixture, args.document,
                            [args.ring, args.scheme, args.action])
    except CoxRingError as e:
        print('error: %s' % e, file=sys.stderr)
        return 1
    code, report = run_command(args.command, doc, args)
    print(report.json() if args.json else report.text())
    return code


if __name__ == '__main__':
    sys.exit(main())
