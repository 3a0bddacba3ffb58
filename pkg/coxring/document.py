"""
The YAML document format for groups, rings, actions and parameter schemes.

A document has the top-level keys ``format``, ``groups``, ``homs``,
``rings``, ``subgroups``, ``degrees``, ``actions``, ``cocycles`` and
``param_schemes``, every one optional. Matrices are row-major lists; the
generators of a subgroup are the columns of its matrix. Polynomials are
strings in the grammar::

    expr   := ['+' | '-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' integer]
    atom   := integer ['/' integer] | name | '(' expr ')'

Names are ring variables or, when the ring has a field tower, the roots
``i`` (first level) and ``j`` (second level). An integer directly followed
by a name multiplies it, so ``2i`` is ``2*i``.
"""
import logging
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction

import yaml

from .abgroup import AbelianGroup, GroupHom
from .exceptions import (ParseError, UnresolvedReferenceError,
                         ValidationError)
from .galois import Cocycle, action_from_permutation
from .numfield import ROOT_SYMBOLS, FieldTower, TowerElement, render_scalar
from .polyalg import GradedPresentation, Polynomial, render_monomial
from .torsor import ParamScheme

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
SECTIONS = ('groups', 'homs', 'rings', 'subgroups', 'degrees', 'actions',
            'cocycles', 'param_schemes')
here = os.path.abspath(os.path.dirname(__file__))
FIXTURE_DIR = os.path.join(here, 'fixtures')


class LocatedStr(str):
    """A string remembering where it starts in the document (1-based)."""
    line = None
    column = None


class _Loader(yaml.SafeLoader):
    pass


def _construct_str(loader, node):
    s = LocatedStr(loader.construct_scalar(node))
    s.line = node.start_mark.line + 1
    s.column = node.start_mark.column + 1
    if node.style in ('"', "'"):
        s.column += 1
    return s


_Loader.add_constructor('tag:yaml.org,2002:str', _construct_str)


def _where(s):
    line = getattr(s, 'line', None)
    if line is None:
        return ''
    return ' (line %d, column %d)' % (line, s.column)


# polynomial grammar

_TOKEN = re.compile(r'\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))')


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or not text[pos:].strip():
            break
        number, name, other = m.groups()
        start = m.start(m.lastindex)
        if number is not None:
            out.append(('num', int(number), start, m.end()))
        elif name is not None:
            out.append(('name', name, start, m.end()))
        elif other in '+-*/^()':
            out.append((other, other, start, m.end()))
        else:
            out.append(('bad', other, start, m.end()))
        pos = m.end()
    return out


class _Parser(object):
    """Recursive descent over the token list."""

    def __init__(self, text, names, tower):
        self.text = text
        self.names = list(names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.tower = tower
        self.tokens = _tokenize(text)
        self.pos = 0

    def error(self, message, offset=None):
        if offset is None:
            offset = self.tokens[self.pos][2] if self.pos < len(
                self.tokens) else len(self.text)
        line = getattr(self.text, 'line', None)
        column = getattr(self.text, 'column', None)
        if column is not None:
            column += offset
        elif line is None:
            column = offset + 1
        return ParseError('%s in %r' % (message, str(self.text)), line,
                          column)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind=None):
        tok = self.peek()
        if tok is None:
            raise self.error('unexpected end of input')
        if kind is not None and tok[0] != kind:
            raise self.error('expected %r, found %r' % (kind, tok[1]))
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise self.error('empty polynomial', 0)
        out = self.expr()
        if self.peek() is not None:
            raise self.error('unexpected %r' % (self.peek()[1],))
        return out

    def expr(self):
        sign = 1
        tok = self.peek()
        if tok is not None and tok[0] in '+-':
            self.take()
            sign = -1 if tok[0] == '-' else 1
        out = self.term() * sign
        while self.peek() is not None and self.peek()[0] in '+-':
            op = self.take()[0]
            t = self.term()
            out = out + t if op == '+' else out - t
        return out

    def term(self):
        out = self.factor()
        while True:
            tok = self.peek()
            if tok is None:
                return out
            if tok[0] == '*':
                self.take()
                out = out * self.factor()
            elif tok[0] == 'name' and self.pos and \
                    self.tokens[self.pos - 1][0] == 'num' and \
                    self.tokens[self.pos - 1][3] == tok[2]:
                out = out * self.factor()
            else:
                return out

    def factor(self):
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[0] == '^':
            self.take()
            exp = self.take('num')
            return base ** exp[1]
        return base

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise self.error('unexpected end of input')
        n = len(self.names)
        if tok[0] == 'num':
            self.take()
            value = Fraction(tok[1])
            nxt = self.peek()
            if nxt is not None and nxt[0] == '/':
                self.take()
                den = self.take('num')
                if den[1] == 0:
                    raise self.error('division by zero', den[2])
                value = value / den[1]
            return Polynomial.constant(value, n)
        if tok[0] == 'name':
            self.take()
            name = tok[1]
            if name in self.index:
                return Polynomial.variable(self.index[name], n)
            if name in ROOT_SYMBOLS:
                level = ROOT_SYMBOLS.index(name) + 1
                if level <= self.tower.depth:
                    return Polynomial.constant(self.tower.root(level), n)
            raise self.error('unknown name %r' % name, tok[2])
        if tok[0] == '(':
            self.take()
            inner = self.expr()
            self.take(')')
            return inner
        raise self.error('unexpected %r' % (tok[1],), tok[2])


def parse_polynomial(text, names, tower=None):
    """Parse a polynomial string over ``names``."""
    return _Parser(text, names, tower or FieldTower()).parse()


def parse_scalar(text, tower=None):
    """Parse a constant (rational or tower element)."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    f = parse_polynomial(str(text) if not isinstance(text, LocatedStr)
                         else text, [], tower)
    return f.terms.get((), Fraction(0))


def parse_monomial(text, names):
    f = parse_polynomial(text, names)
    if len(f.terms) != 1 or f.leading_coefficient != 1:
        raise ParseError('%r is not a monomial%s' % (str(text), _where(text)),
                         getattr(text, 'line', None),
                         getattr(text, 'column', None))
    return f.leading_monomial


# document model

@dataclass
class Document:
    """
    Parsed document; every section maps names to model objects

    ``links`` records, per ``(section, name)``, the name of the entry it
    refers to (the ring of an action or scheme, the action of a cocycle).
    """
    format: int = FORMAT_VERSION
    groups: dict = field(default_factory=dict)
    homs: dict = field(default_factory=dict)
    rings: dict = field(default_factory=dict)
    subgroups: dict = field(default_factory=dict)
    degrees: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    cocycles: dict = field(default_factory=dict)
    param_schemes: dict = field(default_factory=dict)
    links: dict = field(default_factory=dict)

    def get(self, section, name):
        entries = getattr(self, section)
        if name not in entries:
            raise UnresolvedReferenceError(
                'no entry %r in section %r%s' % (str(name), section,
                                                 _where(name)))
        return entries[name]

    def ring_of(self, action_name):
        return self.get('rings', self.links[('actions', action_name)])

    def group_name(self, group):
        for name, g in self.groups.items():
            if g == group:
                return name
        return None

    def names(self):
        return {s: sorted(getattr(self, s)) for s in SECTIONS}


def _mapping(data, what):
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValidationError('%s must be a mapping%s' % (what, _where(what)))
    return data


def _require(entry, key, where):
    if key not in entry:
        raise ValidationError('%s is missing %r%s' % (where, key,
                                                      _where(where)))
    return entry[key]


def _int_matrix(rows, where):
    try:
        return [[int(v) for v in row] for row in rows]
    except (TypeError, ValueError):
        raise ValidationError('%s must be a matrix of integers%s'
                              % (where, _where(where)))


def _columns(rows):
    if not rows:
        return []
    return [tuple(row[j] for row in rows) for j in range(len(rows[0]))]


def parse_document(text):
    """
    Parse and validate a document

    Raises ParseError for syntax errors, UnresolvedReferenceError for names
    that are not defined and HomogeneityError for relations mixing degrees.
    """
    try:
        data = yaml.load(text, Loader=_Loader)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark
        raise ParseError(str(e.problem), mark.line + 1 if mark else None,
                         mark.column + 1 if mark else None)
    doc = Document()
    if data is None:
        return doc
    data = _mapping(data, 'document')
    unknown = set(data) - set(SECTIONS) - {'format'}
    if unknown:
        key = sorted(unknown)[0]
        raise ValidationError('unknown section %r%s' % (str(key),
                                                        _where(key)))
    doc.format = int(data.get('format', FORMAT_VERSION))
    if doc.format != FORMAT_VERSION:
        raise ValidationError('unsupported format version %d' % doc.format)

    for name, g in _mapping(data.get('groups'), 'groups').items():
        g = _mapping(g, name)
        doc.groups[str(name)] = AbelianGroup(int(g.get('free_rank', 0)),
                                             tuple(g.get('torsion', ())))

    for name, h in _mapping(data.get('homs'), 'homs').items():
        h = _mapping(h, name)
        domain = doc.get('groups', _require(h, 'domain', name))
        codomain = doc.get('groups', _require(h, 'codomain', name))
        rows = _int_matrix(_require(h, 'matrix', name), name)
        doc.homs[str(name)] = GroupHom(domain, codomain, rows)

    for name, r in _mapping(data.get('rings'), 'rings').items():
        doc.rings[str(name)] = _parse_ring(doc, name, _mapping(r, name))

    for name, s in _mapping(data.get('subgroups'), 'subgroups').items():
        s = _mapping(s, name)
        G = doc.get('groups', _require(s, 'group', name))
        rows = _int_matrix(_require(s, 'matrix', name), name)
        if rows and len(rows) != G.ngens:
            raise ValidationError('subgroup %s needs %d rows%s'
                                  % (name, G.ngens, _where(name)))
        doc.subgroups[str(name)] = tuple(G.element(c)
                                         for c in _columns(rows))

    for name, d in _mapping(data.get('degrees'), 'degrees').items():
        d = _mapping(d, name)
        G = doc.get('groups', _require(d, 'group', name))
        doc.degrees[str(name)] = G.element(tuple(
            int(v) for v in _require(d, 'vector', name)))

    for name, a in _mapping(data.get('actions'), 'actions').items():
        a = _mapping(a, name)
        ring_name = _require(a, 'ring', name)
        doc.actions[str(name)] = _parse_action(doc, name, a)
        doc.links[('actions', str(name))] = str(ring_name)

    for name, c in _mapping(data.get('cocycles'), 'cocycles').items():
        c = _mapping(c, name)
        action_name = _require(c, 'action', name)
        action = doc.get('actions', action_name)
        R = doc.ring_of(action_name)
        values = [[parse_scalar(v, R.tower) for v in row]
                  for row in _require(c, 'values', name)]
        doc.cocycles[str(name)] = Cocycle(action.group, R.group, values)
        doc.links[('cocycles', str(name))] = str(action_name)

    for name, p in _mapping(data.get('param_schemes'),
                            'param_schemes').items():
        p = _mapping(p, name)
        ring_name = _require(p, 'ring', name)
        doc.param_schemes[str(name)] = _parse_scheme(doc, name, p)
        doc.links[('param_schemes', str(name))] = str(ring_name)
    logger.debug('parsed document: %s', {s: len(getattr(doc, s))
                                         for s in SECTIONS})
    return doc


def _parse_tower(items):
    rads = []
    for item in items or ():
        tower = FieldTower(tuple(rads))
        rads.append(parse_scalar(item, tower))
    return FieldTower(tuple(rads))


def _parse_ring(doc, name, r):
    G = doc.get('groups', _require(r, 'group', name))
    names = [str(v) for v in _require(r, 'variables', name)]
    tower = _parse_tower(r.get('tower'))
    degrees = _require(r, 'degrees', name)
    if isinstance(degrees, str):
        hom = doc.get('homs', degrees)
        if hom.codomain != G or hom.domain.ngens != len(names):
            raise ValidationError('hom %s does not grade %d variables by %s%s'
                                  % (degrees, len(names), G,
                                     _where(degrees)))
        degrees = [c.coords for c in hom.columns()]
    if len(degrees) != len(names):
        raise ValidationError('ring %s has %d variables and %d degrees%s'
                              % (name, len(names), len(degrees),
                                 _where(name)))
    degrees = [G.element(tuple(int(v) for v in d)) for d in degrees]
    relations = [parse_polynomial(s, names, tower)
                 for s in r.get('relations') or ()]
    return GradedPresentation(tuple(names), tuple(degrees), tuple(relations),
                              tower, G)


def _variable(R, name):
    if name not in R.names:
        raise UnresolvedReferenceError('no variable %r%s' % (str(name),
                                                             _where(name)))
    return R.names.index(name)


def _parse_action(doc, name, a):
    R = doc.get('rings', a['ring'])
    orders = tuple(int(t) for t in _require(a, 'orders', name))
    group = AbelianGroup(0, orders)
    gens = _require(a, 'generators', name)
    if len(gens) != len(orders):
        raise ValidationError('action %s lists %d generators for %d orders%s'
                              % (name, len(gens), len(orders), _where(name)))
    perms, scalars, levels, gradings = [], [], [], []
    for g in gens:
        g = _mapping(g, name)
        perm = _mapping(g.get('permutation'), name)
        perms.append({_variable(R, k): _variable(R, v)
                      for k, v in perm.items()})
        scalars.append({_variable(R, k): parse_scalar(v, R.tower)
                        for k, v in _mapping(g.get('scalars'),
                                             name).items()})
        levels.append(set(int(x) for x in g.get('conjugate') or ()))
        if g.get('grading') is not None:
            rows = _int_matrix(g['grading'], name)
            gradings.append(GroupHom(R.group, R.group, rows))
        else:
            gradings.append(None)
    return action_from_permutation(R, group, perms, scalars, levels,
                                   gradings)


def _parse_scheme(doc, name, p):
    R = doc.get('rings', p['ring'])
    clauses = []
    for clause in p.get('coprime') or ():
        if len(clause) != 2:
            raise ValidationError('coprimality clause of %s must be a pair%s'
                                  % (name, _where(name)))
        clauses.append((_variable(R, clause[0]), parse_monomial(clause[1],
                                                           R.names)))
    projection = [parse_monomial(m, R.names)
                  for m in _require(p, 'projection', name)]
    coords = [str(c) for c in p.get('coordinates') or
              ['x%d' % k for k in range(len(projection))]]
    equations = [parse_polynomial(e, coords)
                 for e in p.get('equations') or ()]
    ample = _require(p, 'ample', name)
    if isinstance(ample, str):
        ample = doc.get('degrees', ample)
    else:
        ample = R.group.element(tuple(int(v) for v in ample))
    return ParamScheme(R, tuple(clauses), tuple(projection), tuple(equations),
                       ample, tuple(coords), str(name))


# serialization

def _scalar_out(c):
    if isinstance(c, TowerElement):
        return render_scalar(c)
    c = Fraction(c)
    return int(c) if c.denominator == 1 else render_scalar(c)


def _rows(hom):
    return [list(row) for row in hom.matrix]


def _ring_out(doc, R):
    out = {'group': doc.group_name(R.group),
           'variables': list(R.names),
           'degrees': [list(d.coords) for d in R.degrees]}
    if R.tower.depth:
        rads = []
        for k, r in enumerate(R.tower.radicands):
            if k == 0:
                rads.append(_scalar_out(r))
            else:
                rads.append(_scalar_out(TowerElement(
                    FieldTower(R.tower.radicands[:k]), k, r)))
        out['tower'] = rads
    if R.relations:
        out['relations'] = [f.render(R.names) for f in R.relations]
    return out


def _action_out(doc, name, a):
    R = doc.ring_of(name)
    gens = []
    for g in a.generators:
        entry = {'permutation': {R.names[i]: R.names[j]
                                 for i, j in enumerate(g.permutation)
                                 if i != j}}
        scalars = {R.names[i]: _scalar_out(c)
                   for i, c in enumerate(g.scalars) if c != 1}
        if scalars:
            entry['scalars'] = scalars
        if g.levels:
            entry['conjugate'] = sorted(g.levels)
        entry['grading'] = _rows(g.grading)
        gens.append(entry)
    return {'ring': doc.links[('actions', name)],
            'orders': list(a.group.torsion_orders),
            'generators': gens}


def _scheme_out(doc, name, ps):
    R = ps.presentation
    ample_name = next((k for k, v in doc.degrees.items()
                       if v == ps.ample_degree), None)
    return {'ring': doc.links[('param_schemes', name)],
            'coprime': [[R.names[i], render_monomial(e, R.names)]
                        for i, e in ps.coprimality_clauses],
            'projection': [render_monomial(e, R.names)
                           for e in ps.projection],
            'coordinates': list(ps.coordinate_names),
            'equations': [f.render(ps.coordinate_names)
                          for f in ps.surface_equations],
            'ample': ample_name if ample_name is not None else
            list(ps.ample_degree.coords)}


def document_data(doc):
    """The document as plain Python data, ready for YAML or JSON."""
    data = {'format': doc.format}
    if doc.groups:
        data['groups'] = {
            name: dict({'free_rank': g.free_rank},
                       **({'torsion': list(g.torsion_orders)}
                          if g.torsion_orders else {}))
            for name, g in doc.groups.items()}
    if doc.homs:
        data['homs'] = {name: {'domain': doc.group_name(h.domain),
                               'codomain': doc.group_name(h.codomain),
                               'matrix': _rows(h)}
                        for name, h in doc.homs.items()}
    if doc.rings:
        data['rings'] = {name: _ring_out(doc, R)
                         for name, R in doc.rings.items()}
    if doc.subgroups:
        data['subgroups'] = {}
        for name, H in doc.subgroups.items():
            G = H[0].parent if H else None
            rows = [[h.coords[i] for h in H] for i in range(G.ngens)] \
                if G else []
            data['subgroups'][name] = {'group': doc.group_name(G),
                                       'matrix': rows}
    if doc.degrees:
        data['degrees'] = {name: {'group': doc.group_name(d.parent),
                                  'vector': list(d.coords)}
                           for name, d in doc.degrees.items()}
    if doc.actions:
        data['actions'] = {name: _action_out(doc, name, a)
                           for name, a in doc.actions.items()}
    if doc.cocycles:
        data['cocycles'] = {
            name: {'action': doc.links[('cocycles', name)],
                   'values': [[_scalar_out(v) for v in row]
                              for row in c.values]}
            for name, c in doc.cocycles.items()}
    if doc.param_schemes:
        data['param_schemes'] = {name: _scheme_out(doc, name, ps)
                                 for name, ps in doc.param_schemes.items()}
    return data


def serialize_document(doc):
    """Render a document back to YAML text."""
    return yaml.safe_dump(document_data(doc), default_flow_style=None,
                          sort_keys=False)


# bundled fixtures

def fixture_names():
    return sorted(f[:-4] for f in os.listdir(FIXTURE_DIR)
                  if f.endswith('.yml'))


def fixture_path(name):
    path = os.path.join(FIXTURE_DIR, '%s.yml' % name)
    if not os.path.exists(path):
        raise ValidationError('no bundled fixture %r; available: %s'
                              % (name, ', '.join(fixture_names())))
    return path


def load_document(path):
    with open(path) as f:
        return parse_document(f.read())


def load_fixture(name):
    return load_document(fixture_path(name))


def find_fixture(entry):
    """Name of the first bundled fixture defining ``entry`` in any
    section."""
    for name in fixture_names():
        with open(fixture_path(name)) as f:
            data = yaml.safe_load(f) or {}
        for section in SECTIONS:
            if entry in (data.get(section) or {}):
                return name
    raise UnresolvedReferenceError('no bundled fixture defines %r' % entry)


def open_document(fixture=None, document=None, entries=()):
    """
    Document from a path, a bundled fixture, or the fixture defining the
    first of ``entries``; an empty document when nothing is named
    """
    if document:
        return load_document(document)
    if fixture:
        return load_fixture(fixture)
    for entry in entries:
        if entry:
            return load_fixture(find_fixture(entry))
    return Document()
