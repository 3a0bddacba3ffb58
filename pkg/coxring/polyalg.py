"""
Sparse polynomials over a field tower and graded presentations.

Every ideal handled here is homogeneous for a group grading, so ideal
membership, graded pieces and relation discovery are all degree-local exact
linear algebra; no Groebner bases are involved.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import config
from .abgroup import AbelianGroup, GroupElement, GroupHom
from .exceptions import HomogeneityError, ValidationError
from .lattice import fiber_points, grlex_key
from .linalg import Echelon
from .numfield import (FieldTower, TowerElement, coerce, is_rational,
                       render_scalar)

logger = logging.getLogger(__name__)


class Polynomial(object):
    """
    Immutable sparse polynomial in ``nvars`` variables

    ``terms`` maps exponent tuples to nonzero coefficients (Fraction or
    :class:`~coxring.numfield.TowerElement`).
    """
    __slots__ = ('nvars', 'terms', '_hash')

    def __init__(self, nvars, terms=None):
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValidationError('exponent %s has %d entries, expected %d'
                                      % (e, len(e), nvars))
            if any(x < 0 for x in e):
                raise ValidationError('negative exponent in %s' % (e,))
            c = coerce(c)
            if c:
                clean[e] = c
        object.__setattr__(self, 'nvars', nvars)
        object.__setattr__(self, 'terms', clean)
        object.__setattr__(self, '_hash', None)

    def __setattr__(self, key, value):
        raise AttributeError('Polynomial is immutable')

    @classmethod
    def constant(cls, c, nvars):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, e, c=1):
        return cls(len(e), {tuple(e): c})

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValidationError('polynomials in %d and %d variables '
                                      'cannot be combined'
                                      % (self.nvars, other.nvars))
            return other
        if isinstance(other, (int, Fraction, TowerElement)):
            return Polynomial.constant(other, self.nvars)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return Polynomial(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, TowerElement)):
            return Polynomial(self.nvars, {e: c * other
                                           for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return Polynomial(self.nvars, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, TowerElement)):
            return self * (1 / coerce(other))
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Polynomial.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, TowerElement)):
            other = Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, '_hash', hash(
                (self.nvars, frozenset(self.terms.items()))))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def monomials(self):
        """Exponents in descending graded-lexicographic order."""
        return sorted(self.terms, key=grlex_key, reverse=True)

    @property
    def leading_monomial(self):
        return max(self.terms, key=grlex_key) if self.terms else None

    @property
    def leading_coefficient(self):
        lm = self.leading_monomial
        return self.terms[lm] if lm is not None else Fraction(0)

    @property
    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def is_rational(self):
        return all(is_rational(c) for c in self.terms.values())

    def map_coefficients(self, func):
        return Polynomial(self.nvars, {e: func(c)
                                       for e, c in self.terms.items()})

    def normalized(self):
        """
        Canonical scalar multiple

        Over Q: primitive integer coefficients with positive leading
        coefficient. Otherwise: leading coefficient 1.
        """
        if not self.terms:
            return self
        if not self.is_rational():
            return self * (1 / self.leading_coefficient)
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in self.terms.values()]
        g = 0
        for v in ints:
            g = gcd(g, v)
        scale = Fraction(den, g)
        if self.leading_coefficient < 0:
            scale = -scale
        return self * scale

    def evaluate(self, point):
        """Exact value at a point (sequence of numbers, one per variable)."""
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total = total + v
        return total

    def embed(self, nvars, positions):
        """Same polynomial in ``nvars`` variables, variable ``i`` moved to
        ``positions[i]``."""
        terms = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, k in enumerate(e):
                new[positions[i]] += k
            terms[tuple(new)] = c
        return Polynomial(nvars, terms)

    def render(self, names):
        """String in the document grammar, terms in descending order."""
        if not self.terms:
            return '0'
        parts = []
        for e in self.monomials():
            c = self.terms[e]
            mono = render_monomial(e, names)
            if isinstance(c, TowerElement):
                sign = '+'
                coef = render_scalar(c)
            else:
                sign = '-' if c < 0 else '+'
                coef = render_scalar(abs(c))
            if not mono:
                body = coef
            elif coef == '1':
                body = mono
            else:
                body = '%s*%s' % (coef, mono)
            parts.append((sign, body))
        sign, body = parts[0]
        text = ('-' if sign == '-' else '') + body
        for sign, body in parts[1:]:
            text += ' %s %s' % (sign, body)
        return text

    def __repr__(self):
        return 'Polynomial(%s)' % self.render(
            ['x%d' % (i + 1) for i in range(self.nvars)])


def render_monomial(e, names, sep='*'):
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append('%s^%d' % (name, k))
    return sep.join(parts)


def monomial_name(e, names):
    """Underscore-joined factor name, powers repeated: ``eta3_eta5_eta5``."""
    parts = []
    for name, k in zip(names, e):
        parts.extend([name] * k)
    return '_'.join(parts) or '1'


@dataclass(frozen=True)
class GradedPresentation:
    """
    ``K[x_1..x_n] / (relations)`` graded by an abelian group

    Parameters
    ----------
    names: tuple of str
    degrees: tuple of GroupElement, one per variable, in ``group``
    relations: tuple of Polynomial, each homogeneous
    tower: FieldTower
        coefficient field
    group: AbelianGroup
        the grading group; inferred from the degrees when omitted
    """
    names: tuple
    degrees: tuple
    relations: tuple = ()
    tower: FieldTower = field(default_factory=FieldTower)
    group: AbelianGroup = None

    def __post_init__(self):
        object.__setattr__(self, 'names', tuple(self.names))
        object.__setattr__(self, 'degrees', tuple(self.degrees))
        object.__setattr__(self, 'relations',
                           tuple(g for g in self.relations if g.terms))
        if self.group is None:
            if not self.degrees:
                raise ValidationError('the grading group of a presentation '
                                      'without variables must be given')
            object.__setattr__(self, 'group', self.degrees[0].parent)
        if len(self.names) != len(self.degrees):
            raise ValidationError('%d names for %d degrees'
                                  % (len(self.names), len(self.degrees)))
        if len(set(self.names)) != len(self.names):
            raise ValidationError('duplicate variable names')
        for d in self.degrees:
            if d.parent != self.group:
                raise ValidationError('degree %s is not in %s'
                                      % (d, self.group))
        for g in self.relations:
            if g.nvars != len(self.names):
                raise ValidationError('relation in %d variables for a ring '
                                      'with %d' % (g.nvars, len(self.names)))
            for c in g.terms.values():
                if isinstance(c, TowerElement) and c.tower != self.tower:
                    raise ValidationError('coefficient %s is not in %s'
                                          % (c, self.tower))
            require_homogeneous(self, g)

    @property
    def nvars(self):
        return len(self.names)

    @property
    def degree_matrix(self):
        return GroupHom.from_columns(AbelianGroup(self.nvars), self.group,
                                     [d.coords for d in self.degrees])

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError('unknown variable %r' % name)

    def var(self, name):
        return Polynomial.variable(self.index(name), self.nvars)

    def gens(self):
        return [Polynomial.variable(i, self.nvars) for i in range(self.nvars)]

    def degree_of(self, e):
        total = self.group.zero()
        for d, k in zip(self.degrees, e):
            if k:
                total = total + k * d
        return total

    def relation_degrees(self):
        return [homogeneous_degree(self, g) for g in self.relations]

    def render(self, f):
        return f.render(self.names)


def homogeneous_degree(R, f):
    """
    Common degree of all terms of ``f``

    Returns None for a polynomial mixing degrees and for zero.
    """
    degrees = {R.degree_of(e) for e in f.terms}
    if len(degrees) != 1:
        return None
    return degrees.pop()


def require_homogeneous(R, f):
    d = homogeneous_degree(R, f)
    if d is None and f.terms:
        by_term = {render_monomial(e, R.names) or '1': str(R.degree_of(e))
                   for e in f.terms}
        raise HomogeneityError(
            'polynomial %s is not homogeneous: %s' % (
                f.render(R.names),
                ', '.join('%s has degree %s' % kv
                          for kv in sorted(by_term.items()))),
            by_term)
    return d


def substitute(f, images):
    """
    Replace each variable ``x_i`` of ``f`` by ``images[i]``

    ``images`` is a sequence of Polynomials in a common ring, or a dict
    from variable index to Polynomial (missing indices stay unchanged, which
    requires the target ring to be the ring of ``f``).
    """
    if isinstance(images, dict):
        images = [images.get(i, Polynomial.variable(i, f.nvars))
                  for i in range(f.nvars)]
    images = list(images)
    if len(images) != f.nvars:
        raise ValidationError('%d images for %d variables'
                              % (len(images), f.nvars))
    if not images:
        return Polynomial(0, dict(f.terms))
    target = images[0].nvars
    powers = {}

    def power(i, k):
        if (i, k) not in powers:
            powers[(i, k)] = images[i] ** k
        return powers[(i, k)]

    out = Polynomial(target)
    for e, c in f.terms.items():
        term = Polynomial.constant(c, target)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def _mkey(e):
    return 1, grlex_key(e)


class _Piece(object):
    """Degree-``d`` monomials and the labelled span of relation multiples."""

    def __init__(self, R, d, cap):
        self.degree = d
        self.monomials = fiber_points(R.degree_matrix, d, cap)
        self.echelon = Echelon()
        for i, g in enumerate(R.relations):
            dg = homogeneous_degree(R, g)
            for mu in fiber_points(R.degree_matrix, d - dg, cap):
                vec = {(1, grlex_key(tuple(a + b for a, b in zip(e, mu)))):
                       c for e, c in g.terms.items()}
                vec[(0, i, mu)] = Fraction(1)
                self.echelon.add(vec)
        self.rank = sum(1 for p in self.echelon.rows if p[0] == 1)
        self.dimension = len(self.monomials) - self.rank
        logger.debug('piece of degree %s: %d monomials, rank %d', d,
                     len(self.monomials), self.rank)

    def standard_monomials(self):
        pivots = set(self.echelon.rows)
        return [e for e in self.monomials if _mkey(e) not in pivots]


@lru_cache(maxsize=512)
def _piece(R, d, cap):
    return _Piece(R, d, cap)


def graded_piece(R, d, cap=None):
    """
    Basis and dimension of ``R_d``

    Returns
    -------
    basis: list of Polynomial
        the standard monomials of degree ``d`` (not leading monomials of any
        relation multiple), ascending graded-lexicographic order
    dimension: int
    """
    p = _piece(R, d, cap)
    basis = [Polynomial.monomial(e) for e in p.standard_monomials()]
    return basis, p.dimension


def span_dimension(R, d, polys, cap=None):
    """
    Dimension of the span of ``polys`` in ``R_d``

    Each polynomial must be zero or homogeneous of degree ``d``. Stops
    early once the span fills the piece.
    """
    p = _piece(R, d, cap)
    ech = Echelon()
    for pivot, row in p.echelon.rows.items():
        if pivot[0] == 1:
            ech.add({k: c for k, c in row.items() if k[0] == 1})
    base = len(ech)
    for f in polys:
        if base + p.dimension == len(ech):
            break
        if f.terms:
            ech.add({_mkey(e): c for e, c in f.terms.items()})
    return len(ech) - base


@dataclass
class IdealMembership:
    """
    Result of :func:`ideal_member`

    ``certificate`` lists ``(relation index, multiplier exponent,
    coefficient)`` with ``f == sum(coefficient * x^multiplier * g_index)``.
    """
    member: bool
    degree: GroupElement = None
    certificate: list = field(default_factory=list)
    remainder: Polynomial = None

    def __bool__(self):
        return self.member

    def expand(self, R):
        out = Polynomial(R.nvars)
        for i, mu, c in self.certificate:
            out = out + R.relations[i] * Polynomial.monomial(mu, c)
        return out


def ideal_member(R, f, cap=None):
    """
    Decide whether the homogeneous polynomial ``f`` lies in the ideal of
    ``R.relations``, with a certificate when it does
    """
    if f.nvars != R.nvars:
        raise ValidationError('polynomial in %d variables for a ring with %d'
                              % (f.nvars, R.nvars))
    if not f.terms:
        return IdealMembership(True, None, [], f)
    d = require_homogeneous(R, f)
    p = _piece(R, d, cap)
    rest = p.echelon.reduce({_mkey(e): c for e, c in f.terms.items()})
    remainder = Polynomial(R.nvars, {k[1][1]: c for k, c in rest.items()
                                     if k[0] == 1})
    if remainder.terms:
        return IdealMembership(False, d, [], remainder)
    certificate = sorted((k[1], k[2], -c) for k, c in rest.items()
                         if k[0] == 0)
    return IdealMembership(True, d, certificate, remainder)


def regrade(R, projection):
    """The same algebra graded through ``projection: R.group -> G'``."""
    return GradedPresentation(R.names, [projection(d) for d in R.degrees],
                              R.relations, R.tower, projection.codomain)


def free_presentation(names, degrees, tower=None, group=None):
    return GradedPresentation(tuple(names), tuple(degrees), (),
                              tower or FieldTower(), group)


@lru_cache(maxsize=64)
def _monomials_by_degree(degrees, max_total):
    """All exponents of total degree <= max_total grouped by degree."""
    n = len(degrees)
    out = {}
    for total in range(max_total + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            e = [0] * n
            for i in combo:
                e[i] += 1
            e = tuple(e)
            d = _degree(degrees, e)
            out.setdefault(d, []).append(e)
    for d in out:
        out[d].sort(key=grlex_key)
    return out


def _degree(degrees, e):
    total = degrees[0].parent.zero()
    for d, k in zip(degrees, e):
        if k:
            total = total + k * d
    return total


def _as_vector(f):
    return {grlex_key(e): c for e, c in f.terms.items()}


def _from_vector(v, nvars):
    return Polynomial(nvars, {k[1]: c for k, c in v.items()})


def minimal_relations(degrees, candidates, bound=None):
    """
    Drop candidates generated by the others up to a total degree bound

    Candidates are homogeneous for the grading ``degrees`` of their
    variables. Per degree they are brought to reduced echelon form; the rows
    are then taken by increasing leading monomial and kept only when they are
    not already combinations of monomial multiples of the kept rows.

    Returns
    -------
    list of Polynomial, normalized, in the order kept
    """
    degrees = tuple(degrees)
    nvars = len(degrees)
    candidates = [f for f in candidates if f.terms]
    if not candidates:
        return []
    if not degrees:
        return [candidates[0].normalized()]
    bound = bound if bound is not None else max(f.total_degree
                                                for f in candidates)
    by_degree = {}
    for f in candidates:
        d = {_degree(degrees, e) for e in f.terms}
        if len(d) != 1:
            raise HomogeneityError('candidate relation is not homogeneous')
        by_degree.setdefault(d.pop(), Echelon()).add(_as_vector(f))
    rows = []
    for d, ech in by_degree.items():
        for pivot, row in ech.rows.items():
            rows.append((pivot, d, row))
    rows.sort(key=lambda r: r[0])
    monomials = _monomials_by_degree(degrees, bound)
    known = {}
    kept = []
    for pivot, d, row in rows:
        ech = known.get(d)
        if ech is not None and ech.contains(row):
            continue
        f = _from_vector(row, nvars)
        kept.append(f)
        room = bound - f.total_degree
        for dm, mus in monomials.items():
            target = d + dm
            for mu in mus:
                if sum(mu) > room:
                    continue
                known.setdefault(target, Echelon()).add(
                    _as_vector(f * Polynomial.monomial(mu)))
    logger.debug('kept %d of %d candidate relations', len(kept), len(rows))
    return [f.normalized() for f in kept]


def discover_relations(R_ambient, gens, degree_bound=None, candidates=None,
                       cap=None):
    """
    Relations among new generators of a subalgebra

    Parameters
    ----------
    R_ambient: GradedPresentation
    gens: list of (name, Polynomial, GroupElement)
        new generator names, their images in ``R_ambient`` and their degrees
        in the new grading group
    degree_bound: int
        total degree bound in the new variables, default from config
    candidates: list of Polynomial, optional
        known relations in the new variables; when given, the kernel is not
        recomputed and only a minimal subset of these is returned

    Returns
    -------
    list of Polynomial in the new variables, each mapping into the ideal of
    ``R_ambient``
    """
    bound = config.get('bound', degree_bound)
    degrees = tuple(g[2] for g in gens)
    images = [g[1] for g in gens]
    for name, image, _ in gens:
        if image.terms and homogeneous_degree(R_ambient, image) is None:
            raise HomogeneityError('image of %s is not homogeneous' % name)
    if not gens:
        return []
    if candidates is not None:
        return minimal_relations(degrees, candidates, bound)
    nvars = len(gens)
    found = []
    image_cache = {(0,) * nvars: Polynomial.constant(1, R_ambient.nvars)}

    def image_of(e):
        if e not in image_cache:
            i = max(j for j in range(nvars) if e[j])
            smaller = e[:i] + (e[i] - 1,) + e[i + 1:]
            image_cache[e] = image_of(smaller) * images[i]
        return image_cache[e]

    classes = _monomials_by_degree(degrees, bound)
    for d in sorted(classes, key=lambda d: (grlex_key(classes[d][0]),
                                            d.coords)):
        mons = classes[d]
        if len(mons) < 2 and R_ambient.relations == ():
            continue
        ech = Echelon()
        amb = None
        for e in mons:
            img = image_of(e)
            if img.terms and amb is None:
                amb = homogeneous_degree(R_ambient, img)
        if amb is not None and R_ambient.relations:
            p = _piece(R_ambient, amb, cap)
            for row in p.echelon.rows.values():
                vec = {(2, k[1]): c for k, c in row.items() if k[0] == 1}
                if vec:
                    ech.add(vec)
        for e in mons:
            vec = {(2, grlex_key(m)): c
                   for m, c in image_of(e).terms.items()}
            vec[(1, grlex_key(e))] = Fraction(1)
            ech.add(vec)
        for pivot, row in ech.rows.items():
            if pivot[0] == 1:
                found.append(Polynomial(nvars, {k[1][1]: c
                                                for k, c in row.items()}))
        logger.debug('degree %s: %d monomials, %d kernel vectors so far', d,
                     len(mons), len(found))
    return minimal_relations(degrees, found, bound)
