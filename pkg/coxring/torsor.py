"""
Irrelevant ideals, generation in a degree, and brute-force checks of
integral points on torsors mapped to a projective surface.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import divisors, integer_nthroot

from . import config
from .abgroup import GroupElement
from .exceptions import ParameterizationError, ValidationError
from .lattice import fiber_points, grlex_key
from .polyalg import (GradedPresentation, Polynomial, graded_piece,
                      render_monomial, span_dimension)

logger = logging.getLogger(__name__)


def _support(e):
    return tuple(int(k > 0) for k in e)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _minimalize(supports):
    supports = sorted(set(supports), key=grlex_key)
    out = []
    for s in supports:
        if not any(_divides(t, s) for t in out):
            out.append(s)
    return sorted(out, key=grlex_key, reverse=True)


def irrelevant_ideal(R, m, cap=None):
    """
    Squarefree generators of the radical of the monomial part of ``<R_m>``

    Parameters
    ----------
    R: GradedPresentation
    m: GroupElement
        degree whose fiber is finite (an ample degree)

    Returns
    -------
    list of exponent tuples with entries 0 and 1, minimal under divisibility,
    in descending graded-lexicographic order
    """
    points = fiber_points(R.degree_matrix, m, cap)
    out = _minimalize(_support(e) for e in points)
    logger.info('irrelevant ideal in degree %s: %d monomials of degree m, '
                '%d generators', m, len(points), len(out))
    return out


def expand_monomial_ideal(factors):
    """
    Squarefree minimal generators of the radical of a product of monomial
    ideals

    Parameters
    ----------
    factors: list of lists of exponent tuples
    """
    factors = [list(f) for f in factors]
    if not factors:
        return []
    n = len(factors[0][0])
    products = []
    for combo in itertools.product(*factors):
        total = [0] * n
        for e in combo:
            total = [a + b for a, b in zip(total, e)]
        products.append(_support(total))
    return _minimalize(products)


def _vanishes(ideal, zeros):
    return all(any(e[i] and zeros[i] for i in range(len(e))) for e in ideal)


def realisable_zero_patterns(R):
    """
    Sets of variables (as 0/1 tuples, 1 meaning zero) that a point of the
    relations can vanish on exactly: no relation keeps a single term
    """
    n = R.nvars
    supports = [[_support(e) for e in g.terms] for g in R.relations]
    out = []
    for zeros in itertools.product((0, 1), repeat=n):
        ok = True
        for terms in supports:
            alive = sum(1 for s in terms
                        if not any(s[i] and zeros[i] for i in range(n)))
            if alive == 1:
                ok = False
                break
        if ok:
            out.append(zeros)
    return out


def radical_equal_modulo(R, ideal_a, ideal_b):
    """
    True when two monomial ideals have the same zero set on the realisable
    zero patterns of ``R``
    """
    for zeros in realisable_zero_patterns(R):
        if _vanishes(ideal_a, zeros) != _vanishes(ideal_b, zeros):
            logger.debug('radicals differ on the zero pattern %s', zeros)
            return False
    return True


@dataclass
class GenerationReport:
    degree: GroupElement
    steps: int
    rows: list = field(default_factory=list)

    @property
    def generated(self):
        return all(r['surjective'] for r in self.rows)

    def __bool__(self):
        return self.generated


def generated_in_degree(R, m, steps=None, cap=None):
    """
    Check that ``R_{km} R_m = R_{(k+1)m}`` for ``k = 1..steps``

    A bounded check: true means the multiplication maps are surjective up to
    ``(steps + 1) m``.
    """
    steps = config.get('steps', steps)
    report = GenerationReport(m, steps)
    base, _ = graded_piece(R, m, cap)
    current = base
    for k in range(1, steps + 1):
        target = (k + 1) * m
        products = {tuple(a + b for a, b in zip(x.leading_monomial,
                                                 y.leading_monomial))
                    for x in current for y in base}
        products = sorted(products, key=grlex_key)
        _, dim = graded_piece(R, target, cap)
        rank = span_dimension(R, target,
                              (Polynomial.monomial(e) for e in products), cap)
        report.rows.append({'k': k, 'degree': str(target), 'dimension': dim,
                            'image': rank, 'surjective': rank == dim})
        logger.info('degree %s: image of multiplication %d of %d', target,
                    rank, dim)
        current, _ = graded_piece(R, target, cap)
    return report


@dataclass(frozen=True)
class ParamScheme:
    """
    A model of a torsor over the integers with its map to projective space

    Parameters
    ----------
    presentation: GradedPresentation
        over Q; the relations are the torsor equations
    coprimality_clauses: tuple of (int, tuple)
        ``(i, e)`` demands ``gcd(x_i, x^e) == 1``
    projection: tuple of exponent tuples
        monomials of one common degree, one per projective coordinate
    surface_equations: tuple of Polynomial
        homogeneous, in the projective coordinates
    ample_degree: GroupElement
        degree whose irrelevant ideal cuts out the excluded locus
    coordinate_names: tuple of str
    """
    presentation: GradedPresentation
    coprimality_clauses: tuple
    projection: tuple
    surface_equations: tuple
    ample_degree: GroupElement
    coordinate_names: tuple = ()
    name: str = ''

    def __post_init__(self):
        R = self.presentation
        object.__setattr__(self, 'coprimality_clauses', tuple(
            (int(i), tuple(e)) for i, e in self.coprimality_clauses))
        object.__setattr__(self, 'projection',
                           tuple(tuple(e) for e in self.projection))
        object.__setattr__(self, 'surface_equations',
                           tuple(self.surface_equations))
        if not self.coordinate_names:
            object.__setattr__(self, 'coordinate_names', tuple(
                'x%d' % k for k in range(len(self.projection))))
        if R.tower.depth:
            raise ValidationError('parameterizations are over Q')
        if any(not g.is_rational() for g in R.relations):
            raise ValidationError('torsor equations must have rational '
                                  'coefficients')
        if not self.projection:
            raise ValidationError('empty projection')
        degrees = {R.degree_of(e) for e in self.projection}
        if len(degrees) != 1:
            raise ValidationError('projection monomials have different '
                                  'degrees: %s' % ', '.join(
                                      sorted(str(d) for d in degrees)))
        if len(self.coordinate_names) != len(self.projection):
            raise ValidationError('%d coordinate names for %d projection '
                                  'monomials' % (len(self.coordinate_names),
                                                 len(self.projection)))
        for f in self.surface_equations:
            if f.nvars != len(self.projection):
                raise ValidationError('surface equation in %d coordinates, '
                                      'projection has %d'
                                      % (f.nvars, len(self.projection)))
            if len({sum(e) for e in f.terms}) > 1:
                raise ValidationError('surface equation %s is not homogeneous'
                                      % f.render(self.coordinate_names))
        for i, e in self.coprimality_clauses:
            if not 0 <= i < R.nvars or len(e) != R.nvars:
                raise ValidationError('bad coprimality clause (%d, %s)'
                                      % (i, e))

    @property
    def projection_degree(self):
        return self.presentation.degree_of(self.projection[0])

    def clause_strings(self):
        names = self.presentation.names
        return ['gcd(%s, %s) = 1' % (names[i], render_monomial(e, names)
                                     or '1')
                for i, e in self.coprimality_clauses]

    def project(self, point):
        return tuple(Polynomial.monomial(e).evaluate(point)
                     for e in self.projection)


def _gcd_ok(ps, point):
    for i, e in ps.coprimality_clauses:
        value = 1
        for x, k in zip(point, e):
            if k:
                value *= x ** k
        if gcd(point[i], value) != 1:
            return False
    return True


def _solve_variable(R):
    """Index solved for by root finding: the last one with the lowest
    degree in the relations, never the first coordinate."""
    if not R.relations:
        return None
    n = R.nvars
    best = None
    for v in reversed(range(1, n)):
        degs = [max(e[v] for e in g.terms) for g in R.relations]
        degs = [d for d in degs if d]
        if not degs:
            continue
        deg = min(degs)
        if best is None or deg < best[0]:
            best = (deg, v)
    return best[1] if best else None


def _integer_roots(coeffs, height):
    """Integer roots in ``[-height, height]`` of ``sum(c_k v^k)``; None means
    every value is a root."""
    coeffs = [Fraction(c) for c in coeffs]
    if not any(coeffs):
        return None
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    low = next(k for k, c in enumerate(ints) if c)
    out = set()
    if low > 0:
        out.add(0)
    for r in divisors(abs(ints[low])):
        if r > height:
            break
        for v in (r, -r):
            if sum(c * v ** k for k, c in enumerate(ints)) == 0:
                out.add(v)
    return sorted(out)


def _univariate(g, v, point):
    coeffs = {}
    for e, c in g.terms.items():
        val = c
        for i, k in enumerate(e):
            if k and i != v:
                val = val * point[i] ** k
        coeffs[e[v]] = coeffs.get(e[v], 0) + val
    top = max(coeffs)
    return [coeffs.get(k, 0) for k in range(top + 1)]


def param_enumerate(ps, height=None, first_range=None, irrelevant=None):
    """
    Integral points of the torsor model of height at most ``height``

    Parameters
    ----------
    ps: ParamScheme
    height: int
        coordinate bound, default from config
    first_range: iterable of int, optional
        values taken by the first coordinate, to split the search box
    irrelevant: list of exponent tuples, optional
        precomputed ``irrelevant_ideal(ps.presentation, ps.ample_degree)``

    Returns
    -------
    list of int tuples satisfying the relations exactly and every gcd clause,
    not on the irrelevant locus, in lexicographic order
    """
    height = config.get('height', height)
    if height < 1:
        raise ValidationError('height must be at least 1, got %d' % height)
    R = ps.presentation
    n = R.nvars
    if irrelevant is None:
        irrelevant = irrelevant_ideal(R, ps.ample_degree)
    box = range(-height, height + 1)
    first = list(first_range) if first_range is not None else list(box)
    v = _solve_variable(R)
    outer = [k for k in range(n) if k != v]
    ranges = [first if k == 0 else box for k in outer]
    found = []
    point = [0] * n
    for values in itertools.product(*ranges):
        for k, x in zip(outer, values):
            point[k] = x
        if v is None:
            candidates = [None]
        else:
            candidates = None
            for g in R.relations:
                roots = _integer_roots(_univariate(g, v, point), height)
                if roots is not None:
                    candidates = roots
                    break
            if candidates is None:
                candidates = list(box)
        for x in candidates:
            if v is not None:
                point[v] = x
            if any(g.evaluate(point) for g in R.relations):
                continue
            if not _gcd_ok(ps, point):
                continue
            if irrelevant and _vanishes(
                    irrelevant, tuple(int(p == 0) for p in point)):
                continue
            found.append(tuple(point))
    found.sort()
    logger.info('%d integral points of height <= %d', len(found), height)
    return found


def primitive_representative(coords):
    """Divide by the content and make the first nonzero coordinate
    positive."""
    coords = [Fraction(c) for c in coords]
    den = 1
    for c in coords:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coords]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g == 0:
        raise ParameterizationError('all projective coordinates vanish')
    ints = [c // g for c in ints]
    lead = next(c for c in ints if c)
    if lead < 0:
        ints = [-c for c in ints]
    return tuple(ints)


@dataclass
class ProjectionReport:
    """Outcome of :func:`param_project_and_verify`"""
    scheme: ParamScheme
    rows: list = field(default_factory=list)

    @property
    def points(self):
        return sorted({r['point'] for r in self.rows})

    @property
    def violations(self):
        return [r for r in self.rows if not r['ok']]

    @property
    def ok(self):
        return not self.violations

    def records(self):
        names = self.scheme.presentation.names
        coords = self.scheme.coordinate_names
        out = []
        for r in self.rows:
            rec = dict(zip(names, r['tuple']))
            rec.update(zip(coords, r['point']))
            rec['ok'] = r['ok']
            out.append(rec)
        return out


def param_project_and_verify(ps, tuples):
    """
    Map torsor points to projective space and check the surface equations

    Raises ParameterizationError when a tuple maps to the zero vector, which
    means the irrelevant locus was not excluded.
    """
    report = ProjectionReport(ps)
    for t in tuples:
        image = ps.project(t)
        if not any(image):
            raise ParameterizationError('%s projects to the zero vector'
                                        % (tuple(t),))
        point = primitive_representative(image)
        ok = all(f.evaluate(point) == 0 for f in ps.surface_equations)
        if not ok:
            logger.warning('point %s from %s is not on the surface', point,
                           tuple(t))
        report.rows.append({'tuple': tuple(t), 'point': point, 'ok': ok})
    logger.info('%d tuples, %d distinct points, %d violations', len(tuples),
                len(report.points), len(report.violations))
    return report


def _exact_roots(value, k, height):
    """Integers ``x`` with ``x**k == value`` and ``|x| <= height``; ``k`` may
    be negative."""
    value = Fraction(value)
    if k < 0:
        if not value:
            return []
        value, k = 1 / value, -k
    if value.denominator != 1:
        return []
    v = value.numerator
    if v == 0:
        return [0]
    if v < 0 and k % 2 == 0:
        return []
    r, exact = integer_nthroot(abs(v), k)
    r = int(r)
    if not exact or r > height:
        return []
    if k % 2 == 0:
        return [-r, r]
    return [r if v > 0 else -r]


def _monomial_value(point, d):
    value = Fraction(1)
    for x, k in zip(point, d):
        if k:
            value *= Fraction(x) ** k
    return value


def _scale_constraints(ps, point, scale):
    """``(d, c)`` pairs demanding ``t**d == c``: the projection monomials are
    ``scale * point`` or, without a scale, proportional to ``point``."""
    nonzero = [k for k, x in enumerate(point) if x]
    mons = ps.projection
    if scale is not None:
        return [(mons[k], Fraction(scale * point[k])) for k in nonzero]
    k0 = nonzero[0]
    return [(tuple(a - b for a, b in zip(mons[k], mons[k0])),
             Fraction(point[k], point[k0])) for k in nonzero[1:]]


def _zero_patterns(ps, point, irrelevant):
    """Zero patterns (1 meaning zero) a torsor point over ``point`` can
    have: the variables of the nonzero coordinates stay nonzero and every
    vanishing coordinate loses a variable."""
    R = ps.presentation
    n = R.nvars
    mons = ps.projection
    required = {i for k, x in enumerate(point) if x
                for i, e in enumerate(mons[k]) if e}
    optional = [i for i in range(n) if i not in required]
    out = []
    for bits in itertools.product((0, 1), repeat=len(optional)):
        zeros = [0] * n
        for i, b in zip(optional, bits):
            zeros[i] = b
        if any(not x and not any(e[i] and zeros[i] for i in range(n))
               for x, e in zip(point, mons)):
            continue
        if irrelevant and _vanishes(irrelevant, zeros):
            continue
        if any(zeros[i] and any(k and zeros[j] for j, k in enumerate(e))
               for i, e in ps.coprimality_clauses):
            continue
        if any(sum(1 for e in g.terms
                   if not any(k and zeros[i] for i, k in enumerate(e))) == 1
               for g in R.relations):
            continue
        out.append(tuple(zeros))
    return out


def fibre_points(ps, point, height=None, irrelevant=None):
    """
    Torsor points of height at most ``height`` over one surface point

    Parameters
    ----------
    ps: ParamScheme
    point: tuple of int
        canonical representative, as returned by :func:`surface_points`
    height: int
        coordinate bound, default from config
    irrelevant: list of exponent tuples, optional
        precomputed ``irrelevant_ideal(ps.presentation, ps.ample_degree)``

    Returns
    -------
    sorted list of the tuples :func:`param_enumerate` would return whose
    projection is ``point``

    The projection monomials equal ``lam * point`` for a nonzero integer
    ``lam``. When the nonzero coordinates bound ``lam`` by the square of the
    box size, each ``lam`` is tried and variables range over divisors;
    otherwise only the ratios of the monomials are used. Zero patterns are
    fixed first. The search then assigns the variable with the fewest
    candidates, solving every constraint left with a single unknown.
    """
    height = config.get('height', height)
    if height < 1:
        raise ValidationError('height must be at least 1, got %d' % height)
    R = ps.presentation
    n = R.nvars
    point = tuple(int(x) for x in point)
    if len(point) != len(ps.projection):
        raise ValidationError('point has %d coordinates, projection has %d'
                              % (len(point), len(ps.projection)))
    if not any(point):
        raise ParameterizationError('all projective coordinates vanish')
    if irrelevant is None:
        irrelevant = irrelevant_ideal(R, ps.ample_degree)
    patterns = _zero_patterns(ps, point, irrelevant)
    bound = min(height ** sum(ps.projection[k]) // abs(x)
                for k, x in enumerate(point) if x)
    if not patterns or bound == 0:
        return []
    if bound <= (2 * height + 1) ** 2:
        scales = [s * lam for lam in range(1, bound + 1) for s in (1, -1)]
    else:
        scales = [None]
    relation_vars = [{i for e in g.terms for i, k in enumerate(e) if k}
                     for g in R.relations]
    box = [x for x in range(-height, height + 1) if x]

    def candidates(t, v, constraints, scaled):
        cands = None
        for d, target in constraints:
            if not d[v]:
                continue
            known = _monomial_value(
                t, [0 if t[i] is None else k for i, k in enumerate(d)])
            if any(t[i] is None for i, k in enumerate(d) if k and i != v):
                if not scaled:
                    continue
                rest = target / known
                if rest.denominator != 1:
                    return []
                rest = abs(rest.numerator)
                sols = [s * r for r in divisors(rest) if r <= height
                        and rest % r ** d[v] == 0 for s in (1, -1)]
            else:
                sols = _exact_roots(target / known, d[v], height)
            cands = sols if cands is None else [x for x in cands if x in sols]
        for g, used in zip(R.relations, relation_vars):
            if v not in used or any(t[i] is None for i in used if i != v):
                continue
            roots = _integer_roots(
                _univariate(g, v, [0 if x is None else x for x in t]), height)
            if roots is not None:
                cands = roots if cands is None else [x for x in cands
                                                     if x in roots]
        cands = box if cands is None else [x for x in cands if x]
        # coprimality with the coordinates already fixed
        for i, e in ps.coprimality_clauses:
            if i == v:
                others = [t[j] for j, k in enumerate(e)
                          if k and t[j] is not None]
            elif e[v] and t[i] is not None:
                others = [t[i]]
            else:
                continue
            cands = [x for x in cands if all(gcd(x, y) == 1 for y in others)]
        return sorted(set(cands))

    def consistent(t, constraints):
        return all(_monomial_value(t, d) == target
                   for d, target in constraints
                   if all(t[i] is not None for i, k in enumerate(d) if k))

    def accept(t):
        if any(g.evaluate(t) for g in R.relations) or not _gcd_ok(ps, t):
            return False
        image = ps.project(t)
        return any(image) and primitive_representative(image) == point

    found = set()

    def search(t, constraints, scaled):
        unknown = [v for v in range(n) if t[v] is None]
        if not unknown:
            if accept(t):
                found.add(tuple(t))
            return
        best = None
        for v in unknown:
            cands = candidates(t, v, constraints, scaled)
            if not cands:
                return
            if best is None or len(cands) < len(best[1]):
                best = (v, cands)
        v, cands = best
        for x in cands:
            t[v] = x
            if consistent(t, constraints):
                search(t, constraints, scaled)
        t[v] = None

    for scale in scales:
        constraints = _scale_constraints(ps, point, scale)
        for zeros in patterns:
            search([0 if z else None for z in zeros], constraints,
                   scale is not None)
    logger.debug('%d torsor points of height <= %d over %s', len(found),
                 height, point)
    return sorted(found)


def surface_points(ps, height):
    """Primitive integer points of the surface equations, coordinates
    bounded by ``height``, as canonical representatives."""
    k = len(ps.projection)
    out = set()
    for point in itertools.product(range(-height, height + 1), repeat=k):
        if not any(point):
            continue
        rep = primitive_representative(point)
        if rep in out:
            continue
        if all(f.evaluate(rep) == 0 for f in ps.surface_equations):
            out.add(rep)
    return sorted(out)


@dataclass
class CoverageReport:
    surface_height: int
    param_height: int
    surface: list
    missing: list
    lifts: dict = field(default_factory=dict)

    @property
    def covered(self):
        return not self.missing


def coverage_check(ps, surface_height=1, param_height=None, exclude=None):
    """
    Surface points of small height with no torsor point above them

    Parameters
    ----------
    surface_height: int
    param_height: int
        default ``height_factor`` times ``surface_height``
    exclude: callable, optional
        predicate on surface points to leave out (points in the image of the
        irrelevant locus)

    Each surface point is lifted with :func:`fibre_points`, so the cost
    follows the number of surface points rather than the parameter box.
    """
    if param_height is None:
        param_height = config.get('height_factor') * surface_height
    surface = surface_points(ps, surface_height)
    if exclude is not None:
        surface = [p for p in surface if not exclude(p)]
    irrelevant = irrelevant_ideal(ps.presentation, ps.ample_degree)
    lifts = {p: fibre_points(ps, p, param_height, irrelevant)
             for p in surface}
    missing = [p for p in surface if not lifts[p]]
    logger.info('%d surface points, %d not reached at parameter height %d',
                len(surface), len(missing), param_height)
    return CoverageReport(surface_height, param_height, surface, missing,
                          lifts)


def irrelevant_strings(R, ideal):
    return [render_monomial(e, R.names) for e in ideal]

