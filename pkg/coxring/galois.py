"""
Finite semilinear actions on graded presentations and Galois descent.

A group element acts by ``x_i -> c_i * x_{p(i)}`` on variables, by a field
automorphism (a set of tower conjugations) on coefficients and by an
automorphism of the grading group on degrees.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import config
from .abgroup import (AbelianGroup, GroupHom, induced_automorphism, quotient,
                      subgroup_membership)
from .exceptions import (CocycleError, HomogeneityError, ValidationError)
from .linalg import Echelon, invert
from .numfield import (FieldTower, conjugate, from_pairs, level_of,
                       sum_of_two_squares, to_pairs)
from .polyalg import (GradedPresentation, Polynomial, discover_relations,
                      graded_piece, ideal_member, regrade, substitute)
from .veronese import PullbackResult, identity_pullback

logger = logging.getLogger(__name__)

_RENAME = ('s', 't', 'u', 'w')


@dataclass(frozen=True)
class SemilinearMap:
    """
    One group element: ``x_i -> scalars[i] * x_{permutation[i]}``

    ``levels`` is the set of tower levels conjugated on coefficients and
    ``grading`` the induced automorphism of the grading group.
    """
    permutation: tuple
    scalars: tuple
    levels: frozenset
    grading: GroupHom

    def __post_init__(self):
        object.__setattr__(self, 'permutation', tuple(self.permutation))
        object.__setattr__(self, 'scalars', tuple(self.scalars))
        object.__setattr__(self, 'levels', frozenset(self.levels))
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValidationError('not a permutation: %s'
                                  % (self.permutation,))
        if len(self.scalars) != len(self.permutation):
            raise ValidationError('%d scalars for %d variables'
                                  % (len(self.scalars),
                                     len(self.permutation)))
        if any(not c for c in self.scalars):
            raise ValidationError('scalar multipliers must be nonzero')

    @classmethod
    def identity(cls, nvars, group):
        return cls(tuple(range(nvars)), (Fraction(1),) * nvars, frozenset(),
                   GroupHom.identity(group))

    def field(self, c):
        for level in sorted(self.levels):
            c = conjugate(c, level)
        return c

    def apply(self, f):
        """Image of a polynomial."""
        n = len(self.permutation)
        terms = {}
        for e, c in f.terms.items():
            coef = self.field(c)
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    coef = coef * self.scalars[i] ** k
                    new[self.permutation[i]] += k
            terms[tuple(new)] = coef
        return Polynomial(n, terms)

    def compose(self, other):
        """``self`` after ``other``."""
        p = tuple(self.permutation[other.permutation[i]]
                  for i in range(len(self.permutation)))
        c = tuple(self.field(other.scalars[i]) *
                  self.scalars[other.permutation[i]]
                  for i in range(len(self.permutation)))
        return SemilinearMap(p, c, self.levels ^ other.levels,
                             self.grading.compose(other.grading))

    def power(self, k):
        out = SemilinearMap.identity(len(self.permutation),
                                     self.grading.domain)
        for _ in range(k):
            out = self.compose(out)
        return out

    def is_identity(self):
        return (self.permutation == tuple(range(len(self.permutation))) and
                all(c == 1 for c in self.scalars) and not self.levels and
                self.grading == GroupHom.identity(self.grading.domain))


@dataclass(frozen=True)
class SemilinearAction:
    """
    Action of a finite abelian group given by generators

    Parameters
    ----------
    group: AbelianGroup
        finite, so all of its coordinates are torsion
    generators: tuple of SemilinearMap
        one per generator of ``group``
    degrees: tuple of GroupElement
        degrees of the variables acted on
    """
    group: AbelianGroup
    generators: tuple
    degrees: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))
        object.__setattr__(self, 'degrees', tuple(self.degrees))
        if self.group.free_rank:
            raise ValidationError('acting group must be finite, got %s'
                                  % self.group)
        if len(self.generators) != self.group.ngens:
            raise ValidationError('%d generator maps for %s'
                                  % (len(self.generators), self.group))

    @property
    def order(self):
        out = 1
        for t in self.group.torsion_orders:
            out *= t
        return out

    @property
    def nvars(self):
        return len(self.generators[0].permutation) if self.generators \
            else len(self.degrees)

    def element(self, coords):
        g = SemilinearMap.identity(self.nvars, self._grading_group())
        for gen, k in zip(self.generators, coords):
            g = gen.power(k).compose(g)
        return g

    def _grading_group(self):
        if self.generators:
            return self.generators[0].grading.domain
        return self.degrees[0].parent

    def elements(self):
        ranges = [range(t) for t in self.group.torsion_orders]
        return [self.element(c) for c in itertools.product(*ranges)]

    def conjugated_levels(self):
        out = set()
        for g in self.generators:
            out |= g.levels
        return out


def action_from_permutation(R, group, permutations, scalars=None,
                            levels=None, gradings=None):
    """
    Build an action on ``R`` from per-generator variable maps

    Parameters
    ----------
    R: GradedPresentation
    group: AbelianGroup
    permutations: list of dict or sequence
        per generator, image variable of each variable (by name or index);
        variables not mentioned are fixed
    scalars: list of dict, optional
        per generator, multiplier of each variable (default 1)
    levels: list of sets, optional
        per generator, tower levels conjugated
    gradings: list of GroupHom, optional
        per generator; inferred from the variable degrees when omitted
    """
    n = R.nvars
    maps = []
    for k, perm in enumerate(permutations):
        p = list(range(n))
        items = perm.items() if isinstance(perm, dict) else enumerate(perm)
        for src, dst in items:
            i = R.index(src) if isinstance(src, str) else src
            j = R.index(dst) if isinstance(dst, str) else dst
            p[i] = j
        c = [Fraction(1)] * n
        if scalars and scalars[k]:
            for src, value in scalars[k].items():
                c[R.index(src) if isinstance(src, str) else src] = value
        lv = frozenset(levels[k]) if levels and levels[k] else frozenset()
        if gradings and gradings[k] is not None:
            A = gradings[k]
        else:
            A = induced_automorphism(R.group, list(R.degrees),
                                     [R.degrees[p[i]] for i in range(n)],
                                     check=False)
        maps.append(SemilinearMap(tuple(p), tuple(c), lv, A))
    return SemilinearAction(group, tuple(maps), R.degrees)


@dataclass
class Check:
    name: str
    generator: int
    passed: bool
    witness: str = ''


@dataclass
class ActionReport:
    """Outcome of :func:`check_action`, one entry per invariant and
    generator."""
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def records(self):
        return [{'check': c.name, 'generator': c.generator,
                 'passed': c.passed, 'witness': c.witness}
                for c in self.checks]


def check_action(R, a, cap=None):
    """
    Verify the invariants of a semilinear action on ``R``

    Never raises on a failed invariant: each failure is reported with a
    counterexample.
    """
    report = ActionReport()
    if a.nvars != R.nvars:
        report.checks.append(Check('variables', -1, False,
                                   '%d variables acted on, ring has %d'
                                   % (a.nvars, R.nvars)))
        return report
    for k, g in enumerate(a.generators):
        witness = ''
        for i in range(R.nvars):
            expected = g.grading(R.degrees[i])
            actual = R.degrees[g.permutation[i]]
            if expected != actual:
                target = R.names[g.permutation[i]]
                witness = ('%s -> %s: degree %s maps to %s, but %s has '
                           'degree %s' % (R.names[i], target, R.degrees[i],
                                          expected, target, actual))
                break
        report.checks.append(Check('degree', k, not witness, witness))

        t = a.group.torsion_orders[k]
        power = g.power(t)
        report.checks.append(Check(
            'order', k, power.is_identity(),
            '' if power.is_identity() else
            'generator %d to the power %d is not the identity' % (k, t)))

        witness = ''
        for j, rel in enumerate(R.relations):
            image = g.apply(rel)
            try:
                member = ideal_member(R, image, cap).member
            except HomogeneityError as e:
                member = False
                witness = 'image of relation %d is not homogeneous: %s' % (
                    j, e)
                break
            if not member:
                witness = 'image of relation %d is %s' % (
                    j, image.render(R.names))
                break
        report.checks.append(Check('relations', k, not witness, witness))

        for k2 in range(k + 1, len(a.generators)):
            h = a.generators[k2]
            ok = g.compose(h) == h.compose(g)
            report.checks.append(Check(
                'commute', k, ok,
                '' if ok else 'generators %d and %d do not commute' % (k, k2)))
    logger.info('action check: %d/%d passed',
                sum(c.passed for c in report.checks), len(report.checks))
    return report


def _coinvariants(G, action):
    moved = []
    for g in action.generators:
        for e in G.basis():
            d = g.grading(e) - e
            if not d.is_zero():
                moved.append(d)
    if not moved:
        return G, GroupHom.identity(G)
    return quotient(G, moved)


def _restrict(f, tower):
    """Move coefficients into the subfield ``tower`` of their own tower."""
    if any(level_of(c) > tower.depth for c in f.terms.values()):
        return None
    return f.map_coefficients(
        lambda c: from_pairs(to_pairs(c), tower) if level_of(c) else c)


def _fixed_tower(tower, levels):
    if not levels:
        return tower
    low = min(levels)
    if set(range(low, tower.depth + 1)) != set(levels):
        raise ValidationError('conjugated levels %s must be the top levels of '
                              'the tower' % sorted(levels))
    return FieldTower(tower.radicands[:low - 1])


def _trace_scalars(tower, levels):
    """Fixed-field basis of the conjugated part, as inverse roots."""
    roots = [tower.root(level) for level in sorted(levels)]
    out = []
    for r in range(len(roots) + 1):
        for combo in itertools.combinations(roots, r):
            mu = Fraction(1)
            for x in combo:
                mu = mu * x
            out.append(1 / mu)
    return out


def _orbits(action, n):
    seen = set()
    elements = action.elements()
    out = []
    for v in range(n):
        if v in seen:
            continue
        orbit = sorted({g.permutation[v] for g in elements})
        seen.update(orbit)
        out.append(orbit)
    return out, elements


def _reynolds(elements, f):
    total = Polynomial(f.nvars)
    for g in elements:
        total = total + g.apply(f)
    return total * Fraction(1, len(elements))


def invariant_ring(pr, a, degree_bound=None, cap=None):
    """
    Descend a presentation over the tower to the fixed field

    Parameters
    ----------
    pr: PullbackResult or GradedPresentation
        presentation over the tower
    a: SemilinearAction
        on the variables of that presentation
    degree_bound: int
        used when relations have to be discovered

    Returns
    -------
    PullbackResult whose ambient ring is the presentation descended from and
    whose generator images are fixed by the action. The new grading group is
    the coinvariant group of the action on degrees; ``degree_map`` is the
    identity when the action fixes all degrees and None otherwise.
    """
    if isinstance(pr, GradedPresentation):
        pr = identity_pullback(pr, degree_bound)
    bound = config.get('bound', degree_bound)
    R = pr.presentation
    n = R.nvars
    if a.nvars != n:
        raise ValidationError('action on %d variables, presentation has %d'
                              % (a.nvars, n))
    Gq, proj = _coinvariants(R.group, a)
    levels = a.conjugated_levels()
    fixed = _fixed_tower(R.tower, levels)
    mus = _trace_scalars(R.tower, levels)
    orbits, elements = _orbits(a, n)
    names, images, degrees = [], [], []
    linear = True
    change = {}
    for orbit in orbits:
        v = orbit[0]
        ech = Echelon()
        found = []
        for mu in mus:
            inv = _reynolds(elements, Polynomial.variable(v, n) * mu)
            vec = {e.index(1): c for e, c in inv.terms.items()}
            if inv.terms and ech.add(vec) is not None:
                found.append(inv)
            if len(found) == len(orbit):
                break
        if len(found) < len(orbit):
            linear = False
            found.append(_reynolds(elements, Polynomial.variable(v, n) *
                                   Polynomial.variable(a.generators[0]
                                                       .permutation[v], n)))
        for k, f in enumerate(found):
            if len(orbit) == 1 and f == Polynomial.variable(v, n):
                names.append(R.names[v])
            else:
                names.append('%s_%s' % (_RENAME[k % len(_RENAME)], R.names[v]))
            images.append(f)
            degrees.append(proj(R.degrees[v]) * f.total_degree)
        change[tuple(orbit)] = found
    m = len(names)
    if linear:
        relations = _rewrite_relations(R, a, orbits, change, names)
    else:
        gens = list(zip(names, images, degrees))
        ambient = R if Gq == R.group else regrade(R, proj)
        relations = discover_relations(ambient, gens, bound, cap=cap)
    restricted = []
    for f in relations:
        g = _restrict(f, fixed)
        if g is None:
            raise ValidationError('descended relation %s is not defined over '
                                  'the fixed field' % f.render(names))
        restricted.append(g)
    presentation = GradedPresentation(tuple(names), tuple(degrees),
                                      tuple(restricted), fixed, Gq)
    degree_map = GroupHom.identity(R.group) \
        if proj == GroupHom.identity(R.group) else None
    logger.info('descended %d generators to %d over %s, %d relations', n, m,
                fixed, len(relations))
    return PullbackResult(presentation, tuple(images), R, degree_map, bound)


def _rewrite_relations(R, a, orbits, change, names):
    """Relations of ``R`` in the invariant coordinates.

    Orbit by orbit the invariants are an invertible linear change of the
    orbit variables. A relation with irrational coefficients after the change
    is replaced by the reduced echelon basis of its Galois conjugates.
    Rational results are kept as they are, up to dropping zero relations and
    repeated scalar multiples, so the descended relations correspond to the
    original ones.
    """
    n = R.nvars
    m = len(names)
    back = [None] * n
    col = 0
    for orbit in orbits:
        found = change[tuple(orbit)]
        # rows: invariants, columns: orbit variables
        mat = [[f.terms.get(tuple(int(j == w) for j in range(n)), 0)
                for w in orbit] for f in found]
        inv = invert(mat)
        for a_idx, w in enumerate(orbit):
            expr = Polynomial(m)
            for k in range(len(found)):
                coef = inv[a_idx][k]
                if coef:
                    expr = expr + Polynomial.variable(col + k, m) * coef
            back[w] = expr
        col += len(found)
    fields = {frozenset(g.levels) for g in a.elements()}
    out = []
    seen = set()

    def keep(f):
        key = f.normalized()
        if f.terms and key not in seen:
            seen.add(key)
            out.append(f)

    for rel in R.relations:
        f = substitute(rel, back)
        if f.is_rational():
            keep(f)
            continue
        ech = Echelon()
        for levels in sorted(fields, key=sorted):
            conj = f
            for level in sorted(levels):
                conj = conj.map_coefficients(
                    lambda c, level=level: conjugate(c, level))
            ech.add({(sum(e), e): c for e, c in conj.terms.items()})
        for row in ech.basis():
            keep(Polynomial(m, {k[1]: c for k, c in row.items()}))
    return out


def induce_action(pr, a):
    """
    Action on a pullback presentation induced from an action on its ambient

    Each generator image must be sent to a scalar multiple of another
    generator image.
    """
    R = pr.presentation
    images = pr.generator_images
    if pr.degree_map is None:
        raise ValidationError('pullback without a degree map')
    incl = pr.degree_map.columns()
    maps = []
    for g in a.generators:
        perm, scalars = [], []
        for own, img in enumerate(images):
            moved = g.apply(img)
            if moved == img and img.total_degree == 0:
                perm.append(own)
                scalars.append(Fraction(1))
                continue
            for j, other in enumerate(images):
                if moved.leading_monomial != other.leading_monomial:
                    continue
                c = moved.leading_coefficient / other.leading_coefficient
                if moved == other * c:
                    perm.append(j)
                    scalars.append(c)
                    break
            else:
                raise ValidationError('image %s is not sent to a multiple of '
                                      'a generator'
                                      % img.render(pr.ambient.names))
        columns = []
        for e in R.group.basis():
            c = subgroup_membership(incl, g.grading(pr.degree_map(e)))
            if c is None:
                raise ValidationError('the action does not preserve the '
                                      'pullback degrees')
            columns.append(R.group.element(c).coords)
        A = GroupHom.from_columns(R.group, R.group, columns)
        maps.append(SemilinearMap(tuple(perm), tuple(scalars), g.levels, A))
    return SemilinearAction(a.group, tuple(maps), R.degrees)


@dataclass(frozen=True)
class Cocycle:
    """
    Per group generator, a character of the grading group

    ``values[k][j]`` is the value of the character of generator ``k`` on
    basis element ``j`` of the grading group.
    """
    group: AbelianGroup
    grading: AbelianGroup
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, 'values',
                           tuple(tuple(v) for v in self.values))
        if len(self.values) != self.group.ngens or any(
                len(v) != self.grading.ngens for v in self.values):
            raise ValidationError('cocycle needs %d x %d values'
                                  % (self.group.ngens, self.grading.ngens))
        for row in self.values:
            for k, t in enumerate(self.grading.torsion_orders):
                if row[self.grading.free_rank + k] ** t != 1:
                    raise ValidationError('value on a torsion generator of '
                                          'order %d must be a root of unity'
                                          % t)

    @classmethod
    def trivial(cls, group, grading):
        return cls(group, grading,
                   [[Fraction(1)] * grading.ngens] * group.ngens)

    def __call__(self, k, m):
        out = Fraction(1)
        for v, x in zip(self.values[k], m.coords):
            if x:
                out = out * v ** x
        return out

    def inverse(self):
        return Cocycle(self.group, self.grading,
                       [[1 / v for v in row] for row in self.values])


def twist_action(a, sigma):
    """
    Twist an action by a cocycle

    The multiplier of ``x_i`` under generator ``g`` is multiplied by
    ``sigma_g(deg x_i)``. A CocycleError is raised when the twisted maps
    no longer satisfy the relations of the group.
    """
    twisted = _twist(a, sigma)
    problems = verify_cocycle(twisted)
    if problems:
        raise CocycleError('; '.join(problems))
    logger.info('twisted an action of %s by a cocycle on %s', a.group,
                sigma.grading)
    return twisted


def _twist(a, sigma):
    if sigma.group != a.group:
        raise ValidationError('cocycle over %s, action of %s'
                              % (sigma.group, a.group))
    if a.degrees and a.degrees[0].parent != sigma.grading:
        raise ValidationError('cocycle on %s, variables graded by %s'
                              % (sigma.grading, a.degrees[0].parent))
    maps = []
    for k, g in enumerate(a.generators):
        scalars = tuple(c * sigma(k, a.degrees[i])
                        for i, c in enumerate(g.scalars))
        maps.append(SemilinearMap(g.permutation, scalars, g.levels,
                                  g.grading))
    return SemilinearAction(a.group, tuple(maps), a.degrees)


def verify_cocycle(a, sigma=None):
    """
    Problems with the cocycle condition, empty when it holds

    The condition is checked on the twisted generators: each must still have
    its order and any two must commute.
    """
    if sigma is not None:
        a = _twist(a, sigma)
    problems = []
    for k, g in enumerate(a.generators):
        t = a.group.torsion_orders[k]
        if not g.power(t).is_identity():
            problems.append('generator %d to the power %d is not the '
                            'identity' % (k, t))
        for k2 in range(k + 1, len(a.generators)):
            h = a.generators[k2]
            if g.compose(h) != h.compose(g):
                problems.append('generators %d and %d do not commute'
                                % (k, k2))
    return problems


def cocycle_from_n(n, R, plus, minus, group=None, level=1):
    """
    Cocycle twisting a Chatelet-type Cox ring by four nonzero rationals

    Parameters
    ----------
    n: sequence of 4 rationals, all nonzero
    R: GradedPresentation
        ring whose variables include the divisors named in ``plus`` and
        ``minus`` (indices 0 to 4)
    plus, minus: sequences of 5 variable names
    group: AbelianGroup
        acting group, default Z/2
    level: int
        tower level of ``i``

    Returns
    -------
    Cocycle, or None when ``n_1 n_2 n_3 n_4`` is not a sum of two squares.
    The character sends ``L+_0`` to ``alpha + i beta``, ``L-_0`` to its
    conjugate inverse, ``L+_j`` to ``1/n_j`` and ``L-_j`` to ``n_j``.
    """
    n = [Fraction(x) for x in n]
    if len(n) != 4:
        raise ValidationError('expected four values, got %d' % len(n))
    if any(x == 0 for x in n):
        raise ValidationError('values must be nonzero')
    if len(plus) != 5 or len(minus) != 5:
        raise ValidationError('expected five plus and five minus divisors')
    group = group or AbelianGroup(0, (2,))
    product = n[0] * n[1] * n[2] * n[3]
    squares = sum_of_two_squares(product)
    if squares is None:
        logger.info('%s is not a sum of two squares; no cocycle', product)
        return None
    alpha, beta = squares
    i = R.tower.root(level)
    values = {plus[0]: alpha + i * beta, minus[0]: 1 / (alpha - i * beta)}
    for j in range(1, 5):
        values[plus[j]] = 1 / n[j - 1]
        values[minus[j]] = n[j - 1]
    sources = [R.degrees[R.index(name)] for name in values]
    G = R.group
    row = []
    for e in G.basis():
        c = subgroup_membership(sources, e)
        if c is None:
            raise ValidationError('the divisors do not generate %s' % G)
        v = Fraction(1)
        for k, x in zip(c, values.values()):
            if k:
                v = v * x ** k
        row.append(v)
    sigma = Cocycle(group, G, [row] + [[Fraction(1)] * G.ngens] *
                    (group.ngens - 1))
    for name, value in values.items():
        if sigma(0, R.degrees[R.index(name)]) != value:
            raise CocycleError('values on the divisors are inconsistent at '
                               '%s' % name)
    return sigma


def descent_dimension_check(R, descended, degrees, cap=None):
    """
    Compare dimensions over the fixed field with those over the tower

    Parameters
    ----------
    R: GradedPresentation
        the presentation over the tower
    descended: PullbackResult
        from :func:`invariant_ring` applied to ``R``
    degrees: list of GroupElement of the descended grading group

    Returns
    -------
    list of (degree, descended dimension, original dimension) that differ
    """
    Gq = descended.presentation.group
    if Gq == R.group:
        regraded = R
    else:
        projection = _coinvariant_projection(R, descended)
        regraded = regrade(R, projection)
    bad = []
    for d in degrees:
        _, mine = graded_piece(descended.presentation, d, cap)
        _, theirs = graded_piece(regraded, d, cap)
        if mine != theirs:
            bad.append((d, mine, theirs))
    return bad


def _coinvariant_projection(R, descended):
    """Projection from ``R.group`` onto the descended grading group,
    recovered from the generator degrees."""
    P = descended.presentation
    moved = []
    for i, img in enumerate(descended.generator_images):
        for e in img.terms:
            w = e.index(1) if sum(e) == 1 else None
            if w is not None:
                moved.append((R.degrees[w], P.degrees[i]))
    G = R.group
    cols = []
    for b in G.basis():
        c = subgroup_membership([m[0] for m in moved], b)
        if c is None:
            raise ValidationError('cannot recover the coinvariant projection')
        image = P.group.zero()
        for k, (_, t) in zip(c, moved):
            image = image + k * t
        cols.append(image.coords)
    return GroupHom.from_columns(G, P.group, cols)


def is_fixed(a, f):
    """True when every group element sends ``f`` to itself."""
    return all(g.apply(f) == f for g in a.elements())
