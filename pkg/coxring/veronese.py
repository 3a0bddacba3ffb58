"""
Pullbacks of graded presentations along grading-group morphisms.

For an inclusion ``H -> G`` the pullback is the Veronese subalgebra: the
sum of the pieces of degree in ``H``. A general morphism factors through its
image, and the kernel contributes Laurent-type variables.
"""
import logging
from dataclasses import dataclass

from . import config
from .abgroup import GroupHom, Subgroup, hom_kernel, subgroup_membership
from .exceptions import UnboundedFiberError, ValidationError
from .lattice import (FiberMonoid, fiber_points, grlex_key, hilbert_basis,
                      module_generators, monoid_decompose)
from .linalg import Echelon
from .polyalg import (GradedPresentation, Polynomial, graded_piece,
                      homogeneous_degree, ideal_member, minimal_relations,
                      monomial_name, substitute)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PullbackResult:
    """
    A presentation of a pullback together with its map to the ambient ring

    Parameters
    ----------
    presentation: GradedPresentation
        new variables, degrees in the new grading group, relations
    generator_images: tuple of Polynomial
        image in ``ambient`` of each new variable, in variable order
    ambient: GradedPresentation
    degree_map: GroupHom
        from the new grading group to the ambient grading group
    degree_bound_used: int
        total degree up to which relations were certified
    """
    presentation: GradedPresentation
    generator_images: tuple
    ambient: GradedPresentation
    degree_map: GroupHom
    degree_bound_used: int

    @property
    def images(self):
        return dict(zip(self.presentation.names, self.generator_images))

    def image(self, f):
        """Image in the ambient ring of a polynomial in the new variables."""
        return substitute(f, list(self.generator_images)) \
            if self.generator_images else \
            Polynomial.constant(f.terms.get((), 0), self.ambient.nvars)


def identity_pullback(R, bound=None):
    return PullbackResult(R, tuple(R.gens()), R, GroupHom.identity(R.group),
                          config.get('bound', bound))


def _toric_binomials(basis, bound):
    """Binomials between generator monomials with the same image."""
    n = len(basis)
    by_image = {}

    def walk(i, e, remaining):
        if i == n:
            img = tuple(sum(k * b[j] for k, b in zip(e, basis))
                        for j in range(len(basis[0])))
            by_image.setdefault(img, []).append(tuple(e))
            return
        for k in range(remaining + 1):
            e.append(k)
            walk(i + 1, e, remaining - k)
            e.pop()

    walk(0, [], bound)
    out = []
    for img, group in by_image.items():
        if len(group) < 2:
            continue
        group.sort(key=grlex_key)
        first = Polynomial.monomial(group[0])
        for other in group[1:]:
            out.append(Polynomial.monomial(other) - first)
    return out


def _lift(fm, basis, f):
    """Rewrite a polynomial whose terms lie in the fiber monoid in terms of
    the basis variables."""
    n = len(basis)
    terms = {}
    for e, c in f.terms.items():
        idx = monoid_decompose(fm, basis, e)
        if idx is None:
            raise ValidationError('%s does not decompose over the Hilbert '
                                  'basis' % (e,))
        t = [0] * n
        for i in idx:
            t[i] += 1
        t = tuple(t)
        terms[t] = terms.get(t, 0) + c
    return Polynomial(n, terms)


def veronese_subalgebra(R, H, degree_bound=None, names=None, cap=None):
    """
    Veronese subalgebra of ``R`` at the subgroup generated by ``H``

    Parameters
    ----------
    R: GradedPresentation
    H: list of GroupElement of ``R.group``
    degree_bound: int
        total degree in the new variables up to which relations are
        certified, default from config
    names: list of str, optional
        names of the new variables; by default the monomial images, factors
        joined by underscores
    cap: int
        Hilbert basis completion safety cap

    Returns
    -------
    PullbackResult with degrees in coordinates of the subgroup
    """
    bound = config.get('bound', degree_bound)
    H = tuple(H)
    fm = FiberMonoid(R.degree_matrix, H)
    basis = hilbert_basis(fm, cap)
    sub = Subgroup(R.group, H)
    n = len(basis)
    if names is None:
        names = [monomial_name(b, R.names) for b in basis]
    elif len(names) != n:
        raise ValidationError('%d names given for %d generators'
                              % (len(names), n))
    degrees = [sub.coordinates(R.degree_of(b)) for b in basis]
    images = tuple(Polynomial.monomial(b) for b in basis)
    relations = []
    if n:
        candidates = _toric_binomials(basis, bound)
        for g in R.relations:
            delta = homogeneous_degree(R, g)
            for mu in module_generators(fm, -delta, cap):
                lifted = _lift(fm, basis, g * Polynomial.monomial(mu))
                if lifted.total_degree <= bound:
                    candidates.append(lifted)
        relations = minimal_relations(degrees, candidates, bound)
    presentation = GradedPresentation(tuple(names), tuple(degrees),
                                      tuple(relations), R.tower, sub.abstract)
    logger.info('Veronese subalgebra: %d generators, %d relations (bound %d)',
                n, len(relations), bound)
    return PullbackResult(presentation, images, R, sub.inclusion, bound)


def pullback_general(R, phi, degree_bound=None, names=None, cap=None):
    """
    Pullback of ``R`` along an arbitrary ``phi: M -> R.group``

    The Veronese subalgebra of the image supplies the generators, with
    degrees lifted to chosen preimages. Each free kernel generator
    contributes a pair ``u, v`` with ``u*v = 1`` and each torsion kernel
    generator of order ``t`` a ``u`` with ``u^t = 1``; their images are 1.
    """
    if phi.codomain != R.group:
        raise ValidationError('hom into %s, ring graded by %s'
                              % (phi.codomain, R.group))
    bound = config.get('bound', degree_bound)
    M = phi.domain
    image = [c for c in phi.columns() if not c.is_zero()]
    ver = veronese_subalgebra(R, image, bound, names, cap)
    vp = ver.presentation
    cols = phi.columns()
    degrees = []
    for d in vp.degrees:
        c = subgroup_membership(cols, ver.degree_map(d))
        degrees.append(M.element(c))
    K, inclusion = hom_kernel(phi)
    kernel_names, kernel_degrees, kernel_rel = [], [], []
    taken = set(vp.names)

    def fresh(base):
        k = 1
        while '%s%d' % (base, k) in taken:
            k += 1
        taken.add('%s%d' % (base, k))
        return '%s%d' % (base, k)

    for j in range(K.ngens):
        k = inclusion.column(j)
        if j < K.free_rank:
            kernel_names += [fresh('u'), fresh('v')]
            kernel_degrees += [k, -k]
        else:
            kernel_names.append(fresh('u'))
            kernel_degrees.append(k)
    nv = len(vp.names)
    ntot = nv + len(kernel_names)
    pos = 0
    for j in range(K.ngens):
        if j < K.free_rank:
            u = Polynomial.variable(nv + pos, ntot)
            v = Polynomial.variable(nv + pos + 1, ntot)
            kernel_rel.append(u * v - 1)
            pos += 2
        else:
            u = Polynomial.variable(nv + pos, ntot)
            kernel_rel.append(u ** K.torsion_orders[j - K.free_rank] - 1)
            pos += 1

    def correction(delta):
        """Monomial in the kernel variables of degree ``delta``."""
        c = subgroup_membership(inclusion.columns(), delta)
        if c is None:
            raise ValidationError('degree difference %s outside the kernel'
                                  % delta)
        e = [0] * ntot
        pos = 0
        for j in range(K.ngens):
            x = c[j]
            if j < K.free_rank:
                if x >= 0:
                    e[nv + pos] = x
                else:
                    e[nv + pos + 1] = -x
                pos += 2
            else:
                e[nv + pos] = x % K.torsion_orders[j - K.free_rank]
                pos += 1
        return tuple(e)

    relations = []
    for g in vp.relations:
        terms = {}
        lead = g.leading_monomial
        target = sum((k * d for k, d in zip(lead, degrees)), M.zero())
        for e, c in g.terms.items():
            de = sum((k * d for k, d in zip(e, degrees)), M.zero())
            fix = correction(target - de)
            new = tuple(list(e) + [0] * len(kernel_names))
            new = tuple(a + b for a, b in zip(new, fix))
            terms[new] = c
        relations.append(Polynomial(ntot, terms))
    relations += kernel_rel
    one = Polynomial.constant(1, R.nvars)
    presentation = GradedPresentation(
        tuple(vp.names) + tuple(kernel_names),
        tuple(degrees) + tuple(kernel_degrees), tuple(relations), R.tower, M)
    images = tuple(ver.generator_images) + (one,) * len(kernel_names)
    logger.info('pullback along %s -> %s: %d generators, kernel %s', M,
                R.group, ntot, K)
    return PullbackResult(presentation, images, R, phi, bound)


def _removal_order(pr):
    imgs = pr.generator_images

    def key(i):
        f = imgs[i]
        lead = f.leading_monomial
        return (-f.total_degree,
                tuple(-x for x in lead) if lead else (),
                i)
    return sorted(range(len(imgs)), key=key)


def _fiber(Q, d, bound):
    try:
        return fiber_points(Q, d)
    except UnboundedFiberError:
        return fiber_points(Q, d, cap=bound)


def removable_expression(R, k, bound):
    """
    Polynomial in the other variables equal to ``x_k`` modulo the relations,
    or None

    Monomials containing ``x_k`` are ordered above all others, so the
    remainder of ``x_k`` avoids ``x_k`` exactly when such an expression
    exists at its degree.
    """
    d = R.degrees[k]
    Q = R.degree_matrix

    def key(e):
        return int(e[k] > 0), grlex_key(e)

    ech = Echelon()
    for g in R.relations:
        dg = homogeneous_degree(R, g)
        for mu in _fiber(Q, d - dg, bound):
            ech.add({key(tuple(a + b for a, b in zip(e, mu))): c
                     for e, c in g.terms.items()})
    xk = tuple(int(i == k) for i in range(R.nvars))
    rest = ech.reduce({key(xk): 1})
    if any(kk[0] for kk in rest):
        return None
    return Polynomial(R.nvars, {kk[1][1]: c for kk, c in rest.items()})


def minimize_generators(pr, degree_bound=None):
    """
    Remove generators that are polynomials in the others

    Candidates are tried by largest image total degree, then largest leading
    monomial of the image, then variable order; after each removal the
    search restarts. The removed variable is substituted away in the
    relations.
    """
    bound = degree_bound if degree_bound is not None else \
        pr.degree_bound_used
    while True:
        R = pr.presentation
        for k in _removal_order(pr):
            p = removable_expression(R, k, bound)
            if p is not None:
                pr = _drop_generator(pr, k, p, bound)
                logger.info('removed generator %s', R.names[k])
                break
        else:
            return pr


def _drop_generator(pr, k, p, bound):
    R = pr.presentation
    n = R.nvars
    keep = [i for i in range(n) if i != k]
    images = [Polynomial.variable(i, n) for i in range(n)]
    images[k] = p
    relations = []
    for g in R.relations:
        h = substitute(g, images)
        if h.terms:
            relations.append(Polynomial(n - 1, {
                tuple(e[i] for i in keep): c for e, c in h.terms.items()}))
    degrees = tuple(R.degrees[i] for i in keep)
    relations = minimal_relations(degrees, relations, bound) \
        if degrees else []
    presentation = GradedPresentation(
        tuple(R.names[i] for i in keep), degrees, tuple(relations), R.tower,
        R.group)
    return PullbackResult(presentation,
                          tuple(pr.generator_images[i] for i in keep),
                          pr.ambient, pr.degree_map, pr.degree_bound_used)


def composed_images(pr):
    """Generator images as rendered strings in the ambient variables."""
    return {name: img.render(pr.ambient.names)
            for name, img in pr.images.items()}


def dimension_check(pr, degrees, cap=None):
    """
    Compare graded pieces of the pullback with those of the ambient ring

    Returns
    -------
    list of (degree, pullback dimension, ambient dimension) where they
    differ
    """
    bad = []
    for d in degrees:
        _, mine = graded_piece(pr.presentation, d, cap)
        _, theirs = graded_piece(pr.ambient, pr.degree_map(d), cap)
        if mine != theirs:
            bad.append((d, mine, theirs))
    return bad


def compose(outer, inner):
    """
    Pullback of a pullback, with images in the innermost ambient ring

    ``outer.ambient`` must be ``inner.presentation``.
    """
    if outer.ambient != inner.presentation:
        raise ValidationError('the outer pullback is not taken of the inner '
                              'presentation')
    images = tuple(inner.image(f) for f in outer.generator_images)
    if outer.degree_map is None or inner.degree_map is None:
        degree_map = None
    else:
        degree_map = inner.degree_map.compose(outer.degree_map)
    return PullbackResult(outer.presentation, images, inner.ambient,
                          degree_map, outer.degree_bound_used)


def check_relations(pr, cap=None):
    """
    Verify that every relation of a pullback maps into the ambient ideal

    Returns
    -------
    list of (relation string, member) pairs
    """
    out = []
    for g in pr.presentation.relations:
        image = pr.image(g)
        if not image.terms:
            out.append((g.render(pr.presentation.names), True))
            continue
        if homogeneous_degree(pr.ambient, image) is None:
            out.append((g.render(pr.presentation.names), False))
            continue
        member = ideal_member(pr.ambient, image, cap).member
        out.append((g.render(pr.presentation.names), member))
    return out
