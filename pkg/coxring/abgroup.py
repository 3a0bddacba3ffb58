"""
Finitely generated abelian groups, their elements and homomorphisms.

A group is ``Z^r + Z/t_1 + ... + Z/t_s`` with the free coordinates first.
Every kernel, image, quotient and membership question is answered with a
Smith normal form over Python integers (numpy object arrays), so nothing
ever overflows.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbelianGroup:
    """Grading group ``Z^free_rank + sum(Z/t for t in torsion_orders)``."""
    free_rank: int
    torsion_orders: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'torsion_orders',
                           tuple(int(t) for t in self.torsion_orders))
        if self.free_rank < 0:
            raise ValidationError('free rank must be nonnegative')
        if any(t < 2 for t in self.torsion_orders):
            raise ValidationError('torsion orders must be at least 2, got %s'
                                  % (self.torsion_orders,))

    @property
    def ngens(self):
        return self.free_rank + len(self.torsion_orders)

    def reduce(self, coords):
        coords = [int(c) for c in coords]
        if len(coords) != self.ngens:
            raise ValidationError('expected %d coordinates for %s, got %d'
                                  % (self.ngens, self, len(coords)))
        for k, t in enumerate(self.torsion_orders):
            coords[self.free_rank + k] %= t
        return tuple(coords)

    def element(self, coords):
        return GroupElement(self, tuple(coords))

    def zero(self):
        return GroupElement(self, (0,) * self.ngens)

    def basis(self):
        out = []
        for i in range(self.ngens):
            coords = [0] * self.ngens
            coords[i] = 1
            out.append(GroupElement(self, tuple(coords)))
        return out

    def relation_matrix(self):
        """Columns ``t_k e_k`` presenting the group as a quotient of Z^n."""
        n = self.ngens
        rel = np.zeros((n, len(self.torsion_orders)), dtype=object)
        for k, t in enumerate(self.torsion_orders):
            rel[self.free_rank + k, k] = t
        return rel

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append('Z^%d' % self.free_rank)
        parts.extend('Z/%d' % t for t in self.torsion_orders)
        return ' + '.join(parts) or '0'


def free_group(n):
    return AbelianGroup(n)


@dataclass(frozen=True)
class GroupElement:
    """Element of an :class:`AbelianGroup`; torsion coordinates reduced."""
    parent: AbelianGroup
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, 'coords', self.parent.reduce(self.coords))

    def _check(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.parent != self.parent:
            raise ValidationError('elements of %s and %s cannot be combined'
                                  % (self.parent, other.parent))
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return GroupElement(self.parent, tuple(
            a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return GroupElement(self.parent, tuple(
            a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return GroupElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, k):
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return GroupElement(self.parent, tuple(int(k) * a
                                               for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coords)

    @property
    def free(self):
        return self.coords[:self.parent.free_rank]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __str__(self):
        return '(%s)' % ','.join(str(c) for c in self.coords)


def _as_matrix(rows, nrows, ncols):
    m = np.zeros((nrows, ncols), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            m[i, j] = int(v)
    return m


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by an integer matrix whose columns are the images
    of the domain generators."""
    domain: AbelianGroup
    codomain: AbelianGroup
    matrix: tuple = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.matrix)
        if not rows and self.codomain.ngens:
            rows = tuple((0,) * self.domain.ngens
                         for _ in range(self.codomain.ngens))
        if len(rows) != self.codomain.ngens or any(
                len(r) != self.domain.ngens for r in rows):
            raise ValidationError(
                'matrix of a hom %s -> %s must be %dx%d'
                % (self.domain, self.codomain, self.codomain.ngens,
                   self.domain.ngens))
        # reduce torsion rows so equal homs compare equal
        rows = list(rows)
        for k, t in enumerate(self.codomain.torsion_orders):
            i = self.codomain.free_rank + k
            rows[i] = tuple(v % t for v in rows[i])
        object.__setattr__(self, 'matrix', tuple(rows))
        for k, t in enumerate(self.domain.torsion_orders):
            j = self.domain.free_rank + k
            if not (t * self.column(j)).is_zero():
                raise ValidationError(
                    'generator %d of order %d must map to an element killed '
                    'by %d' % (j, t, t))

    @classmethod
    def from_columns(cls, domain, codomain, columns):
        columns = [tuple(c) for c in columns]
        rows = tuple(tuple(col[i] for col in columns)
                     for i in range(codomain.ngens))
        return cls(domain, codomain, rows)

    @classmethod
    def identity(cls, group):
        return cls.from_columns(group, group,
                                [e.coords for e in group.basis()])

    @property
    def array(self):
        return _as_matrix(self.matrix, self.codomain.ngens, self.domain.ngens)

    def column(self, j):
        return GroupElement(self.codomain,
                            tuple(row[j] for row in self.matrix))

    def columns(self):
        return [self.column(j) for j in range(self.domain.ngens)]

    def __call__(self, x):
        if isinstance(x, GroupElement):
            if x.parent != self.domain:
                raise ValidationError('element of %s is not in the domain %s'
                                      % (x.parent, self.domain))
            x = x.coords
        x = tuple(int(v) for v in x)
        return GroupElement(self.codomain, tuple(
            sum(a * b for a, b in zip(row, x)) for row in self.matrix))

    def compose(self, other):
        """``self`` after ``other``."""
        if other.codomain != self.domain:
            raise ValidationError('cannot compose %s -> %s after %s -> %s'
                                  % (self.domain, self.codomain,
                                     other.domain, other.codomain))
        return GroupHom.from_columns(other.domain, self.codomain,
                                     [self(c).coords for c in other.columns()])


def _exgcd(a, b):
    """2x2 integer matrix ``M`` of determinant 1 with ``M @ [a, b] = [g, 0]``.

    If ``a`` divides ``b`` the first row is ``[1, 0]`` up to sign.
    """
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign
    M = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]
    g = M[0, 0]
    M = M[:, 1:].copy()
    M[:, 0] *= a_sign
    M[:, 1] *= b_sign
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def _inv2(M):
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]],
                    dtype=object) * det


def _snf(A):
    """Smith form with inverses ``(U, D, V, Uinv, Vinv)``, ``U A V = D``."""
    D = np.array(A, dtype=object).reshape(np.shape(A))
    m, n = D.shape
    U, V = np.eye(m, dtype=object), np.eye(n, dtype=object)
    Uinv, Vinv = U.copy(), V.copy()

    def row_op(E, i, j):
        D[[i, j]] = E.dot(D[[i, j]])
        U[[i, j]] = E.dot(U[[i, j]])
        Uinv[:, [i, j]] = Uinv[:, [i, j]].dot(_inv2(E))

    def col_op(E, i, j):
        D[:, [i, j]] = D[:, [i, j]].dot(E)
        V[:, [i, j]] = V[:, [i, j]].dot(E)
        Vinv[[i, j]] = _inv2(E).dot(Vinv[[i, j]])

    swap = np.array([[0, 1], [1, 0]], dtype=object)
    for t in range(min(m, n)):
        sub = D[t:, t:]
        nonzero = [(abs(sub[i, j]), i, j) for i in range(sub.shape[0])
                   for j in range(sub.shape[1]) if sub[i, j] != 0]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        if i:
            row_op(swap, t, t + i)
        if j:
            col_op(swap, t, t + j)
        while True:
            for i in range(t + 1, m):
                if D[i, t] != 0:
                    row_op(_exgcd(D[t, t], D[i, t]), t, i)
            for j in range(t + 1, n):
                if D[t, j] != 0:
                    col_op(_exgcd(D[t, t], D[t, j]).T, t, j)
            if any(D[i, t] != 0 for i in range(t + 1, m)):
                continue
            p = D[t, t]
            bad = [i for i in range(t + 1, m)
                   if any(D[i, j] % p for j in range(t + 1, n))]
            if not bad:
                break
            # pull a non-divisible row up; the next pass shrinks the pivot
            row_op(np.array([[1, 1], [0, 1]], dtype=object), t, bad[0])
        if D[t, t] < 0:
            D[t] *= -1
            U[t] *= -1
            Uinv[:, t] *= -1
    return U, D, V, Uinv, Vinv


def smith_normal_form(M):
    """
    Smith normal form of an integer matrix

    Parameters
    ----------
    M: array-like of int, shape (m, n)

    Returns
    -------
    U, S, V: numpy object arrays with ``U @ M @ V == S``; ``U`` and ``V`` are
        unimodular and ``S`` is diagonal, each diagonal entry dividing the
        next
    """
    M = np.array(M, dtype=object)
    if M.ndim != 2:
        raise ValidationError('expected a matrix, got shape %s' % (M.shape,))
    U, S, V, _, _ = _snf(M)
    return U, S, V


def _diagonal(D):
    return [D[i, i] for i in range(min(D.shape))]


def _rank(D):
    return sum(1 for d in _diagonal(D) if d != 0)


def _lattice_quotient(gens, rels):
    """Abstract group ``span(gens) / span(rels)`` for ``rels`` inside the span.

    Returns the group and a matrix whose columns are the vectors in the
    ambient Z^N representing its generators.
    """
    N = gens.shape[0]
    if gens.shape[1] == 0:
        return AbelianGroup(0), np.zeros((N, 0), dtype=object)
    U, D, V, Uinv, Vinv = _snf(gens)
    r = _rank(D)
    s = _diagonal(D)[:r]
    basis = Uinv[:, :r].copy()
    for i in range(r):
        basis[:, i] *= s[i]
    # coordinates of each relation in that basis
    coords = np.zeros((r, rels.shape[1]), dtype=object)
    for k in range(rels.shape[1]):
        y = U.dot(rels[:, k])
        for i in range(r):
            if y[i] % s[i]:
                raise ValidationError('relation outside the generated lattice')
            coords[i, k] = y[i] // s[i]
    U2, D2, V2, Uinv2, _ = _snf(coords)
    d2 = _diagonal(D2) + [0] * (r - min(D2.shape))
    free, torsion = [], []
    for i in range(r):
        if d2[i] == 0:
            free.append(i)
        elif d2[i] > 1:
            torsion.append(i)
    order = free + torsion
    group = AbelianGroup(len(free), tuple(d2[i] for i in torsion))
    reps = basis.dot(Uinv2[:, order]) if order else np.zeros((N, 0),
                                                             dtype=object)
    return group, reps


def _elements_matrix(G, elements):
    m = np.zeros((G.ngens, len(elements)), dtype=object)
    for j, e in enumerate(elements):
        if e.parent != G:
            raise ValidationError('element %s does not belong to %s'
                                  % (e, G))
        for i, c in enumerate(e.coords):
            m[i, j] = c
    return m


def hom_kernel(f):
    """
    Kernel of a homomorphism

    Returns
    -------
    K: AbelianGroup
    inclusion: GroupHom from ``K`` into ``f.domain``, injective, with
        ``f . inclusion == 0``
    """
    G, C = f.domain, f.codomain
    N = G.ngens
    block = np.concatenate([f.array, -C.relation_matrix()], axis=1)
    U, D, V, _, _ = _snf(block)
    r = _rank(D)
    kernel = V[:N, r:]
    rel = G.relation_matrix()
    gens = np.concatenate([kernel, rel], axis=1)
    K, reps = _lattice_quotient(gens, rel)
    inclusion = GroupHom.from_columns(K, G, [tuple(reps[:, j])
                                             for j in range(reps.shape[1])])
    logger.debug('kernel of %s -> %s is %s', G, C, K)
    return K, inclusion


def subgroup_membership(H, g):
    """
    Express ``g`` as an integer combination of the elements ``H``

    Returns
    -------
    list of int or None
        Coefficients ``c`` with ``sum(c_i H_i) == g``, or None when ``g`` is
        not in the subgroup generated by ``H``. Among all solutions this is
        the one read off the Smith form with free coordinates set to zero.
    """
    G = g.parent
    if any(h.parent != G for h in H):
        raise ValidationError('subgroup generators and element live in '
                              'different groups')
    return _membership(G, tuple(h.coords for h in H), g.coords)


@lru_cache(maxsize=4096)
def _membership(G, H, g):
    k = len(H)
    A = np.zeros((G.ngens, k), dtype=object)
    for j, h in enumerate(H):
        for i, c in enumerate(h):
            A[i, j] = c
    A = np.concatenate([A, G.relation_matrix()], axis=1)
    if A.shape[1] == 0:
        return [] if not any(g) else None
    U, D, V, _, _ = _snf(A)
    y = U.dot(np.array(g, dtype=object))
    d = _diagonal(D)
    z = np.zeros(A.shape[1], dtype=object)
    for i in range(len(y)):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if y[i] != 0:
                return None
        elif y[i] % di:
            return None
        else:
            z[i] = y[i] // di
    w = V.dot(z)
    return [int(c) for c in w[:k]]


def quotient(G, H):
    """
    Quotient of ``G`` by the subgroup generated by ``H``

    Returns
    -------
    Q: AbelianGroup
    projection: GroupHom from ``G`` onto ``Q`` whose kernel is exactly the
        subgroup generated by ``H``
    """
    rel = np.concatenate([_elements_matrix(G, list(H)),
                          G.relation_matrix()], axis=1)
    N = G.ngens
    if rel.shape[1] == 0:
        return G, GroupHom.identity(G)
    U, D, V, _, _ = _snf(rel)
    d = _diagonal(D)
    r = _rank(D)
    free_rows = list(range(r, N))
    torsion_rows = [i for i in range(r) if d[i] > 1]
    Q = AbelianGroup(len(free_rows), tuple(d[i] for i in torsion_rows))
    rows = [tuple(U[i]) for i in free_rows + torsion_rows]
    projection = GroupHom(G, Q, tuple(rows))
    return Q, projection


class Subgroup(object):
    """
    Subgroup of ``group`` generated by ``generators``, with coordinates

    When the group is torsion-free and the generators are independent, the
    generators themselves are the basis, so coordinates are the plain
    coefficients. Otherwise an invariant-factor basis is chosen.
    """

    def __init__(self, group, generators):
        self.group = group
        self.generators = tuple(generators)
        gens = _elements_matrix(group, list(self.generators))
        if (not group.torsion_orders and
                _rank(_snf(gens)[1]) == len(self.generators)):
            self.abstract = AbelianGroup(len(self.generators))
            self.inclusion = GroupHom.from_columns(
                self.abstract, group, [h.coords for h in self.generators])
        else:
            rel = group.relation_matrix()
            self.abstract, reps = _lattice_quotient(
                np.concatenate([gens, rel], axis=1), rel)
            self.inclusion = GroupHom.from_columns(
                self.abstract, group,
                [tuple(reps[:, j]) for j in range(reps.shape[1])])

    def coordinates(self, g):
        """Coordinates of ``g`` in the subgroup, None if ``g`` is outside."""
        c = subgroup_membership(self.inclusion.columns(), g)
        if c is None:
            return None
        return self.abstract.element(c)

    def __contains__(self, g):
        return subgroup_membership(list(self.generators), g) is not None


def subgroup_generated(G, H):
    """The abstract group generated by ``H`` and its inclusion into ``G``."""
    sub = Subgroup(G, H)
    return sub.abstract, sub.inclusion


def hom_image(f):
    """Subgroup generators of the image of ``f``."""
    return [c for c in f.columns() if not c.is_zero()]


def presentation_kernel(phi):
    """
    Relations of a lattice presentation

    ``phi`` maps a free lattice of divisors onto a class group; the returned
    elements generate its kernel (the principal divisors).
    """
    K, inclusion = hom_kernel(phi)
    return inclusion.columns()


def induced_automorphism(G, sources, targets, check=True):
    """
    Endomorphism of ``G`` sending each ``sources[i]`` to ``targets[i]``

    The sources must generate ``G``. With ``check`` the result is verified to
    send every source to its target; a ValidationError names the first one
    that fails, which happens when the assignment is not well defined.
    """
    columns = []
    for e in G.basis():
        c = subgroup_membership(list(sources), e)
        if c is None:
            raise ValidationError('the elements do not generate %s' % G)
        image = G.zero()
        for k, t in zip(c, targets):
            image = image + k * t
        columns.append(image.coords)
    A = GroupHom.from_columns(G, G, columns)
    if check:
        for i, (s, t) in enumerate(zip(sources, targets)):
            if A(s) != t:
                raise ValidationError('no endomorphism sends %s to %s and is '
                                      'consistent with the other images '
                                      '(entry %d)' % (s, t, i))
    return A


def effective_subgroup(degrees):
    """Subgroup generated by the variable degrees, as ``(K, inclusion)``."""
    degrees = list(degrees)
    if not degrees:
        raise ValidationError('no degrees given')
    return subgroup_generated(degrees[0].parent, degrees)
