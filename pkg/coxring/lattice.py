"""
Monoid combinatorics of a grading: degree fibers and Hilbert bases.

Exponent vectors are tuples of nonnegative ints. Lists of them are returned
in graded-lexicographic order, ascending: by total degree, then by the
exponent tuple with the first variable largest.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor

from . import config
from .abgroup import GroupHom, quotient
from .exceptions import (BoundExceededError, NotPointedError,
                         UnboundedFiberError, ValidationError)
from .linalg import rref

logger = logging.getLogger(__name__)


def grlex_key(e):
    return sum(e), tuple(e)


@dataclass(frozen=True)
class FiberMonoid:
    """Exponent vectors whose degree under ``degree_matrix`` lies in the
    subgroup generated by ``target_subgroup``."""
    degree_matrix: GroupHom
    target_subgroup: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'target_subgroup',
                           tuple(self.target_subgroup))
        for h in self.target_subgroup:
            if h.parent != self.degree_matrix.codomain:
                raise ValidationError('subgroup generator %s is not in the '
                                      'grading group %s'
                                      % (h, self.degree_matrix.codomain))

    @property
    def nvars(self):
        return self.degree_matrix.domain.ngens

    @property
    def projection(self):
        """``pi: G -> G/H``."""
        return _quotient(self.degree_matrix.codomain, self.target_subgroup)[1]

    def contains(self, e):
        if len(e) != self.nvars or any(x < 0 for x in e):
            return False
        return self.projection(self.degree_matrix(e)).is_zero()


@lru_cache(maxsize=256)
def _quotient(G, H):
    return quotient(G, H)


def _feasible_point(A, b):
    """
    A point ``x >= 0`` with ``A x = b``, or None

    Phase one of the simplex method in exact arithmetic, Bland's rule.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row, rhs = [-v for v in row], -rhs
        rows.append(row + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    cost = [0] * n + [1] * m
    while True:
        entering = None
        for j in range(n + m):
            reduced = cost[j] - sum(cost[basis[i]] * rows[i][j]
                                    for i in range(m))
            if reduced < 0:
                entering = j
                break
        if entering is None:
            break
        candidates = [(rows[i][-1] / rows[i][entering], basis[i], i)
                      for i in range(m) if rows[i][entering] > 0]
        _, _, leave = min(candidates)
        piv = rows[leave][entering]
        rows[leave] = [v / piv for v in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][entering] != 0:
                f = rows[i][entering]
                rows[i] = [a - f * c for a, c in zip(rows[i], rows[leave])]
        basis[leave] = entering
    if any(rows[i][-1] != 0 for i in range(m) if basis[i] >= n):
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rows[i][-1]
    return x


def _free_rows(Q):
    fr = Q.codomain.free_rank
    return [list(row) for row in Q.matrix[:fr]]


def pointed_certificate(Q):
    """
    Rational functional ``w`` with ``w . q_j >= 1`` on the free part of every
    column of ``Q``, or None if the grading is not pointed
    """
    rows = _free_rows(Q)
    n = Q.domain.ngens
    r = len(rows)
    if n == 0:
        return []
    if r == 0:
        return None
    # Q^T (w+ - w-) - s = 1
    A = [[rows[k][j] for k in range(r)] + [-rows[k][j] for k in range(r)] +
         [-int(i == j) for i in range(n)] for j in range(n)]
    x = _feasible_point(A, [1] * n)
    if x is None:
        return None
    return [x[k] - x[r + k] for k in range(r)]


def pointed_witness(Q):
    """Nonzero ``e >= 0`` with ``Q e = 0``, None if the grading is pointed."""
    n = Q.domain.ngens
    if n == 0:
        return None
    rows = _free_rows(Q)
    x = _feasible_point(rows + [[1] * n], [0] * len(rows) + [1])
    if x is None:
        return None
    scale = 1
    for v in x:
        scale = scale * v.denominator // _gcd(scale, v.denominator)
    e = [int(v * scale) for v in x]
    # a multiple also kills the torsion rows
    order = 1
    for t in Q.codomain.torsion_orders:
        order = order * t // _gcd(order, t)
    return tuple(order * v for v in e)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def is_pointed(Q):
    """True iff the only ``e >= 0`` with ``Q e = 0`` is zero."""
    return pointed_certificate(Q) is not None


def fiber_points(Q, d, cap=None):
    """
    Nonnegative integer solutions of ``Q e = d``

    Parameters
    ----------
    Q: GroupHom
        degree map from Z^n to the grading group
    d: GroupElement
    cap: int, optional
        per-coordinate bound; required when the grading is not pointed

    Returns
    -------
    list of tuples, graded-lexicographic order
    """
    n = Q.domain.ngens
    G = Q.codomain
    if d.parent != G:
        raise ValidationError('degree %s is not in %s' % (d, G))
    if n == 0:
        return [()] if d.is_zero() else []
    w = pointed_certificate(Q)
    if w is None:
        if cap is None:
            raise UnboundedFiberError(
                'the grading is not pointed; a cap is needed to enumerate '
                'the fiber of %s' % d)
        budget = cap * n
    else:
        budget = floor(sum(a * b for a, b in zip(w, d.free)))
        if budget < 0:
            return []
    coord_cap = budget if cap is None else min(cap, budget)
    fr = G.free_rank
    rows = [list(Q.matrix[i]) + [d.coords[i]] for i in range(fr)]
    reduced, pivots, consistent = rref(rows, n)
    if not consistent:
        return []
    free_vars = [j for j in range(n) if j not in pivots]
    torsion = [(Q.matrix[fr + k], d.coords[fr + k], t)
               for k, t in enumerate(G.torsion_orders)]
    out = []
    e = [0] * n

    def solve():
        total = sum(e[j] for j in free_vars)
        for row, p in zip(reduced, pivots):
            v = row[n] - sum(row[j] * e[j] for j in free_vars)
            if v.denominator != 1 or v < 0 or v > coord_cap:
                return
            e[p] = int(v)
            total += e[p]
        if total > budget:
            return
        for row, target, t in torsion:
            if (sum(a * b for a, b in zip(row, e)) - target) % t:
                return
        out.append(tuple(e))

    def walk(i, remaining):
        if i == len(free_vars):
            solve()
            return
        for v in range(min(remaining, coord_cap) + 1):
            e[free_vars[i]] = v
            walk(i + 1, remaining - v)
        e[free_vars[i]] = 0

    walk(0, budget)
    out.sort(key=grlex_key)
    logger.debug('fiber of %s: %d points (budget %d)', d, len(out), budget)
    return out


def _integer_system(fm, shift=None):
    """Integer matrix ``A`` with ``{x >= 0 : A x = 0}`` isomorphic to the
    monoid, torsion rows turned into equations with slack variables.

    With ``shift`` an extra variable with column ``-pi(shift)`` is appended
    after the monoid variables.
    """
    Q = fm.degree_matrix
    pi = fm.projection
    n = Q.domain.ngens
    cols = [pi(c).coords for c in Q.columns()]
    if shift is not None:
        cols.append((-pi(shift)).coords)
    Qt = pi.codomain
    nt = len(Qt.torsion_orders)
    nv = len(cols)
    A = []
    for i in range(Qt.free_rank):
        A.append([c[i] for c in cols] + [0] * nt)
    for k, t in enumerate(Qt.torsion_orders):
        i = Qt.free_rank + k
        A.append([c[i] % t for c in cols] +
                 [-t if kk == k else 0 for kk in range(nt)])
    return A, n, nv


def _contejean_devie(A, nvars, ncount, cap):
    """Hilbert basis of ``{x in N^nvars : A x = 0}``; ``cap`` bounds the sum
    of the first ``ncount`` coordinates."""
    m = len(A)
    if m == 0:
        return [tuple(int(i == j) for i in range(nvars))
                for j in range(nvars)]
    images = [tuple(A[i][j] for i in range(m)) for j in range(nvars)]

    def image(x):
        return tuple(sum(A[i][j] * x[j] for j in range(nvars))
                     for i in range(m))

    basis = []
    frontier = {tuple(int(i == j) for i in range(nvars)) for j in range(nvars)}
    rounds = 0
    while frontier:
        rounds += 1
        found = [x for x in frontier if not any(image(x))]
        basis.extend(sorted(found))
        survivors = [x for x in frontier if any(image(x))]
        nxt = set()
        for x in survivors:
            ax = image(x)
            for j in range(nvars):
                if sum(a * b for a, b in zip(ax, images[j])) >= 0:
                    continue
                y = x[:j] + (x[j] + 1,) + x[j + 1:]
                if any(all(bi <= yi for bi, yi in zip(b, y)) for b in basis):
                    continue
                if sum(y[:ncount]) > cap:
                    raise BoundExceededError(
                        'Hilbert basis completion passed total degree %d'
                        % cap)
                nxt.add(y)
        frontier = nxt
        logger.debug('completion round %d: %d basis elements, %d candidates',
                     rounds, len(basis), len(frontier))
    return basis


def hilbert_basis(fm, cap=None):
    """
    Minimal generators of the fiber monoid

    Parameters
    ----------
    fm: FiberMonoid
    cap: int, optional
        total-degree safety cap of the completion, default from config

    Returns
    -------
    list of exponent tuples, graded-lexicographic order
    """
    cap = config.get('cap', cap)
    Q = fm.degree_matrix
    witness = pointed_witness(Q)
    if witness is not None:
        raise NotPointedError('grading is not pointed', witness)
    A, n, nv = _integer_system(fm)
    nt = len(A[0]) - nv if A else 0
    raw = _contejean_devie(A, nv + nt, n, cap)
    out = sorted({x[:n] for x in raw if any(x[:n])}, key=grlex_key)
    logger.info('Hilbert basis of %d variables over %d subgroup generators: '
                '%d elements', n, len(fm.target_subgroup), len(out))
    return out


def module_generators(fm, d, cap=None):
    """
    Minimal exponent vectors in the coset ``d + H``

    Every ``e >= 0`` with ``deg(e) in d + H`` is one of these plus an element
    of the fiber monoid.
    """
    cap = config.get('cap', cap)
    if fm.projection(d).is_zero():
        return [(0,) * fm.nvars]
    witness = pointed_witness(fm.degree_matrix)
    if witness is not None:
        raise NotPointedError('grading is not pointed', witness)
    A, n, nv = _integer_system(fm, shift=d)
    nt = len(A[0]) - nv if A else 0
    raw = _contejean_devie(A, nv + nt, n, cap)
    out = sorted({x[:n] for x in raw if x[n] == 1}, key=grlex_key)
    return out


def monoid_decompose(fm, basis, e):
    """
    Write ``e`` as a sum of basis elements

    Returns
    -------
    list of basis indices (a multiset, ascending) or None when no
    decomposition exists
    """
    e = tuple(e)
    if not fm.contains(e):
        raise ValidationError('%s is not in the fiber monoid' % (e,))
    basis = [tuple(b) for b in basis]
    failed = set()

    def search(rest, start):
        if not any(rest):
            return []
        if (rest, start) in failed:
            return None
        for i in range(start, len(basis)):
            b = basis[i]
            if any(b) and all(x <= y for x, y in zip(b, rest)):
                sub = search(tuple(y - x for x, y in zip(b, rest)), i)
                if sub is not None:
                    return [i] + sub
        failed.add((rest, start))
        return None

    return search(e, 0)
