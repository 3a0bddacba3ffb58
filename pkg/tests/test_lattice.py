from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxring.abgroup import AbelianGroup, GroupHom
from coxring.exceptions import NotPointedError, UnboundedFiberError
from coxring.lattice import (FiberMonoid, fiber_points, hilbert_basis,
                             is_pointed, module_generators, monoid_decompose,
                             pointed_certificate, pointed_witness)
from .util import p1xp1  # noqa: F401


def degree_map(columns, group=None):
    group = group or AbelianGroup(len(columns[0]))
    return GroupHom.from_columns(AbelianGroup(len(columns)), group, columns)


def test_fibers(p1xp1):
    R = p1xp1.rings['p1xp1']
    pic = p1xp1.groups['pic']
    points = fiber_points(R.degree_matrix, pic.element((1, 1)))
    assert sorted(points) == [(0, 1, 0, 1), (0, 1, 1, 0), (1, 0, 0, 1),
                              (1, 0, 1, 0)]
    assert len(fiber_points(R.degree_matrix, pic.element((2, 1)))) == 6
    assert fiber_points(R.degree_matrix, pic.element((-1, 0))) == []
    assert fiber_points(R.degree_matrix, pic.zero()) == [(0, 0, 0, 0)]


def test_fiber_order():
    Q = degree_map([(1,), (1,)])
    assert fiber_points(Q, Q.codomain.element((2,))) == [(0, 2), (1, 1),
                                                        (2, 0)]


def test_fiber_with_torsion():
    G = AbelianGroup(1, (2,))
    Q = degree_map([(1, 0), (1, 1)], G)
    assert sorted(fiber_points(Q, G.element((2, 0)))) == [(0, 2), (2, 0)]
    assert fiber_points(Q, G.element((2, 1))) == [(1, 1)]


def test_unbounded_fiber():
    Q = degree_map([(1,), (-1,)])
    assert not is_pointed(Q)
    assert pointed_witness(Q) == (1, 1)
    with pytest.raises(UnboundedFiberError):
        fiber_points(Q, Q.codomain.zero())
    assert fiber_points(Q, Q.codomain.zero(), cap=2) == [(0, 0), (1, 1),
                                                         (2, 2)]
    with pytest.raises(NotPointedError) as e:
        hilbert_basis(FiberMonoid(Q, (Q.codomain.element((1,)),)))
    assert e.value.witness == (1, 1)


def test_pointed_certificate(p1xp1):
    Q = p1xp1.rings['p1xp1'].degree_matrix
    w = pointed_certificate(Q)
    for c in Q.columns():
        assert sum(a * b for a, b in zip(w, c.coords)) >= 1
    assert pointed_certificate(degree_map([(1,), (-1,)])) is None


def test_segre(p1xp1):
    R = p1xp1.rings['p1xp1']
    pic = p1xp1.groups['pic']
    fm = FiberMonoid(R.degree_matrix, (pic.element((1, 1)),))
    basis = hilbert_basis(fm)
    assert sorted(basis) == sorted(fiber_points(R.degree_matrix,
                                                pic.element((1, 1))))
    assert monoid_decompose(fm, basis, (1, 1, 2, 0)) is not None
    assert fm.contains((2, 0, 1, 1))
    assert not fm.contains((1, 0, 0, 0))


def test_antidiagonal_is_empty(p1xp1):
    R = p1xp1.rings['p1xp1']
    fm = FiberMonoid(R.degree_matrix, p1xp1.subgroups['antidiagonal'])
    assert hilbert_basis(fm) == []


def test_module_generators():
    # even total degree in k[x, y]
    G = AbelianGroup(1, (2,))
    Q = degree_map([(1, 1), (1, 1)], G)
    fm = FiberMonoid(Q, (G.element((1, 0)),))
    assert sorted(hilbert_basis(fm)) == [(0, 2), (1, 1), (2, 0)]
    assert sorted(module_generators(fm, G.element((1, 1)))) == [(0, 1),
                                                                (1, 0)]
    assert module_generators(fm, G.zero()) == [(0, 0)]


def _irreducibles(fm, n, top):
    """Brute force: nonzero monoid elements of total degree <= top with no
    nonzero proper monoid element below them."""
    elements = [e for e in product(range(top + 1), repeat=n)
                if 0 < sum(e) <= top and fm.contains(e)]
    members = set(elements)
    out = []
    for e in elements:
        if not any(f != e and all(a <= b for a, b in zip(f, e))
                   for f in members):
            out.append(e)
    return sorted(out)


gradings = st.tuples(
    st.lists(st.tuples(st.integers(1, 3), st.integers(-3, 3)), min_size=1,
             max_size=5),
    st.integers(1, 2), st.integers(1, 2))


@settings(max_examples=50, deadline=None)
@given(gradings)
def test_hilbert_basis_complete(data):
    columns, p, q = data
    G = AbelianGroup(2)
    Q = degree_map(columns, G)
    fm = FiberMonoid(Q, (G.element((p, 0)), G.element((0, q))))
    basis = hilbert_basis(fm)
    # every minimal element of a finite-index fiber monoid has total degree
    # at most the index p * q
    assert sorted(basis) == _irreducibles(fm, len(columns), p * q)
