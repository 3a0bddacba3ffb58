from collections import Counter

import pytest

from coxring.abgroup import AbelianGroup, GroupHom, subgroup_membership
from coxring.document import parse_polynomial
from coxring.exceptions import ValidationError
from coxring.polyalg import ideal_member
from coxring.veronese import (check_relations, compose, composed_images,
                              dimension_check, identity_pullback,
                              minimize_generators, pullback_general,
                              removable_expression, veronese_subalgebra)
from .util import chatelet, dp4, p1xp1  # noqa: F401

DP4_GENERATORS = {
    'eta1': (1, 0, 0, 0),
    'eta2': (0, 1, 0, 0),
    'eta7': (1, 0, 1, 1),
    'eta3_eta4': (0, 0, 1, 0),
    'eta5_eta6': (0, 0, 0, 1),
    'eta8_eta9': (4, 2, 3, 2),
    'eta3_eta5_eta5_eta8': (2, 1, 2, 2),
    'eta4_eta6_eta6_eta9': (2, 1, 2, 2),
}


@pytest.fixture(scope='module')
def dp4_veronese(dp4):
    return veronese_subalgebra(dp4.rings['dp4'], dp4.subgroups['H'])


def test_dp4_generators(dp4_veronese):
    P = dp4_veronese.presentation
    assert P.group == AbelianGroup(4)
    assert {n: d.coords for n, d in zip(P.names, P.degrees)} == \
        DP4_GENERATORS
    assert str(P.tower) == 'Q(i^2 = -1)'
    images = composed_images(dp4_veronese)
    assert images['eta3_eta5_eta5_eta8'] == 'eta3*eta5^2*eta8'
    assert images['eta3_eta4'] == 'eta3*eta4'


def test_dp4_relations(dp4_veronese):
    P = dp4_veronese.presentation
    # the usual listing has three relations, but one of them repeats
    # T4 T5^2 T6 - T7 T8 and is dropped
    assert len(P.relations) == 2
    linear = parse_polynomial(
        'eta2*eta7^2 + eta3_eta5_eta5_eta8 + eta4_eta6_eta6_eta9', P.names)
    quadric = parse_polynomial(
        'eta3_eta5_eta5_eta8*eta4_eta6_eta6_eta9 - '
        'eta3_eta4*eta5_eta6^2*eta8_eta9', P.names)
    assert ideal_member(P, linear).member
    assert ideal_member(P, quadric).member
    assert all(ok for _, ok in check_relations(dp4_veronese))


def test_dp4_minimize(dp4_veronese):
    small = minimize_generators(dp4_veronese)
    P = small.presentation
    assert P.nvars == 7
    assert len(P.relations) == 1
    assert 'eta1' in P.names and 'eta8_eta9' in P.names
    # exactly one of the two conjugate generators is left
    assert len({'eta3_eta5_eta5_eta8', 'eta4_eta6_eta6_eta9'} &
               set(P.names)) == 1
    assert all(ok for _, ok in check_relations(small))
    assert small.ambient is dp4_veronese.ambient


def test_removable_expression(dp4_veronese):
    P = dp4_veronese.presentation
    k = P.index('eta4_eta6_eta6_eta9')
    expr = removable_expression(P, k, 6)
    assert expr == parse_polynomial(
        '-eta2*eta7^2 - eta3_eta5_eta5_eta8', P.names)
    assert removable_expression(P, P.index('eta1'), 6) is None


def test_dp4_dimensions(dp4, dp4_veronese):
    G = dp4_veronese.presentation.group
    degrees = [G.element(d) for d in [(1, 0, 0, 0), (2, 1, 2, 2),
                                      (4, 2, 4, 4), (4, 2, 3, 2)]]
    assert dimension_check(dp4_veronese, degrees) == []


def test_dp4_degrees_in_divisor_basis(dp4, dp4_veronese):
    # columns of A B, A giving the classes of the Veronese monomials
    expected = Counter([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0),
                        (0, 0, 0, 1), (1, 0, 1, 1), (4, 2, 3, 2),
                        (2, 1, 2, 2), (2, 1, 2, 2)])
    R = dp4.rings['dp4']
    D = [R.degrees[R.index('eta%d' % k)] for k in range(1, 7)]
    basis = [D[0], D[1], D[2] + D[3], D[4] + D[5]]
    pr = dp4_veronese
    coords = [subgroup_membership(basis, pr.degree_map(d))
              for d in pr.presentation.degrees]
    assert None not in coords
    assert Counter(tuple(c) for c in coords) == expected


def test_chatelet_veronese(chatelet):
    R = chatelet.rings['chatelet']
    pr = veronese_subalgebra(R, chatelet.subgroups['pic_x'])
    P = pr.presentation
    assert P.nvars == 7
    z = {(2, 0, 1, 0, 1, 0, 1, 0, 1, 0), (0, 2, 0, 1, 0, 1, 0, 1, 0, 1)}
    z |= {tuple(int(i // 2 == j) for i in range(10)) for j in range(5)}
    images = set()
    for f in pr.generator_images:
        assert len(f.terms) == 1
        images.update(f.terms)
    assert images == z
    for j in range(5):
        assert 'eta%dp_eta%dm' % (j, j) in P.names
    assert all(ok for _, ok in check_relations(pr))


def test_segre(p1xp1):
    R = p1xp1.rings['p1xp1']
    pic = p1xp1.groups['pic']
    pr = veronese_subalgebra(R, [pic.element((1, 1))])
    P = pr.presentation
    assert sorted(P.names) == ['x0_y0', 'x0_y1', 'x1_y0', 'x1_y1']
    assert all(d.coords == (1,) for d in P.degrees)
    assert len(P.relations) == 1
    assert ideal_member(P, parse_polynomial('x0_y0*x1_y1 - x0_y1*x1_y0',
                                            P.names)).member


def test_custom_names(p1xp1):
    R = p1xp1.rings['p1xp1']
    pic = p1xp1.groups['pic']
    pr = veronese_subalgebra(R, [pic.element((1, 1))],
                             names=['a', 'b', 'c', 'd'])
    assert pr.presentation.names == ('a', 'b', 'c', 'd')
    with pytest.raises(ValidationError):
        veronese_subalgebra(R, [pic.element((1, 1))], names=['a'])


def test_antidiagonal_pullback(p1xp1):
    R = p1xp1.rings['p1xp1']
    pr = pullback_general(R, p1xp1.homs['antidiagonal'])
    P = pr.presentation
    assert P.nvars == 0
    assert P.relations == ()
    assert P.group == AbelianGroup(1)


def test_pullback_with_kernel(p1xp1):
    R = p1xp1.rings['p1xp1']
    pic = p1xp1.groups['pic']
    # (a, b) -> (a, a); the second coordinate spans the kernel
    phi = GroupHom(AbelianGroup(2), pic, [[1, 0], [1, 0]])
    pr = pullback_general(R, phi)
    P = pr.presentation
    assert P.nvars == 6
    assert P.names[-2:] == ('u1', 'v1')
    assert parse_polynomial('u1*v1 - 1', P.names) in P.relations
    assert all(ok for _, ok in check_relations(pr))


def test_compose(dp4, dp4_veronese):
    outer = identity_pullback(dp4_veronese.presentation)
    both = compose(outer, dp4_veronese)
    assert both.ambient is dp4_veronese.ambient
    assert both.generator_images == dp4_veronese.generator_images
    with pytest.raises(ValidationError):
        compose(dp4_veronese, dp4_veronese)
