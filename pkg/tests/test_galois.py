import itertools
from collections import Counter
from fractions import Fraction

import pytest

from coxring.abgroup import AbelianGroup
from coxring.document import parse_polynomial
from coxring.exceptions import CocycleError, ValidationError
from coxring.galois import (Cocycle, action_from_permutation, check_action,
                            cocycle_from_n, descent_dimension_check,
                            induce_action, invariant_ring, is_fixed,
                            twist_action, verify_cocycle)
from coxring.polyalg import Polynomial
from coxring.veronese import (check_relations, compose, minimize_generators,
                              veronese_subalgebra)
from .util import chatelet, chatelet_injective_relation, dp4  # noqa: F401

XI_DEGREES = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
              (1, 0, 1, 1), (4, 2, 3, 2), (2, 1, 2, 2)]


def plus_minus(R):
    return R.names[0::2], R.names[1::2]


def test_check_fixture_actions(dp4, chatelet):
    for doc, name in [(dp4, 'dp4_galois'), (chatelet, 'conj')]:
        report = check_action(doc.ring_of(name), doc.actions[name])
        assert report.ok, report.failures()
        assert {c.name for c in report.checks} == {'degree', 'order',
                                                   'relations'}


def test_check_reports_failures(dp4):
    R = dp4.rings['dp4']
    # swapping eta1 and eta2 does not respect the degrees
    a = action_from_permutation(R, AbelianGroup(0, (2,)),
                                [{'eta1': 'eta2', 'eta2': 'eta1'}],
                                levels=[{1}])
    report = check_action(R, a)
    assert not report.ok
    failed = {c.name for c in report.failures()}
    assert 'degree' in failed
    degree = [c for c in report.failures() if c.name == 'degree'][0]
    assert degree.witness
    assert report.records()[0]['check'] == 'degree'


def test_wrong_order(dp4):
    R = dp4.rings['dp4']
    i = R.tower.root(1)
    a = action_from_permutation(R, AbelianGroup(0, (2,)), [{}],
                                scalars=[{'eta1': i}])
    report = check_action(R, a)
    assert [c.name for c in report.failures()] == ['order']


def test_dp4_descent(dp4):
    R = dp4.rings['dp4']
    a = dp4.actions['dp4_galois']
    ver = veronese_subalgebra(R, dp4.subgroups['H'])
    induced = induce_action(ver, a)
    assert check_action(ver.presentation, induced).ok
    descended = invariant_ring(ver, induced)
    P = descended.presentation
    assert P.tower.depth == 0
    assert P.nvars == 8
    # the conjugate pair is replaced by two invariants
    assert len([n for n in P.names if n.startswith(('s_', 't_'))]) == 2
    for image in descended.generator_images:
        assert is_fixed(induced, image)

    small = minimize_generators(descended)
    P = small.presentation
    assert P.nvars == 7
    assert len(P.relations) == 1
    assert len(P.relations[0].terms) == 3
    assert Counter(d.coords for d in P.degrees) == Counter(XI_DEGREES)
    assert all(ok for _, ok in check_relations(small))
    # xi7^2 + xi2^2 xi5^4 - xi3 xi4^2 xi6, generators matched by degree
    where = [[d.coords for d in P.degrees].index(x) for x in XI_DEGREES]

    def xi(*powers):
        e = [0] * P.nvars
        for k, p in powers:
            e[where[k - 1]] = p
        return tuple(e)

    rel = P.relations[0]
    assert set(rel.terms) == {xi((7, 2)), xi((2, 2), (5, 4)),
                              xi((3, 1), (4, 2), (6, 1))}
    assert rel.terms[xi((7, 2))] * rel.terms[xi((2, 2), (5, 4))] > 0

    full = compose(small, ver)
    assert full.ambient is R
    for image in full.generator_images:
        assert is_fixed(a, image)


def _descended(case, dp4, chatelet):
    if case == 'chatelet':
        R = chatelet.rings['chatelet']
        return R, invariant_ring(R, chatelet.actions['conj'])
    a = dp4.actions['dp4_galois']
    if case == 'dp4':
        R = dp4.rings['dp4']
        return R, invariant_ring(R, a)
    ver = veronese_subalgebra(dp4.rings['dp4'], dp4.subgroups['H'])
    return ver.presentation, invariant_ring(ver, induce_action(ver, a))


@pytest.mark.parametrize('case', ['chatelet', 'dp4', 'dp4_veronese'])
def test_descent_dimensions(case, dp4, chatelet):
    R, descended = _descended(case, dp4, chatelet)
    P = descended.presentation
    G = P.group
    free = list(itertools.product(range(5), repeat=G.free_rank))
    torsion = list(itertools.product(*[range(t) for t in G.torsion_orders]))
    degrees = [G.element(f + t) for f in free for t in torsion]
    # generator degrees and their pairwise sums are never empty
    degrees += list(P.degrees)
    degrees += [a + b for a in P.degrees for b in P.degrees]
    assert all(d.parent == G for d in degrees)
    assert descent_dimension_check(R, descended, degrees) == []


def _p(j):
    return '(s_eta%dp^2 + t_eta%dp^2)' % (j, j)


# (i, j, l) in the order of the fixture relations, b_j for a_j = 1
TRIPLES = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
B = {1: 0, 2: -1, 3: -2, 4: -3}


def _norm(P, j):
    m = P.nvars
    s = Polynomial.variable(P.index('s_eta%dp' % j), m)
    t = Polynomial.variable(P.index('t_eta%dp' % j), m)
    return s ** 2 + t ** 2


def chatelet_relations(P, n=(1, 1, 1, 1)):
    """``D_ij n_k Q_k + D_jk n_i Q_i + D_ki n_j Q_j`` with ``D_ij = b_j -
    b_i`` and ``Q_k = s_k^2 + t_k^2``."""
    n = dict(zip(range(1, 5), n))
    out = []
    for i, j, k in TRIPLES:
        out.append(_norm(P, k) * ((B[j] - B[i]) * n[k]) +
                   _norm(P, i) * ((B[k] - B[j]) * n[i]) +
                   _norm(P, j) * ((B[i] - B[k]) * n[j]))
    return out


def test_chatelet_descent(chatelet):
    R = chatelet.rings['chatelet']
    descended = invariant_ring(R, chatelet.actions['conj'])
    P = descended.presentation
    assert P.tower.depth == 0
    assert P.nvars == 10
    assert P.names[:4] == ('s_eta0p', 't_eta0p', 's_eta1p', 't_eta1p')
    expected = chatelet_relations(P)
    assert len(P.relations) == 4
    assert [f.normalized() for f in P.relations] == \
        [f.normalized() for f in expected]
    # 2 Q_2 - Q_1 - Q_3
    f = parse_polynomial('2*{2} - {1} - {3}'.format(
        *[_p(j) for j in range(5)]), P.names)
    assert f.normalized() == P.relations[0].normalized()


def test_chatelet_pic_x_descent(chatelet):
    R = chatelet.rings['chatelet']
    ver = veronese_subalgebra(R, chatelet.subgroups['pic_x'])
    induced = induce_action(ver, chatelet.actions['conj'])
    small = minimize_generators(invariant_ring(ver, induced))
    P = small.presentation
    assert P.tower.depth == 0
    assert P.nvars == 5
    assert len(P.relations) == 1
    assert 'eta0p_eta0m' in P.names
    # X^2 + Y^2 - T^2 (a_1 U + b_1 V) ... (a_4 U + b_4 V)
    expected = chatelet_injective_relation(P.names)
    assert P.relations[0].normalized() == expected.normalized()


def test_cocycle_from_n(chatelet):
    R = chatelet.rings['chatelet']
    plus, minus = plus_minus(R)
    assert cocycle_from_n((1, 1, 1, 3), R, plus, minus) is None
    sigma = cocycle_from_n((1, 2, 2, 1), R, plus, minus)
    i = R.tower.root(1)
    assert sigma(0, R.degrees[R.index('eta0p')]) == 2 * i
    assert sigma(0, R.degrees[R.index('eta0m')]) == i / 2
    assert sigma(0, R.degrees[R.index('eta2p')]) == Fraction(1, 2)
    assert sigma(0, R.degrees[R.index('eta4m')]) == 1
    assert verify_cocycle(chatelet.actions['conj'], sigma) == []
    with pytest.raises(ValidationError):
        cocycle_from_n((1, 0, 1, 1), R, plus, minus)


def test_twisted_descent(chatelet):
    R = chatelet.rings['chatelet']
    plus, minus = plus_minus(R)
    n = (1, 2, 2, 1)
    sigma = cocycle_from_n(n, R, plus, minus)
    twisted = twist_action(chatelet.actions['conj'], sigma)
    g = twisted.generators[0]
    # the multiplier of x_i picks up sigma(deg x_i)
    assert g.scalars[R.index('eta2p')] == Fraction(1, 2)
    assert g.scalars[R.index('eta2m')] == 2
    assert g.scalars[R.index('eta1p')] == 1
    assert check_action(R, twisted).ok

    P = invariant_ring(R, twisted).presentation
    assert P.tower.depth == 0
    # eta_jp * eta_jm = n_j (s_j^2 + t_j^2)
    expected = chatelet_relations(P, n)
    assert len(P.relations) == 4
    assert [f.normalized() for f in P.relations] == \
        [f.normalized() for f in expected]
    assert P.relations[0].normalized() != \
        chatelet_relations(P)[0].normalized()


def test_twist_round_trip(chatelet):
    R = chatelet.rings['chatelet']
    plus, minus = plus_minus(R)
    a = chatelet.actions['conj']
    sigma = cocycle_from_n((1, 2, 2, 1), R, plus, minus)
    twisted = twist_action(a, sigma)
    assert twisted != a
    assert twist_action(twisted, sigma.inverse()) == a


def test_bad_cocycle(dp4):
    a = dp4.actions['dp4_galois']
    pic = dp4.groups['pic']
    # eta7 is fixed and its degree l0 - l1 gets the value 2
    sigma = Cocycle(AbelianGroup(0, (2,)), pic,
                    [[Fraction(2)] + [Fraction(1)] * 5])
    assert verify_cocycle(a, sigma)
    with pytest.raises(CocycleError):
        twist_action(a, sigma)


def test_trivial_cocycle(dp4):
    a = dp4.actions['dp4_galois']
    sigma = Cocycle.trivial(a.group, dp4.groups['pic'])
    assert twist_action(a, sigma) == a
    assert sigma.inverse() == sigma
