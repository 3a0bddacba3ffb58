from fractions import Fraction

import pytest

from coxring.abgroup import AbelianGroup, GroupHom
from coxring.document import parse_polynomial
from coxring.exceptions import HomogeneityError, ValidationError
from coxring.numfield import gaussian_tower
from coxring.polyalg import (GradedPresentation, Polynomial,
                             discover_relations, free_presentation,
                             graded_piece, homogeneous_degree, ideal_member,
                             minimal_relations, monomial_name, regrade,
                             span_dimension, substitute)
from .util import p1xp1  # noqa: F401


def test_arithmetic():
    x, y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    f = (x + y) ** 2
    assert f.terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert f - f == 0
    assert (f * Fraction(1, 2)).terms[(1, 1)] == 1
    assert f.total_degree == 2
    assert f.leading_monomial == (2, 0)
    assert f.evaluate((1, 2)) == 9
    assert f.render(['x', 'y']) == 'x^2 + 2*x*y + y^2'
    with pytest.raises(ValidationError):
        x + Polynomial.variable(0, 3)


def test_render_gaussian():
    i = gaussian_tower().root(1)
    x = Polynomial.variable(0, 1)
    assert (x * (1 + i) - 3).render(['x']) == '(1+i)*x - 3'


def test_normalized():
    f = Polynomial(2, {(1, 0): Fraction(-2, 3), (0, 1): Fraction(4, 3)})
    assert f.normalized().terms == {(1, 0): 1, (0, 1): -2}
    i = gaussian_tower().root(1)
    g = Polynomial(2, {(1, 0): 2 * i, (0, 1): 1})
    assert g.normalized().leading_coefficient == 1


def test_substitute():
    s, t = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    f = parse_polynomial('u^2 - v', ['u', 'v'])
    assert substitute(f, [s + t, s * t]) == s ** 2 + s * t + t ** 2


def test_monomial_name():
    names = ['eta3', 'eta5', 'eta8']
    assert monomial_name((1, 2, 1), names) == 'eta3_eta5_eta5_eta8'
    assert monomial_name((0, 0, 0), names) == '1'


def test_homogeneity_error(p1xp1):
    R = p1xp1.rings['p1xp1']
    with pytest.raises(HomogeneityError) as e:
        GradedPresentation(R.names, R.degrees,
                           [parse_polynomial('x0 + y0', R.names)])
    assert e.value.degrees == {'x0': '(1,0)', 'y0': '(0,1)'}
    assert 'x0 has degree (1,0)' in str(e.value)
    f = parse_polynomial('x0*y1 - x1*y0', R.names)
    assert homogeneous_degree(R, f).coords == (1, 1)
    assert homogeneous_degree(R, Polynomial(4)) is None


@pytest.fixture(scope='module')
def quadric(p1xp1):
    """The quadric cone x0*y1 = x1*y0 in the bigraded ring."""
    R = p1xp1.rings['p1xp1']
    return GradedPresentation(R.names, R.degrees,
                              [parse_polynomial('x0*y1 - x1*y0', R.names)])


def test_ideal_member(quadric):
    R = quadric
    f = parse_polynomial('x0^2*y1 - x0*x1*y0 + 3*x1*y1*x0 - 3*x1^2*y0',
                         R.names)
    result = ideal_member(R, f)
    assert result.member
    assert result.expand(R) == f
    assert result.degree.coords == (2, 1)

    g = parse_polynomial('x0*y1', R.names)
    result = ideal_member(R, g)
    assert not result
    assert not result.remainder.is_zero()

    with pytest.raises(HomogeneityError):
        ideal_member(R, parse_polynomial('x0 + y0', R.names))


def test_graded_pieces(p1xp1, quadric):
    R = p1xp1.rings['p1xp1']
    pic = p1xp1.groups['pic']
    basis, dim = graded_piece(R, pic.element((2, 1)))
    assert dim == 6 and len(basis) == 6
    assert graded_piece(quadric, pic.element((1, 1)))[1] == 3
    assert graded_piece(quadric, pic.element((2, 2)))[1] == 5
    assert graded_piece(quadric, pic.element((-1, 1)))[1] == 0
    f = parse_polynomial('x0*y0 + x1*y1', R.names)
    g = parse_polynomial('x0*y1', R.names)
    h = parse_polynomial('x1*y0', R.names)
    assert span_dimension(quadric, pic.element((1, 1)), [f, g, h]) == 2


def test_discover_relations():
    Z = AbelianGroup(1)
    one = Z.element((1,))
    S = free_presentation(['s', 't'], [one, one])
    s, t = S.gens()
    gens = [('u', s ** 2, one), ('v', s * t, one), ('w', t ** 2, one)]
    relations = discover_relations(S, gens, degree_bound=4)
    assert relations == [parse_polynomial('u*w - v^2', ['u', 'v', 'w'])]


def test_minimal_relations_drop_multiples():
    Z = AbelianGroup(1)
    degrees = [Z.element((1,))] * 3
    names = ['u', 'v', 'w']
    g = parse_polynomial('u*w - v^2', names)
    candidates = [g * parse_polynomial('u', names), g, 2 * g,
                  g * parse_polynomial('u + v', names)]
    assert minimal_relations(degrees, candidates, 4) == [g]


def test_regrade(p1xp1):
    R = p1xp1.rings['p1xp1']
    Z = AbelianGroup(1)
    total = GroupHom(R.group, Z, [[1, 1]])
    S = regrade(R, total)
    assert S.group == Z
    assert all(d.coords == (1,) for d in S.degrees)
    assert graded_piece(S, Z.element((2,)))[1] == 10
