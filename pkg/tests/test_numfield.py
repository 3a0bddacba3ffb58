from fractions import Fraction
from itertools import product

import pytest

from coxring.exceptions import ValidationError
from coxring.numfield import (FieldTower, TowerElement, conjugate,
                              from_pairs, gaussian_tower, is_rational,
                              render_scalar, sum_of_two_squares, to_pairs)
from coxring.numfield import _cornacchia


def test_gaussian_arithmetic():
    K = gaussian_tower()
    i = K.root(1)
    z = 3 + 2 * i
    assert isinstance(z, TowerElement)
    assert z * conjugate(z, 1) == 13
    # rational results collapse to Fraction
    assert isinstance(i * i, Fraction)
    assert i * i == -1
    assert (1 / z) * z == 1
    assert z - z == 0
    assert is_rational(z * conjugate(z, 1))


def test_render():
    i = gaussian_tower().root(1)
    assert render_scalar(3 + 2 * i) == '(3+2i)'
    assert render_scalar(-i) == '(-i)'
    assert render_scalar(Fraction(-1, 2)) == '-1/2'
    assert render_scalar(7) == '7'
    assert str(gaussian_tower()) == 'Q(i^2 = -1)'
    assert str(FieldTower()) == 'Q'


def test_second_level():
    K = FieldTower((-1, 2))
    i, j = K.root(1), K.root(2)
    assert j * j == 2
    x = 4 * i * j
    assert render_scalar(x) == '(4i*1j)'
    assert conjugate(x, 2) == -x
    assert conjugate(x, 1) == -x
    assert conjugate(conjugate(x, 1), 2) == x
    assert x * x == -32


@pytest.mark.parametrize('radicands', [(4,), (-1, -1), (Fraction(1, 9),)])
def test_square_radicand(radicands):
    with pytest.raises(ValidationError):
        FieldTower(radicands)


def test_deep_tower():
    with pytest.raises(ValidationError):
        FieldTower((-1, 2, 3))


def test_conjugate_levels():
    i = gaussian_tower().root(1)
    assert conjugate(Fraction(5, 3), 1) == Fraction(5, 3)
    with pytest.raises(ValueError):
        conjugate(i, 2)
    with pytest.raises(ValueError):
        conjugate(i, 0)


def test_pairs():
    K = FieldTower((-1, 3))
    x = Fraction(1, 2) + K.root(1) * K.root(2) * 5
    assert from_pairs(to_pairs(x), K) == x
    assert to_pairs(Fraction(-3, 4)) == [-3, 4]


@pytest.mark.parametrize('q, expected', [
    (5, (1, 2)),
    (4, (0, 2)),
    (1, (0, 1)),
    (9, (0, 3)),
    (25, (3, 4)),
    (Fraction(1, 2), (Fraction(1, 2), Fraction(1, 2))),
    (0, (0, 0)),
])
def test_two_squares(q, expected):
    assert sum_of_two_squares(q) == expected


@pytest.mark.parametrize('q', [3, -1, 21, Fraction(1, 3), Fraction(7, 2)])
def test_not_two_squares(q):
    assert sum_of_two_squares(q) is None


def test_two_squares_exhaustive():
    values = [v for v in range(-10, 11) if v]
    products = {a * b * c * d for a, b, c, d in product(values, repeat=4)}
    squares = {a * a + b * b for a in range(200) for b in range(200)}
    for q in sorted(products):
        found = sum_of_two_squares(q)
        if q < 0 or q not in squares:
            assert found is None, q
        else:
            alpha, beta = found
            assert alpha ** 2 + beta ** 2 == q
            assert 0 <= alpha <= beta


@pytest.mark.parametrize('p', [2, 5, 13, 97, 1009])
def test_cornacchia(p):
    a, b = _cornacchia(p)
    assert a * a + b * b == p


def test_cornacchia_rejects_3_mod_4():
    with pytest.raises(ValidationError):
        _cornacchia(7)
