"""
Exact scalars: rationals and towers of at most two quadratic extensions.

Elements of level ``k`` are pairs ``(a, b)`` of level ``k - 1`` values meaning
``a + b * sqrt(d_k)``. Arithmetic results collapse to the lowest level that
holds them, and a result of level 0 is a plain ``fractions.Fraction``, so
rational coefficients never carry a tower around.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from sympy.ntheory import factorint, sqrt_mod

from .exceptions import ComputationAborted, ValidationError

logger = logging.getLogger(__name__)

MAX_DEPTH = 2
ROOT_SYMBOLS = ('i', 'j')


def _zero(k):
    x = Fraction(0)
    for _ in range(k):
        x = (x, Fraction(0))
    return x


def _one(k):
    x = Fraction(1)
    for _ in range(k):
        x = (x, Fraction(0))
    return x


def _lift(x, j, k):
    while j < k:
        x = (x, _zero(j))
        j += 1
    return x


def _is_zero(x, k):
    if k == 0:
        return x == 0
    return _is_zero(x[0], k - 1) and _is_zero(x[1], k - 1)


def _add(x, y, k):
    if k == 0:
        return x + y
    return _add(x[0], y[0], k - 1), _add(x[1], y[1], k - 1)


def _neg(x, k):
    if k == 0:
        return -x
    return _neg(x[0], k - 1), _neg(x[1], k - 1)


def _mul(x, y, k, rads):
    if k == 0:
        return x * y
    (a, b), (c, e) = x, y
    d = rads[k - 1]
    return (_add(_mul(a, c, k - 1, rads),
                 _mul(_mul(b, e, k - 1, rads), d, k - 1, rads), k - 1),
            _add(_mul(a, e, k - 1, rads), _mul(b, c, k - 1, rads), k - 1))


def _inv(x, k, rads):
    if k == 0:
        if x == 0:
            raise ZeroDivisionError('division by zero in a field tower')
        return 1 / x
    a, b = x
    d = rads[k - 1]
    norm = _add(_mul(a, a, k - 1, rads),
                _neg(_mul(_mul(b, b, k - 1, rads), d, k - 1, rads), k - 1),
                k - 1)
    ni = _inv(norm, k - 1, rads)
    return _mul(a, ni, k - 1, rads), _neg(_mul(b, ni, k - 1, rads), k - 1)


def _conj(x, k, level, rads):
    if k < level:
        return x
    if k == level:
        return x[0], _neg(x[1], k - 1)
    d = rads[k - 1]
    if _conj(d, k - 1, level, rads) != d:
        raise ValidationError('conjugation at level %d does not fix the '
                              'radicand of level %d' % (level, k))
    return _conj(x[0], k - 1, level, rads), _conj(x[1], k - 1, level, rads)


def _normalize(x, k):
    while k > 0 and _is_zero(x[1], k - 1):
        x = x[0]
        k -= 1
    return x, k


def _is_rational_square(q):
    q = Fraction(q)
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _rational_sqrt(q):
    return Fraction(isqrt(q.numerator), isqrt(q.denominator))


@dataclass(frozen=True)
class FieldTower:
    """
    A tower Q = K_0 in K_1 in ... in K_n, K_k = K_{k-1}(sqrt(d_k))

    Parameters
    ----------
    radicands: sequence
        ``d_1, ..., d_n``; ``d_1`` is rational, ``d_2`` may be a rational or a
        :class:`TowerElement` of level 1. Each must be a non-square in the
        previous level.
    """
    radicands: tuple = ()

    def __post_init__(self):
        if len(self.radicands) > MAX_DEPTH:
            raise ValidationError('towers deeper than %d are not supported'
                                  % MAX_DEPTH)
        rads = []
        for k, r in enumerate(self.radicands):
            if isinstance(r, TowerElement):
                if r.level > k:
                    raise ValidationError('radicand %d lives above its level'
                                          % (k + 1))
                rads.append(_lift(r.raw, r.level, k))
            elif isinstance(r, tuple):
                rads.append(r)
            else:
                rads.append(_lift(Fraction(r), 0, k))
        object.__setattr__(self, 'radicands', tuple(rads))
        for k in range(len(rads)):
            if self._is_square(rads[k], k):
                raise ValidationError('radicand of level %d is a square in '
                                      'the level below' % (k + 1))

    @property
    def depth(self):
        return len(self.radicands)

    def _is_square(self, x, k):
        if k == 0:
            return _is_rational_square(x)
        # k == 1: x = a + b sqrt(d1)
        a, b = x
        d1 = self.radicands[0]
        if b == 0:
            return _is_rational_square(a) or _is_rational_square(a / d1)
        norm = a * a - b * b * d1
        if not _is_rational_square(norm):
            return False
        s = _rational_sqrt(norm)
        return any(_is_rational_square((a + sign * s) / 2)
                   for sign in (1, -1))

    def root(self, level):
        """``sqrt(d_level)`` as an element."""
        if not 1 <= level <= self.depth:
            raise ValueError('level %d out of range for a tower of depth %d'
                             % (level, self.depth))
        return TowerElement(self, level, (_zero(level - 1), _one(level - 1)))

    def element(self, value):
        """Coerce an int, Fraction or element of this tower."""
        return coerce(value, self)

    def __str__(self):
        if not self.radicands:
            return 'Q'
        parts = []
        for k, r in enumerate(self.radicands):
            parts.append('%s^2 = %s' % (ROOT_SYMBOLS[k], _render(self, r, k)))
        return 'Q(%s)' % ', '.join(parts)


def gaussian_tower():
    """The tower Q(i)."""
    return FieldTower((-1,))


class TowerElement(object):
    """
    Element ``a + b * sqrt(d_level)`` of a :class:`FieldTower`

    Instances are immutable. Arithmetic accepts ints, Fractions and elements
    of the same tower and returns a Fraction whenever the result is rational.
    """
    __slots__ = ('tower', 'level', 'raw')

    def __init__(self, tower, level, raw):
        if level > tower.depth:
            raise ValueError('level %d exceeds tower depth %d'
                             % (level, tower.depth))
        raw, level = _normalize(raw, level)
        object.__setattr__(self, 'tower', tower)
        object.__setattr__(self, 'level', level)
        object.__setattr__(self, 'raw', raw)

    def __setattr__(self, key, value):
        raise AttributeError('TowerElement is immutable')

    @property
    def a(self):
        return _wrap(self.tower, self.raw[0], self.level - 1) \
            if self.level else self.raw

    @property
    def b(self):
        return _wrap(self.tower, self.raw[1], self.level - 1) \
            if self.level else Fraction(0)

    def _pair(self, other):
        if isinstance(other, TowerElement):
            if other.tower != self.tower:
                raise ValidationError('elements of %s and %s cannot be '
                                      'combined' % (self.tower, other.tower))
            k = max(self.level, other.level)
            return k, _lift(self.raw, self.level, k), \
                _lift(other.raw, other.level, k)
        if isinstance(other, (int, Fraction)):
            k = self.level
            return k, self.raw, _lift(Fraction(other), 0, k)
        return None

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        k, x, y = p
        return _wrap(self.tower, _add(x, y, k), k)

    __radd__ = __add__

    def __neg__(self):
        return _wrap(self.tower, _neg(self.raw, self.level), self.level)

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        k, x, y = p
        return _wrap(self.tower, _add(x, _neg(y, k), k), k)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        k, x, y = p
        return _wrap(self.tower, _mul(x, y, k, self.tower.radicands), k)

    __rmul__ = __mul__

    def inverse(self):
        return _wrap(self.tower,
                     _inv(self.raw, self.level, self.tower.radicands),
                     self.level)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, TowerElement):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        out = Fraction(1)
        for _ in range(abs(n)):
            out = base * out
        return out

    def __eq__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        k, x, y = p
        return x == y

    def __hash__(self):
        if self.level == 0:
            return hash(self.raw)
        return hash((self.tower, self.level, self.raw))

    def __bool__(self):
        return not _is_zero(self.raw, self.level)

    def __repr__(self):
        return 'TowerElement(%s)' % render_scalar(self)

    def __str__(self):
        return render_scalar(self)


def _wrap(tower, raw, level):
    raw, level = _normalize(raw, level)
    if level == 0:
        return raw
    return TowerElement(tower, level, raw)


def coerce(value, tower=None):
    """Return ``value`` as a Fraction or a :class:`TowerElement`."""
    if isinstance(value, TowerElement):
        if tower is not None and value.tower != tower:
            raise ValidationError('element of %s used in %s'
                                  % (value.tower, tower))
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise ValidationError('not an exact scalar: %r' % (value,))


def level_of(x):
    return x.level if isinstance(x, TowerElement) else 0


def is_rational(x):
    return not isinstance(x, TowerElement)


def conjugate(x, level):
    """
    Conjugate ``x`` at ``level``: negate the ``sqrt(d_level)`` coordinate

    Rational values are fixed. Raises ValueError if ``level`` is outside the
    tower of ``x``.
    """
    if level < 1:
        raise ValueError('conjugation levels start at 1, got %d' % level)
    if not isinstance(x, TowerElement):
        return Fraction(x)
    if level > x.tower.depth:
        raise ValueError('level %d out of range for a tower of depth %d'
                         % (level, x.tower.depth))
    return _wrap(x.tower, _conj(x.raw, x.level, level, x.tower.radicands),
                 x.level)


def to_pairs(x):
    """Nested ``[numerator, denominator]`` pairs, one nesting per level."""
    if not isinstance(x, TowerElement):
        x = Fraction(x)
        return [x.numerator, x.denominator]

    def nest(raw, k):
        if k == 0:
            return [raw.numerator, raw.denominator]
        return [nest(raw[0], k - 1), nest(raw[1], k - 1)]
    return nest(x.raw, x.level)


def from_pairs(data, tower):
    """Inverse of :func:`to_pairs`."""
    def depth(d):
        return 0 if isinstance(d[0], int) else 1 + depth(d[0])

    def unnest(d, k):
        if k == 0:
            return Fraction(d[0], d[1])
        return unnest(d[0], k - 1), unnest(d[1], k - 1)
    k = depth(data)
    return _wrap(tower, unnest(data, k), k)


def _terms(raw, k):
    """Flatten to ``{basis monomial: Fraction}`` over products of roots."""
    if k == 0:
        return {(): raw} if raw else {}
    out = dict(_terms(raw[0], k - 1))
    for mono, c in _terms(raw[1], k - 1).items():
        out[mono + (ROOT_SYMBOLS[k - 1],)] = c
    return out


def _fmt_rational(q):
    return str(q.numerator) if q.denominator == 1 else '%d/%d' % (
        q.numerator, q.denominator)


def _render(tower, raw, k):
    terms = _terms(raw, k)
    if not terms:
        return '0'
    parts = []
    for mono in sorted(terms, key=lambda m: (len(m), m)):
        c = terms[mono]
        s = _fmt_rational(abs(c))
        if mono:
            s = ('' if abs(c) == 1 else s) + mono[0]
            s += ''.join('*1' + r for r in mono[1:])
        parts.append(('-' if c < 0 else '+', s))
    first_sign, first = parts[0]
    text = ('-' if first_sign == '-' else '') + first
    for sign, s in parts[1:]:
        text += sign + s
    return text


def render_scalar(x):
    """Render in the document grammar, e.g. ``3``, ``-1/2``, ``(3+2i)``."""
    if not isinstance(x, TowerElement):
        return _fmt_rational(Fraction(x))
    return '(%s)' % _render(x.tower, x.raw, x.level)


def _cornacchia(p):
    """``(a, b)`` with ``a^2 + b^2 == p`` for a prime 2 or ``1 mod 4``."""
    if p == 2:
        return 1, 1
    r = sqrt_mod(p - 1, p)
    if r is None:
        raise ValidationError('%d is not 2 or a prime 1 mod 4' % p)
    r0, r1 = p, r
    while r1 * r1 > p:
        r0, r1 = r1, r0 % r1
    a = r1
    b = isqrt(p - a * a)
    if a * a + b * b != p:
        raise ComputationAborted('Cornacchia step failed for %d' % p)
    return a, b


def sum_of_two_squares(q):
    """
    Write a rational as a sum of two rational squares

    Parameters
    ----------
    q: int or Fraction

    Returns
    -------
    (alpha, beta) of Fractions with ``alpha**2 + beta**2 == q`` and
    ``0 <= alpha <= beta``, or None when ``q`` is negative or some prime
    ``3 mod 4`` divides ``numerator * denominator`` to an odd power.
    """
    q = Fraction(q)
    if q < 0:
        return None
    if q == 0:
        return Fraction(0), Fraction(0)
    n = q.numerator * q.denominator
    x, y = 1, 0
    for p, e in sorted(factorint(n).items()):
        if p % 4 == 3:
            if e % 2:
                logger.debug('%s is not a sum of two squares: %d^%d', q, p, e)
                return None
            x, y = x * p ** (e // 2), y * p ** (e // 2)
            continue
        a, b = _cornacchia(p)
        for _ in range(e):
            x, y = x * a - y * b, x * b + y * a
    x, y = sorted((abs(x), abs(y)))
    d = q.denominator
    return Fraction(x, d), Fraction(y, d)
