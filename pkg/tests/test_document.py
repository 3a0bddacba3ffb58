import pytest

from coxring.document import (Document, find_fixture, fixture_names,
                              fixture_path, load_fixture, open_document,
                              parse_document, parse_polynomial, parse_scalar,
                              serialize_document)
from coxring.exceptions import (HomogeneityError, ParseError,
                                UnresolvedReferenceError, ValidationError)
from coxring.numfield import gaussian_tower
from coxring.polyalg import Polynomial
from .util import dp4  # noqa: F401

RING = """\
groups:
  pic: {free_rank: 2}
rings:
  r:
    group: %s
    variables: [x0, x1, y0, y1]
    degrees: [[1, 0], [1, 0], [0, 1], [0, 1]]
    relations:
      - "%s"
"""


def test_fixtures(dp4):
    assert fixture_names() == ['chatelet', 'dp4', 'p1xp1']
    R = dp4.rings['dp4']
    assert R.nvars == 9
    assert R.tower.depth == 1
    assert dp4.ring_of('dp4_galois') is R
    assert dp4.names()['param_schemes'] == ['dp4']
    ps = dp4.param_schemes['dp4']
    assert ps.presentation is dp4.rings['dp4_xi']
    assert ps.ample_degree == dp4.degrees['ample_xi']


def test_small_document():
    doc = parse_document(RING % ('pic', 'x0*y1 - x1*y0'))
    R = doc.rings['r']
    assert R.names == ('x0', 'x1', 'y0', 'y1')
    assert R.relations[0].render(R.names) == 'x0*y1 - x1*y0'


def test_empty_document():
    doc = parse_document('')
    assert doc == Document()
    assert serialize_document(doc) == 'format: 1\n'


def test_parse_error_location():
    with pytest.raises(ParseError) as e:
        parse_document(RING % ('pic', 'x0 + ? y0'))
    assert e.value.line == 9
    assert e.value.column == 15
    assert str(e.value).startswith('line 9, column 15')


def test_yaml_syntax_error():
    with pytest.raises(ParseError) as e:
        parse_document('rings: [\n')
    assert e.value.line is not None


def test_unresolved_reference():
    with pytest.raises(UnresolvedReferenceError):
        parse_document(RING % ('nope', 'x0*y1 - x1*y0'))
    with pytest.raises(UnresolvedReferenceError):
        parse_document(RING % ('pic', 'x0*y1 - x1*y0') + """\
actions:
  swap:
    ring: r
    orders: [2]
    generators:
      - permutation: {x0: z0}
""")


def test_homogeneity():
    with pytest.raises(HomogeneityError) as e:
        parse_document(RING % ('pic', 'x0 + y0'))
    assert e.value.degrees


def test_validation():
    with pytest.raises(ValidationError):
        parse_document('unknown: {}\n')
    with pytest.raises(ValidationError):
        parse_document('format: 2\n')
    with pytest.raises(ValidationError):
        fixture_path('nope')


@pytest.mark.parametrize('name', ['chatelet', 'dp4', 'p1xp1'])
def test_serialization(name):
    text = serialize_document(load_fixture(name))
    again = parse_document(text)
    assert serialize_document(again) == text
    assert sorted(again.rings) == sorted(load_fixture(name).rings)


def test_parse_polynomial():
    tower = gaussian_tower()
    i = tower.root(1)
    x = Polynomial.variable(0, 1)
    assert parse_polynomial('2i*x', ['x'], tower) == x * (2 * i)
    assert parse_polynomial('-(x - 1)^2', ['x']) == -(x - 1) ** 2
    assert parse_scalar('1/2') == parse_scalar('2/4')
    with pytest.raises(ParseError):
        parse_polynomial('2 i', [], tower)
    with pytest.raises(ParseError):
        parse_polynomial('j', [], tower)
    with pytest.raises(ParseError):
        parse_polynomial('1/0', [])
    with pytest.raises(ParseError):
        parse_polynomial('', ['x'])


def test_open_document():
    assert find_fixture('chatelet_inj') == 'chatelet'
    assert 'dp4_galois' in open_document(entries=[None, 'dp4_galois']).actions
    assert open_document() == Document()
    with pytest.raises(UnresolvedReferenceError):
        find_fixture('nope')
