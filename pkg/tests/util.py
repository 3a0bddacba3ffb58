from fractions import Fraction

import pytest

from coxring.document import load_fixture
from coxring.polyalg import Polynomial


def verify_plugin_interface(plugin):
    """Assert types of plugin attributes."""
    assert isinstance(plugin.version, str)
    assert isinstance(plugin.container, str)
    assert isinstance(plugin.partition_access, bool)


def verify_datasource_interface(source):
    """Assert presence of datasource attributes."""
    for attr in ['container', 'description', 'datashape', 'dtype', 'shape',
                 'npartitions', 'metadata']:
        assert hasattr(source, attr)

    for method in ['discover', 'read', 'read_chunked', 'read_partition',
                   'to_dask', 'close']:
        assert hasattr(source, method)


@pytest.fixture(scope='module')
def dp4():
    """Quartic del Pezzo document: Cox ring over Q(i), Galois action,
    descended ring and parameter scheme."""
    return load_fixture('dp4')


@pytest.fixture(scope='module')
def chatelet():
    return load_fixture('chatelet')


@pytest.fixture(scope='module')
def p1xp1():
    return load_fixture('p1xp1')


def chatelet_injective_relation(names):
    """``X^2 + Y^2 - T^2 prod(a_j U + b_j V)`` written in the descended
    generators of the Chatelet ring: ``s_``, ``t_`` for the conjugate pair,
    ``T = eta0p*eta0m`` and the two ``eta_jp*eta_jm`` that are kept, which
    determine ``U`` and ``V``."""
    names = list(names)
    m = len(names)

    def var(name):
        return Polynomial.variable(names.index(name), m)

    s, = [n for n in names if n.startswith('s_')]
    t, = [n for n in names if n.startswith('t_')]
    b = {1: 0, 2: -1, 3: -2, 4: -3}
    j, k = [i for i in b if 'eta%dp_eta%dm' % (i, i) in names]
    zj, zk = var('eta%dp_eta%dm' % (j, j)), var('eta%dp_eta%dm' % (k, k))
    # a_j = 1, so z_j = U + b_j V
    delta = Fraction(1, b[k] - b[j])
    u = (zj * b[k] - zk * b[j]) * delta
    v = (zk - zj) * delta
    product = var('eta0p_eta0m') ** 2
    for i in sorted(b):
        product = product * (u + v * b[i])
    return var(s) ** 2 + var(t) ** 2 - product
