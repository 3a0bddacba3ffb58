import intake
import pandas as pd
import pytest

from coxring.sources import HilbertBasisSource, TorsorPointsSource
from coxring.torsor import param_enumerate
from .util import (chatelet, verify_datasource_interface,  # noqa: F401
                   verify_plugin_interface)


@pytest.mark.parametrize('plugin', [HilbertBasisSource, TorsorPointsSource])
def test_plugin_interface(plugin):
    verify_plugin_interface(plugin)


def test_hilbert_source():
    s = HilbertBasisSource(ring='dp4', subgroup='H', metadata={})
    verify_datasource_interface(s)
    disc = s.discover()
    assert list(disc['dtype'])[:9] == ['eta%d' % k for k in range(1, 10)]
    assert disc['shape'] == (8, 10)
    df = s.read()
    assert 'eta3*eta5^2*eta8' in set(df['image'])
    assert (df[['eta1', 'eta2']].sum(axis=1) <= 1).all()


def test_hilbert_source_empty():
    with HilbertBasisSource(ring='p1xp1', subgroup='antidiagonal') as s:
        df = s.read()
        assert len(df) == 0
        assert list(df.columns) == ['x0', 'x1', 'y0', 'y1', 'image']


def test_torsor_source_partitions(chatelet):
    s = TorsorPointsSource(scheme='chatelet', height=2, npartitions=2,
                           metadata={})
    disc = s.discover()
    assert list(disc['dtype']) == ['X', 'Y', 'T', 'U', 'V',
                                   'x0', 'x1', 'x2', 'x3', 'x4']
    assert s.npartitions == 2
    data = s.read()
    assert len(data) == len(param_enumerate(
        chatelet.param_schemes['chatelet'], 2))
    part1, part2 = s.read_partition(0), s.read_partition(1)
    assert (part1['X'] <= 0).all() and (part2['X'] > 0).all()
    assert data.equals(pd.concat([part1, part2], ignore_index=True))
    assert data.equals(pd.concat(s.read_chunked(), ignore_index=True))


def test_torsor_source_divisions():
    s = TorsorPointsSource(scheme='chatelet', height=1,
                           divisions=[-1, 0, 1, 2])
    assert s.discover()['npartitions'] == 3
    assert set(s.read_partition(1)['X']) <= {0}


def test_discovery():
    if 'cox_torsor' not in intake.registry:
        pytest.skip('package entry points are not installed')
    assert intake.registry['cox_torsor'].name == 'cox_torsor'
    assert intake.registry['cox_hilbert'].name == 'cox_hilbert'
