from math import ceil

from intake.source import base
import numpy as np
import pandas as pd

from . import __version__, config
from .document import open_document
from .lattice import FiberMonoid, hilbert_basis
from .polyalg import render_monomial
from .torsor import irrelevant_ideal, param_enumerate, \
    param_project_and_verify


class HilbertBasisSource(base.DataSource):
    """
    Hilbert basis of a Veronese fiber monoid as a dataframe

    Parameters
    ----------
    ring: str
        ring name in the document
    subgroup: str
        subgroup name in the document
    fixture: str or None
        bundled fixture to read; by default the one defining ``ring``
    document: str or None
        path of a YAML document, used instead of a fixture

    Further options:

        cap: int (64)
            total-degree safety cap of the completion
    """
    name = 'cox_hilbert'
    version = __version__
    container = 'dataframe'
    partition_access = False

    def __init__(self, ring, subgroup, fixture=None, document=None,
                 metadata=None, **kwargs):
        kwargs = kwargs.copy()
        self._ring_name = ring
        self._subgroup_name = subgroup
        self._fixture = fixture
        self._document = document
        self._cap = config.get('cap', kwargs.pop('cap', None))
        self._dataframe = None
        super(HilbertBasisSource, self).__init__(metadata=metadata)

    def _get_schema(self):
        if self._dataframe is None:
            doc = open_document(self._fixture, self._document,
                                [self._ring_name])
            R = doc.get('rings', self._ring_name)
            H = doc.get('subgroups', self._subgroup_name)
            basis = hilbert_basis(FiberMonoid(R.degree_matrix, H), self._cap)
            df = pd.DataFrame([list(e) for e in basis],
                              columns=list(R.names), dtype='int64')
            df['image'] = [render_monomial(e, R.names) for e in basis]
            self._dataframe = df
        dtype = {k: str(v) for k, v
                 in self._dataframe.dtypes.to_dict().items()}
        return base.Schema(datashape=None,
                           dtype=dtype,
                           shape=self._dataframe.shape,
                           npartitions=1,
                           extra_metadata={})

    def _get_partition(self, _):
        self._get_schema()
        return self._dataframe

    def read(self):
        return self._get_partition(0)

    def _close(self):
        self._dataframe = None


class TorsorPointsSource(base.DataSource):
    """
    Integral points of a torsor model and their images on the surface

    The range ``[-height, height]`` of the first parameter is split into
    partitions; each partition enumerates the points whose first coordinate
    falls in it.

    Parameters
    ----------
    scheme: str
        parameter scheme name in the document
    height: int (3)
        bound on the absolute value of every parameter
    fixture: str or None
        bundled fixture to read; by default the one defining ``scheme``
    document: str or None
        path of a YAML document, used instead of a fixture

    Further options:

        npartitions: int (1)
            Number of partitions of the first coordinate range
        divisions: list of values
            If given, use these as partition boundaries - and therefore ignore
            npartitions
    """
    name = 'cox_torsor'
    version = __version__
    container = 'dataframe'
    partition_access = True

    def __init__(self, scheme, height=None, fixture=None, document=None,
                 metadata=None, **kwargs):
        kwargs = kwargs.copy()
        self._scheme_name = scheme
        self._height = config.get('height', height)
        self._fixture = fixture
        self._document = document
        self._npartitions = config.get('npartitions',
                                       kwargs.pop('npartitions', None))
        self._divisions = kwargs.pop('divisions', None)
        self._scheme = None
        self._irrelevant = None
        super(TorsorPointsSource, self).__init__(metadata=metadata)

    def _get_schema(self):
        if self._scheme is None:
            doc = open_document(self._fixture, self._document,
                                [self._scheme_name])
            self._scheme = doc.get('param_schemes', self._scheme_name)
            self._irrelevant = irrelevant_ideal(self._scheme.presentation,
                                                self._scheme.ample_degree)
        if self._divisions is None:
            self._divisions = np.linspace(-self._height, self._height + 1,
                                          self._npartitions + 1)
        columns = self._columns()
        dtype = {k: 'int64' for k in columns}
        return base.Schema(datashape=None,
                           dtype=dtype,
                           shape=(None, len(columns)),
                           npartitions=len(self._divisions) - 1,
                           extra_metadata={})

    def _columns(self):
        return list(self._scheme.presentation.names) + \
            list(self._scheme.coordinate_names)

    def _get_partition(self, i):
        self._get_schema()
        mi, ma = self._divisions[i:i+2]
        first = [v for v in range(int(ceil(mi)), int(ceil(ma)))
                 if -self._height <= v <= self._height and mi <= v < ma]
        tuples = param_enumerate(self._scheme, self._height, first,
                                 self._irrelevant)
        report = param_project_and_verify(self._scheme, tuples)
        return pd.DataFrame(report.records(), columns=self._columns(),
                            dtype='int64')

    def read(self):
        self._get_schema()
        return pd.concat([self._get_partition(i)
                          for i in range(len(self._divisions) - 1)],
                         ignore_index=True)

    def _close(self):
        self._scheme = None
        self._irrelevant = None
