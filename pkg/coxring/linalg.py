"""
Exact sparse linear algebra over a field tower.

Vectors are dicts ``{key: coefficient}`` with comparable keys. An
:class:`Echelon` keeps its rows in reduced row-echelon form with the largest
key of each row as pivot, so reducing a vector is a single pass.
"""
import logging
from fractions import Fraction

logger = logging.getLogger(__name__)


def _axpy(target, scale, row):
    """``target -= scale * row`` in place, dropping zeros."""
    for k, c in row.items():
        v = target.get(k, 0) - scale * c
        if v:
            target[k] = v
        else:
            target.pop(k, None)


class Echelon(object):
    """
    Incrementally built reduced row-echelon basis of sparse vectors

    Rows are indexed by their pivot (largest key) and scaled so the pivot
    coefficient is 1; no pivot key occurs in another row.
    """

    def __init__(self, vectors=()):
        self.rows = {}
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return sorted(self.rows)

    def reduce(self, vector):
        """Remainder of ``vector`` modulo the span; zero means contained."""
        v = {k: c for k, c in vector.items() if c}
        for key in [k for k in v if k in self.rows]:
            c = v.get(key)
            if c:
                _axpy(v, c, self.rows[key])
        return v

    def contains(self, vector):
        return not self.reduce(vector)

    def add(self, vector):
        """Add ``vector`` to the span; return its new pivot or None."""
        v = self.reduce(vector)
        if not v:
            return None
        pivot = max(v)
        lead = v[pivot]
        if lead != 1:
            inv = 1 / lead
            v = {k: c * inv for k, c in v.items()}
        for row in self.rows.values():
            c = row.get(pivot)
            if c:
                _axpy(row, c, v)
        self.rows[pivot] = v
        return pivot

    def basis(self):
        """Rows in increasing pivot order."""
        return [dict(self.rows[k]) for k in self.pivots]


def rref(rows, ncols):
    """
    Dense reduced row-echelon form over the rationals

    Parameters
    ----------
    rows: list of sequences of numbers
    ncols: int
        number of columns taking part in pivoting; further entries (an
        augmented right-hand side) are carried along

    Returns
    -------
    reduced: list of lists of Fraction (zero rows dropped)
    pivots: list of int, the pivot column of each reduced row
    consistent: bool, False when a zero row has a nonzero augmented part
    """
    m = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    consistent = not any(any(row[ncols:]) for row in m[r:])
    return m[:r], pivots, consistent


def invert(matrix):
    """Inverse of a square matrix of field elements (Gauss-Jordan)."""
    n = len(matrix)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        p = next((i for i in range(col, n) if m[i][col]), None)
        if p is None:
            raise ZeroDivisionError('matrix is singular')
        m[col], m[p] = m[p], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return [row[n:] for row in m]
