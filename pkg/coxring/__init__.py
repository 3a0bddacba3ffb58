from ._version import __version__

import intake  # Import this first to avoid circular imports during discovery.
del intake
from .sources import HilbertBasisSource, TorsorPointsSource
