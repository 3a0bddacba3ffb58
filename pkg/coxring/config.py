"""Default options, optionally overridden by a YAML file."""
import logging
import os

import yaml

logger = logging.getLogger(__name__)

DEFAULTS = {
    'bound': 6,
    'cap': 64,
    'height': 3,
    'height_factor': 4,
    'steps': 2,
    'npartitions': 1,
}

_overrides = None


def _load_overrides():
    global _overrides
    if _overrides is None:
        _overrides = {}
        path = os.environ.get('COXRING_CONFIG')
        if path:
            with open(path) as f:
                data = yaml.safe_load(f) or {}
            unknown = set(data) - set(DEFAULTS)
            if unknown:
                logger.warning('ignoring unknown options in %s: %s', path,
                               ', '.join(sorted(unknown)))
            _overrides = {k: v for k, v in data.items() if k in DEFAULTS}
            logger.debug('loaded option overrides from %s', path)
    return _overrides


def get(name, value=None):
    """Return ``value`` if given, else the configured default for ``name``."""
    if value is not None:
        return value
    return _load_overrides().get(name, DEFAULTS[name])
