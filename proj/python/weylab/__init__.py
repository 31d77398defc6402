"""Einstein-Weyl spaces, monopoles and selfdual 4-metrics.

Thin wrapper over the C++ library: requests and reports are plain dicts with
the same layout as the JSON documents of the ``weylab`` command.
"""

import json

from ._core import DomainError, Error, UsageError, __version__
from . import _core

__all__ = ["Error", "UsageError", "DomainError", "__version__", "run_check", "build", "catalog", "ew_residual"]


def run_check(command, request, workers=0):
    """Run check-ew, check-monopole, check-metric or roundtrip; returns the report."""
    return json.loads(_core.run_check(command, json.dumps(request), workers))


def build(request):
    """Metric bundle document for a build request."""
    return json.loads(_core.build(json.dumps(request)))


def catalog():
    return json.loads(_core.catalog())


def ew_residual(space, point, **params):
    """Einstein-Weyl residual of a catalog space at one base point."""
    return _core.ew_residual(space, {k: str(v) for k, v in params.items()}, list(point))
