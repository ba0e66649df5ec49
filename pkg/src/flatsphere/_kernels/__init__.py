"""Kernel selection: compiled extension when available, pure Python otherwise.

Set FLATSPHERE_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the parity tests).
"""
import os

from . import _ref

if os.environ.get("FLATSPHERE_PURE_PYTHON"):
    _impl = _ref
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _ref

IMPLEMENTATION = _impl.IMPLEMENTATION
trace = _impl.trace
segment_events = _impl.segment_events
saddle_search = _impl.saddle_search

STATUS_BUDGET = _ref.STATUS_BUDGET
STATUS_CONE_POINT = _ref.STATUS_CONE_POINT
STATUS_CAP = _ref.STATUS_CAP
STATUS_BOUNDARY = _ref.STATUS_BOUNDARY

pure = _ref
