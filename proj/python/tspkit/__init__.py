"""Time-stretched-pulse measurement toolkit."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, analyze_report_json, classify_json  # noqa: F401


def analyze_report(decomposition, **kwargs):
    """Acoustic report as a dict."""
    return _json.loads(analyze_report_json(decomposition, **kwargs))


def classify(report=None, **kwargs):
    """Classification result as a dict; `report` is a report dict or None."""
    report_json = _json.dumps(report) if report is not None else None
    return _json.loads(classify_json(report_json, **kwargs))
