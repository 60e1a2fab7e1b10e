"""Render synthbench report JSON as charts.

The package reads the report files the benchmark writes (fidelity,
privacy, tradeoff) and knows nothing about how they were computed; the
JSON payloads are the only interface.
"""

from synthcharts.render import (
    load_report,
    render,
    render_fidelity,
    render_privacy,
    render_tradeoff,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "load_report",
    "render",
    "render_fidelity",
    "render_privacy",
    "render_tradeoff",
]
