"""Segment outlier and unusual event detection for sensor networks."""

import json

from ._soue import (
    ConfigError,
    InputError,
    __version__,
    ask_correlated,
    detect_json,
    dtw_align,
    generate,
    geo_distance,
    plan_windows,
    run_cli,
    trend_similarity,
)


def detect(nodes, sensors, observations, rules="", **kwargs):
    """Runs detection on CSV text and returns the report as a dict."""
    return json.loads(detect_json(nodes, sensors, observations, rules, **kwargs))


__all__ = [
    "ConfigError",
    "InputError",
    "__version__",
    "ask_correlated",
    "detect",
    "detect_json",
    "dtw_align",
    "generate",
    "geo_distance",
    "plan_windows",
    "run_cli",
    "trend_similarity",
]
