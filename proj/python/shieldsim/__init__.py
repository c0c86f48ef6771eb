"""Exact dynamics of long-range spin-1/2 chains."""

import json

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_experiment_text


def run_experiment(text, threads=1):
    """Run an experiment from config text and return its tables and summary."""
    out = run_experiment_text(text, threads)
    out["summary"] = json.loads(out.pop("summary_json"))
    return out
