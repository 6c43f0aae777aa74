"""Chaotic and entangled light through dispersive media."""

import json

from ._core import *  # noqa: F401,F403
from ._core import run_scenario as _run_scenario

__all__ = [name for name in dir() if not name.startswith("_")] + ["run"]


def run(scenario, out_dir, **config):
    """Run a CLI scenario with config keys given as nested dicts; returns the summary."""
    return json.loads(_run_scenario(scenario, json.dumps(config), str(out_dir)))
