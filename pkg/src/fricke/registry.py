"""Bundled registry of reference parameter sets used by the acceptance suite."""

from __future__ import annotations

import json
from importlib import resources


def known_cases() -> dict:
    """Load the bundled registry of reference cases."""
    path = resources.files("fricke").joinpath("data/cases.json")
    return json.loads(path.read_text(encoding="ascii"))
