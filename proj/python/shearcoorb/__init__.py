"""Python bindings for the shearcoorb core library."""

import json as _json
from pathlib import Path as _Path

from ._shearcoorb import Session, schur_bound_check, three_way_young_check, young_check

__all__ = [
    "Session",
    "load_session",
    "young_check",
    "three_way_young_check",
    "schur_bound_check",
]


def load_session(config_path, workers=1):
    """Build a Session from a JSON config file."""
    text = _Path(config_path).read_text()
    _json.loads(text)  # fail early with a clear message on broken JSON
    return Session(text, workers)
