"""Bundled example frames."""
from __future__ import annotations

from pathlib import Path

from .frame import Frame
from .frameio import read_frame

_DATA = Path(__file__).resolve().parent / "data"

#: Greedy flipping halves the average coherence of this frame; see README.
FLIP_DEMO_PATTERN = "+-+--++-++"


def flip_demo_path() -> Path:
    """Path of the bundled 5 x 10 sign frame used in docs and tests."""
    return _DATA / "flip_demo_5x10.frame"


def load_flip_demo() -> Frame:
    """The bundled 5 x 10 +/-(1/sqrt 5) frame whose average coherence drops
    from about 0.3778 to about 0.1556 under greedy sign flipping."""
    return read_frame(flip_demo_path())
