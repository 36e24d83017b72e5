"""Queue layouts of planar and bounded-genus embedded graphs."""

from __future__ import annotations

__version__ = "0.1.0"
