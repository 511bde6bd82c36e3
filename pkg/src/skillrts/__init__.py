"""Skill-grounded planning on a deterministic grid RTS."""

__version__ = "0.1.0"
