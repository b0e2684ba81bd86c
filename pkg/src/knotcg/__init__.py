"""Exact Casson-Gordon slice obstructions for combinations of iterated torus cables."""

from __future__ import annotations

__version__ = "0.1.0"
