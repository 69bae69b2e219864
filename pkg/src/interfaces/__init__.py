"""Interfaces package for theta-lab."""

from .runtime_provider import RuntimeProvider

__all__ = ["RuntimeProvider"]
