"""
Command-line front end: split, factor, solve, analyze and verify.
"""

from .app import main
from .manifest import Command, RunManifest

__all__ = [
    'main',
    'Command',
    'RunManifest',
]
