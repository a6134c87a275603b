"""Finite-set models of the pretopos axioms, with exhaustive verification."""

from .core import Certificate, FinMap, FinSet, compose, identity
from .dsl import Workspace, parse, render
from .commands import run_command
from .suites import verify_piw_pretopos

__all__ = [
    "Certificate",
    "FinMap",
    "FinSet",
    "Workspace",
    "compose",
    "identity",
    "parse",
    "render",
    "run_command",
    "verify_piw_pretopos",
]

__version__ = "0.1.0"
