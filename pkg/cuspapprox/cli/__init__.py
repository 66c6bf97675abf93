"""Command-line front end for cusp-approx."""

from cuspapprox.cli.main import main

__all__ = ["main"]
