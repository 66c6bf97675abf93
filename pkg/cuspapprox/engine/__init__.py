"""
Engine module for cusp-approx

Group enumeration, the cut-locus complex, approximation sequences, Hurwitz
estimates and the torus moduli computations.
"""

from cuspapprox.engine.groups import GroupSpec, enumerate_by_c
from cuspapprox.engine.ford import build_complex, ceiling
from cuspapprox.engine.approx import good_sequence, reconstruct
from cuspapprox.engine.hurwitz import height_spectrum, hurwitz_estimate
from cuspapprox.engine.torus import FNPoint, fn_reduce, h2, torus_oracle

__all__ = [
    "GroupSpec",
    "enumerate_by_c",
    "build_complex",
    "ceiling",
    "good_sequence",
    "reconstruct",
    "height_spectrum",
    "hurwitz_estimate",
    "FNPoint",
    "fn_reduce",
    "h2",
    "torus_oracle",
]
