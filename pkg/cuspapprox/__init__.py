"""
cusp-approx - Diophantine Approximation in Cusped Hyperbolic Orbifolds

Exact arithmetic in Euclidean imaginary quadratic rings, Ford complexes of
the cusp, good approximating sequences, Hurwitz constants of the modular
and Bianchi groups, and the Hurwitz function on once-punctured tori.
"""

__version__ = "0.1.0"

from cuspapprox.core.quadint import QuadInt, RingSpec
from cuspapprox.core.moebius import BoundaryPoint, MoebiusMap
from cuspapprox.engine.groups import GroupSpec
from cuspapprox.engine.approx import good_sequence
from cuspapprox.engine.ford import build_complex
from cuspapprox.engine.hurwitz import hurwitz_estimate
from cuspapprox.engine.torus import FNPoint, h2

__all__ = [
    "QuadInt",
    "RingSpec",
    "BoundaryPoint",
    "MoebiusMap",
    "GroupSpec",
    "good_sequence",
    "build_complex",
    "hurwitz_estimate",
    "FNPoint",
    "h2",
]
