"""
Core module for cusp-approx

Exact ring arithmetic, Moebius maps and result records.
"""

from cuspapprox.core.quadint import QuadInt, RingSpec
from cuspapprox.core.moebius import BoundaryPoint, Horoball, MoebiusMap, UpperPoint
from cuspapprox.core.result import FordComplex, GoodSequence, HurwitzResult, OracleResult

__all__ = [
    "QuadInt",
    "RingSpec",
    "BoundaryPoint",
    "Horoball",
    "MoebiusMap",
    "UpperPoint",
    "FordComplex",
    "GoodSequence",
    "HurwitzResult",
    "OracleResult",
]
