"""
Result Data Structures

Defines data classes for approximation runs, cut-locus complexes, Hurwitz
estimates and torus oracle runs.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple
import json
import math

from cuspapprox.core.moebius import BoundaryPoint, MoebiusMap, UpperPoint
from cuspapprox.core.quadint import QuadInt, RingSpec


def _frac(x: Optional[Fraction]) -> Optional[str]:
    return None if x is None else str(x)


def _unfrac(text: Optional[str]) -> Optional[Fraction]:
    return None if text is None else Fraction(text)


def _pair(values: List[str]) -> Tuple[Fraction, Fraction]:
    return Fraction(values[0]), Fraction(values[1])


@dataclass
class ApproxStep:
    """One term of a good approximating sequence"""
    n: int  # Index, starting at 0
    gamma: MoebiusMap  # γ_n with γ_n(∞) = z_n
    z: BoundaryPoint  # Exact endpoint z_n
    depth: float  # log N(q_n)
    dist: float  # Distance from ξ to z_n modulo translations
    a: QuadInt  # Continued-sequence term a_n
    crossing_t: float  # Height where the vertical line at ξ enters the basin of z_n
    delta: Optional[float] = None  # Δ(γ_n, γ_{n+1}); None for the last step
    dist_sq: Optional[Fraction] = None  # Exact squared distance
    crossing_t_sq: Optional[Fraction] = None
    branch: bool = False  # Exact tie between candidate basins
    tied: List[str] = field(default_factory=list)

    @property
    def q(self) -> QuadInt:
        return self.gamma.c

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return {
            "n": self.n,
            "gamma": self.gamma.to_dict(),
            "z": self.z.to_text(),
            "depth": self.depth,
            "dist": self.dist,
            "a": str(self.a),
            "delta": self.delta,
            "crossing_t": self.crossing_t,
            "branch": self.branch,
            "tied": list(self.tied),
            "dist_sq": _frac(self.dist_sq),
            "crossing_t_sq": _frac(self.crossing_t_sq),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any], ring: RingSpec) -> "ApproxStep":
        return cls(
            n=payload["n"],
            gamma=MoebiusMap.from_dict(payload["gamma"]),
            z=BoundaryPoint.from_text(ring, payload["z"]),
            depth=payload["depth"],
            dist=payload["dist"],
            a=ring.parse(payload["a"]),
            crossing_t=payload["crossing_t"],
            delta=payload.get("delta"),
            dist_sq=_unfrac(payload.get("dist_sq")),
            crossing_t_sq=_unfrac(payload.get("crossing_t_sq")),
            branch=payload.get("branch", False),
            tied=list(payload.get("tied", [])),
        )


@dataclass
class GoodSequence:
    """
    Good approximating sequence of a boundary point.

    stop_reason is "steps" when the requested length was reached, "cusp"
    when ξ is itself a rational point, and "uncertified" when the input
    error radius no longer separates the candidates.
    """
    ring: int
    xi: str  # Exact input as text
    xi_coords: Tuple[Fraction, Fraction]  # Lattice coordinates of ξ
    steps: List[ApproxStep]
    stop_reason: str = "steps"
    xi_radius: float = 0.0
    c_bound: Optional[float] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def terminated_at_cusp(self) -> bool:
        return self.stop_reason == "cusp"

    def z_values(self) -> List[BoundaryPoint]:
        return [s.z for s in self.steps]

    def q_values(self) -> List[QuadInt]:
        return [s.q for s in self.steps]

    def a_values(self) -> List[QuadInt]:
        return [s.a for s in self.steps]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ring": self.ring,
            "xi": self.xi,
            "xi_coords": [str(x) for x in self.xi_coords],
            "xi_radius": self.xi_radius,
            "stop_reason": self.stop_reason,
            "c_bound": self.c_bound,
            "steps": [s.to_dict() for s in self.steps],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "GoodSequence":
        """Inverse of to_dict; extra keys of a CLI artifact are ignored."""
        ring = RingSpec(int(payload["ring"]))
        return cls(
            ring=ring.d,
            xi=payload["xi"],
            xi_coords=_pair(payload["xi_coords"]),
            steps=[ApproxStep.from_dict(s, ring) for s in payload["steps"]],
            stop_reason=payload["stop_reason"],
            xi_radius=payload["xi_radius"],
            c_bound=payload.get("c_bound"),
            metadata=dict(payload.get("metadata", {})),
        )

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def summary(self) -> str:
        lines = [
            "Good Approximating Sequence",
            "=" * 60,
            f"Ring:          d={self.ring}",
            f"xi:            {self.xi}",
            f"Steps:         {len(self.steps)} (stop: {self.stop_reason})",
            "",
            "  n | z_n                      |   depth |     dist | a_n",
            "-" * 60,
        ]
        for s in self.steps:
            lines.append(
                f"{s.n:3d} | {s.z.to_text():24s} | {s.depth:7.4f} | {s.dist:8.2e} | {s.a}"
            )
        return "\n".join(lines)


@dataclass
class CutCell:
    """
    One 2-cell of the cut locus over the fundamental translation cell.

    The cell is the part of the isometric sphere of `dominator` visible
    from ∞; its footprint is a convex polygon in lattice coordinates
    (an interval for the modular group).
    """
    dominator: MoebiusMap
    center: BoundaryPoint  # γ⁻¹(∞), center of the isometric sphere
    radius_sq: Fraction  # 1 / N(c)
    footprint: List[Tuple[Fraction, Fraction]]  # Vertices in lattice coordinates, counterclockwise
    footprint_complex: List[complex]
    summit: UpperPoint
    summit_coords: Tuple[Fraction, Fraction]  # Lattice coordinates of the summit's foot
    summit_height_sq: Fraction
    summit_is_apex: bool
    area: Fraction  # Footprint area in lattice units
    min_height_sq: Fraction  # Lowest point of the cell

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dominator": self.dominator.to_dict(),
            "center": self.center.to_text(),
            "radius": math.sqrt(self.radius_sq),
            "vertices": [[z.real, z.imag] for z in self.footprint_complex],
            "vertices_exact": [[str(u), str(v)] for u, v in self.footprint],
            "summit": [self.summit.z.real, self.summit.z.imag, self.summit.t],
            "summit_is_apex": self.summit_is_apex,
            "area": str(self.area),
            "tangent_centers": ["inf", self.center.to_text()],
            "radius_sq": str(self.radius_sq),
            "summit_exact": [str(x) for x in self.summit_coords],
            "summit_height_sq": str(self.summit_height_sq),
            "min_height_sq": str(self.min_height_sq),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any], ring: RingSpec) -> "CutCell":
        footprint = [_pair(v) for v in payload["vertices_exact"]]
        summit_coords = _pair(payload["summit_exact"])
        summit_sq = Fraction(payload["summit_height_sq"])
        return cls(
            dominator=MoebiusMap.from_dict(payload["dominator"]),
            center=BoundaryPoint.from_text(ring, payload["center"]),
            radius_sq=Fraction(payload["radius_sq"]),
            footprint=footprint,
            footprint_complex=[ring.to_complex(u, v) for u, v in footprint],
            summit=UpperPoint(ring.to_complex(*summit_coords), math.sqrt(summit_sq)),
            summit_coords=summit_coords,
            summit_height_sq=summit_sq,
            summit_is_apex=payload["summit_is_apex"],
            area=Fraction(payload["area"]),
            min_height_sq=Fraction(payload["min_height_sq"]),
        )


@dataclass
class FordComplex:
    """Cut-locus cell complex of the cusp, one fundamental cell of it"""
    ring: int
    c_max: float
    cells: List[CutCell]
    integral_points: List[BoundaryPoint]
    depth_halves: List[float]  # The finite set 𝒟
    sigma_min_height_sq: Fraction
    spheres_used: int = 0

    @property
    def sigma_min_height(self) -> float:
        return math.sqrt(self.sigma_min_height_sq)

    @property
    def approximation_constant(self) -> float:
        """c = 1/(2·min height), the constant of the approximation bound."""
        return 1.0 / (2.0 * self.sigma_min_height)

    def total_area(self) -> Fraction:
        return sum((cell.area for cell in self.cells), Fraction(0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ring": self.ring,
            "c_max": self.c_max,
            "cells": [cell.to_dict() for cell in self.cells],
            "integral_points": [p.to_text() for p in self.integral_points],
            "D": self.depth_halves,
            "sigma_min_height": self.sigma_min_height,
            "sigma_min_height_sq": str(self.sigma_min_height_sq),
            "spheres_used": self.spheres_used,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "FordComplex":
        """Inverse of to_dict; extra keys of a CLI artifact are ignored."""
        ring = RingSpec(int(payload["ring"]))
        return cls(
            ring=ring.d,
            c_max=payload["c_max"],
            cells=[CutCell.from_dict(c, ring) for c in payload["cells"]],
            integral_points=[BoundaryPoint.from_text(ring, p) for p in payload["integral_points"]],
            depth_halves=list(payload["D"]),
            sigma_min_height_sq=Fraction(payload["sigma_min_height_sq"]),
            spheres_used=payload.get("spheres_used", 0),
        )

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def summary(self) -> str:
        return "\n".join([
            "Cut Locus Complex",
            "=" * 60,
            f"Ring:               d={self.ring}",
            f"Spheres (|c|<={self.c_max:g}): {self.spheres_used}",
            f"Cells:              {len(self.cells)}",
            f"Integral points:    {', '.join(p.to_text() for p in self.integral_points)}",
            f"D:                  {self.depth_halves}",
            f"Min height on cut:  {self.sigma_min_height:.12f} (squared {self.sigma_min_height_sq})",
        ])


@dataclass
class ClassRecord:
    """
    Conjugacy class explored by the bounded conjugate search.

    certified is True when min_c reached the global floor |c| = 1, so no
    conjugate can sit higher.
    """
    trace: QuadInt
    best_witness: MoebiusMap
    min_c: float
    max_height: float
    certified: bool
    states: int = 0  # Conjugates visited

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tr": str(self.trace),
            "c": str(self.best_witness.c),
            "min_c": self.min_c,
            "max_height": self.max_height,
            "certified": self.certified,
            "witness": self.best_witness.to_dict(),
            "states": self.states,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "ClassRecord":
        witness = MoebiusMap.from_dict(payload["witness"])
        return cls(
            trace=witness.ring.parse(payload["tr"]),
            best_witness=witness,
            min_c=payload["min_c"],
            max_height=payload["max_height"],
            certified=payload["certified"],
            states=payload.get("states", 0),
        )


@dataclass
class HurwitzResult:
    """
    Min-max estimate of the Hurwitz constant of a Bianchi or modular group.

    exp_h2 is the smallest class maximum height; K_value is 1/(2·exp_h2).
    The inf is sampled (upper bias on exp_h2) while truncated conjugate
    searches bias class maxima low; both are echoed in the bounds.
    """
    ring: int
    c_max: float
    trace_max: float
    word_len: int
    exp_h2: float
    achieving: ClassRecord
    K_lower_evidence: Optional[float]
    classes: List[ClassRecord] = field(default_factory=list)
    elements_scanned: int = 0

    @property
    def K_value(self) -> float:
        return 1.0 / (2.0 * self.exp_h2)

    @property
    def K(self) -> float:
        return self.K_value

    @property
    def certified(self) -> bool:
        return self.achieving.certified

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K": self.K_value,
            "exp_h2": self.exp_h2,
            "K_lower_evidence": self.K_lower_evidence,
            "achieving": {"tr": str(self.achieving.trace), "c": str(self.achieving.best_witness.c)},
            "certified": self.certified,
            "witness": self.achieving.best_witness.to_dict(),
            "bounds": {
                "ring": self.ring,
                "c_max": self.c_max,
                "trace_max": self.trace_max,
                "word_len": self.word_len,
            },
            "achieving_class": self.achieving.to_dict(),
            "classes": [c.to_dict() for c in self.classes],
            "elements_scanned": self.elements_scanned,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "HurwitzResult":
        """Inverse of to_dict; extra keys of a CLI artifact are ignored."""
        bounds = payload["bounds"]
        return cls(
            ring=bounds["ring"],
            c_max=bounds["c_max"],
            trace_max=bounds["trace_max"],
            word_len=bounds["word_len"],
            exp_h2=payload["exp_h2"],
            achieving=ClassRecord.from_dict(payload["achieving_class"]),
            K_lower_evidence=payload.get("K_lower_evidence"),
            classes=[ClassRecord.from_dict(c) for c in payload.get("classes", [])],
            elements_scanned=payload.get("elements_scanned", 0),
        )

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def summary(self) -> str:
        return f"""
Hurwitz Constant Estimate
=========================
Ring:                    d={self.ring}
Bounds:                  |c| <= {self.c_max:g}, |tr| <= {self.trace_max:g}, word length {self.word_len}
Classes explored:        {len(self.classes)}

K:                       {self.K_value:.12f}
exp h'':                 {self.exp_h2:.12f}
Achieving trace:         {self.achieving.trace} (|c| = {self.achieving.min_c:g})
Certified:               {self.certified}
        """.strip()


@dataclass
class HeightEntry:
    """Aggregated entry of the height spectrum"""
    height: float
    depth: float
    witness: MoebiusMap
    multiplicity: int
    key: Fraction  # N(tr² − 4) / N(c)²

    def to_dict(self) -> Dict[str, Any]:
        return {
            "height": self.height,
            "depth": self.depth,
            "tr": str(self.witness.trace()),
            "witness": self.witness.to_dict(),
            "multiplicity": self.multiplicity,
        }


@dataclass
class OracleResult:
    """Group-enumeration estimate of h'' on a once-punctured torus"""
    ell: float
    theta: float
    word_len: int
    min_class_height: float
    witness: str  # Word in X, Y and their inverses x, y
    scale: float  # Dilation that brought min |c| to 1
    classes: int = 0

    @property
    def h2(self) -> float:
        return math.log(self.min_class_height)

    @property
    def K(self) -> float:
        return 1.0 / (2.0 * self.min_class_height)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ell": self.ell,
            "theta": self.theta,
            "word_len": self.word_len,
            "min_class_height": self.min_class_height,
            "h2": self.h2,
            "K": self.K,
            "witness": self.witness,
            "scale": self.scale,
            "classes": self.classes,
        }
