"""
Ford Complex

Isometric spheres, the basin of ∞ and the cell decomposition of its
boundary. Seen from above, the boundary of the basin is the upper envelope
of the hemispheres S_γ (center γ⁻¹(∞), radius 1/|c(γ)|), so its cells are
the cells of the power diagram of the sphere centers. Everything below is
computed with exact rationals in lattice coordinates (u, v) for u + v·w.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from cuspapprox.core.errors import IncompleteComplexError, InvalidArgumentError
from cuspapprox.core.moebius import BoundaryPoint, MoebiusMap, UpperPoint
from cuspapprox.core.quadint import QuadInt, RingSpec
from cuspapprox.core.result import CutCell, FordComplex
from cuspapprox.engine.groups import CosetRep, GroupSpec, element_with_pole, horoball_centers

logger = logging.getLogger(__name__)

Coords = Tuple[Fraction, Fraction]
Point = Union[complex, Tuple[Fraction, Fraction]]

BOX = 2


@dataclass(frozen=True)
class IsoSphere:
    """Isometric sphere of `owner`: center owner⁻¹(∞), radius 1/|c|"""

    center: BoundaryPoint
    coords: Coords
    radius_sq: Fraction

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius_sq)

    @property
    def owner(self) -> MoebiusMap:
        return element_with_pole(self.center.num, self.center.den)

    def height_sq(self, z: Coords) -> Fraction:
        """Squared height of the sphere above z (negative outside its disk)."""
        ring = self.center.num.ring
        return self.radius_sq - ring.form(z[0] - self.coords[0], z[1] - self.coords[1])


def _sphere(center: BoundaryPoint, c: QuadInt) -> IsoSphere:
    return IsoSphere(
        center=center,
        coords=center.coords(),
        radius_sq=Fraction(1, c.norm()),
    )


def _shifted(center: BoundaryPoint, lam: QuadInt) -> BoundaryPoint:
    return BoundaryPoint(num=center.num + lam * center.den, den=center.den)


def spheres_near(
    G: GroupSpec,
    base: Sequence[Tuple[BoundaryPoint, QuadInt]],
    z: Coords,
    reach: float,
) -> List[IsoSphere]:
    """
    Translates of the base spheres whose disks come within `reach` of z.

    Args:
        G: Group
        base: Horoball centers in the fundamental cell, with their c
        z: Lattice coordinates of the query point
        reach: Euclidean distance from z

    Returns:
        Spheres ordered by (N(c), center)
    """
    ring = G.ring
    found = {}
    for center, c in base:
        u0, v0 = center.coords()
        radius = reach + 1.0 / math.sqrt(c.norm())
        for lam in ring.elements_in_disk((z[0] - u0, z[1] - v0), radius + 1e-9):
            p = _shifted(center, lam)
            found[(c.norm(), p.coords())] = (p, c)
    return [_sphere(p, c) for _, (p, c) in sorted(found.items())]


def _half_plane(ring: RingSpec, p: IsoSphere, q: IsoSphere) -> Tuple[Fraction, Fraction, Fraction]:
    """
    Region where p is at least as high as q: α·u + β·v <= rhs.

    With w = q − p this is 2B(z, w) <= r_p² − r_q² − Q(p) + Q(q).
    """
    t, n = ring.omega_trace, ring.omega_norm
    wu = q.coords[0] - p.coords[0]
    wv = q.coords[1] - p.coords[1]
    alpha = 2 * wu + t * wv
    beta = t * wu + 2 * n * wv
    rhs = (
        p.radius_sq - q.radius_sq
        - ring.form(*p.coords) + ring.form(*q.coords)
    )
    return alpha, beta, rhs


def _clip(poly: List[Coords], alpha, beta, rhs) -> List[Coords]:
    out: List[Coords] = []
    count = len(poly)
    for i in range(count):
        cur, nxt = poly[i], poly[(i + 1) % count]
        fc = alpha * cur[0] + beta * cur[1] - rhs
        fn = alpha * nxt[0] + beta * nxt[1] - rhs
        if fc <= 0:
            out.append(cur)
        if (fc < 0 < fn) or (fn < 0 < fc):
            s = fc / (fc - fn)
            out.append((cur[0] + s * (nxt[0] - cur[0]), cur[1] + s * (nxt[1] - cur[1])))
    return out


def _cross(o: Coords, a: Coords, b: Coords) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def canonical_polygon(poly: List[Coords]) -> List[Coords]:
    """Drop repeated and collinear vertices; start at the lexicographically smallest."""
    pts: List[Coords] = []
    for p in poly:
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for i in range(len(pts)):
            if _cross(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]) == 0:
                del pts[i]
                changed = True
                break
    if len(pts) < 3:
        return pts
    start = pts.index(min(pts))
    return pts[start:] + pts[:start]


def polygon_area(poly: List[Coords]) -> Fraction:
    """Shoelace area in lattice units."""
    if len(poly) < 3:
        return Fraction(0)
    twice = sum(
        (poly[i][0] * poly[(i + 1) % len(poly)][1] - poly[(i + 1) % len(poly)][0] * poly[i][1]
         for i in range(len(poly))),
        Fraction(0),
    )
    return twice / 2


def _closest_point(ring: RingSpec, poly: List[Coords], p: Coords) -> Tuple[Coords, bool]:
    """Point of a convex polygon nearest to p for the lattice metric; flag if p is inside."""
    if all(_cross(poly[i], poly[(i + 1) % len(poly)], p) >= 0 for i in range(len(poly))):
        return p, True
    best: Optional[Tuple[Fraction, Coords]] = None
    for i in range(len(poly)):
        a, b = poly[i], poly[(i + 1) % len(poly)]
        edge = (b[0] - a[0], b[1] - a[1])
        rel = (p[0] - a[0], p[1] - a[1])
        s = ring.bilinear(rel, edge) / ring.form(*edge)
        s = min(max(s, Fraction(0)), Fraction(1))
        q = (a[0] + s * edge[0], a[1] + s * edge[1])
        dist = ring.form(p[0] - q[0], p[1] - q[1])
        if best is None or dist < best[0]:
            best = (dist, q)
    return best[1], False


def _interval_cell(sphere: IsoSphere, others: List[IsoSphere]) -> List[Coords]:
    lo = sphere.coords[0] - BOX
    hi = sphere.coords[0] + BOX
    zero = Fraction(0)
    ring = sphere.center.num.ring
    for q in others:
        alpha, _, rhs = _half_plane(ring, sphere, q)
        if alpha > 0:
            hi = min(hi, rhs / alpha)
        elif alpha < 0:
            lo = max(lo, rhs / alpha)
        elif rhs < 0:
            return []
    if lo > hi:
        return []
    return [(lo, zero), (hi, zero)]


def _polygon_cell(sphere: IsoSphere, others: List[IsoSphere]) -> List[Coords]:
    u, v = sphere.coords
    poly = [(u - BOX, v - BOX), (u + BOX, v - BOX), (u + BOX, v + BOX), (u - BOX, v + BOX)]
    ring = sphere.center.num.ring
    for q in others:
        poly = _clip(poly, *_half_plane(ring, sphere, q))
        if not poly:
            return []
    return canonical_polygon(poly)


def _overlapping(sphere: IsoSphere, candidates: List[IsoSphere]) -> List[IsoSphere]:
    ring = sphere.center.num.ring
    out = []
    for q in candidates:
        if q.coords == sphere.coords:
            continue
        gap = float(ring.form(q.coords[0] - sphere.coords[0], q.coords[1] - sphere.coords[1]))
        if gap <= (sphere.radius + q.radius) ** 2 + 1e-9:
            out.append(q)
    return out


def _cell_footprint(
    G: GroupSpec, sphere: IsoSphere, base: Sequence[Tuple[BoundaryPoint, QuadInt]]
) -> List[Coords]:
    build = _interval_cell if G.ring.is_modular else _polygon_cell
    near = spheres_near(G, base, sphere.coords, sphere.radius)
    footprint = build(sphere, _overlapping(sphere, near))
    if any(sphere.height_sq(z) <= 0 for z in footprint):
        logger.debug("cell of %s leaves its disk, retrying with all spheres", sphere.center)
        candidates = spheres_near(G, base, sphere.coords, _reach(G.ring))
        others = [q for q in candidates if q.coords != sphere.coords]
        footprint = build(sphere, others)
        uncovered = [z for z in footprint if sphere.height_sq(z) <= 0]
        if uncovered:
            raise IncompleteComplexError(
                "spheres do not cover the boundary",
                ring=G.ring.d,
                center=sphere.center.to_text(),
                uncovered=[[str(x), str(y)] for x, y in uncovered],
            )
    return footprint


def _make_cell(G: GroupSpec, sphere: IsoSphere, footprint: List[Coords]) -> Optional[CutCell]:
    ring = G.ring
    if ring.is_modular:
        area = footprint[1][0] - footprint[0][0] if footprint else Fraction(0)
    else:
        area = polygon_area(footprint)
    if area <= 0:
        return None
    if ring.is_modular:
        lo, hi = footprint[0][0], footprint[1][0]
        pu = sphere.coords[0]
        inside = lo <= pu <= hi
        top = (min(max(pu, lo), hi), Fraction(0))
    else:
        top, inside = _closest_point(ring, footprint, sphere.coords)
    summit_sq = sphere.height_sq(top)
    return CutCell(
        dominator=sphere.owner,
        center=sphere.center,
        radius_sq=sphere.radius_sq,
        footprint=footprint,
        footprint_complex=[ring.to_complex(x, y) for x, y in footprint],
        summit=UpperPoint(ring.to_complex(*top), math.sqrt(summit_sq)),
        summit_coords=(Fraction(top[0]), Fraction(top[1])),
        summit_height_sq=summit_sq,
        summit_is_apex=inside,
        area=area,
        min_height_sq=min(sphere.height_sq(z) for z in footprint),
    )


def _reach(ring: RingSpec) -> float:
    return BOX * (1.0 + abs(ring.omega_complex)) + 1.0


def build_complex(G: GroupSpec, c_max: float = 1.0, threads: int = 1) -> FordComplex:
    """
    Cell decomposition of the boundary of the basin of ∞ over one fundamental cell.

    Each sphere centered in the fundamental cell contributes the part of
    its hemisphere not covered by any other sphere; cells of zero area are
    dropped. The cells of all translates tile the plane.

    Args:
        G: Group
        c_max: Spheres with |c| <= c_max are used
        threads: Worker threads over spheres

    Returns:
        FordComplex with cells, integral points and the lowest height

    Raises:
        InvalidArgumentError: If c_max < 1
        IncompleteComplexError: If the spheres leave part of the plane uncovered
    """
    if c_max < 1:
        raise InvalidArgumentError("build_complex needs c_max >= 1", c_max=c_max)
    base = horoball_centers(G, c_max)

    def work(item: Tuple[BoundaryPoint, QuadInt]) -> Optional[CutCell]:
        sphere = _sphere(*item)
        return _make_cell(G, sphere, _cell_footprint(G, sphere, base))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            made = list(pool.map(work, base))
    else:
        made = [work(item) for item in base]
    cells = [cell for cell in made if cell is not None]
    integral = [cell.center for cell in cells if cell.summit_is_apex]
    depth_halves = sorted({1.0 / math.sqrt(cell.radius_sq) for cell in cells if cell.summit_is_apex})
    lowest = min(cell.min_height_sq for cell in cells)
    logger.info(
        "complex d=%d c_max=%s: %d spheres, %d cells, lowest height² %s",
        G.ring.d, c_max, len(base), len(cells), lowest,
    )
    return FordComplex(
        ring=G.ring.d,
        c_max=c_max,
        cells=cells,
        integral_points=integral,
        depth_halves=depth_halves,
        sigma_min_height_sq=lowest,
        spheres_used=len(base),
    )


def sigma_min_height_sq(G: GroupSpec, c_max: float = 1.0) -> Fraction:
    """Exact squared minimum height of the cut locus."""
    return build_complex(G, c_max).sigma_min_height_sq


def sigma_min_height(G: GroupSpec, c_max: float = 1.0) -> float:
    """
    Lowest Euclidean height of the cut locus.

    The approximation constant of the group is 1/(2·sigma_min_height).
    """
    return math.sqrt(sigma_min_height_sq(G, c_max))


@dataclass
class Ceiling:
    """Highest sphere above a boundary point"""

    height: float
    height_sq: Fraction
    dominator: Optional[CosetRep]
    tied: List[BoundaryPoint] = field(default_factory=list)

    @property
    def is_tie(self) -> bool:
        return len(self.tied) > 1


def exact_coords(ring: RingSpec, z: Point) -> Coords:
    """Lattice coordinates as Fractions; complex input is read exactly from its floats."""
    if isinstance(z, tuple):
        return Fraction(z[0]), Fraction(z[1])
    u, v = ring.coords_of_complex(complex(z))
    return Fraction(u), Fraction(v)


def ceiling(G: GroupSpec, z: Point, c_max: float = 1.0) -> Ceiling:
    """
    Height of the basin boundary above z and the sphere realizing it.

    Args:
        G: Group
        z: Complex point, or exact lattice coordinates
        c_max: Spheres with |c| <= c_max compete

    Returns:
        Ceiling with every tied center; the dominator is the tied sphere
        with smallest N(c), then smallest center
    """
    if c_max < 1:
        raise InvalidArgumentError("ceiling needs c_max >= 1", c_max=c_max)
    coords = exact_coords(G.ring, z)
    base = horoball_centers(G, c_max)
    best: Optional[Fraction] = None
    tied: List[IsoSphere] = []
    for sphere in spheres_near(G, base, coords, 0.0):
        h = sphere.height_sq(coords)
        if h <= 0:
            continue
        if best is None or h > best:
            best, tied = h, [sphere]
        elif h == best:
            tied.append(sphere)
    if best is None:
        return Ceiling(height=0.0, height_sq=Fraction(0), dominator=None)
    return Ceiling(
        height=math.sqrt(best),
        height_sq=best,
        dominator=CosetRep(tied[0].owner),
        tied=[s.center for s in tied],
    )
