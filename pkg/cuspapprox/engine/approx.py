"""
Good Approximation Engine

Follows the vertical geodesic above a boundary point ξ down from the cusp
and records the basins of the horoballs it crosses. The centers of those
basins form the good approximating sequence z_n = γ_n(∞); the sequence
(a_n) of lattice elements read off consecutive steps determines ξ again.

All decisions are exact: ξ is converted to rational lattice coordinates
first, and an optional input error radius is carried through mpmath
interval arithmetic.
"""

import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from mpmath import iv

from cuspapprox.core.errors import (
    DegenerateStepError,
    InconsistentBasinChainError,
    InsufficientBoundError,
    InvalidArgumentError,
)
from cuspapprox.core.moebius import BoundaryPoint, MoebiusMap, apply_boundary, delta
from cuspapprox.core.quadint import FieldElement, QuadInt, RingSpec
from cuspapprox.core.result import ApproxStep, GoodSequence
from cuspapprox.engine.groups import GroupSpec
from cuspapprox.engine.utils import Coords, to_lattice_coords

logger = logging.getLogger(__name__)

CANDIDATE_RADIUS = 3.0
MAX_CANDIDATE_RADIUS = 48.0


@dataclass
class _Candidate:
    """Next basin center q = γ_n(λ) with its crossing height"""

    lam: QuadInt
    num: QuadInt
    den: QuadInt
    coords: Coords
    norm: int
    dist_sq: Fraction
    t_sq: Fraction

    @property
    def order(self) -> Tuple:
        return (self.norm, self.coords)


@contextmanager
def _interval_digits(digits: int) -> Iterator[None]:
    saved = iv.dps
    iv.dps = digits
    try:
        yield
    finally:
        iv.dps = saved


def _iv(x: Fraction):
    return iv.mpf(x.numerator) / x.denominator


class _ErrorBox:
    """ξ widened by its error radius, as intervals in lattice coordinates."""

    def __init__(self, ring: RingSpec, coords: Coords, radius: float, digits: int):
        self.ring = ring
        self.digits = digits
        with _interval_digits(digits):
            if ring.is_modular:
                du, dv = radius, 0.0
            else:
                dv = radius / ring.imag_omega
                du = radius + dv * ring.omega_trace / 2
            self.u = _iv(coords[0]) + iv.mpf([-du, du])
            self.v = _iv(coords[1]) + iv.mpf([-dv, dv])

    def dist_sq(self, center: Coords):
        du = self.u - _iv(center[0])
        if self.ring.is_modular:
            return du ** 2
        dv = self.v - _iv(center[1])
        return du ** 2 + self.ring.omega_trace * du * dv + self.ring.omega_norm * dv ** 2

    def crossing(self, cand: _Candidate, prev_norm: int, prev_center: Optional[Coords]):
        """Interval of t² for a candidate over the whole box."""
        d_q = self.dist_sq(cand.coords)
        if prev_center is None:
            return 1 - d_q
        d_p = self.dist_sq(prev_center)
        return (prev_norm * d_p - cand.norm * d_q) / (cand.norm - prev_norm)

    def separates(
        self,
        winner: _Candidate,
        others: Sequence[_Candidate],
        prev_norm: int,
        prev_center: Optional[Coords],
    ) -> bool:
        """True if the winner beats every other candidate for every ξ in the box."""
        with _interval_digits(self.digits):
            low = self.crossing(winner, prev_norm, prev_center).a
            if not low > 0:
                return False
            for other in others:
                if other is winner:
                    continue
                if not self.crossing(other, prev_norm, prev_center).b < low:
                    return False
        return True

    def away_from(self, center: Coords) -> bool:
        with _interval_digits(self.digits):
            return self.dist_sq(center).a > 0


def _link_dist_sq(ring: RingSpec, xi: Coords, z: Coords) -> Fraction:
    """Squared distance from ξ to the nearest lattice translate of z."""
    du, dv = xi[0] - z[0], xi[1] - z[1]
    us = (math.floor(du), math.floor(du) + 1)
    vs = (0,) if ring.is_modular else (math.floor(dv), math.floor(dv) + 1)
    return min(ring.form(du - a, dv - b) for a in us for b in vs)


def _select(cands: List[_Candidate]) -> Tuple[Optional[_Candidate], List[_Candidate]]:
    valid = [c for c in cands if c.t_sq > 0]
    if not valid:
        return None, []
    top = max(c.t_sq for c in valid)
    tied = sorted((c for c in valid if c.t_sq == top), key=lambda c: c.order)
    return tied[0], tied


def _first_candidates(ring: RingSpec, xi: Coords) -> List[_Candidate]:
    out = []
    for lam in ring.elements_in_disk(xi, 1.0):
        d = ring.form(xi[0] - lam.x, xi[1] - lam.y)
        out.append(_Candidate(lam, lam, ring.one, (Fraction(lam.x), Fraction(lam.y)), 1, d, 1 - d))
    return out


def _next_candidates(
    ring: RingSpec,
    gamma: MoebiusMap,
    xi: Coords,
    xi_field: FieldElement,
    prev_norm: int,
    prev_dist_sq: Fraction,
    radius: float,
) -> List[_Candidate]:
    inv = gamma.inverse()
    pulled = (xi_field * inv.a + inv.b) / (xi_field * inv.c + inv.d)
    out = []
    for lam in ring.elements_in_disk(pulled.coords, radius):
        den = gamma.c * lam + gamma.d
        n_q = den.norm()
        if n_q <= prev_norm:
            continue
        num = gamma.a * lam + gamma.b
        coords = ring.coords(num, den)
        d_q = ring.form(xi[0] - coords[0], xi[1] - coords[1])
        t_sq = (prev_norm * prev_dist_sq - n_q * d_q) / (n_q - prev_norm)
        out.append(_Candidate(lam, num, den, coords, n_q, d_q, t_sq))
    return out


def _step(
    ring: RingSpec,
    n: int,
    gamma: MoebiusMap,
    cand: _Candidate,
    tied: List[_Candidate],
    xi: Coords,
) -> ApproxStep:
    dist_sq = _link_dist_sq(ring, xi, cand.coords)
    return ApproxStep(
        n=n,
        gamma=gamma,
        z=BoundaryPoint.exact(cand.num, cand.den),
        depth=math.log(cand.norm),
        dist=math.sqrt(dist_sq),
        a=ring.zero if n == 0 else cand.lam,
        crossing_t=math.sqrt(cand.t_sq),
        dist_sq=dist_sq,
        crossing_t_sq=cand.t_sq,
        branch=len(tied) > 1,
        tied=[BoundaryPoint.exact(t.num, t.den).to_text() for t in tied] if len(tied) > 1 else [],
    )


def good_sequence(
    G: GroupSpec,
    xi,
    steps: int,
    c_max: Optional[float] = None,
    xi_radius: float = 0.0,
    precision: int = 30,
) -> GoodSequence:
    """
    Good approximating sequence of a boundary point.

    Starting in the basin of ∞, the vertical line above ξ enters the basin
    of the nearest lattice point; from the basin of z_n = γ_n(∞) it next
    enters the basin of the candidate γ_n(λ) with the highest crossing
    point, where λ runs over lattice points near γ_n⁻¹(ξ). Then
    γ_{n+1} = γ_n·(λ, −1; 1, 0), so consecutive elements have Δ = 1.

    Args:
        G: Group
        xi: Boundary point (complex, float, Fraction, decimal string, mpmath
            number, or a tuple of lattice coordinates)
        steps: Number of terms requested
        c_max: Optional bound on |q_n|
        xi_radius: Absolute error of the input; positive values switch on
            interval certification of every step
        precision: Digits for interval arithmetic and irrational coordinates

    Returns:
        GoodSequence; stop_reason tells whether it ended early

    Raises:
        InvalidArgumentError: For bad arguments
        InsufficientBoundError: When the next center needs |c| > c_max
    """
    if steps < 1:
        raise InvalidArgumentError("steps must be positive", steps=steps)
    if xi_radius < 0:
        raise InvalidArgumentError("xi_radius must be non-negative", xi_radius=xi_radius)
    ring = G.ring
    xi_coords = to_lattice_coords(ring, xi, precision)
    xi_field = FieldElement(ring, *xi_coords)
    box = _ErrorBox(ring, xi_coords, xi_radius, precision) if xi_radius > 0 else None
    logger.debug("continued sequence convention: γ_{n+1} = γ_n·(a_{n+1}, −1; 1, 0), a_0 = 0")

    records: List[ApproxStep] = []
    stop = "steps"

    first = _first_candidates(ring, xi_coords)
    winner, tied = _select(first)
    if box is not None and not box.separates(winner, first, 1, None):
        return _finish(ring, xi, xi_coords, records, "uncertified", xi_radius, c_max)
    gamma = MoebiusMap(winner.lam, -ring.one, ring.one, ring.zero)
    records.append(_step(ring, 0, gamma, winner, tied, xi_coords))
    prev = winner

    while len(records) < steps:
        if prev.dist_sq == 0:
            stop = "cusp" if box is None else "uncertified"
            break
        if box is not None and not box.away_from(prev.coords):
            stop = "uncertified"
            break
        radius = CANDIDATE_RADIUS
        while True:
            cands = _next_candidates(ring, gamma, xi_coords, xi_field, prev.norm, prev.dist_sq, radius)
            winner, tied = _select(cands)
            if winner is not None:
                break
            radius *= 2
            if radius > MAX_CANDIDATE_RADIUS:
                raise InsufficientBoundError(
                    "no next basin among the candidates",
                    certified_prefix=len(records),
                    radius=radius,
                )
        if c_max is not None and winner.norm > Fraction(c_max) ** 2:
            raise InsufficientBoundError(
                "next approximant exceeds the |c| bound",
                certified_prefix=len(records),
                c_max=c_max,
            )
        if box is not None and not box.separates(winner, cands, prev.norm, prev.coords):
            stop = "uncertified"
            break
        nxt = gamma @ MoebiusMap(winner.lam, -ring.one, ring.one, ring.zero)
        records[-1].delta = delta(gamma, nxt)
        gamma = nxt
        records.append(_step(ring, len(records), gamma, winner, tied, xi_coords))
        if len(tied) > 1:
            logger.info("branch point at step %d between %s", len(records) - 1, records[-1].tied)
        prev = winner

    return _finish(ring, xi, xi_coords, records, stop, xi_radius, c_max)


def _describe(xi) -> str:
    if isinstance(xi, tuple):
        return f"({xi[0]}, {xi[1]})"
    return str(xi)


def _finish(ring, xi, xi_coords, records, stop, xi_radius, c_max) -> GoodSequence:
    logger.debug("good sequence d=%d: %d steps, stop=%s", ring.d, len(records), stop)
    return GoodSequence(
        ring=ring.d,
        xi=_describe(xi),
        xi_coords=xi_coords,
        steps=records,
        stop_reason=stop,
        xi_radius=xi_radius,
        c_bound=c_max,
    )


StepsLike = Union[GoodSequence, Sequence[ApproxStep]]


def _steps_of(steps: StepsLike) -> Sequence[ApproxStep]:
    return steps.steps if isinstance(steps, GoodSequence) else steps


def _pull_back(g: MoebiusMap, p: BoundaryPoint) -> Optional[FieldElement]:
    image = apply_boundary(g.inverse(), p)
    if image.is_infinity:
        return None
    return FieldElement.ratio(image.num, image.den)


def continued_sequence(steps: StepsLike) -> List[QuadInt]:
    """
    Continued sequence a_{n+1} = γ_n⁻¹(z_{n+1}) − γ_n⁻¹(z_{n−1}), with a_0 = 0.

    Uses γ_{−1} = id and z_{−1} = ∞. Each difference is computed exactly
    and must be a ring element.

    Raises:
        InconsistentBasinChainError: If a difference is not integral
    """
    rows = _steps_of(steps)
    if not rows:
        return []
    ring = rows[0].gamma.ring
    out = [ring.zero]
    for n in range(len(rows) - 1):
        g = rows[n].gamma
        ahead = _pull_back(g, rows[n + 1].z)
        behind = _pull_back(g, rows[n - 1].z if n >= 1 else BoundaryPoint.infinity(ring))
        if ahead is None or behind is None:
            raise InconsistentBasinChainError("basin chain returns to the cusp", step=n + 1)
        diff = ahead - behind
        if not diff.is_integral():
            raise InconsistentBasinChainError(
                "continued-sequence term is not a ring element",
                step=n + 1,
                value=[str(diff.u), str(diff.v)],
            )
        out.append(diff.to_quadint())
    return out


def reconstruct(a: Sequence[QuadInt], q: Sequence[QuadInt], z0: BoundaryPoint) -> List[BoundaryPoint]:
    """
    Rebuild z_0, ..., z_n from the continued sequence and the denominators.

    Evaluates z_n = z_0 + Σ_{k=1..n} 1/x_k through x_0 = 0 and
    x_{k+1} = −(x_k + q_k²·a_{k+1}), the alternating inner sums.

    Args:
        a: a_0, ..., a_n (a_0 is ignored)
        q: q_0, ..., q_{n−1} with q_k = c(γ_k)
        z0: First approximant

    Returns:
        Exact points z_0, ..., z_n

    Raises:
        DegenerateStepError: If an inner sum vanishes
    """
    if len(q) < len(a) - 1:
        raise InvalidArgumentError("need q_0..q_{n-1} for a_0..a_n", terms=len(a), denominators=len(q))
    ring = z0.num.ring
    z = FieldElement.ratio(z0.num, z0.den)
    x = ring.zero
    out = [z0]
    for k in range(len(a) - 1):
        x = -(x + q[k] * q[k] * a[k + 1])
        if x.is_zero():
            raise DegenerateStepError("inner sum vanishes", step=k + 1)
        z = z + FieldElement.ratio(ring.one, x)
        num, den = z.as_fraction()
        out.append(BoundaryPoint(num=num, den=den))
    return out


@dataclass
class XiStatistic:
    """Per-step approximation quality N(q_n)·dist_n and its tail minimum"""

    n: int
    raw: float
    tail_min: Optional[float]

    def to_dict(self):
        return {"n": self.n, "raw": self.raw, "tail_min": self.tail_min}


def hurwitz_of_xi(steps: StepsLike) -> List[XiStatistic]:
    """
    Running statistic whose lim inf is the Hurwitz constant of ξ.

    The tail minimum at step n is taken over k in [n // 2, n]; for
    sequences that stopped at a cusp the tail is undefined (None).

    Raises:
        InvalidArgumentError: With fewer than two steps
    """
    rows = _steps_of(steps)
    if len(rows) < 2:
        raise InvalidArgumentError("need at least two steps", steps=len(rows))
    at_cusp = isinstance(steps, GoodSequence) and steps.terminated_at_cusp
    raw = [s.q.norm() * s.dist for s in rows]
    out = []
    for n, value in enumerate(raw):
        tail = None if at_cusp else min(raw[n // 2: n + 1])
        out.append(XiStatistic(n=n, raw=value, tail_min=tail))
    return out


def classical_partial_quotients(xi, n: int) -> List[int]:
    """
    Regular continued fraction b_0; b_1, b_2, ... of a real number.

    Stops early when the exact input is rational and exhausted.
    """
    x = to_lattice_coords(RingSpec(0), xi)[0]
    out = []
    for _ in range(n):
        b = math.floor(x)
        out.append(b)
        frac = x - b
        if frac == 0:
            break
        x = 1 / frac
    return out


def compare_with_classical(seq: GoodSequence) -> List[Tuple[int, QuadInt, Optional[int]]]:
    """
    Continued sequence of a modular run next to the classical partial quotients.

    Returns:
        Rows (n, a_n, b_n); b_n is None past the end of a rational expansion
    """
    if seq.ring != 0:
        raise InvalidArgumentError("classical comparison needs the modular ring", ring=seq.ring)
    a = continued_sequence(seq)
    b = classical_partial_quotients(seq.xi_coords, len(a))
    logger.info("signs follow γ_{n+1} = γ_n·(a_{n+1}, −1; 1, 0); compare |a_n| with b_n")
    return [(n, a[n], b[n] if n < len(b) else None) for n in range(len(a))]
