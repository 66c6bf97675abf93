"""
Group Enumeration

Bounded enumeration of PSL2(Z) and the Euclidean Bianchi groups PSL2(O_{-d}):
double-coset representatives ordered by |c|, horoball centers, and a
breadth-first search through conjugates of a hyperbolic element.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Set, Tuple

from cuspapprox.core.errors import InvalidArgumentError, NoAxisError, NotHyperbolicError
from cuspapprox.core.moebius import BoundaryPoint, MoebiusMap, axis_endpoints
from cuspapprox.core.quadint import (
    QuadInt,
    RingSpec,
    canonical_associate,
    gcd_bezout,
)

logger = logging.getLogger(__name__)

StateKey = Tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    """
    PSL2 over a Euclidean quadratic ring.

    The cusp stabilizer is generated by translations by 1 and w, plus the
    rotation z -> u²z for the extra units of Z[i] and Z[(1+sqrt(-3))/2].
    """

    ring: RingSpec

    def __post_init__(self):
        s = self.inversion
        if s.c.norm() != 1:
            raise InvalidArgumentError("group normalization needs an element with |c| = 1")

    @classmethod
    def of(cls, d: int) -> "GroupSpec":
        return cls(RingSpec(d))

    @property
    def inversion(self) -> MoebiusMap:
        return MoebiusMap.inversion(self.ring)

    @property
    def translations(self) -> List[MoebiusMap]:
        gens = [MoebiusMap.translation(self.ring.one)]
        if not self.ring.is_modular:
            gens.append(MoebiusMap.translation(self.ring.omega))
        return gens

    @property
    def rotations(self) -> List[MoebiusMap]:
        """Diagonal unit elements acting as nontrivial rotations."""
        ring = self.ring
        found = {
            MoebiusMap(u, ring.zero, ring.zero, u.conj())
            for u in ring.units
            if u not in (ring.one, -ring.one)
        }
        return sorted(found, key=lambda g: g.key)

    @property
    def generators(self) -> List[MoebiusMap]:
        """S, T, T_w and the unit rotation where present."""
        gens = [self.inversion] + self.translations
        rot = self.rotations
        if rot:
            gens.append(rot[0])
        return gens

    @property
    def unit_squares(self) -> List[QuadInt]:
        return sorted({u * u for u in self.ring.units}, key=lambda q: q.sort_key)


@dataclass(frozen=True)
class CosetRep:
    """Canonical representative of a double coset Γ_∞ γ Γ_∞"""

    gamma: MoebiusMap
    canonical: bool = True

    @property
    def endpoint(self) -> BoundaryPoint:
        return self.gamma.endpoint()

    @property
    def depth(self) -> float:
        return math.log(self.gamma.c.norm())

    def to_dict(self) -> Dict[str, object]:
        row = dict(self.gamma.to_dict())
        z = self.endpoint.to_complex()
        row.update({"depth": self.depth, "endpoint_re": z.real, "endpoint_im": z.imag})
        return row


def _norm_bound(c_max: float) -> Fraction:
    return Fraction(c_max) ** 2


def residues(c: QuadInt) -> List[QuadInt]:
    """
    Representatives i + j·w of O / cO.

    With c = x + y·w, the ideal cO meets the real axis in (N(c)/g)Z where
    g = gcd(y, x + t·y), so 0 <= i < N(c)/g and 0 <= j < g.
    """
    ring = c.ring
    n = c.norm()
    if ring.is_modular:
        return [ring(i) for i in range(abs(c.x))]
    g = math.gcd(c.y, c.x + ring.omega_trace * c.y)
    return [ring(i, j) for j in range(g) for i in range(n // g)]


def reduce_mod_lattice(num: QuadInt, den: QuadInt) -> Tuple[QuadInt, QuadInt]:
    """
    Shift num by a multiple of den so that num/den lies in the cell [0, 1)².

    Returns:
        (shifted numerator, lattice shift λ) with num − λ·den the result
    """
    ring = num.ring
    u, v = ring.coords(num, den)
    lam = QuadInt(ring, math.floor(u), 0 if ring.is_modular else math.floor(v))
    return num - lam * den, lam


def _endpoint_key(a: QuadInt, c: QuadInt) -> Tuple[Fraction, Fraction]:
    return a.ring.coords(a, c)


def _unit_inverse(g: QuadInt) -> QuadInt:
    return g.conj()


def element_with_endpoint(num: QuadInt, den: QuadInt) -> MoebiusMap:
    """
    Some γ with γ(∞) = num/den.

    Raises:
        InvalidArgumentError: If num and den are not coprime
    """
    g, s, t = gcd_bezout(num, den)
    if not g.is_unit():
        raise InvalidArgumentError(f"{num}/{den} is not in lowest terms")
    inv = _unit_inverse(g)
    return MoebiusMap(num, -t * inv, den, s * inv)


def element_with_pole(num: QuadInt, den: QuadInt) -> MoebiusMap:
    """Some γ with γ⁻¹(∞) = num/den, i.e. owning the isometric sphere centered there."""
    return element_with_endpoint(num, den).inverse()


def _canonical_rep(a: QuadInt, c: QuadInt) -> MoebiusMap:
    gamma = element_with_endpoint(a, c)
    d, mu = reduce_mod_lattice(gamma.d, gamma.c)
    return MoebiusMap(gamma.a, gamma.b - mu * gamma.a, gamma.c, d)


def _canonical_cs(G: GroupSpec, c_max: float) -> List[QuadInt]:
    bound = _norm_bound(c_max)
    ring = G.ring
    cs = {
        canonical_associate(q)
        for q in ring.elements_in_disk((0, 0), float(c_max) + 1e-9)
        if not q.is_zero() and q.norm() <= bound
    }
    return sorted(cs, key=lambda q: (q.norm(), q.sort_key))


def _shell(G: GroupSpec, c: QuadInt, fold_units: bool) -> List[Tuple[Tuple[Fraction, Fraction], QuadInt]]:
    seen: Dict[Tuple[Fraction, Fraction], QuadInt] = {}
    for a in residues(c):
        if not gcd_bezout(a, c)[0].is_unit():
            continue
        a, _ = reduce_mod_lattice(a, c)
        if fold_units:
            options = [reduce_mod_lattice(m * a, c)[0] for m in G.unit_squares]
            a = min(options, key=lambda x: _endpoint_key(x, c))
        key = _endpoint_key(a, c)
        seen.setdefault(key, a)
    return sorted(seen.items())


def enumerate_by_c(G: GroupSpec, c_max: float, threads: int = 1) -> List[CosetRep]:
    """
    One canonical representative per double coset with 1 <= |c| <= c_max.

    Args:
        G: Group
        c_max: Bound on |c|; values below 1 give an empty list
        threads: Worker threads over c-shells (output order is unaffected)

    Returns:
        Representatives sorted by (N(c), c, endpoint)
    """
    if c_max < 1:
        return []
    cs = _canonical_cs(G, c_max)

    def work(c: QuadInt) -> List[CosetRep]:
        return [CosetRep(_canonical_rep(a, c)) for _, a in _shell(G, c, fold_units=True)]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            shells = list(pool.map(work, cs))
    else:
        shells = [work(c) for c in cs]
    reps = [rep for shell in shells for rep in shell]
    logger.debug("enumerate_by_c d=%d c_max=%s: %d representatives", G.ring.d, c_max, len(reps))
    return reps


def horoball_centers(G: GroupSpec, c_max: float) -> List[Tuple[BoundaryPoint, QuadInt]]:
    """
    Reduced fractions a/c with |c| <= c_max in the fundamental cell.

    Returns:
        (center, c) pairs; the horoball at a/c has diameter 1/N(c)
    """
    if c_max < 1:
        return []
    out = []
    for c in _canonical_cs(G, c_max):
        for _, a in _shell(G, c, fold_units=False):
            out.append((BoundaryPoint(num=a, den=c), c))
    return out


def require_hyperbolic(gamma: MoebiusMap) -> None:
    """
    Raises:
        NoAxisError: If gamma is parabolic
        NotHyperbolicError: If gamma is elliptic or the identity
    """
    if gamma.is_parabolic():
        raise NoAxisError("parabolic element has no axis", gamma=gamma.to_dict())
    if not gamma.is_hyperbolic():
        raise NotHyperbolicError("elliptic element", gamma=gamma.to_dict())


def conjugacy_key(G: GroupSpec, gamma: MoebiusMap) -> StateKey:
    """
    Identity of the Γ_∞-conjugacy class of gamma.

    Conjugating by a translation moves a by a multiple of c. Conjugating by
    diag(u, u⁻¹) and the projective sign send (a, c, tr) to
    (ε·a, ε·u⁻²·c, ε·tr). The key is the least (c, a mod c, tr) over that
    orbit, so it is defined for every element.
    """
    ring = G.ring
    keys = []
    for sign in (1, -1):
        for u in ring.units:
            m = u.conj() * u.conj() * sign
            c = m * gamma.c
            residue, _ = reduce_mod_lattice(gamma.a * sign, c)
            tr = gamma.trace() * sign
            keys.append((ring.d,) + c.sort_key + residue.sort_key + tr.sort_key)
    return min(keys)


@dataclass
class ConjugateOrbit:
    """Result of a breadth-first conjugate search"""

    min_c: float
    witness: MoebiusMap
    keys: Set[StateKey] = field(default_factory=set)
    complete: bool = False  # Frontier exhausted before the word-length limit
    levels: int = 0


def _neighbours(gamma: MoebiusMap, cap_sq: Fraction) -> List[MoebiusMap]:
    """
    Conjugates S·T^λ·γ·T^{−λ}·S⁻¹ with |c| <= cap.

    The new c is −b' with b' = −c(λ + z₊)(λ + z₋), z± the fixed points, so
    only λ = −μ with μ near z₊ or z₋ qualify.
    """
    ring = gamma.ring
    a, b, c, d = gamma.entries
    cap_over_c = math.sqrt(float(cap_sq) / c.norm())
    z_plus, z_minus = axis_endpoints(gamma)
    gap = abs(z_plus - z_minus)
    radius = min(2 * cap_over_c / gap, math.sqrt(cap_over_c)) * (1 + 1e-9) + 1e-9
    lams = set()
    for z in (z_plus, z_minus):
        for mu in ring.elements_in_disk(ring.coords_of_complex(z), radius):
            lams.add(-mu)
    out = []
    for lam in sorted(lams, key=lambda q: q.sort_key):
        b_shift = b + lam * (d - a) - lam * lam * c
        if b_shift.is_zero() or b_shift.norm() > cap_sq:
            continue
        out.append(MoebiusMap(d - lam * c, -c, -b_shift, a + lam * c))
    return out


def explore_conjugates(
    G: GroupSpec,
    gamma: MoebiusMap,
    word_len: int,
    c_cap: float,
) -> ConjugateOrbit:
    """
    Breadth-first search over conjugates δγδ⁻¹ with |c| <= c_cap.

    Each level conjugates by S·T^λ; Γ_∞-conjugates are identified through
    conjugacy_key, so word_len counts the S letters of δ.

    Args:
        G: Group
        gamma: Hyperbolic or loxodromic element
        word_len: Maximum number of inversion moves
        c_cap: Only conjugates with |c| <= c_cap are visited

    Returns:
        ConjugateOrbit with the smallest |c| found and its conjugate
    """
    require_hyperbolic(gamma)
    cap_sq = _norm_bound(c_cap)
    start = conjugacy_key(G, gamma)
    keys = {start}
    frontier = [gamma]
    best = gamma
    levels = 0
    for _ in range(word_len):
        nxt = []
        for g in frontier:
            for h in _neighbours(g, cap_sq):
                k = conjugacy_key(G, h)
                if k in keys:
                    continue
                keys.add(k)
                nxt.append(h)
                if (h.c.norm(), h.key) < (best.c.norm(), best.key):
                    best = h
        if not nxt:
            break
        frontier = nxt
        levels += 1
    complete = levels < word_len or not frontier
    logger.debug(
        "conjugate search d=%d tr=%s: %d states, min N(c)=%d, complete=%s",
        G.ring.d, gamma.trace(), len(keys), best.c.norm(), complete,
    )
    return ConjugateOrbit(
        min_c=math.sqrt(best.c.norm()),
        witness=best,
        keys=keys,
        complete=complete,
        levels=levels,
    )


def conjugate_search(
    G: GroupSpec, gamma: MoebiusMap, word_len: int, c_cap: float
) -> Tuple[float, MoebiusMap]:
    """
    Smallest |c| over conjugates of gamma reachable within word_len inversions.

    Args:
        G: Group
        gamma: Hyperbolic or loxodromic element
        word_len: Search depth; 0 returns |c(gamma)|
        c_cap: Conjugates with larger |c| are not visited

    Returns:
        (min_c, achieving conjugate)

    Raises:
        NoAxisError: If gamma is parabolic
        NotHyperbolicError: If gamma is elliptic
    """
    orbit = explore_conjugates(G, gamma, word_len, c_cap)
    return orbit.min_c, orbit.witness
