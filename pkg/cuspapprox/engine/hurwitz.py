"""
Hurwitz Constant Estimation

Min-max over hyperbolic conjugacy classes: the height of a class is the
largest height of the axes of its members, reached at the conjugate with
the smallest |c|, and exp h'' is the smallest class height. The global
Hurwitz constant is K = 1/(2·exp h'').
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from cuspapprox.core.errors import EmptySearchError, InvalidArgumentError
from cuspapprox.core.moebius import MoebiusMap, depth, height, height_key
from cuspapprox.core.quadint import QuadInt, RingSpec
from cuspapprox.core.result import ClassRecord, HeightEntry, HurwitzResult
from cuspapprox.engine.groups import (
    ConjugateOrbit,
    GroupSpec,
    StateKey,
    conjugacy_key,
    explore_conjugates,
    residues,
)

logger = logging.getLogger(__name__)


def _positive(q: QuadInt) -> QuadInt:
    return q if (q.x, q.y) > (0, 0) else -q


def _check_bounds(c_max: float, trace_max: float) -> None:
    if c_max < 1 or trace_max < 1:
        raise InvalidArgumentError(
            "search bounds must be at least 1", c_max=c_max, trace_max=trace_max
        )


def _traces(ring: RingSpec, trace_max: float) -> List[QuadInt]:
    out = []
    for t in ring.elements_in_disk((0, 0), trace_max):
        if t.y == 0 and abs(t.x) <= 2:
            continue
        if t.norm() <= Fraction(trace_max) ** 2:
            out.append(t)
    return out


def hyperbolic_elements(G: GroupSpec, c_max: float, trace_max: float) -> Iterator[MoebiusMap]:
    """
    Hyperbolic and loxodromic elements with 1 <= |c| <= c_max and |tr| <= trace_max.

    For each c and trace t, a runs over residues mod c with a(t − a) ≡ 1,
    which fixes d = t − a and b = (ad − 1)/c.
    """
    ring = G.ring
    bound = Fraction(c_max) ** 2
    cs = [c for c in ring.elements_in_disk((0, 0), c_max) if not c.is_zero() and c.norm() <= bound]
    cs.sort(key=lambda c: (c.norm(), c.sort_key))
    traces = _traces(ring, trace_max)
    for c in cs:
        reps = residues(c)
        for t in traces:
            for a in reps:
                top = a * (t - a) - ring.one
                if not c.divides(top):
                    continue
                yield MoebiusMap(a, top.exact_div(c), c, t - a)


def _class_cap(ring: RingSpec, gamma: MoebiusMap, c_max: float) -> float:
    """|c| cap for the conjugate search of one class."""
    rho = math.sqrt(ring.covering_radius_sq())
    kappa = max(1.0, rho / (1.0 - rho * rho))
    s = math.sqrt(abs(complex(gamma.trace_sq_minus_4())))
    return max(c_max, kappa * s)


def _record(gamma: MoebiusMap, orbit: ConjugateOrbit) -> ClassRecord:
    s = math.sqrt(abs(complex(gamma.trace_sq_minus_4())))
    return ClassRecord(
        trace=_positive(gamma.trace()),
        best_witness=orbit.witness,
        min_c=orbit.min_c,
        max_height=s / (2.0 * orbit.min_c),
        certified=orbit.witness.c.norm() == 1,
        states=len(orbit.keys),
    )


def hurwitz_estimate(
    G: GroupSpec,
    c_max: float,
    trace_max: float,
    word_len: int,
    threads: int = 1,
) -> HurwitzResult:
    """
    Estimate K for a group by the min-max over conjugacy classes.

    Elements are visited in increasing height. Since a class height is at
    least the height of any member, the scan stops as soon as the next
    element is no lower than the best class height found so far.

    Args:
        G: Group
        c_max: Bound on |c| of the sampled elements
        trace_max: Bound on |tr|
        word_len: Depth of each conjugate search
        threads: Classes explored concurrently

    Returns:
        HurwitzResult with the achieving class and all bounds

    Raises:
        InvalidArgumentError: For bounds below 1
        EmptySearchError: If no hyperbolic element lies within the bounds
    """
    _check_bounds(c_max, trace_max)
    if word_len < 0:
        raise InvalidArgumentError("word_len must be non-negative", word_len=word_len)
    ring = G.ring
    elements = sorted(
        hyperbolic_elements(G, c_max, trace_max),
        key=lambda g: (height_key(g), g.c.norm(), g.key),
    )
    if not elements:
        raise EmptySearchError(
            "no hyperbolic element within the bounds", ring=ring.d, c_max=c_max, trace_max=trace_max
        )
    logger.info("hurwitz d=%d: %d elements within bounds", ring.d, len(elements))

    seen: Dict[StateKey, int] = {}
    classes: List[ClassRecord] = []
    best: Optional[ClassRecord] = None
    scanned = 0
    pos = 0

    def explore(g: MoebiusMap) -> ConjugateOrbit:
        return explore_conjugates(G, g, word_len, _class_cap(ring, g, c_max))

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while pos < len(elements):
            batch: List[Tuple[MoebiusMap, StateKey]] = []
            while pos < len(elements) and len(batch) < max(1, threads):
                g = elements[pos]
                if best is not None and height(g) >= best.max_height:
                    pos = len(elements)
                    break
                pos += 1
                scanned += 1
                key = conjugacy_key(G, g)
                if key in seen or any(key == k for _, k in batch):
                    continue
                batch.append((g, key))
            if not batch:
                continue
            orbits = list(pool.map(explore, [g for g, _ in batch])) if pool else [explore(g) for g, _ in batch]
            for (g, key), orbit in zip(batch, orbits):
                if key in seen:
                    continue
                record = _record(g, orbit)
                for k in orbit.keys:
                    seen.setdefault(k, len(classes))
                classes.append(record)
                if best is None or (record.max_height, record.min_c) < (best.max_height, best.min_c):
                    best = record
                    logger.debug("new best class tr=%s height=%.12f", record.trace, record.max_height)
    finally:
        if pool is not None:
            pool.shutdown()

    certified = [c.max_height for c in classes if c.certified]
    evidence = 1.0 / (2.0 * min(certified)) if certified else None
    result = HurwitzResult(
        ring=ring.d,
        c_max=c_max,
        trace_max=trace_max,
        word_len=word_len,
        exp_h2=best.max_height,
        achieving=best,
        K_lower_evidence=evidence,
        classes=classes,
        elements_scanned=scanned,
    )
    logger.info(
        "hurwitz d=%d: K=%.12f from tr=%s (certified=%s, %d classes)",
        ring.d, result.K_value, best.trace, best.certified, len(classes),
    )
    return result


def height_spectrum(G: GroupSpec, c_max: float, trace_max: float) -> List[HeightEntry]:
    """
    Axis heights of the enumerated elements, ascending.

    Elements with the same height and the same |c| are merged; the first
    one in enumeration order is kept as witness.
    """
    _check_bounds(c_max, trace_max)
    merged: Dict[Tuple[Fraction, int], HeightEntry] = {}
    for g in hyperbolic_elements(G, c_max, trace_max):
        key = height_key(g)
        slot = (key, g.c.norm())
        entry = merged.get(slot)
        if entry is None:
            merged[slot] = HeightEntry(height=height(g), depth=depth(g), witness=g, multiplicity=1, key=key)
        else:
            entry.multiplicity += 1
    return [merged[k] for k in sorted(merged)]
