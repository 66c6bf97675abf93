"""Good sequences against a brute-force search for the owner of each basin."""

import random
from fractions import Fraction
from typing import List, Tuple

import pytest

from cuspapprox.core.quadint import FieldElement, RingSpec
from cuspapprox.engine.approx import good_sequence
from cuspapprox.engine.groups import GroupSpec
from cuspapprox.engine.utils import Coords, random_lattice_point

DEN_BOUND = 20

Fractions = List[Tuple[int, Coords]]


def all_fractions(ring: RingSpec, xi: Coords, den_bound: int) -> Fractions:
    """
    (N(q), coords of p/q) for every q with |q| <= den_bound and |qξ − p| <= 1.

    Any p/q whose horoball value N(q)(|ξ − p/q|² + t²) stays below the cusp
    value 1 satisfies the second condition.
    """
    xi_field = FieldElement(ring, *xi)
    out = []
    for q in ring.elements_in_disk((0, 0), den_bound):
        if q.is_zero() or q.norm() > den_bound ** 2:
            continue
        for p in ring.elements_in_disk((xi_field * q).coords, 1.0):
            out.append((q.norm(), ring.coords(p, q)))
    return out


def horoball_value(ring: RingSpec, xi: Coords, norm: int, z: Coords, s: Fraction) -> Fraction:
    return norm * (ring.form(xi[0] - z[0], xi[1] - z[1]) + s)


def owned_interval_checks(G: GroupSpec, xi, steps: int) -> int:
    """
    Check that z_n owns the vertical line between its entry height and the
    next one, against every fraction with |q| <= DEN_BOUND.

    Values are linear in s = t², so both interval ends decide. Returns the
    number of steps the bound was large enough to check.
    """
    ring = G.ring
    seq = good_sequence(G, xi, steps)
    xi = seq.xi_coords
    fractions = all_fractions(ring, xi, DEN_BOUND)
    checked = 0
    for cur, nxt in zip(seq.steps, seq.steps[1:]):
        norm, z = cur.q.norm(), cur.z.coords()
        top, bottom = cur.crossing_t_sq, nxt.crossing_t_sq
        assert 0 < bottom < top
        own_bottom = horoball_value(ring, xi, norm, z, bottom)
        if own_bottom / bottom >= DEN_BOUND ** 2:
            break
        for s in (bottom, top):
            own = horoball_value(ring, xi, norm, z, s)
            assert own <= 1
            assert all(horoball_value(ring, xi, n, w, s) >= own for n, w in fractions)
        checked += 1
    return checked


@pytest.mark.parametrize("d", [0, 1, 2, 3, 7, 11])
def test_sequence_follows_the_basin_owners(d):
    G = GroupSpec.of(d)
    rng = random.Random(4242 + d)
    checked = [owned_interval_checks(G, random_lattice_point(G.ring, rng), 10) for _ in range(3)]
    assert all(c >= 1 for c in checked)
    assert sum(checked) >= 6


def test_gaussian_example_point_follows_the_basin_owners():
    G = GroupSpec.of(1)
    assert owned_interval_checks(G, "0.3141592653589793238+0.2718281828459045235i", 10) >= 2
