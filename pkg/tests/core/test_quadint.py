"""Tests for exact quadratic-integer arithmetic."""

import random
from fractions import Fraction

import pytest

from cuspapprox.core.errors import InvalidArgumentError
from cuspapprox.core.quadint import (
    FieldElement,
    QuadInt,
    RingSpec,
    SUPPORTED_RINGS,
    canonical_associate,
    euclid_divmod,
    gcd_bezout,
    norm,
    reduce_fraction,
)

BATTERY = 2000


def random_element(ring: RingSpec, rng: random.Random, size: int = 10**6) -> QuadInt:
    y = 0 if ring.is_modular else rng.randint(-size, size)
    return QuadInt(ring, rng.randint(-size, size), y)


@pytest.mark.parametrize(
    "d, x, y, expected",
    [
        (1, 1, 1, 2),
        (3, 0, 1, 1),
        (11, 2, 1, 9),
        (0, -7, 0, 49),
        (2, 1, 1, 3),
        (7, 1, 1, 4),
    ],
)
def test_norm_examples(d, x, y, expected):
    q = QuadInt(RingSpec(d), x, y)
    assert norm(q) == expected
    assert q * q.conj() == expected


def test_unsupported_ring_rejected():
    with pytest.raises(InvalidArgumentError):
        RingSpec(5)


def test_integers_have_no_omega_part():
    with pytest.raises(InvalidArgumentError):
        QuadInt(RingSpec(0), 1, 1)


def test_omega_relation():
    for d in (1, 2, 3, 7, 11):
        ring = RingSpec(d)
        w = ring.omega
        assert w * w == ring.omega_trace * w - ring.omega_norm
        assert abs(complex(w) ** 2 - complex(w * w)) < 1e-12


@pytest.mark.parametrize("d, count", [(0, 2), (1, 4), (2, 2), (3, 6), (7, 2), (11, 2)])
def test_unit_counts(d, count):
    ring = RingSpec(d)
    assert len(ring.units) == count
    assert all(u.is_unit() for u in ring.units)


def test_euclid_gaussian_exact():
    ring = RingSpec(1)
    q, r = euclid_divmod(ring(5), ring(1, 2))
    assert q == ring(1, -2)
    assert r.is_zero()


def test_euclid_integers():
    ring = RingSpec(0)
    q, r = euclid_divmod(ring(7), ring(3))
    assert (q, r) == (ring(2), ring(1))


def test_euclid_against_exhaustive_search():
    ring = RingSpec(2)
    n, m = ring(3, 1), ring(1, 1)
    q, r = euclid_divmod(n, m)
    assert n == q * m + r
    assert r.norm() < m.norm()
    u, v = ring.coords(n, m)
    best = min(
        (n - ring(x, y) * m).norm()
        for x in range(int(u) - 1, int(u) + 3)
        for y in range(int(v) - 1, int(v) + 3)
    )
    assert r.norm() == best


def test_euclid_division_by_zero():
    ring = RingSpec(3)
    with pytest.raises(InvalidArgumentError):
        euclid_divmod(ring(1, 1), ring.zero)


def test_euclid_tie_breaks_towards_smaller_quotient():
    ring = RingSpec(1)
    q, r = euclid_divmod(ring(1, 1), ring(2))
    assert q == ring.zero
    assert r == ring(1, 1)


@pytest.mark.parametrize("d", SUPPORTED_RINGS)
def test_euclid_remainder_battery(d):
    ring = RingSpec(d)
    rng = random.Random(1000 + d)
    for _ in range(BATTERY):
        n = random_element(ring, rng)
        m = random_element(ring, rng, 1000)
        if m.is_zero():
            continue
        q, r = euclid_divmod(n, m)
        assert n == q * m + r
        assert r.norm() < m.norm()


@pytest.mark.parametrize("d", SUPPORTED_RINGS)
def test_norm_is_multiplicative(d):
    ring = RingSpec(d)
    rng = random.Random(2000 + d)
    for _ in range(BATTERY):
        p, q = random_element(ring, rng), random_element(ring, rng)
        assert (p * q).norm() == p.norm() * q.norm()


@pytest.mark.parametrize("d", SUPPORTED_RINGS)
def test_bezout_identity_battery(d):
    ring = RingSpec(d)
    rng = random.Random(3000 + d)
    for _ in range(BATTERY):
        p, q = random_element(ring, rng), random_element(ring, rng)
        if p.is_zero() and q.is_zero():
            continue
        g, s, t = gcd_bezout(p, q)
        assert s * p + t * q == g
        assert g.divides(p) and g.divides(q)


def test_gcd_fibonacci():
    ring = RingSpec(0)
    g, s, t = gcd_bezout(ring(13), ring(8))
    assert g in (ring(1), ring(-1))
    assert s * 13 + t * 8 == g


def test_gcd_gaussian():
    ring = RingSpec(1)
    g, _, _ = gcd_bezout(ring(1, 1), ring(2))
    assert canonical_associate(g) == canonical_associate(ring(1, 1))


@pytest.mark.parametrize("d", SUPPORTED_RINGS)
def test_gcd_identity_case(d):
    ring = RingSpec(d)
    p = ring(3) if ring.is_modular else ring(3, 2)
    assert gcd_bezout(p, ring.zero) == (p, ring.one, ring.zero)


def test_gcd_of_zeros_rejected():
    ring = RingSpec(7)
    with pytest.raises(InvalidArgumentError):
        gcd_bezout(ring.zero, ring.zero)


def test_canonical_associate_is_class_invariant():
    for d in SUPPORTED_RINGS:
        ring = RingSpec(d)
        q = ring(-3) if ring.is_modular else ring(-3, 2)
        reps = {canonical_associate(u * q) for u in ring.units}
        assert len(reps) == 1
    assert canonical_associate(RingSpec(1)(0, 1)) == 1
    assert canonical_associate(RingSpec(0)(-4)) == 4


@pytest.mark.parametrize(
    "d, text, x, y",
    [
        (1, "2-3*w", 2, -3),
        (1, "w", 0, 1),
        (3, "-w", 0, -1),
        (0, "5", 5, 0),
        (11, "1+w", 1, 1),
        (7, "-4+12*w", -4, 12),
        (2, " 1 - w ", 1, -1),
    ],
)
def test_parse_and_format(d, text, x, y):
    ring = RingSpec(d)
    q = ring.parse(text)
    assert (q.x, q.y) == (x, y)
    assert ring.parse(str(q)) == q


@pytest.mark.parametrize("text", ["", "w+1", "2*", "1+2*v", "3**w", "--2"])
def test_parse_rejects_garbage(text):
    with pytest.raises(InvalidArgumentError):
        RingSpec(1).parse(text)


def test_parse_rejects_omega_over_integers():
    with pytest.raises(InvalidArgumentError):
        RingSpec(0).parse("1+w")


@pytest.mark.parametrize(
    "d, radius_sq",
    [
        (0, Fraction(1, 4)),
        (1, Fraction(1, 2)),
        (2, Fraction(3, 4)),
        (3, Fraction(1, 3)),
        (7, Fraction(4, 7)),
        (11, Fraction(9, 11)),
    ],
)
def test_covering_radius(d, radius_sq):
    assert RingSpec(d).covering_radius_sq() == radius_sq
    assert radius_sq < 1


def test_field_element_division():
    ring = RingSpec(1)
    ratio = FieldElement.from_quadint(ring(1, 1)) / ring(1, -1)
    assert ratio == ring(0, 1)
    assert ratio.is_integral()
    assert (FieldElement(ring, Fraction(1, 2)) * 2).to_quadint() == ring.one


def test_reduce_fraction():
    ring = RingSpec(0)
    assert reduce_fraction(ring(6), ring(4)) == (ring(3), ring(2))
    assert reduce_fraction(ring(-6), ring(-4)) == (ring(3), ring(2))
    assert reduce_fraction(ring(3), ring.zero) == (ring.one, ring.zero)
    gauss = RingSpec(1)
    num, den = reduce_fraction(gauss(0, 2), gauss(2, 2))
    assert den == canonical_associate(den)
    assert FieldElement.ratio(num, den) == FieldElement.ratio(gauss(0, 2), gauss(2, 2))


def test_elements_in_disk():
    ring = RingSpec(1)
    found = set(ring.elements_in_disk((0, 0), 1.0))
    assert found == {ring(0), ring(1), ring(-1), ring(0, 1), ring(0, -1)}
    eisenstein = RingSpec(3)
    assert len(list(eisenstein.elements_in_disk((0, 0), 1.0))) == 7


def test_elements_of_norm_at_most():
    ring = RingSpec(0)
    assert sorted(q.x for q in ring.elements_of_norm_at_most(9)) == [-3, -2, -1, 1, 2, 3]
