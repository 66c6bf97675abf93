"""Tests for double-coset enumeration, horoball centers and conjugate search."""

from fractions import Fraction

import pytest

from cuspapprox.core.errors import InvalidArgumentError, NoAxisError, NotHyperbolicError
from cuspapprox.core.moebius import MoebiusMap
from cuspapprox.engine.groups import (
    GroupSpec,
    conjugacy_key,
    conjugate_search,
    element_with_endpoint,
    enumerate_by_c,
    explore_conjugates,
    horoball_centers,
    require_hyperbolic,
    residues,
)
from cuspapprox.engine.hurwitz import hyperbolic_elements


def test_modular_enumeration_counts():
    G = GroupSpec.of(0)
    reps = enumerate_by_c(G, 3)
    assert [str(r.gamma.c) for r in reps] == ["1", "2", "3", "3"]
    assert [r.endpoint.to_text() for r in reps] == ["0", "1/2", "1/3", "2/3"]


def test_enumeration_is_sorted_and_thread_independent():
    G = GroupSpec.of(1)
    serial = enumerate_by_c(G, 3)
    threaded = enumerate_by_c(G, 3, threads=4)
    assert [r.gamma for r in serial] == [r.gamma for r in threaded]
    norms = [r.gamma.c.norm() for r in serial]
    assert norms == sorted(norms)


def test_enumeration_below_one_is_empty():
    assert enumerate_by_c(GroupSpec.of(0), 0.5) == []
    assert horoball_centers(GroupSpec.of(2), 0.9) == []


def test_gaussian_horoball_centers():
    G = GroupSpec.of(1)
    centers = horoball_centers(G, 1.5)
    assert len(centers) == 2
    assert {p.coords() for p, _ in centers} == {
        (Fraction(0), Fraction(0)),
        (Fraction(1, 2), Fraction(1, 2)),
    }


@pytest.mark.parametrize("d", [1, 2, 3, 7, 11])
def test_residue_count_is_norm(d):
    ring = GroupSpec.of(d).ring
    for q in (ring(2, 1), ring(3), ring(1, 2), ring(4, -1)):
        reps = residues(q)
        assert len(reps) == q.norm()
        cells = {tuple(x % 1 for x in ring.coords(r, q)) for r in reps}
        assert len(cells) == q.norm()


def test_element_with_endpoint():
    ring = GroupSpec.of(1).ring
    g = element_with_endpoint(ring(1, 1), ring(3))
    assert g.endpoint().to_text() == "(1+w)/3"
    with pytest.raises(InvalidArgumentError):
        element_with_endpoint(ring(2), ring(4))


def test_require_hyperbolic():
    ring = GroupSpec.of(0).ring
    with pytest.raises(NoAxisError):
        require_hyperbolic(MoebiusMap.translation(ring.one))
    with pytest.raises(NotHyperbolicError):
        require_hyperbolic(MoebiusMap.inversion(ring))
    require_hyperbolic(MoebiusMap.of(ring, 2, 1, 1, 1))


def test_conjugacy_key_ignores_cusp_stabilizer():
    G = GroupSpec.of(1)
    ring = G.ring
    g = MoebiusMap.of(ring, "2-w", "2*w", "-2*w", "2+w")
    base = conjugacy_key(G, g)
    for t in G.translations + G.rotations:
        assert conjugacy_key(G, g.conjugate_by(t)) == base


def test_conjugate_search_descends_to_unit_c():
    G = GroupSpec.of(0)
    ring = G.ring
    far = MoebiusMap.of(ring, -1, -1, 5, 4)
    assert str(far.trace()) == "3"
    min_c, witness = conjugate_search(G, far, word_len=1, c_cap=5)
    assert min_c == 1.0
    assert witness.trace_sq_minus_4() == far.trace_sq_minus_4()


def test_gaussian_witness_is_already_highest():
    G = GroupSpec.of(1)
    g = MoebiusMap.of(G.ring, "2-w", "2*w", "-2*w", "2+w")
    min_c, witness = conjugate_search(G, g, word_len=6, c_cap=5)
    assert min_c == pytest.approx(2.0)
    assert witness.c.norm() == 4


def test_conjugate_search_zero_length_keeps_element():
    G = GroupSpec.of(0)
    g = MoebiusMap.of(G.ring, -1, -1, 5, 4)
    orbit = explore_conjugates(G, g, word_len=0, c_cap=5)
    assert orbit.min_c == pytest.approx(5.0)
    assert orbit.witness == g
    assert orbit.levels == 0


def test_conjugacy_key_separates_gaussian_classes():
    G = GroupSpec.of(1)
    elements = list(hyperbolic_elements(G, 2, 5))
    assert any(g.c.x == 0 for g in elements)
    traces_by_key = {}
    for g in elements:
        key = conjugacy_key(G, g)
        assert key is not None
        tr = g.trace()
        traces_by_key.setdefault(key, set()).add(max(tr.sort_key, (-tr).sort_key))
    assert all(len(traces) == 1 for traces in traces_by_key.values())
    assert len(traces_by_key) > len({max(g.trace().sort_key, (-g.trace()).sort_key) for g in elements})


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_conjugacy_key_is_invariant_under_the_stabilizer(d):
    G = GroupSpec.of(d)
    for g in list(hyperbolic_elements(G, 2, 4))[:20]:
        base = conjugacy_key(G, g)
        for t in G.translations + G.rotations:
            assert conjugacy_key(G, g.conjugate_by(t)) == base
            assert conjugacy_key(G, g.conjugate_by(t.inverse())) == base
