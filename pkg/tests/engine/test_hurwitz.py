"""Tests for the min-max Hurwitz estimate and the height spectrum."""

import json
import math

import pytest

from cuspapprox.core.errors import EmptySearchError, InvalidArgumentError
from cuspapprox.engine.groups import GroupSpec
from cuspapprox.engine.hurwitz import height_spectrum, hurwitz_estimate, hyperbolic_elements


def test_modular_constant_is_certified():
    result = hurwitz_estimate(GroupSpec.of(0), 3, 6, 6)
    assert result.K == pytest.approx(1 / math.sqrt(5), abs=1e-12)
    assert result.exp_h2 == pytest.approx(math.sqrt(5) / 2)
    assert str(result.achieving.trace) == "3"
    assert result.achieving.min_c == 1.0
    assert result.certified
    assert result.K_lower_evidence == pytest.approx(result.K)


def test_modular_json_fields():
    payload = json.loads(hurwitz_estimate(GroupSpec.of(0), 3, 6, 6).to_json())
    assert payload["K"] == pytest.approx(0.4472135954999579, abs=1e-15)
    assert payload["achieving"] == {"tr": "3", "c": "1"}
    assert payload["certified"] is True
    assert payload["bounds"] == {"ring": 0, "c_max": 3, "trace_max": 6, "word_len": 6}


def test_gaussian_constant():
    result = hurwitz_estimate(GroupSpec.of(1), 2, 5, 4)
    assert result.K == pytest.approx(1 / math.sqrt(3), abs=1e-9)
    assert str(result.achieving.trace) == "4"
    assert result.achieving.min_c == pytest.approx(2.0)
    assert not result.certified


@pytest.mark.parametrize("c_max, trace_max, word_len", [(2, 5, 6), (3, 6, 6), (3, 8, 8)])
def test_gaussian_constant_is_stable_under_larger_bounds(c_max, trace_max, word_len):
    # trace 2+3i at |c| = sqrt 5 reaches the same height, so only K is compared
    result = hurwitz_estimate(GroupSpec.of(1), c_max, trace_max, word_len)
    assert result.K == pytest.approx(1 / math.sqrt(3), abs=1e-9)
    assert all(c.max_height >= math.sqrt(3) / 2 - 1e-9 for c in result.classes)


def test_every_modular_class_is_above_the_floor():
    result = hurwitz_estimate(GroupSpec.of(0), 3, 6, 6)
    assert all(c.max_height >= math.sqrt(5) / 2 - 1e-9 for c in result.classes)


def test_longer_search_never_lowers_the_estimate():
    G = GroupSpec.of(0)
    shallow = hurwitz_estimate(G, 3, 6, 0)
    deep = hurwitz_estimate(G, 3, 6, 6)
    assert shallow.exp_h2 <= deep.exp_h2 + 1e-12


def test_threads_give_the_same_estimate():
    G = GroupSpec.of(0)
    assert hurwitz_estimate(G, 3, 6, 6, threads=3).K == hurwitz_estimate(G, 3, 6, 6).K


def test_empty_search():
    with pytest.raises(EmptySearchError):
        hurwitz_estimate(GroupSpec.of(0), 3, 2, 4)


def test_bounds_validation():
    with pytest.raises(InvalidArgumentError):
        hurwitz_estimate(GroupSpec.of(0), 0.5, 6, 4)
    with pytest.raises(InvalidArgumentError):
        height_spectrum(GroupSpec.of(0), 3, 0)


def test_enumerated_elements_are_hyperbolic():
    for g in hyperbolic_elements(GroupSpec.of(3), 2, 4):
        assert g.is_hyperbolic()
        assert 1 <= g.c.norm() <= 4


def test_spectrum_is_sorted_and_scales_with_c():
    entries = height_spectrum(GroupSpec.of(0), 5, 3)
    heights = [e.height for e in entries]
    assert heights == sorted(heights)
    by_c = {e.witness.c.norm(): e.height for e in entries}
    assert by_c[1] == pytest.approx(math.sqrt(5) / 2)
    assert by_c[25] == pytest.approx(by_c[1] / 5)
    assert all(e.multiplicity >= 1 for e in entries)


def test_gaussian_spectrum_contains_the_witness_height():
    entries = height_spectrum(GroupSpec.of(1), 2, 4)
    assert any(
        e.height == pytest.approx(math.sqrt(3) / 2) and e.witness.trace().norm() == 16
        for e in entries
    )


@pytest.mark.slow
@pytest.mark.parametrize(
    "d, expected",
    [
        (1, 1 / math.sqrt(3)),
        (2, 1 / math.sqrt(2)),
        (3, 13 ** -0.25),
        (7, 8 ** -0.25),
        (11, 2 / math.sqrt(5)),
    ],
)
def test_bianchi_table(d, expected):
    result = hurwitz_estimate(GroupSpec.of(d), 6, 12, 8)
    assert result.K == pytest.approx(expected, abs=1e-3)
