"""Tests for Fenchel-Nielsen reduction, the pentagon quantities and the torus oracle."""

import math

import numpy as np
import pytest

from cuspapprox.core.errors import (
    InvalidArgumentError,
    OutOfDomainError,
    RequiresCurveChangeError,
)
from cuspapprox.engine.torus import (
    ELL_MAX,
    ELL_MIN,
    FNPoint,
    constants,
    f_value,
    fn_reduce,
    generator_traces,
    generators,
    grid_table,
    h2,
    hurwitz_constant,
    pentagon,
    reduced_grid,
    t_lower_bound_numerator,
    t_value,
    tangent_circle_radii,
    theta_min,
    torus_oracle,
)


def step_two_domain(n=5):
    margin = 1e-3
    for ell in np.linspace(ELL_MIN + margin, ELL_MAX - margin, n):
        for theta in np.linspace(theta_min(ell) + margin, math.pi - margin, n):
            yield float(ell), float(theta)


def test_constants():
    ell_min, ell_max, tmin = constants()
    assert ell_min == pytest.approx(1.762747174, abs=1e-9)
    assert math.sinh(ell_max / 2) == pytest.approx(math.sqrt(5) / 2, abs=1e-12)
    assert tmin(ell_min) == pytest.approx(0.0, abs=1e-6)
    assert tmin(ell_max) == pytest.approx(math.pi, abs=1e-9)
    assert tmin(1.0) == 0.0


def test_theta_min_accepts_arrays():
    values = theta_min(np.array([1.0, ELL_MAX]))
    assert values[0] == 0.0
    assert values[1] == pytest.approx(math.pi)


def test_reduction_by_twist_and_involution():
    assert fn_reduce(FNPoint(1.0, 3 * math.pi / 2)).theta == pytest.approx(math.pi / 2)
    assert fn_reduce(FNPoint(1.0, 2 * math.pi)).theta == 0.0
    assert fn_reduce(FNPoint(1.0, -math.pi / 3)).theta == pytest.approx(math.pi / 3)
    corner = fn_reduce(FNPoint(ELL_MAX, math.pi))
    assert (corner.ell, corner.theta) == (ELL_MAX, math.pi)


def test_reduction_rejects_points_needing_another_curve():
    with pytest.raises(RequiresCurveChangeError):
        fn_reduce(FNPoint(2.0, 1.0))
    with pytest.raises(RequiresCurveChangeError):
        fn_reduce(FNPoint(1.9, 0.1))


def test_point_validation():
    with pytest.raises(InvalidArgumentError):
        FNPoint(0.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        FNPoint(1.0, math.inf)


def test_height_closed_form():
    assert h2(FNPoint(ELL_MIN, math.pi)) == pytest.approx(0.0, abs=1e-12)
    assert h2(FNPoint(1.0, 0.3)) == h2(FNPoint(1.0, 2.5))
    assert h2(FNPoint(1.0, 0.3)) == pytest.approx(math.log(math.sinh(0.5)))
    assert hurwitz_constant(FNPoint(ELL_MAX, math.pi)) == pytest.approx(1 / math.sqrt(5))


def test_pentagon_at_the_modular_torus():
    data = pentagon(FNPoint(ELL_MAX, math.pi))
    assert data.f == pytest.approx(2.58885438, abs=1e-6)
    assert data.r_c == pytest.approx(0.4)
    assert data.r == pytest.approx(0.4)
    assert data.r_prime == pytest.approx(0.4)
    assert data.t == pytest.approx(2 / math.sqrt(5) - 0.8)
    assert math.tan(data.alpha / 2) == pytest.approx(math.exp(-ELL_MAX / 2))
    assert set(data.to_dict()) >= {"f", "t", "r_c", "dAC"}


def test_t_numerator():
    assert t_lower_bound_numerator(ELL_MAX) == pytest.approx(math.sqrt(5) / 2 - 1, abs=1e-12)
    assert t_lower_bound_numerator(ELL_MAX) > 0.118
    with pytest.raises(OutOfDomainError):
        t_lower_bound_numerator(1.0)


def test_monotonicity_on_the_step_two_domain():
    for ell, theta in step_two_domain():
        flags = pentagon(FNPoint(ell, theta)).monotonicity()
        assert all(flags.values()), (ell, theta, flags)


def test_side_horoballs_stay_apart():
    floor = f_value(ELL_MAX, math.pi)
    for ell, theta in step_two_domain():
        assert t_value(ell, theta) > 0.08
        assert t_value(ell, theta) >= t_value(ell, math.pi)
        assert f_value(ell, theta) >= floor - 1e-12


def test_tangent_circles_equal_radii():
    R, S = tangent_circle_radii(0.25, 0.25, 1.0)
    assert R == pytest.approx(1 / math.sqrt(3))
    assert S == pytest.approx(1 / math.sqrt(3))


def test_tangent_circles_solve_their_equations():
    r, s, t = 0.4, 0.2, 1.5
    R, S = tangent_circle_radii(r, s, t)
    assert R >= S > 0
    assert R * R * (t * t - (r + s) ** 2) + R * t * t * (s - r) - t * t / 4 == pytest.approx(0.0, abs=1e-12)
    assert S * S * (t * t - (r + s) ** 2) + S * t * t * (r - s) - t * t / 4 == pytest.approx(0.0, abs=1e-12)


def test_tangent_circles_domain():
    with pytest.raises(OutOfDomainError):
        tangent_circle_radii(0.5, 0.5, 1.0)
    with pytest.raises(OutOfDomainError):
        tangent_circle_radii(0.2, 0.3, 1.0)


def test_reduced_grid_shape():
    ell, theta = reduced_grid(4)
    assert ell.shape == theta.shape == (4, 4)
    assert ell[-1, 0] == pytest.approx(ELL_MAX)
    assert np.allclose(theta[:, -1], math.pi)
    assert np.allclose(theta[:, 0], theta_min(ell[:, 0]))
    rows = grid_table(3)
    assert len(rows) == 9
    assert list(rows[0]) == ["ell", "theta", "h2", "K", "f", "t"]
    with pytest.raises(InvalidArgumentError):
        reduced_grid(0)


def test_modular_torus_traces():
    assert generator_traces(FNPoint(ELL_MAX, math.pi)) == pytest.approx((3.0, 3.0, 3.0))


@pytest.mark.parametrize("ell, theta", [(ELL_MAX, math.pi), (1.0, 0.0), (1.0, 2.0), (1.85, 3.0)])
def test_generators_form_a_punctured_torus(ell, theta):
    X, Y, x, y = generators(FNPoint(ell, theta))
    for m in (X, Y):
        assert np.linalg.det(m) == pytest.approx(1.0, abs=1e-9)
    comm = X @ Y @ x @ y
    assert np.trace(comm) == pytest.approx(-2.0, abs=1e-9)
    assert abs(comm[1, 0]) < 1e-9


def test_oracle_at_the_modular_torus():
    result = torus_oracle(FNPoint(ELL_MAX, math.pi), word_len=8)
    assert result.min_class_height == pytest.approx(math.sqrt(5) / 2, abs=1e-4)
    assert result.K == pytest.approx(1 / math.sqrt(5), abs=1e-4)
    assert set(result.witness) <= set("XYxy")
    assert result.classes > 0
    assert result.to_dict()["word_len"] == 8


def test_oracle_rejects_empty_words():
    with pytest.raises(InvalidArgumentError):
        torus_oracle(FNPoint(1.0, 1.0), word_len=0)


@pytest.mark.slow
@pytest.mark.parametrize("theta", [0.5, 2.0])
def test_oracle_is_independent_of_twist(theta):
    result = torus_oracle(FNPoint(1.0, theta), word_len=8)
    assert result.h2 == pytest.approx(math.log(math.sinh(0.5)), abs=1e-4)


@pytest.mark.slow
def test_oracle_agrees_with_closed_form_on_grid():
    ell, theta = reduced_grid(10)
    for i in range(10):
        for j in range(10):
            p = FNPoint(float(ell[i, j]), float(theta[i, j]))
            assert torus_oracle(p, word_len=8).h2 == pytest.approx(h2(p), abs=1e-4)
