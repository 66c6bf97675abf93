"""
Once-Punctured Tori

Fenchel-Nielsen coordinates (ℓ, θ) on the moduli space of once-punctured
hyperbolic tori: range reduction, the closed form h''(ℓ, θ) = log sinh(ℓ/2),
the pentagon quantities used to prove it, and a numeric oracle that builds
a two-generator Fuchsian group and measures class heights directly.

The closed forms accept numpy arrays as well as floats.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from cuspapprox.core.errors import (
    ConstructionError,
    InvalidArgumentError,
    OutOfDomainError,
    RequiresCurveChangeError,
)
from cuspapprox.core.result import OracleResult

logger = logging.getLogger(__name__)

ELL_MIN = 2.0 * math.asinh(1.0)
ELL_MAX = 2.0 * math.log((3.0 + math.sqrt(5.0)) / 2.0)
TOLERANCE = 1e-12
TRACE_RELATION_TOLERANCE = 1e-9


def theta_min(ell):
    """Smallest admissible twist (4π/ℓ)·cosh⁻¹(sinh(ℓ/2)); zero below ℓ_min."""
    ell = np.asarray(ell, dtype=float)
    inner = np.maximum(np.sinh(ell / 2.0), 1.0)
    value = np.where(ell >= ELL_MIN, 4.0 * np.pi / ell * np.arccosh(inner), 0.0)
    return float(value) if value.ndim == 0 else value


def constants() -> Tuple[float, float, Callable]:
    """(ℓ_min, ℓ_max, θ_min)"""
    return ELL_MIN, ELL_MAX, theta_min


@dataclass(frozen=True)
class FNPoint:
    """Length ℓ of the curve γ and twist θ around it"""

    ell: float
    theta: float

    def __post_init__(self):
        if not self.ell > 0:
            raise InvalidArgumentError("ell must be positive", ell=self.ell)
        if not math.isfinite(self.theta):
            raise InvalidArgumentError("theta must be finite", theta=self.theta)

    def to_dict(self) -> Dict[str, float]:
        return {"ell": self.ell, "theta": self.theta}


def fn_reduce(p: FNPoint) -> FNPoint:
    """
    Move (ℓ, θ) into the reduced wedge ℓ ∈ (0, ℓ_max], θ ∈ [θ_min(ℓ), π].

    Full Dehn twists reduce θ mod 2π and the elliptic involution sends θ
    to 2π − θ. Changing the curve γ is not attempted.

    Raises:
        RequiresCurveChangeError: If γ is not a shortest curve, i.e. the
            point stays outside the wedge after both symmetries
    """
    theta = math.fmod(p.theta, 2.0 * math.pi)
    if theta < 0:
        theta += 2.0 * math.pi
    if theta > math.pi:
        theta = 2.0 * math.pi - theta
    if abs(theta) < TOLERANCE or abs(theta - 2.0 * math.pi) < TOLERANCE:
        theta = 0.0
    if abs(theta - math.pi) < TOLERANCE:
        theta = math.pi
    if p.ell > ELL_MAX + TOLERANCE:
        raise RequiresCurveChangeError(
            "ell exceeds the systole bound; another curve is shorter", ell=p.ell, theta=p.theta
        )
    if theta < theta_min(p.ell) - TOLERANCE:
        raise RequiresCurveChangeError(
            "twist below theta_min; the dual curve is shorter",
            ell=p.ell,
            theta=theta,
            theta_min=theta_min(p.ell),
        )
    return FNPoint(min(p.ell, ELL_MAX), theta)


def h2(p: FNPoint) -> float:
    """Smallest closed-geodesic height, log sinh(ℓ/2), on the reduced wedge."""
    q = fn_reduce(p)
    return math.log(math.sinh(q.ell / 2.0))


def hurwitz_constant(p: FNPoint) -> float:
    """K = 1/(2 sinh(ℓ/2))."""
    q = fn_reduce(p)
    return 1.0 / (2.0 * math.sinh(q.ell / 2.0))


def _coth(x):
    return 1.0 / np.tanh(x)


def _half_sech_sq(x):
    return 0.5 / np.cosh(x) ** 2


def f_value(ell, theta):
    """r + d(A, A′) + r′: lower bound on the diameter of a line crossing between the two side horoballs."""
    u = theta * ell / (4.0 * np.pi)
    v = ell / 2.0 - u
    return 2.0 * _coth(ell / 2.0) + _half_sech_sq(u) + _half_sech_sq(v) - np.tanh(u) - np.tanh(v)


def t_value(ell, theta):
    """d(A, C) − r − r_c: gap between the side horoball and the opposite one."""
    u = theta * ell / (4.0 * np.pi)
    return _coth(ell / 2.0) - np.tanh(u) - _half_sech_sq(u) - 0.5 / np.sinh(ell / 2.0) ** 2


def t_lower_bound_numerator(ell: float) -> float:
    """
    sinh(ℓ/2)(cosh(ℓ/2) − √(cosh²(ℓ/2) − 2)) − 1, about 0.118 at ℓ_max.

    Raises:
        OutOfDomainError: Below ℓ_min, where the root is not real
    """
    c = math.cosh(ell / 2.0)
    if c * c < 2.0 - TOLERANCE:
        raise OutOfDomainError("numerator defined for ell >= ell_min", ell=ell)
    return math.sinh(ell / 2.0) * (c - math.sqrt(max(c * c - 2.0, 0.0))) - 1.0


@dataclass
class PentagonData:
    """Horoball radii and distances in the right-angled pentagon of (ℓ, θ)"""

    ell: float
    theta: float
    alpha: float  # Angle with tan(α/2) = e^{−ℓ/2}
    ell_prime: float  # Shortest arc between the two copies of γ
    r_c: float
    r: float
    r_prime: float
    dAC: float
    dA_prime_C: float
    f: float
    t: float

    def monotonicity(self, step: float = 1e-6) -> Dict[str, bool]:
        """Finite-difference signs of f and t at this point."""
        ell, theta = self.ell, self.theta
        return {
            "f_decreasing_in_ell": f_value(ell + step, theta) < f_value(ell, theta),
            "f_decreasing_in_theta": f_value(ell, theta + step) <= f_value(ell, theta),
            "t_decreasing_in_theta": t_value(ell, theta + step) < t_value(ell, theta),
        }

    def to_dict(self) -> Dict[str, float]:
        return {
            "ell": self.ell,
            "theta": self.theta,
            "alpha": self.alpha,
            "ell_prime": self.ell_prime,
            "r_c": self.r_c,
            "r": self.r,
            "r_prime": self.r_prime,
            "dAC": self.dAC,
            "dA'C": self.dA_prime_C,
            "f": self.f,
            "t": self.t,
        }


def pentagon(p: FNPoint) -> PentagonData:
    """Pentagon quantities of a reduced point."""
    q = fn_reduce(p)
    ell, theta = q.ell, q.theta
    u = theta * ell / (4.0 * math.pi)
    coth_half = 1.0 / math.tanh(ell / 2.0)
    return PentagonData(
        ell=ell,
        theta=theta,
        alpha=2.0 * math.atan(math.exp(-ell / 2.0)),
        ell_prime=2.0 * math.log(1.0 / math.tanh(ell / 4.0)),
        r_c=0.5 / math.sinh(ell / 2.0) ** 2,
        r=0.5 / math.cosh(u) ** 2,
        r_prime=0.5 / math.cosh(ell / 2.0 - u) ** 2,
        dAC=coth_half - math.tanh(u),
        dA_prime_C=coth_half - math.tanh(ell / 2.0 - u),
        f=float(f_value(ell, theta)),
        t=float(t_value(ell, theta)),
    )


def tangent_circle_radii(r: float, s: float, t: float) -> Tuple[float, float]:
    """
    Radii of the two half-circles orthogonal to a line and tangent to two circles.

    The circles have radii r >= s and touch the line at points t apart.
    R solves R²(t² − (r+s)²) + R·t²(s − r) − t²/4 = 0 and S the same
    equation with r and s exchanged.

    Returns:
        (R, S) with R >= S

    Raises:
        OutOfDomainError: Unless t > r + s, r >= s > 0
    """
    if not (s > 0 and r >= s and t > r + s):
        raise OutOfDomainError("need t > r + s and r >= s > 0", r=r, s=s, t=t)
    a = t * t - (r + s) ** 2
    b = t * t * (s - r)
    root = math.sqrt(b * b + a * t * t)
    return (-b + root) / (2.0 * a), (b + root) / (2.0 * a)


def reduced_grid(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    n×n grid over the reduced wedge.

    Rows run over ℓ = ℓ_max·(i+1)/n; along each row θ runs evenly from
    θ_min(ℓ) to π.
    """
    if n < 1:
        raise InvalidArgumentError("grid size must be positive", n=n)
    ells = ELL_MAX * np.arange(1, n + 1) / n
    steps = np.linspace(0.0, 1.0, n) if n > 1 else np.ones(1)
    lows = theta_min(ells)
    ell_grid = np.repeat(ells[:, None], n, axis=1)
    theta_grid = lows[:, None] + (np.pi - lows)[:, None] * steps[None, :]
    return ell_grid, theta_grid


def grid_table(n: int) -> List[Dict[str, float]]:
    """Rows (ell, theta, h2, K, f, t) over the reduced grid."""
    ell, theta = reduced_grid(n)
    sinh_half = np.sinh(ell / 2.0)
    h2_values = np.log(sinh_half)
    k_values = 1.0 / (2.0 * sinh_half)
    f_values = f_value(ell, theta)
    t_values = t_value(ell, theta)
    rows = []
    for i in range(ell.shape[0]):
        for j in range(ell.shape[1]):
            rows.append({
                "ell": float(ell[i, j]),
                "theta": float(theta[i, j]),
                "h2": float(h2_values[i, j]),
                "K": float(k_values[i, j]),
                "f": float(f_values[i, j]),
                "t": float(t_values[i, j]),
            })
    return rows


# Oracle

_LETTERS = "XYxy"
_INVERSE = {"X": "x", "x": "X", "Y": "y", "y": "Y"}


def generator_traces(p: FNPoint) -> Tuple[float, float, float]:
    """
    Traces (tr X, tr Y, tr XY) of a marked punctured-torus group.

    tr X = 2cosh(ℓ/2); the dual curve has tr Y = 2cosh(θℓ/4π)·cosh(ℓ′/2)
    by the product law for perpendicular axes; tr XY is the smaller root of
    x² + y² + z² = xyz, which makes the commutator parabolic.
    """
    ell, theta = p.ell, p.theta
    x = 2.0 * math.cosh(ell / 2.0)
    ell_prime = 2.0 * math.log(1.0 / math.tanh(ell / 4.0))
    y = 2.0 * math.cosh(theta * ell / (4.0 * math.pi)) * math.cosh(ell_prime / 2.0)
    disc = (x * y) ** 2 - 4.0 * (x * x + y * y)
    if disc < -TRACE_RELATION_TOLERANCE:
        raise ConstructionError("no real trace for XY", x=x, y=y, discriminant=disc)
    z = (x * y - math.sqrt(max(disc, 0.0))) / 2.0
    return x, y, z


def _commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)


def generators(p: FNPoint) -> np.ndarray:
    """
    Matrices X, Y, X⁻¹, Y⁻¹ with the commutator fixing ∞.

    Raises:
        ConstructionError: If tr[X, Y] differs from −2
    """
    x, y, z = generator_traces(p)
    X = np.array([[x - y / z, x / z ** 2], [x, y / z]])
    Y = np.array([[y - x / z, -y / z ** 2], [-y, x / z]])
    comm = _commutator(X, Y)
    drift = abs(np.trace(comm) + 2.0)
    if drift > TRACE_RELATION_TOLERANCE:
        raise ConstructionError("commutator is not parabolic", trace_error=float(drift))
    if abs(comm[1, 0]) > TRACE_RELATION_TOLERANCE:
        fixed = (comm[0, 0] - comm[1, 1]) / (2.0 * comm[1, 0])
        P = np.array([[0.0, 1.0], [-1.0, fixed]])
        P_inv = np.array([[fixed, -1.0], [1.0, 0.0]])
        X, Y = P @ X @ P_inv, P @ Y @ P_inv
    return np.stack([X, Y, np.linalg.inv(X), np.linalg.inv(Y)])


def _enumerate_words(gens: np.ndarray, word_len: int) -> Dict[str, np.ndarray]:
    """Every freely reduced word of length 1..word_len with its matrix."""
    words = list(_LETTERS)
    mats = gens.copy()
    table = dict(zip(words, mats))
    for _ in range(word_len - 1):
        next_words: List[str] = []
        blocks = []
        for k, letter in enumerate(_LETTERS):
            keep = [i for i, w in enumerate(words) if w[-1] != _INVERSE[letter]]
            blocks.append(np.einsum("nij,jk->nik", mats[keep], gens[k]))
            next_words.extend(words[i] + letter for i in keep)
        words, mats = next_words, np.concatenate(blocks)
        table.update(zip(words, mats))
    return table


def _invert_word(word: str) -> str:
    return "".join(_INVERSE[ch] for ch in reversed(word))


def _cyclic_key(word: str) -> str:
    rotations = [word[i:] + word[:i] for i in range(len(word))]
    inverse = _invert_word(word)
    rotations += [inverse[i:] + inverse[:i] for i in range(len(inverse))]
    return min(rotations)


def _is_cyclically_reduced(word: str) -> bool:
    return word[0] != _INVERSE[word[-1]]


def torus_oracle(p: FNPoint, word_len: int = 8) -> OracleResult:
    """
    Estimate the smallest class height of the torus by enumeration.

    Classes are the cyclically reduced words up to word_len; a class height
    is the maximum height over the rotations of the word and its inverse,
    each conjugated by every reduced word of length at most 2. The group is
    dilated so that the smallest nonzero |c| met is 1, putting the maximal
    cusp horoball at height 1.

    Args:
        p: Point of the reduced wedge
        word_len: Longest class representative

    Returns:
        OracleResult; min_class_height approximates sinh(ℓ/2)

    Raises:
        InvalidArgumentError: If word_len < 1
        ConstructionError: If the generators fail the trace relation
    """
    if word_len < 1:
        raise InvalidArgumentError("word_len must be at least 1", word_len=word_len)
    q = fn_reduce(p)
    gens = generators(q)
    table = _enumerate_words(gens, word_len)
    deltas = np.concatenate([np.eye(2)[None], np.stack(list(_enumerate_words(gens, 2).values()))])
    delta_inv = np.linalg.inv(deltas)

    classes: Dict[str, np.ndarray] = {}
    for word in table:
        if not _is_cyclically_reduced(word):
            continue
        key = _cyclic_key(word)
        if key in classes:
            continue
        inverse = _invert_word(key)
        members = [key[i:] + key[:i] for i in range(len(key))]
        members += [inverse[i:] + inverse[:i] for i in range(len(inverse))]
        stack = np.stack([table[m] for m in members])
        conj = np.einsum("dij,mjk,dkl->mdil", deltas, stack, delta_inv)
        classes[key] = conj.reshape(-1, 2, 2)

    all_c = np.abs(np.concatenate([m[:, 1, 0] for m in classes.values()]))
    all_c = np.concatenate([all_c, np.abs(np.stack(list(table.values()))[:, 1, 0])])
    nonzero = all_c[all_c > TRACE_RELATION_TOLERANCE]
    scale = float(nonzero.min())

    best_height = math.inf
    best_word = ""
    counted = 0
    for key, mats in classes.items():
        trace = abs(float(np.trace(mats[0])))
        if trace <= 2.0 + TRACE_RELATION_TOLERANCE:
            continue
        counted += 1
        c = np.abs(mats[:, 1, 0])
        c = c[c > TRACE_RELATION_TOLERANCE]
        if c.size == 0:
            continue
        class_height = math.sqrt(trace * trace - 4.0) * scale / (2.0 * float(c.min()))
        if class_height < best_height:
            best_height, best_word = class_height, key
    logger.info(
        "torus oracle ell=%.6f theta=%.6f: %d classes, min height %.9f (%s)",
        q.ell, q.theta, counted, best_height, best_word,
    )
    return OracleResult(
        ell=q.ell,
        theta=q.theta,
        word_len=word_len,
        min_class_height=best_height,
        witness=best_word,
        scale=scale,
        classes=counted,
    )
