"""
Moebius Transformations

Unit-determinant matrices over a quadratic ring acting on the boundary
C ∪ {∞} and on the upper half-space, together with horoballs and the
numeric functionals built on them: depth, height, delta, penetration.

Equalities are decided in the exact layer; only logs and square roots are
taken in floating point.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Union

from cuspapprox.core.errors import (
    AxisThroughInfinityError,
    InvalidArgumentError,
    NoAxisError,
    NotRationalLineError,
)
from cuspapprox.core.quadint import QuadInt, RingSpec, reduce_fraction

Entry = Union[QuadInt, int, str]


def _lex_positive(q: QuadInt) -> bool:
    return q.x > 0 or (q.x == 0 and q.y > 0)


def _wrap(q: QuadInt) -> str:
    text = str(q)
    return text if q.is_real() else f"({text})"


@dataclass(frozen=True)
class BoundaryPoint:
    """
    A point of C ∪ {∞}.

    Exact points store a reduced fraction num/den (∞ is 1/0). Approximate
    points store a complex value and an absolute error bound.
    """

    num: Optional[QuadInt] = None
    den: Optional[QuadInt] = None
    value: Optional[complex] = None
    error: float = 0.0

    @classmethod
    def infinity(cls, ring: RingSpec) -> BoundaryPoint:
        return cls(num=ring.one, den=ring.zero)

    @classmethod
    def exact(cls, num: QuadInt, den: QuadInt) -> BoundaryPoint:
        n, d = reduce_fraction(num, den)
        return cls(num=n, den=d)

    @classmethod
    def approximate(cls, z: complex, error: float = 0.0) -> BoundaryPoint:
        if error < 0:
            raise InvalidArgumentError("error bound must be non-negative", error=error)
        return cls(value=complex(z), error=float(error))

    @property
    def is_exact(self) -> bool:
        return self.num is not None

    @property
    def is_infinity(self) -> bool:
        return self.is_exact and self.den.is_zero()

    def coords(self) -> Tuple[Fraction, Fraction]:
        """Exact lattice coordinates of a finite exact point."""
        if not self.is_exact or self.is_infinity:
            raise InvalidArgumentError("coordinates need a finite exact point")
        return self.num.ring.coords(self.num, self.den)

    def to_complex(self) -> complex:
        if self.is_infinity:
            return complex(math.inf, 0.0)
        if self.is_exact:
            u, v = self.coords()
            return self.num.ring.to_complex(u, v)
        return self.value

    def to_text(self) -> str:
        """"p/q" form; ring elements other than plain integers are parenthesized."""
        if self.is_infinity:
            return "inf"
        if self.is_exact:
            if self.den == 1:
                return str(self.num)
            return f"{_wrap(self.num)}/{_wrap(self.den)}"
        return repr(self.value)

    @classmethod
    def from_text(cls, ring: RingSpec, text: str) -> BoundaryPoint:
        """Inverse of to_text for exact points."""
        s = text.replace(" ", "")
        if s == "inf":
            return cls.infinity(ring)
        depth_level = 0
        for i, ch in enumerate(s):
            if ch == "(":
                depth_level += 1
            elif ch == ")":
                depth_level -= 1
            elif ch == "/" and depth_level == 0:
                return cls.exact(ring.parse(s[:i].strip("()")), ring.parse(s[i + 1:].strip("()")))
        return cls.exact(ring.parse(s), ring.one)

    def __str__(self) -> str:
        if self.is_exact:
            return self.to_text()
        return f"{self.value!r}±{self.error:g}"


@dataclass(frozen=True)
class UpperPoint:
    """Point (z, t) of the upper half-space, t the Euclidean height."""

    z: complex
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise InvalidArgumentError("upper half-space points need t > 0", t=self.t)


@dataclass(frozen=True)
class Horoball:
    """
    Horoball tangent to the boundary at `center`.

    For a finite center the Euclidean diameter is stored; a horoball at ∞
    is the region above `height`.
    """

    center: BoundaryPoint
    diameter: float = 0.0
    height: float = 0.0

    def __post_init__(self):
        if self.center.is_infinity:
            if not self.height > 0:
                raise InvalidArgumentError("horoball at infinity needs height > 0", height=self.height)
        elif not self.diameter > 0:
            raise InvalidArgumentError("horoball diameter must be positive", diameter=self.diameter)

    @classmethod
    def at_infinity(cls, ring: RingSpec, height: float = 1.0) -> Horoball:
        return cls(center=BoundaryPoint.infinity(ring), height=height)


class MoebiusMap:
    """
    Element of PSL2 over a quadratic ring.

    The sign is normalized at construction so that the first nonzero entry
    of (c, d, a, b) is lexicographically positive; two maps are equal iff
    they agree projectively.
    """

    __slots__ = ("_a", "_b", "_c", "_d")

    def __init__(self, a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> None:
        ring = a.ring
        if not all(e.ring.d == ring.d for e in (b, c, d)):
            raise InvalidArgumentError("matrix entries from different rings")
        if a * d - b * c != ring.one:
            raise InvalidArgumentError(
                "determinant must be 1",
                a=str(a), b=str(b), c=str(c), d=str(d),
            )
        lead = next(e for e in (c, d, a, b) if not e.is_zero())
        if not _lex_positive(lead):
            a, b, c, d = -a, -b, -c, -d
        self._a, self._b, self._c, self._d = a, b, c, d

    @classmethod
    def of(cls, ring: RingSpec, a: Entry, b: Entry, c: Entry, d: Entry) -> MoebiusMap:
        """Build from ints, strings or QuadInts."""

        def coerce(e: Entry) -> QuadInt:
            if isinstance(e, QuadInt):
                return e
            if isinstance(e, int):
                return QuadInt(ring, e, 0)
            return ring.parse(e)

        return cls(coerce(a), coerce(b), coerce(c), coerce(d))

    @classmethod
    def identity(cls, ring: RingSpec) -> MoebiusMap:
        return cls(ring.one, ring.zero, ring.zero, ring.one)

    @classmethod
    def translation(cls, lam: QuadInt) -> MoebiusMap:
        ring = lam.ring
        return cls(ring.one, lam, ring.zero, ring.one)

    @classmethod
    def inversion(cls, ring: RingSpec) -> MoebiusMap:
        """z -> -1/z."""
        return cls(ring.zero, -ring.one, ring.one, ring.zero)

    @property
    def ring(self) -> RingSpec:
        return self._a.ring

    @property
    def a(self) -> QuadInt:
        return self._a

    @property
    def b(self) -> QuadInt:
        return self._b

    @property
    def c(self) -> QuadInt:
        return self._c

    @property
    def d(self) -> QuadInt:
        return self._d

    @property
    def entries(self) -> Tuple[QuadInt, QuadInt, QuadInt, QuadInt]:
        return (self._a, self._b, self._c, self._d)

    @property
    def key(self) -> Tuple[int, ...]:
        """Hashable identity of the projective class."""
        out = [self.ring.d]
        for e in self.entries:
            out.extend(e.sort_key)
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"MoebiusMap({self._a}, {self._b}; {self._c}, {self._d} | d={self.ring.d})"

    def __matmul__(self, other: MoebiusMap) -> MoebiusMap:
        return compose(self, other)

    def __pow__(self, k: int) -> MoebiusMap:
        base = self if k >= 0 else self.inverse()
        result = MoebiusMap.identity(self.ring)
        for _ in range(abs(k)):
            result = result @ base
        return result

    def inverse(self) -> MoebiusMap:
        return MoebiusMap(self._d, -self._b, -self._c, self._a)

    def conjugate_by(self, delta: MoebiusMap) -> MoebiusMap:
        """delta · self · delta⁻¹."""
        return delta @ self @ delta.inverse()

    def trace(self) -> QuadInt:
        """Trace, defined up to sign; the sign follows the normalized matrix."""
        return self._a + self._d

    def trace_sq_minus_4(self) -> QuadInt:
        tr = self.trace()
        return tr * tr - 4

    def fixes_infinity(self) -> bool:
        return self._c.is_zero()

    def is_parabolic(self) -> bool:
        return self.trace_sq_minus_4().is_zero()

    def is_elliptic(self) -> bool:
        tr = self.trace()
        return tr.y == 0 and abs(tr.x) < 2

    def is_hyperbolic(self) -> bool:
        """Hyperbolic or loxodromic: trace outside the real interval [-2, 2]."""
        tr = self.trace()
        return not (tr.y == 0 and abs(tr.x) <= 2)

    def endpoint(self) -> BoundaryPoint:
        """γ(∞) = a/c."""
        return apply_boundary(self, BoundaryPoint.infinity(self.ring))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "a": str(self._a),
            "b": str(self._b),
            "c": str(self._c),
            "d": str(self._d),
            "ring": self.ring.d,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> MoebiusMap:
        ring = RingSpec(int(payload["ring"]))
        return cls.of(ring, payload["a"], payload["b"], payload["c"], payload["d"])

    @classmethod
    def from_json(cls, text: str) -> MoebiusMap:
        return cls.from_dict(json.loads(text))


def compose(g: MoebiusMap, h: MoebiusMap) -> MoebiusMap:
    """Matrix product g·h (apply h first)."""
    return MoebiusMap(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


def invert(g: MoebiusMap) -> MoebiusMap:
    return g.inverse()


def apply_boundary(g: MoebiusMap, p: BoundaryPoint) -> BoundaryPoint:
    """
    Image of a boundary point.

    Exact points stay exact. Approximate points carry their error bound
    through the derivative |cz + d|⁻².
    """
    if p.is_exact:
        return BoundaryPoint.exact(g.a * p.num + g.b * p.den, g.c * p.num + g.d * p.den)
    a, b, c, d = (complex(e) for e in g.entries)
    den = c * p.value + d
    if den == 0:
        return BoundaryPoint.infinity(g.ring)
    return BoundaryPoint.approximate((a * p.value + b) / den, p.error / abs(den) ** 2)


def apply_interior(g: MoebiusMap, x: UpperPoint) -> UpperPoint:
    """Poincaré extension of g to the upper half-space."""
    a, b, c, d = (complex(e) for e in g.entries)
    cz_d = c * x.z + d
    t2 = x.t * x.t
    den = abs(cz_d) ** 2 + abs(c) ** 2 * t2
    z = ((a * x.z + b) * cz_d.conjugate() + a * c.conjugate() * t2) / den
    return UpperPoint(z=z, t=x.t / den)


def horoball_image(g: MoebiusMap, ball: Horoball) -> Horoball:
    """
    Image of the horoball at ∞ of height h.

    Returns the ball centered at a/c with diameter 1/(h·N(c)); when g fixes
    ∞ the image is again the horoball at ∞ of the same height.
    """
    if not ball.center.is_infinity:
        raise InvalidArgumentError("horoball_image expects a horoball centered at infinity")
    if g.fixes_infinity():
        return ball
    return Horoball(center=g.endpoint(), diameter=1.0 / (ball.height * g.c.norm()))


def depth(g: MoebiusMap) -> float:
    """
    Depth of the rational line ending at g(∞).

    Returns:
        log N(c) = 2 log |c|

    Raises:
        NotRationalLineError: If c(g) = 0
    """
    if g.fixes_infinity():
        raise NotRationalLineError("element fixes infinity", gamma=g.to_dict())
    return math.log(g.c.norm())


def height_key(g: MoebiusMap) -> Fraction:
    """Exact N(tr²−4)/N(c)², a monotone proxy of the height."""
    if g.fixes_infinity():
        raise AxisThroughInfinityError("axis passes through infinity", gamma=g.to_dict())
    return Fraction(g.trace_sq_minus_4().norm(), g.c.norm() ** 2)


def height(g: MoebiusMap) -> float:
    """
    Euclidean height of the highest point of the axis of g.

    Args:
        g: Non-parabolic element with c ≠ 0

    Returns:
        |tr² − 4|^{1/2} / (2|c|)

    Raises:
        NoAxisError: If g is parabolic
        AxisThroughInfinityError: If c(g) = 0
    """
    disc = g.trace_sq_minus_4()
    if disc.is_zero():
        raise NoAxisError("parabolic element has no axis", gamma=g.to_dict())
    if g.fixes_infinity():
        raise AxisThroughInfinityError("axis passes through infinity", gamma=g.to_dict())
    key = height_key(g)
    try:
        return float(key) ** 0.25 / 2.0
    except OverflowError:
        return math.exp((math.log(key.numerator) - math.log(key.denominator)) / 4) / 2.0


def axis_endpoints(g: MoebiusMap) -> Tuple[complex, complex]:
    """The two fixed points (a − d ± √(tr² − 4)) / (2c)."""
    if g.is_parabolic():
        raise NoAxisError("parabolic element has no axis", gamma=g.to_dict())
    if g.fixes_infinity():
        raise AxisThroughInfinityError("axis passes through infinity", gamma=g.to_dict())
    root = cmath.sqrt(complex(g.trace_sq_minus_4()))
    a_minus_d = complex(g.a - g.d)
    two_c = 2 * complex(g.c)
    return (a_minus_d + root) / two_c, (a_minus_d - root) / two_c


def delta_norm(g: MoebiusMap, h: MoebiusMap) -> int:
    """Exact N(a(g)c(h) − a(h)c(g))."""
    return (g.a * h.c - h.a * g.c).norm()


def delta(g: MoebiusMap, h: MoebiusMap) -> float:
    """|a(g)c(h) − a(h)c(g)|, the separation of the rational lines of g and h."""
    return math.sqrt(delta_norm(g, h))


def penetration(x: UpperPoint, ball: Horoball) -> float:
    """
    Signed depth of x inside a horoball.

    Positive inside, zero on the horosphere. For a finite center p with
    diameter s the value is log(s·t / (|z − p|² + t²)); for the ball at ∞ of
    height h it is log(t / h).
    """
    if ball.center.is_infinity:
        return math.log(x.t / ball.height)
    p = ball.center.to_complex()
    return math.log(ball.diameter * x.t / (abs(x.z - p) ** 2 + x.t * x.t))
