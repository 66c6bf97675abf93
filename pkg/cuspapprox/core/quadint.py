"""
Quadratic Integers

Exact arithmetic in Z and in the norm-Euclidean imaginary quadratic rings
O_{-d}, d in {1, 2, 3, 7, 11}. Elements are written x + y*w where w is
sqrt(-d) when d is not 3 mod 4, and (1 + sqrt(-d))/2 otherwise.

Coordinates are Python integers, so no operation can overflow.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, List, Tuple, Union

from cuspapprox.core.errors import InvalidArgumentError

SUPPORTED_RINGS = (0, 1, 2, 3, 7, 11)

Rational = Union[int, Fraction]

_INT_RE = re.compile(r"^[+-]?\d+$")


def _mul_coords(t: int, n: int, x1, y1, x2, y2):
    """Multiply (x1 + y1 w)(x2 + y2 w) using w² = t·w − n."""
    return x1 * x2 - n * y1 * y2, x1 * y2 + x2 * y1 + t * y1 * y2


@dataclass(frozen=True)
class RingSpec:
    """
    Ring of integers of Q(sqrt(-d)), or Z when d = 0.

    The generator w satisfies w² = t·w − n with t = omega_trace and
    n = omega_norm.
    """

    d: int

    def __post_init__(self):
        if self.d not in SUPPORTED_RINGS:
            raise InvalidArgumentError(
                f"Unsupported ring d={self.d}; expected one of {SUPPORTED_RINGS}", ring=self.d
            )

    @property
    def is_modular(self) -> bool:
        """True for Z, the ring of the modular group."""
        return self.d == 0

    @property
    def half_integral(self) -> bool:
        return self.d % 4 == 3

    @property
    def omega_trace(self) -> int:
        return 1 if self.half_integral else 0

    @property
    def omega_norm(self) -> int:
        return (1 + self.d) // 4 if self.half_integral else self.d

    @cached_property
    def imag_omega(self) -> float:
        """Imaginary part of w (0 for Z)."""
        if self.d == 0:
            return 0.0
        return math.sqrt(self.d) / 2 if self.half_integral else math.sqrt(self.d)

    @cached_property
    def omega_complex(self) -> complex:
        if self.d == 0:
            return 0j
        return complex(self.omega_trace / 2, self.imag_omega)

    # Constructors

    def __call__(self, x: int, y: int = 0) -> QuadInt:
        return QuadInt(self, x, y)

    @property
    def zero(self) -> QuadInt:
        return QuadInt(self, 0, 0)

    @property
    def one(self) -> QuadInt:
        return QuadInt(self, 1, 0)

    @property
    def omega(self) -> QuadInt:
        if self.d == 0:
            raise InvalidArgumentError("Z has no generator w", ring=self.d)
        return QuadInt(self, 0, 1)

    @cached_property
    def units(self) -> Tuple[QuadInt, ...]:
        """All units of the ring (2, 4 or 6 of them)."""
        ys = (0,) if self.d == 0 else (-1, 0, 1)
        found = [
            QuadInt(self, x, y)
            for x in (-1, 0, 1)
            for y in ys
            if self.form(x, y) == 1
        ]
        return tuple(found)

    # Quadratic form on lattice coordinates

    def form(self, u: Rational, v: Rational) -> Rational:
        """|u + v·w|² for rational coordinates."""
        if self.d == 0:
            return u * u
        return u * u + self.omega_trace * u * v + self.omega_norm * v * v

    def bilinear(self, p: Tuple[Rational, Rational], q: Tuple[Rational, Rational]) -> Rational:
        """Re(p · conj(q)) for points given by lattice coordinates."""
        t, n = self.omega_trace, self.omega_norm
        return (
            p[0] * q[0]
            + Fraction(t, 2) * (p[0] * q[1] + p[1] * q[0])
            + n * p[1] * q[1]
        )

    def covering_radius_sq(self) -> Fraction:
        """Squared covering radius of the translation lattice."""
        if self.half_integral:
            return Fraction((1 + self.d) ** 2, 16 * self.d)
        return Fraction(1 + self.d, 4)

    def to_complex(self, u: Rational, v: Rational = 0) -> complex:
        return complex(float(u), 0.0) + float(v) * self.omega_complex

    def coords_of_complex(self, z: complex) -> Tuple[float, float]:
        """Lattice coordinates (floats) of a complex number."""
        if self.d == 0:
            return z.real, 0.0
        v = z.imag / self.imag_omega
        return z.real - v * self.omega_trace / 2, v

    def coords(self, num: QuadInt, den: QuadInt) -> Tuple[Fraction, Fraction]:
        """Exact lattice coordinates of num/den."""
        if den.is_zero():
            raise InvalidArgumentError("division by zero", numerator=str(num))
        top = num * den.conj()
        n = den.norm()
        return Fraction(top.x, n), Fraction(top.y, n)

    def elements_in_disk(
        self, center: Tuple[Rational, Rational], radius: float
    ) -> Iterator[QuadInt]:
        """
        Enumerate ring elements within Euclidean distance `radius` of a point.

        Args:
            center: Lattice coordinates of the center
            radius: Non-negative radius

        Yields:
            QuadInt values with |λ − center| <= radius, in (y, x) order
        """
        cu, cv = center
        r2 = Fraction(radius) ** 2
        if self.d == 0:
            lo = math.floor(cu - radius) - 1
            hi = math.ceil(cu + radius) + 1
            for x in range(lo, hi + 1):
                if (x - cu) ** 2 <= r2:
                    yield QuadInt(self, x, 0)
            return
        span_v = radius / self.imag_omega
        t = self.omega_trace
        for y in range(math.floor(cv - span_v) - 1, math.ceil(cv + span_v) + 2):
            shift = float(cu) - t * (y - float(cv)) / 2
            for x in range(math.floor(shift - radius) - 1, math.ceil(shift + radius) + 2):
                if self.form(x - cu, y - cv) <= r2:
                    yield QuadInt(self, x, y)

    def elements_of_norm_at_most(self, bound: int) -> List[QuadInt]:
        """Nonzero elements with N(q) <= bound."""
        if bound < 1:
            return []
        found = [
            q
            for q in self.elements_in_disk((0, 0), math.sqrt(bound))
            if not q.is_zero() and q.norm() <= bound
        ]
        return found

    # Text form

    def parse(self, text: str) -> QuadInt:
        """
        Parse the textual form "x+y*w".

        Accepts "3", "-w", "2-3*w", "1+w" and spacing around the signs.

        Raises:
            InvalidArgumentError: If the text is malformed for this ring
        """
        s = text.replace(" ", "")
        if not s:
            raise InvalidArgumentError("empty ring element", text=text)
        if "w" not in s:
            if not _INT_RE.match(s):
                raise InvalidArgumentError(f"cannot parse {text!r}", text=text)
            return QuadInt(self, int(s), 0)
        if self.d == 0:
            raise InvalidArgumentError("Z has no generator w", text=text)
        if not s.endswith("w") or s.count("w") != 1:
            raise InvalidArgumentError(f"cannot parse {text!r}", text=text)
        body = s[:-1]
        if body.endswith("*"):
            body = body[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut > 0:
            x_text, y_text = body[:cut], body[cut:]
        else:
            x_text, y_text = "0", body
        if y_text in ("", "+", "-"):
            y = -1 if y_text == "-" else 1
        elif _INT_RE.match(y_text):
            y = int(y_text)
        else:
            raise InvalidArgumentError(f"cannot parse {text!r}", text=text)
        if not _INT_RE.match(x_text):
            raise InvalidArgumentError(f"cannot parse {text!r}", text=text)
        return QuadInt(self, int(x_text), y)


class QuadInt:
    """Exact element x + y·w of a RingSpec."""

    __slots__ = ("_ring", "_x", "_y")

    def __init__(self, ring: RingSpec, x: int, y: int = 0) -> None:
        if ring.d == 0 and y != 0:
            raise InvalidArgumentError("elements of Z have y = 0", x=x, y=y)
        self._ring = ring
        self._x = int(x)
        self._y = int(y)

    @property
    def ring(self) -> RingSpec:
        return self._ring

    @property
    def x(self) -> int:
        return self._x

    @property
    def y(self) -> int:
        return self._y

    @property
    def sort_key(self) -> Tuple[int, int]:
        return (self._x, self._y)

    def __repr__(self) -> str:
        return f"QuadInt(d={self._ring.d}, {self._x}, {self._y})"

    def __str__(self) -> str:
        if self._y == 0:
            return str(self._x)
        coef = {1: "", -1: "-"}.get(self._y, f"{self._y}*")
        ypart = f"{coef}w"
        if self._x == 0:
            return ypart
        sign = "" if ypart.startswith("-") else "+"
        return f"{self._x}{sign}{ypart}"

    def __complex__(self) -> complex:
        return self._ring.to_complex(self._x, self._y)

    def __hash__(self) -> int:
        return hash((self._ring.d, self._x, self._y))

    def _coerce(self, other) -> QuadInt:
        if isinstance(other, QuadInt):
            if other._ring.d != self._ring.d:
                raise InvalidArgumentError(
                    "ring mismatch", left=self._ring.d, right=other._ring.d
                )
            return other
        if isinstance(other, int):
            return QuadInt(self._ring, other, 0)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self._y == 0 and self._x == other
        if isinstance(other, QuadInt):
            return (self._ring.d, self._x, self._y) == (other._ring.d, other._x, other._y)
        return NotImplemented

    def __add__(self, other) -> QuadInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadInt(self._ring, self._x + o._x, self._y + o._y)

    __radd__ = __add__

    def __neg__(self) -> QuadInt:
        return QuadInt(self._ring, -self._x, -self._y)

    def __sub__(self, other) -> QuadInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadInt(self._ring, self._x - o._x, self._y - o._y)

    def __rsub__(self, other) -> QuadInt:
        return (-self) + other

    def __mul__(self, other) -> QuadInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        x, y = _mul_coords(
            self._ring.omega_trace, self._ring.omega_norm, self._x, self._y, o._x, o._y
        )
        return QuadInt(self._ring, x, y)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> QuadInt:
        if exponent < 0:
            raise InvalidArgumentError("negative powers leave the ring", exponent=exponent)
        result = self._ring.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> QuadInt:
        """Complex conjugate."""
        return QuadInt(self._ring, self._x + self._ring.omega_trace * self._y, -self._y)

    def norm(self) -> int:
        """Exact |q|²."""
        return self._ring.form(self._x, self._y)

    def is_zero(self) -> bool:
        return self._x == 0 and self._y == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_real(self) -> bool:
        return self._y == 0

    def exact_div(self, other: QuadInt) -> QuadInt:
        """Division that must be exact."""
        quotient, remainder = euclid_divmod(self, other)
        if not remainder.is_zero():
            raise InvalidArgumentError(f"{other} does not divide {self}", n=str(self), m=str(other))
        return quotient

    def divides(self, other: QuadInt) -> bool:
        if self.is_zero():
            return other.is_zero()
        return euclid_divmod(other, self)[1].is_zero()

    def canonical_associate(self) -> QuadInt:
        """Unit multiple with lexicographically largest (x, y)."""
        return canonical_associate(self)


class FieldElement:
    """Exact element u + v·w of Q(sqrt(-d)) with rational coordinates."""

    __slots__ = ("_ring", "_u", "_v")

    def __init__(self, ring: RingSpec, u: Rational, v: Rational = 0) -> None:
        if ring.d == 0 and v != 0:
            raise InvalidArgumentError("elements of Q have v = 0", u=str(u), v=str(v))
        self._ring = ring
        self._u = Fraction(u)
        self._v = Fraction(v)

    @classmethod
    def from_quadint(cls, q: QuadInt) -> FieldElement:
        return cls(q.ring, q.x, q.y)

    @classmethod
    def ratio(cls, num: QuadInt, den: QuadInt) -> FieldElement:
        u, v = num.ring.coords(num, den)
        return cls(num.ring, u, v)

    @property
    def ring(self) -> RingSpec:
        return self._ring

    @property
    def u(self) -> Fraction:
        return self._u

    @property
    def v(self) -> Fraction:
        return self._v

    @property
    def coords(self) -> Tuple[Fraction, Fraction]:
        return (self._u, self._v)

    def __repr__(self) -> str:
        return f"FieldElement(d={self._ring.d}, {self._u}, {self._v})"

    def __complex__(self) -> complex:
        return self._ring.to_complex(self._u, self._v)

    def __hash__(self) -> int:
        return hash((self._ring.d, self._u, self._v))

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, QuadInt):
            return FieldElement.from_quadint(other)
        if isinstance(other, (int, Fraction)):
            return FieldElement(self._ring, other, 0)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self._ring.d, self._u, self._v) == (o._ring.d, o._u, o._v)

    def __add__(self, other) -> FieldElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self._ring, self._u + o._u, self._v + o._v)

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self._ring, -self._u, -self._v)

    def __sub__(self, other) -> FieldElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self._ring, self._u - o._u, self._v - o._v)

    def __rsub__(self, other) -> FieldElement:
        return (-self) + other

    def __mul__(self, other) -> FieldElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        u, v = _mul_coords(
            self._ring.omega_trace, self._ring.omega_norm, self._u, self._v, o._u, o._v
        )
        return FieldElement(self._ring, u, v)

    __rmul__ = __mul__

    def __truediv__(self, other) -> FieldElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise InvalidArgumentError("division by zero")
        top = self * o.conj()
        return FieldElement(self._ring, top._u / n, top._v / n)

    def __rtruediv__(self, other) -> FieldElement:
        return self._coerce(other) / self

    def conj(self) -> FieldElement:
        return FieldElement(self._ring, self._u + self._ring.omega_trace * self._v, -self._v)

    def norm(self) -> Fraction:
        return Fraction(self._ring.form(self._u, self._v))

    def is_zero(self) -> bool:
        return self._u == 0 and self._v == 0

    def is_integral(self) -> bool:
        return self._u.denominator == 1 and self._v.denominator == 1

    def to_quadint(self) -> QuadInt:
        if not self.is_integral():
            raise InvalidArgumentError(f"{self!r} is not integral")
        return QuadInt(self._ring, int(self._u), int(self._v))

    def as_fraction(self) -> Tuple[QuadInt, QuadInt]:
        """Lowest-terms (num, den) with den a canonical associate."""
        den_int = math.lcm(self._u.denominator, self._v.denominator)
        num = QuadInt(self._ring, int(self._u * den_int), int(self._v * den_int))
        den = QuadInt(self._ring, den_int, 0)
        return reduce_fraction(num, den)


def norm(q: QuadInt) -> int:
    """
    Exact norm |q|² = q·conj(q).

    Args:
        q: Ring element

    Returns:
        Non-negative integer
    """
    return q.norm()


def _floor_pair(num: int, den: int) -> Tuple[int, int]:
    lo = num // den
    return lo, lo + 1


def euclid_divmod(n: QuadInt, m: QuadInt) -> Tuple[QuadInt, QuadInt]:
    """
    Euclidean division n = q·m + r with N(r) < N(m).

    The quotient is searched among the floor/ceil coordinates of the exact
    ratio n/m. The remainder of smallest norm wins; ties go to the
    lexicographically smallest quotient coordinates.

    Args:
        n: Dividend
        m: Divisor

    Returns:
        Tuple (quotient, remainder)

    Raises:
        InvalidArgumentError: If m is zero
    """
    ring = n.ring
    if m.ring.d != ring.d:
        raise InvalidArgumentError("ring mismatch", left=ring.d, right=m.ring.d)
    if m.is_zero():
        raise InvalidArgumentError("division by zero", dividend=str(n))
    top = n * m.conj()
    den = m.norm()
    xs = _floor_pair(top.x, den)
    ys = (0,) if ring.d == 0 else _floor_pair(top.y, den)
    best = None
    for qx in xs:
        for qy in ys:
            q = QuadInt(ring, qx, qy)
            r = n - q * m
            key = (r.norm(), qx, qy)
            if best is None or key < best[0]:
                best = (key, q, r)
    return best[1], best[2]


def gcd_bezout(p: QuadInt, q: QuadInt) -> Tuple[QuadInt, QuadInt, QuadInt]:
    """
    Extended Euclidean algorithm.

    Args:
        p: First element
        q: Second element

    Returns:
        (g, s, t) with s·p + t·q = g, g a gcd (unique up to units)

    Raises:
        InvalidArgumentError: If both inputs are zero
    """
    if p.is_zero() and q.is_zero():
        raise InvalidArgumentError("gcd of (0, 0) is undefined")
    ring = p.ring
    r0, r1 = p, q
    s0, s1 = ring.one, ring.zero
    t0, t1 = ring.zero, ring.one
    while not r1.is_zero():
        quotient, remainder = euclid_divmod(r0, r1)
        r0, r1 = r1, remainder
        s0, s1 = s1, s0 - quotient * s1
        t0, t1 = t1, t0 - quotient * t1
    return r0, s0, t0


def canonical_associate(q: QuadInt) -> QuadInt:
    """
    Representative of the associate class with the largest (x, y).

    Taking the largest rather than the smallest pair keeps positive integers
    canonical: over Z the representative of {3, -3} is 3, so modular traces,
    denominators and artifacts such as {"tr": "3"} print without a sign. The
    smallest pair would pick -3 for the same class.
    """
    if q.is_zero():
        return q
    return max((u * q for u in q.ring.units), key=lambda a: a.sort_key)


def reduce_fraction(num: QuadInt, den: QuadInt) -> Tuple[QuadInt, QuadInt]:
    """
    Bring num/den to lowest terms with a canonical denominator.

    The point at infinity is returned as (1, 0).
    """
    ring = num.ring
    if num.is_zero() and den.is_zero():
        raise InvalidArgumentError("0/0 is not a boundary point")
    if den.is_zero():
        return ring.one, ring.zero
    if num.is_zero():
        return ring.zero, ring.one
    g, _, _ = gcd_bezout(num, den)
    num, den = num.exact_div(g), den.exact_div(g)
    target = canonical_associate(den)
    for u in ring.units:
        if u * den == target:
            return u * num, target
    return num, den


def parse_quadint(ring: RingSpec, text: str) -> QuadInt:
    """Parse "x+y*w" in the given ring."""
    return ring.parse(text)
