"""
Utility functions for boundary-point input.

Converts user input (complex numbers, decimal strings, fractions, mpmath
numbers, lattice coordinates) into exact rational lattice coordinates and
draws seeded random points.
"""

import random
from fractions import Fraction
from typing import Tuple

import mpmath

from cuspapprox.core.errors import InvalidArgumentError
from cuspapprox.core.quadint import RingSpec

Coords = Tuple[Fraction, Fraction]


def _fraction(text: str, original: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidArgumentError(f"cannot parse {original!r}", text=original) from exc


def parse_complex(text: str) -> Tuple[Fraction, Fraction]:
    """
    Parse "0.37+0.21i" (or "j") exactly into real and imaginary Fractions.

    Args:
        text: Decimal complex literal; rationals like "1/3" are accepted for each part

    Returns:
        (real part, imaginary part)

    Raises:
        InvalidArgumentError: If the text is not a complex literal
    """
    s = text.replace(" ", "")
    if not s:
        raise InvalidArgumentError("empty boundary point")
    if s[-1] not in "ij":
        return _fraction(s, text), Fraction(0)
    body = s[:-1]
    if body.endswith("*"):
        body = body[:-1]
    cut = -1
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            cut = k
            break
    real_text, imag_text = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
    if imag_text in ("", "+"):
        imag = Fraction(1)
    elif imag_text == "-":
        imag = Fraction(-1)
    else:
        imag = _fraction(imag_text, text)
    return _fraction(real_text, text), imag


def mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    """
    Exact value of a binary mpmath float.

    Raises:
        InvalidArgumentError: For infinities and nan
    """
    if not mpmath.isfinite(x):
        raise InvalidArgumentError("boundary point must be finite", value=str(x))
    sign, man, exp, _ = x._mpf_
    value = Fraction(-int(man) if sign else int(man))
    return value * Fraction(2) ** int(exp)


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        return mpf_to_fraction(x)
    return Fraction(str(x))


def real_imag(xi) -> Tuple[Fraction, Fraction]:
    """Exact real and imaginary parts of a supported input."""
    if isinstance(xi, str):
        return parse_complex(xi)
    if isinstance(xi, mpmath.mpc):
        return _exact(xi.real), _exact(xi.imag)
    if isinstance(xi, complex):
        return Fraction(xi.real), Fraction(xi.imag)
    return _exact(xi), Fraction(0)


def to_lattice_coords(ring: RingSpec, xi, precision: int = 30) -> Coords:
    """
    Exact lattice coordinates (u, v) with ξ = u + v·w.

    A tuple is taken as lattice coordinates already. For rings where w has
    an irrational imaginary part, v is rounded at `precision` digits.

    Raises:
        InvalidArgumentError: For non-real input on the modular ring
    """
    if isinstance(xi, tuple):
        if len(xi) != 2:
            raise InvalidArgumentError("lattice coordinates need two entries")
        u, v = Fraction(xi[0]), Fraction(xi[1])
        if ring.is_modular and v != 0:
            raise InvalidArgumentError("boundary points of the modular group are real")
        return u, v
    real, imag = real_imag(xi)
    if ring.is_modular:
        if imag != 0:
            raise InvalidArgumentError("boundary points of the modular group are real", xi=str(xi))
        return real, Fraction(0)
    if ring.d == 1:
        return real, imag
    with mpmath.workdps(precision):
        im_omega = mpmath.sqrt(ring.d) / (2 if ring.half_integral else 1)
        v = mpf_to_fraction(mpmath.mpf(imag.numerator) / imag.denominator / im_omega)
    return real - v * Fraction(ring.omega_trace, 2), v


def random_lattice_point(ring: RingSpec, rng: random.Random, digits: int = 40) -> Coords:
    """Random point of the fundamental cell with `digits` decimal digits per coordinate."""
    scale = 10 ** digits
    u = Fraction(rng.randrange(scale), scale)
    v = Fraction(0) if ring.is_modular else Fraction(rng.randrange(scale), scale)
    return u, v
