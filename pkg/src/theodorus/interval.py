"""Closed intervals and rectangular complex boxes over dyadic endpoints.

Every operation takes a working precision ``p`` (mantissa bits) and rounds
its result outward to ``p`` bits, so the returned interval always encloses
the exact result for all points of the operands.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dyadic import ONE, ZERO, Dyadic, divide, round_to_bits

MIN_PRECISION = 16
MAX_PRECISION = 8192


class IntervalError(ArithmeticError):
    pass


class DivisorContainsZero(IntervalError):
    pass


class NegativeRadicand(IntervalError):
    pass


def check_precision(p: int) -> int:
    if not isinstance(p, int) or not MIN_PRECISION <= p <= MAX_PRECISION:
        raise ValueError(f"precision must be an int in [{MIN_PRECISION}, {MAX_PRECISION}], got {p!r}")
    return p


@dataclass(frozen=True, slots=True)
class Interval:
    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo!r}, {self.hi!r}]")

    @classmethod
    def point(cls, x: Dyadic | int) -> "Interval":
        if isinstance(x, int):
            x = Dyadic(x)
        return cls(x, x)

    @classmethod
    def from_fraction(cls, q: Fraction, p: int) -> "Interval":
        """Tightest ``p``-bit enclosure of a rational."""
        num, den = Dyadic(q.numerator), Dyadic(q.denominator)
        return cls(divide(num, den, p, up=False), divide(num, den, p, up=True))

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def mid(self) -> Dyadic:
        return (self.lo + self.hi).scale2(-1)

    def contains(self, x: Dyadic | Fraction | int) -> bool:
        if isinstance(x, Dyadic):
            return self.lo <= x <= self.hi
        x = Fraction(x)
        return self.lo.to_fraction() <= x <= self.hi.to_fraction()

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def intersects(self, other: "Interval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def render(self, digits: int = 30) -> tuple[str, str]:
        """Decimal endpoints; lo rounded down and hi rounded up."""
        return self.lo.to_decimal(digits, up=False), self.hi.to_decimal(digits, up=True)

    def __repr__(self) -> str:
        lo, hi = self.render(20)
        return f"[{lo}, {hi}]"


def round_out(a: Interval, p: int) -> Interval:
    lo = round_to_bits(a.lo, p, up=False)
    hi = round_to_bits(a.hi, p, up=True)
    if lo is a.lo and hi is a.hi:
        return a
    return Interval(lo, hi)


def negate(a: Interval) -> Interval:
    return -a


def iv_add(a: Interval, b: Interval, p: int) -> Interval:
    return round_out(Interval(a.lo + b.lo, a.hi + b.hi), p)


def iv_sub(a: Interval, b: Interval, p: int) -> Interval:
    return iv_add(a, -b, p)


def iv_mul(a: Interval, b: Interval, p: int) -> Interval:
    al, ah, bl, bh = a.lo, a.hi, b.lo, b.hi
    if al.mantissa >= 0 and bl.mantissa >= 0:
        lo, hi = al * bl, ah * bh
    else:
        products = (al * bl, al * bh, ah * bl, ah * bh)
        lo, hi = min(products), max(products)
    return round_out(Interval(lo, hi), p)


def iv_scale(a: Interval, k: int, p: int) -> Interval:
    """Multiply by an exact integer."""
    return iv_mul(a, Interval.point(k), p)


def iv_div(a: Interval, b: Interval, p: int) -> Interval:
    if b.lo.mantissa <= 0 <= b.hi.mantissa:
        raise DivisorContainsZero(f"divisor {b!r} contains zero")
    pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
    lo = min(divide(x, y, p, up=False) for x, y in pairs)
    hi = max(divide(x, y, p, up=True) for x, y in pairs)
    return Interval(lo, hi)


def iv_abs(a: Interval) -> Interval:
    if a.lo.mantissa >= 0:
        return a
    if a.hi.mantissa <= 0:
        return -a
    return Interval(ZERO, max(-a.lo, a.hi))


def iv_min(a: Interval, b: Interval) -> Interval:
    """Enclosure of ``min(x, y)`` over ``x in a``, ``y in b``."""
    return Interval(min(a.lo, b.lo), min(a.hi, b.hi))


def iv_sqr(a: Interval, p: int) -> Interval:
    """Square, tighter than ``iv_mul(a, a)`` when ``a`` straddles zero."""
    m = iv_abs(a)
    return round_out(Interval(m.lo * m.lo, m.hi * m.hi), p)


@dataclass(frozen=True, slots=True)
class ComplexInterval:
    re: Interval
    im: Interval

    @classmethod
    def point(cls, re: Dyadic | int, im: Dyadic | int = 0) -> "ComplexInterval":
        return cls(Interval.point(re), Interval.point(im))

    def mid(self) -> complex:
        return complex(float(self.re.mid()), float(self.im.mid()))

    def intersects(self, other: "ComplexInterval") -> bool:
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def max_width(self) -> Dyadic:
        return max(self.re.width(), self.im.width())


def cx_round_out(z: ComplexInterval, p: int) -> ComplexInterval:
    return ComplexInterval(round_out(z.re, p), round_out(z.im, p))


def cx_mul(a: ComplexInterval, b: ComplexInterval, p: int) -> ComplexInterval:
    re = iv_sub(iv_mul(a.re, b.re, p), iv_mul(a.im, b.im, p), p)
    im = iv_add(iv_mul(a.re, b.im, p), iv_mul(a.im, b.re, p), p)
    return ComplexInterval(re, im)


def cx_modulus_sq(z: ComplexInterval, p: int) -> Interval:
    return iv_add(iv_sqr(z.re, p), iv_sqr(z.im, p), p)


__all__ = [
    "ONE",
    "ZERO",
    "ComplexInterval",
    "DivisorContainsZero",
    "Interval",
    "IntervalError",
    "NegativeRadicand",
    "check_precision",
    "cx_modulus_sq",
    "cx_mul",
    "cx_round_out",
    "iv_abs",
    "iv_add",
    "iv_div",
    "iv_min",
    "iv_mul",
    "iv_scale",
    "iv_sqr",
    "iv_sub",
    "negate",
    "round_out",
]
