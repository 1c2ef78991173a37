"""Exact binary rationals ``mantissa * 2**exponent``.

Ring operations (add, sub, mul, neg) are exact.  Anything that cannot be
exact (division, rounding to a mantissa width) takes an explicit rounding
direction so callers can build outward-rounded intervals on top.
"""

from __future__ import annotations

from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction


def _trailing_zeros(m: int) -> int:
    return (m & -m).bit_length() - 1


class Dyadic:
    """Canonical dyadic rational: mantissa odd (or the pair is ``(0, 0)``).

    Treated as immutable; nothing in the package mutates an instance.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int, exponent: int = 0):
        if mantissa == 0:
            exponent = 0
        else:
            tz = _trailing_zeros(mantissa)
            if tz:
                mantissa >>= tz
                exponent += tz
        self.mantissa = mantissa
        self.exponent = exponent

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Dyadic":
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, -(den.bit_length() - 1))

    @classmethod
    def from_float(cls, x: float) -> "Dyadic":
        return cls.from_fraction(Fraction(x))

    # -- exact ring operations ------------------------------------------------

    def __add__(self, other: "Dyadic") -> "Dyadic":
        a, ea = self.mantissa, self.exponent
        b, eb = other.mantissa, other.exponent
        if a == 0:
            return other
        if b == 0:
            return self
        if ea < eb:
            return Dyadic(a + (b << (eb - ea)), ea)
        return Dyadic((a << (ea - eb)) + b, eb)

    def __neg__(self) -> "Dyadic":
        return _raw(-self.mantissa, self.exponent)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        # product of odd mantissas is odd, so no renormalisation is needed
        m = self.mantissa * other.mantissa
        if m == 0:
            return ZERO
        return _raw(m, self.exponent + other.exponent)

    def scale2(self, k: int) -> "Dyadic":
        """Exact multiplication by ``2**k``."""
        if self.mantissa == 0:
            return self
        return _raw(self.mantissa, self.exponent + k)

    def __abs__(self) -> "Dyadic":
        return -self if self.mantissa < 0 else self

    # -- comparison -----------------------------------------------------------

    def _cmp(self, other: "Dyadic") -> int:
        a, ea = self.mantissa, self.exponent
        b, eb = other.mantissa, other.exponent
        sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
        if sa != sb or sa == 0:
            return (sa > sb) - (sa < sb)
        if ea < eb:
            b <<= eb - ea
        elif eb < ea:
            a <<= ea - eb
        return (a > b) - (a < b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.mantissa == other.mantissa and self.exponent == other.exponent

    def __lt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "Dyadic") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "Dyadic") -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        return hash((self.mantissa, self.exponent))

    def sign(self) -> int:
        m = self.mantissa
        return (m > 0) - (m < 0)

    # -- conversions ----------------------------------------------------------

    def bits(self) -> int:
        """Mantissa width in bits."""
        return abs(self.mantissa).bit_length()

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def floor(self) -> int:
        if self.exponent >= 0:
            return self.mantissa << self.exponent
        return self.mantissa >> -self.exponent

    def to_decimal(self, digits: int = 30, up: bool = False) -> str:
        """Decimal string with ``digits`` significant digits, rounded down or up."""
        m, e = self.mantissa, self.exponent
        if e >= 0:
            exact = Decimal(m << e)
        else:
            # m * 2**e == (m * 5**-e) * 10**e, built from a string so nothing rounds
            exact = Decimal(f"{m * 5 ** -e}E{e}")
        ctx = Context(prec=digits, rounding=ROUND_CEILING if up else ROUND_FLOOR)
        return format(ctx.plus(exact), "f")

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def __str__(self) -> str:
        return self.to_decimal(17)


def _raw(mantissa: int, exponent: int) -> Dyadic:
    # caller guarantees canonical form
    d = object.__new__(Dyadic)
    d.mantissa = mantissa
    d.exponent = exponent
    return d


ZERO = Dyadic(0)
ONE = Dyadic(1)


def round_to_bits(x: Dyadic, p: int, up: bool) -> Dyadic:
    """Round ``x`` to at most ``p`` mantissa bits toward +inf (``up``) or -inf."""
    m = x.mantissa
    shift = abs(m).bit_length() - p
    if shift <= 0:
        return x
    if up:
        m = -((-m) >> shift)
    else:
        m >>= shift
    return Dyadic(m, x.exponent + shift)


def divide(a: Dyadic, b: Dyadic, p: int, up: bool) -> Dyadic:
    """``a / b`` rounded to ``p`` significant bits in the given direction."""
    if b.mantissa == 0:
        raise ZeroDivisionError("division by zero dyadic")
    na, nb = a.mantissa, b.mantissa
    if na == 0:
        return ZERO
    if nb < 0:
        na, nb = -na, -nb
    # scale so the integer quotient carries at least p+1 bits
    shift = max(0, p + 1 + nb.bit_length() - abs(na).bit_length())
    q, r = divmod(na << shift, nb)
    if r and up:
        q += 1
    return round_to_bits(Dyadic(q, a.exponent - b.exponent - shift), p, up)
