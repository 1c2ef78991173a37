"""Certified square root, arctangent and pi on dyadic intervals."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .dyadic import ONE, ZERO, Dyadic
from .interval import (
    Interval,
    NegativeRadicand,
    iv_add,
    iv_div,
    iv_mul,
    iv_sqr,
    iv_sub,
    round_out,
)

# extra bits carried inside the transcendental kernels before the final rounding
GUARD_BITS = 16

_ONE = Interval.point(ONE)


def _sqrt_point(x: Dyadic, p: int) -> Interval:
    m, e = x.mantissa, x.exponent
    if m == 0:
        return Interval(ZERO, ZERO)
    # shift so the scaled mantissa has >= 2p+2 bits and an even exponent
    t = max(0, 2 * p + 2 - m.bit_length())
    if (t - e) & 1:
        t += 1
    k = (t - e) // 2
    n = m << t
    s = isqrt(n)
    hi = s if s * s == n else s + 1
    return Interval(Dyadic(s, -k), Dyadic(hi, -k))


def iv_sqrt(a: Interval, p: int) -> Interval:
    if a.lo.mantissa < 0:
        raise NegativeRadicand(f"sqrt of interval with negative part {a!r}")
    lo = _sqrt_point(a.lo, p)
    hi = lo if a.is_point() else _sqrt_point(a.hi, p)
    return round_out(Interval(lo.lo, hi.hi), p)


def _atan_series(y: Dyadic, w: int) -> Interval:
    """arctan(y) for 0 <= y <= 1/4 by the Maclaurin series plus remainder bound."""
    if y.mantissa == 0:
        return Interval(ZERO, ZERO)
    # fixed point with F fractional bits; *_lo tracks floors, *_hi ceilings
    F = w + 8
    scaled = y.scale2(F)
    p_lo = scaled.floor()
    p_hi = -((-scaled).floor())
    y2_lo = (p_lo * p_lo) >> F
    y2_hi = -((-(p_hi * p_hi)) >> F)
    stop = 1 << (F - w - 2)
    lo = hi = 0
    j = 0
    while True:
        d = 2 * j + 1
        t_lo = p_lo // d
        t_hi = -(-p_hi // d)
        if t_hi < stop:
            break
        if j % 2 == 0:
            lo += t_lo
            hi += t_hi
        else:
            lo -= t_hi
            hi -= t_lo
        p_lo = (p_lo * y2_lo) >> F
        p_hi = -((-(p_hi * y2_hi)) >> F)
        j += 1
    # alternating series: the tail has the sign of its first term and is smaller
    if j % 2 == 0:
        hi += t_hi
    else:
        lo -= t_hi
    return round_out(Interval(Dyadic(lo, -F), Dyadic(hi, -F)), w)


def _halve_angle(x: Interval, w: int) -> Interval:
    # tan(a/2) = t / (1 + sqrt(1 + t^2)) with t = tan(a)
    root = iv_sqrt(iv_add(_ONE, iv_sqr(x, w), w), w)
    return iv_div(x, iv_add(_ONE, root, w), w)


def _atan_point(x: Dyadic, w: int) -> Interval:
    """Enclosure of arctan(x) at working precision ``w``."""
    s = x.sign()
    if s == 0:
        return Interval(ZERO, ZERO)
    if s < 0:
        return -_atan_point(-x, w)
    if x > ONE:
        recip = iv_div(_ONE, Interval.point(x), w)
        inner = _atan_monotone(recip, w)
        half_pi = _pi_cached(w)
        half_pi = Interval(half_pi.lo.scale2(-1), half_pi.hi.scale2(-1))
        return iv_sub(half_pi, inner, w)
    y = _halve_angle(_halve_angle(Interval.point(x), w), w)
    lo = _atan_series(y.lo, w)
    hi = lo if y.is_point() else _atan_series(y.hi, w)
    return Interval(lo.lo.scale2(2), hi.hi.scale2(2))


def _atan_monotone(a: Interval, w: int) -> Interval:
    lo = _atan_point(a.lo, w)
    if a.is_point():
        return lo
    return Interval(lo.lo, _atan_point(a.hi, w).hi)


def iv_atan(a: Interval, p: int) -> Interval:
    return round_out(_atan_monotone(a, p + GUARD_BITS), p)


@lru_cache(maxsize=None)
def _pi_cached(p: int) -> Interval:
    w = p + GUARD_BITS
    a5 = iv_atan(Interval.from_fraction(Fraction(1, 5), w), w)
    a239 = iv_atan(Interval.from_fraction(Fraction(1, 239), w), w)
    pi = iv_sub(iv_mul(Interval.point(16), a5, w), iv_mul(Interval.point(4), a239, w), w)
    return round_out(pi, p)


def iv_pi(p: int) -> Interval:
    """Enclosure of pi with width at most ``2**(4 - p)`` (Machin's formula)."""
    return _pi_cached(p)
