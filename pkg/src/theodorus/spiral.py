"""Outer points of the square-root spiral and their cumulative angles.

Two independent routes to z_n are provided: stepping the geometric
recurrence ``z -> z + i z/|z|`` and multiplying out the factors
``1 + i/sqrt(k)``.  Both accumulate rectangular boxes, which widen by a
factor ``1 + 1/sqrt(k)`` per step (the wrapping effect), so products are
carried at a working precision with enough guard bits to absorb that growth
and only the final box is rounded to the requested precision.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterator

from .elementary import iv_atan, iv_pi, iv_sqrt
from .interval import (
    MAX_PRECISION,
    ComplexInterval,
    Interval,
    check_precision,
    cx_modulus_sq,
    cx_round_out,
    iv_add,
    iv_div,
    iv_mul,
    iv_scale,
    iv_sub,
    round_out,
)

# extra bits for the prefix-sum accumulator
PREFIX_GUARD_BITS = 32

_ONE = Interval.point(1)


class SpiralError(ValueError):
    pass


class InvalidIndex(SpiralError):
    pass


class OriginInEnclosure(ArithmeticError):
    pass


class PrecisionExhausted(ArithmeticError):
    pass


@dataclass(frozen=True)
class SpiralPoint:
    index: int
    z: ComplexInterval
    angle: Interval


def wrap_guard_bits(factors: int) -> int:
    """Guard bits that absorb box growth over ``factors`` spiral factors.

    The box width grows by at most prod(1 + 1/sqrt(k)) <= exp(2 sqrt(L)).
    """
    if factors <= 0:
        return 16
    return math.ceil(2 * math.sqrt(factors) / math.log(2)) + factors.bit_length() + 16


def _bucket(factors: int) -> int:
    return max(factors, 1).bit_length()


def inv_sqrt(k: int, p: int) -> Interval:
    """Enclosure of 1/sqrt(k)."""
    return iv_div(_ONE, iv_sqrt(Interval.point(k), p), p)


def spiral_factor(k: int, p: int) -> ComplexInterval:
    return ComplexInterval(_ONE, inv_sqrt(k, p))


def mul_by_factor(z: ComplexInterval, s: Interval, p: int) -> ComplexInterval:
    """z * (1 + i s)."""
    re = iv_sub(z.re, iv_mul(z.im, s, p), p)
    im = iv_add(z.im, iv_mul(z.re, s, p), p)
    return ComplexInterval(re, im)


def modulus_sq(z: ComplexInterval, p: int) -> Interval:
    return cx_modulus_sq(z, p)


def next_point(z: ComplexInterval, p: int) -> ComplexInterval:
    """One step of the construction: erect a unit leg perpendicular to z."""
    r2 = modulus_sq(z, p)
    if r2.lo.mantissa <= 0:
        raise OriginInEnclosure(f"|z|^2 enclosure {r2!r} reaches the origin")
    r = iv_sqrt(r2, p)
    ux = iv_div(z.re, r, p)
    uy = iv_div(z.im, r, p)
    return ComplexInterval(iv_sub(z.re, uy, p), iv_add(z.im, ux, p))


def iterate_recurrence(n_max: int, p: int) -> Iterator[ComplexInterval]:
    """Yield enclosures of z_1..z_{n_max} by stepping ``next_point``.

    Steps run at ``p`` plus twice the wrap guard bits for ``n_max`` (the
    division by |z| roughly doubles the growth rate); each yielded box is
    rounded out to ``p``.
    """
    check_precision(p)
    w = p + 2 * wrap_guard_bits(n_max)
    z = ComplexInterval.point(1, 0)
    for n in range(1, n_max + 1):
        if n > 1:
            z = next_point(z, w)
        yield cx_round_out(z, p)


class _ProductTable:
    """z_1, z_2, ... accumulated left to right at one working precision."""

    def __init__(self, w: int):
        self.w = w
        self.entries = [ComplexInterval.point(1, 0)]
        self._lock = threading.Lock()

    def get(self, n: int) -> ComplexInterval:
        if n > len(self.entries):
            with self._lock:
                k = len(self.entries)
                z = self.entries[-1]
                while k < n:
                    z = mul_by_factor(z, inv_sqrt(k, self.w), self.w)
                    self.entries.append(z)
                    k += 1
        return self.entries[n - 1]


_product_tables: dict[tuple[int, int], _ProductTable] = {}
_tables_lock = threading.Lock()


def _product_table(p: int, bucket: int) -> _ProductTable:
    key = (p, bucket)
    with _tables_lock:
        table = _product_tables.get(key)
        if table is None:
            table = _ProductTable(p + wrap_guard_bits(1 << bucket))
            _product_tables[key] = table
    return table


def product_enclosure(n: int, p: int) -> ComplexInterval:
    """Enclosure of prod_{k=1}^{n-1} (1 + i/sqrt(k)), rounded to ``p`` bits."""
    if n < 1:
        raise InvalidIndex(f"index must be >= 1, got {n}")
    check_precision(p)
    if n == 1:
        return ComplexInterval.point(1, 0)
    return cx_round_out(_product_table(p, _bucket(n - 1)).get(n), p)


def point_by_product(n: int, p: int) -> SpiralPoint:
    return SpiralPoint(n, product_enclosure(n, p), angle_prefix(n, p))


class AnglePrefixTable:
    """Cumulative angles theta(n) = sum_{k<n} arctan(1/sqrt(k)) at one precision.

    The running sum is carried with extra guard bits; each stored entry is
    that sum rounded out to ``precision``, so an entry never depends on how
    far the table has been extended.
    """

    def __init__(self, precision: int):
        self.precision = check_precision(precision)
        self._work = precision + PREFIX_GUARD_BITS
        self._sum = Interval.point(0)
        self.entries: list[Interval] = [self._sum]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.entries)

    def extend_to(self, n: int) -> None:
        if n <= len(self.entries):
            return
        with self._lock:
            w = self._work
            k = len(self.entries)
            acc = self._sum
            while k < n:
                acc = iv_add(acc, iv_atan(inv_sqrt(k, w), w), w)
                self.entries.append(round_out(acc, self.precision))
                k += 1
            self._sum = acc

    def get(self, n: int) -> Interval:
        if n < 1:
            raise InvalidIndex(f"index must be >= 1, got {n}")
        if n > len(self.entries):
            self.extend_to(n)
        return self.entries[n - 1]


_prefix_tables: dict[int, AnglePrefixTable] = {}


def prefix_table(p: int) -> AnglePrefixTable:
    with _tables_lock:
        table = _prefix_tables.get(p)
        if table is None:
            table = _prefix_tables[p] = AnglePrefixTable(p)
    return table


def reset_tables() -> None:
    """Drop every cached prefix and product table."""
    with _tables_lock:
        _prefix_tables.clear()
        _product_tables.clear()


def angle_prefix(n: int, p: int) -> Interval:
    if n < 1:
        raise InvalidIndex(f"index must be >= 1, got {n}")
    return prefix_table(check_precision(p)).get(n)


def revolution_index(r: int, p: int, cap: int = MAX_PRECISION) -> int:
    """Smallest n whose cumulative angle is certified above 2*pi*r."""
    if r < 1:
        raise SpiralError(f"revolution number must be >= 1, got {r}")
    q = check_precision(p)
    while True:
        target = iv_scale(iv_pi(q), 2 * r, q)
        n = 1
        while True:
            theta = angle_prefix(n, q)
            if theta.lo > target.hi:
                return n
            if theta.hi >= target.lo:
                break  # straddles 2*pi*r at this precision
            n += 1
        if q >= cap:
            raise PrecisionExhausted(f"cannot separate theta({n}) from 2*pi*{r} at {q} bits")
        q = min(2 * q, cap)


def modulus(z: ComplexInterval, p: int) -> Interval:
    return iv_sqrt(modulus_sq(z, p), p)


__all__ = [
    "AnglePrefixTable",
    "InvalidIndex",
    "OriginInEnclosure",
    "PrecisionExhausted",
    "SpiralError",
    "SpiralPoint",
    "angle_prefix",
    "inv_sqrt",
    "iterate_recurrence",
    "modulus",
    "modulus_sq",
    "next_point",
    "point_by_product",
    "prefix_table",
    "reset_tables",
    "product_enclosure",
    "revolution_index",
    "spiral_factor",
    "wrap_guard_bits",
]
