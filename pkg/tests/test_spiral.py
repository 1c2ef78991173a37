import math
import threading
from fractions import Fraction

import mpmath
import pytest

from oracles import encloses, float_prefix, mp_prefix, mp_window_product
from theodorus.elementary import iv_pi, iv_sqrt
from theodorus.interval import ComplexInterval, Interval, iv_scale, iv_sub
from theodorus.spiral import (
    AnglePrefixTable,
    InvalidIndex,
    OriginInEnclosure,
    SpiralError,
    angle_prefix,
    iterate_recurrence,
    modulus,
    modulus_sq,
    next_point,
    point_by_product,
    product_enclosure,
    revolution_index,
)

P = 128


def box_encloses(z, value):
    return encloses(z.re, mpmath.re(value)) and encloses(z.im, mpmath.im(value))


class TestNextPoint:
    def test_first_step(self):
        z2 = next_point(ComplexInterval.point(1, 0), P)
        assert z2.re.contains(1) and z2.im.contains(1)

    def test_second_step(self):
        z3 = next_point(ComplexInterval.point(1, 1), P)
        r = 1 / mpmath.sqrt(2)
        assert box_encloses(z3, mpmath.mpc(1 - r, 1 + r))
        assert abs(z3.mid() - complex(0.292893, 1.707107)) < 1e-6

    def test_unit_leg_on_modulus_sqrt3(self):
        z = ComplexInterval(Interval.point(1), iv_sqrt(Interval.point(2), P))
        assert modulus_sq(next_point(z, P), P).contains(4)

    def test_origin_rejected(self):
        box = ComplexInterval(Interval.point(0), Interval.point(0))
        with pytest.raises(OriginInEnclosure):
            next_point(box, P)


class TestPointByProduct:
    def test_first_point_exact(self):
        pt = point_by_product(1, P)
        assert pt.z == ComplexInterval.point(1, 0)
        assert pt.angle == Interval.point(0)

    def test_second_point(self):
        z = point_by_product(2, P).z
        assert z.re.contains(1) and z.im.contains(1)

    def test_fourth_point(self):
        z = point_by_product(4, P).z
        assert box_encloses(z, mp_window_product(1, 4))
        # double-precision evaluation of the product
        assert abs(z.mid() - complex(-0.69270534084, 1.87620875991)) < 1e-10

    @pytest.mark.parametrize("n", [0, -3])
    def test_invalid_index(self, n):
        with pytest.raises(InvalidIndex):
            point_by_product(n, P)

    def test_matches_mpmath(self):
        for n in (5, 17, 100, 333):
            assert box_encloses(product_enclosure(n, P), mp_window_product(1, n))


class TestAnglePrefix:
    def test_empty_sum(self):
        assert angle_prefix(1, 64) == Interval.point(0)

    def test_quarter_pi(self):
        assert encloses(angle_prefix(2, 64), mpmath.pi / 4)

    def test_first_turn_boundary(self):
        two_pi = iv_scale(iv_pi(64), 2, 64)
        assert angle_prefix(17, 64).hi < two_pi.lo
        assert angle_prefix(18, 64).lo > two_pi.hi

    def test_against_oracles(self):
        mp = mp_prefix(500)
        fl = float_prefix(500)
        for n in (3, 18, 55, 499):
            a = angle_prefix(n, 96)
            assert encloses(a, mp[n])
            assert abs(float(a.mid()) - fl[n]) < 1e-12

    def test_invalid_index(self):
        with pytest.raises(InvalidIndex):
            angle_prefix(0, 64)

    def test_monotone_refinement(self):
        for p in (64, 128):
            for n in range(1, 1001, 37):
                assert angle_prefix(n, 2 * p).width() <= angle_prefix(n, p).width()

    def test_strictly_increasing(self):
        entries = [angle_prefix(n, 64) for n in range(1, 300)]
        assert entries[0].lo.sign() == 0
        for a, b in zip(entries, entries[1:]):
            assert a.hi < b.lo

    def test_concurrent_extension_matches_sequential(self):
        table = AnglePrefixTable(72)
        errors = []

        def reader(n):
            try:
                table.get(n)
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [threading.Thread(target=reader, args=(n,)) for n in (40, 400, 120, 399, 7)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        seq = AnglePrefixTable(72)
        seq.extend_to(400)
        assert table.entries[:400] == seq.entries


class TestModulus:
    def test_one(self):
        assert modulus_sq(ComplexInterval.point(1, 0), 64) == Interval.point(1)

    def test_one_plus_i(self):
        assert modulus_sq(ComplexInterval.point(1, 1), 64).contains(2)
        assert encloses(modulus(ComplexInterval.point(1, 1), 64), mpmath.sqrt(2))

    def test_tenth_point(self):
        assert modulus_sq(point_by_product(10, P).z, P).contains(10)


class TestRevolutionIndex:
    # expected values from double-precision prefix sums (see oracles.float_prefix)
    def test_oracle_values(self):
        theta = float_prefix(200)
        for r in (1, 2, 3):
            expected = next(n for n in range(1, 200) if theta[n] > 2 * math.pi * r)
            assert revolution_index(r, 64) == expected

    def test_frozen_values(self):
        assert revolution_index(1, 64) == 18
        assert revolution_index(2, 64) == 55

    def test_low_precision_escalates(self):
        assert revolution_index(2, 16) == 55

    def test_rejects_zero(self):
        with pytest.raises(SpiralError):
            revolution_index(0, 64)


def test_recurrence_and_product_agree_small():
    for n, z in enumerate(iterate_recurrence(300, P), start=1):
        w = product_enclosure(n, P)
        assert z.intersects(w)


def test_telescoping_small():
    for n in range(1, 300):
        assert modulus_sq(product_enclosure(n, 96), 96).contains(n)


def _quadrant(angle, p):
    """Quadrant index 0..3 if the reduced angle lies inside a single open quadrant."""
    pi = iv_pi(p)
    turns = math.floor(float(angle.mid()) / (2 * math.pi))
    reduced = iv_sub(angle, iv_scale(pi, 2 * turns, p), p)
    for q in range(4):
        lo = iv_scale(pi, q, p)
        hi = iv_scale(pi, q + 1, p)
        lo = Interval(lo.lo.scale2(-1), lo.hi.scale2(-1))
        hi = Interval(hi.lo.scale2(-1), hi.hi.scale2(-1))
        if lo.hi < reduced.lo and reduced.hi < hi.lo:
            return q
    return None


def test_angle_matches_quadrant_of_point():
    signs = {0: (1, 1), 1: (-1, 1), 2: (-1, -1), 3: (1, -1)}
    checked = 0
    for n in range(2, 2049):
        q = _quadrant(angle_prefix(n, P), P)
        if q is None:
            continue
        z = product_enclosure(n, P)
        sx, sy = signs[q]
        assert (z.re.lo.sign() == sx if sx > 0 else z.re.hi.sign() == sx)
        assert (z.im.lo.sign() == sy if sy > 0 else z.im.hi.sign() == sy)
        checked += 1
    assert checked > 2000


def test_product_table_is_history_independent():
    # same (n, p) gives the same box regardless of what was computed before
    a = product_enclosure(37, 80)
    product_enclosure(1500, 80)
    assert product_enclosure(37, 80) == a


def test_exactness_of_first_modulus():
    r2 = modulus_sq(point_by_product(2, 128).z, 128)
    assert r2.width().to_fraction() < Fraction(1, 2**60)
