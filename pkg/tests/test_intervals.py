"""Containment soundness and geometry of intervals and complex boxes."""

import math
import random

import pytest

from tricert.intervals import (
    ComplexBox,
    EmptyIntervalError,
    Interval,
    ZeroDivisionBoxError,
)


def _random_interval(rng, span=4.0):
    a = rng.uniform(-span, span)
    b = rng.uniform(-span, span)
    return Interval(min(a, b), max(a, b))


def _random_box(rng, span=4.0):
    return ComplexBox(_random_interval(rng, span), _random_interval(rng, span))


def _member(rng, iv):
    return rng.uniform(iv.lo, iv.hi)


def _box_member(rng, box):
    return complex(_member(rng, box.re), _member(rng, box.im))


class TestInterval:
    def test_exact_integer_add(self):
        s = Interval(1.0, 2.0) + Interval(3.0, 4.0)
        assert s.contains_interval(Interval(4.0, 6.0))

    def test_empty_is_absorbing(self):
        a = Interval(1.0, 2.0)
        assert (a + Interval.EMPTY).is_empty
        assert (a * Interval.EMPTY).is_empty
        assert (Interval.EMPTY - a).is_empty

    def test_inverted_endpoints_rejected(self):
        with pytest.raises(EmptyIntervalError):
            Interval(2.0, 1.0)
        with pytest.raises(EmptyIntervalError):
            Interval(0.0, math.inf)

    def test_sub_self_contains_zero(self):
        rng = random.Random(1)
        for _ in range(500):
            a = _random_interval(rng)
            assert (a - a).contains(0.0)

    def test_sqr_never_negative(self):
        s = Interval(-1.0, 1.0).sqr()
        assert s.lo == 0.0 and s.contains(1.0)
        assert Interval(-2.0, -1.0).sqr().lo >= 0.0

    def test_sqrt_domain(self):
        assert Interval(0.0, 4.0).sqrt().contains(2.0)
        with pytest.raises(EmptyIntervalError):
            Interval(-1.0, 1.0).sqrt()

    def test_recip_refuses_zero(self):
        with pytest.raises(ZeroDivisionBoxError):
            Interval(-1.0, 1.0).recip()
        r = Interval(2.0, 4.0).recip()
        assert r.contains(0.25) and r.contains(0.5)

    def test_midpoint_is_member(self):
        rng = random.Random(2)
        for _ in range(500):
            a = _random_interval(rng, span=1e8)
            assert a.contains(a.midpoint())

    def test_around_contains_radius(self):
        a = Interval.around(1.0, 0.25)
        assert a.contains(0.75) and a.contains(1.25)

    def test_bisect_tiles(self):
        lo, hi = Interval(0.0, 4.0).bisect()
        assert lo == Interval(0.0, 2.0)
        assert hi == Interval(2.0, 4.0)

    def test_hull_contains_both(self):
        rng = random.Random(3)
        for _ in range(200):
            a, b = _random_interval(rng), _random_interval(rng)
            h = a.hull(b)
            assert h.contains_interval(a) and h.contains_interval(b)

    def test_monotonicity(self):
        # A subset of A', B subset of B' implies op(A,B) subset of op(A',B')
        rng = random.Random(4)
        for _ in range(500):
            a_big = _random_interval(rng)
            b_big = _random_interval(rng)
            a = Interval(_member(rng, a_big), a_big.hi)
            b = Interval(b_big.lo, _member(rng, b_big))
            for op in (lambda x, y: x + y, lambda x, y: x - y, lambda x, y: x * y):
                assert op(a_big, b_big).contains_interval(op(a, b))

    def test_fuzz_containment(self):
        rng = random.Random(5)
        for _ in range(5000):
            a, b = _random_interval(rng), _random_interval(rng)
            x, y = _member(rng, a), _member(rng, b)
            assert (a + b).contains(x + y)
            assert (a - b).contains(x - y)
            assert (a * b).contains(x * y)
            assert a.sqr().contains(x * x)
            assert a.abs().contains(abs(x))
            assert a.abs().mag() >= abs(x)


class TestComplexBox:
    def test_conj_is_exact_involution(self):
        rng = random.Random(6)
        for _ in range(200):
            z = _random_box(rng)
            assert z.conj().conj() == z

    def test_conj_of_real_box_is_identity(self):
        z = ComplexBox(Interval(1.0, 2.0), Interval.point(0.0))
        assert z.conj() == z

    def test_conj_flips_imaginary(self):
        z = ComplexBox(Interval(1.0, 2.0), Interval(3.0, 4.0))
        assert z.conj() == ComplexBox(Interval(1.0, 2.0), Interval(-4.0, -3.0))

    def test_sqr_real_segment(self):
        z = ComplexBox(Interval(-1.0, 1.0), Interval.point(0.0))
        s = z.sqr()
        assert s.re.contains_interval(Interval(0.0, 1.0))
        # the tight real-square keeps the lower bound at 0 up to rounding
        assert s.re.lo >= -1e-300

    def test_sqr_of_i(self):
        s = ComplexBox.point(1j).sqr()
        assert s.contains(-1.0 + 0j)

    def test_abs_345(self):
        z = ComplexBox.point(3.0 + 4.0j)
        assert z.abs().contains(5.0)

    def test_abs_lower_bound_zero_when_containing_origin(self):
        z = ComplexBox(Interval(-1.0, 1.0), Interval(-1.0, 1.0))
        assert z.abs().lo == 0.0

    def test_recip_refuses_origin(self):
        with pytest.raises(ZeroDivisionBoxError):
            ComplexBox(Interval(-1.0, 1.0), Interval(-1.0, 1.0)).recip()

    def test_width_outward(self):
        u = ComplexBox(Interval(-0.3, 0.3), Interval(-0.3, 0.3))
        w = u.width()
        assert w >= 0.6
        assert w <= math.nextafter(math.nextafter(0.6, 1.0), 1.0)

    def test_quarter_tiles_exactly(self):
        box = ComplexBox(Interval(0.0, 4.0), Interval(0.0, 1.0))
        sw, se, nw, ne = box.quarter()
        assert sw.hull(se).hull(nw).hull(ne) == box
        assert sw.re.hi == se.re.lo and sw.im.hi == nw.im.lo

    def test_fuzz_containment(self):
        rng = random.Random(7)
        for _ in range(5000):
            a, b = _random_box(rng), _random_box(rng)
            z, w = _box_member(rng, a), _box_member(rng, b)
            assert (a + b).contains(z + w)
            assert (a - b).contains(z - w)
            assert (a * b).contains(z * w)
            assert a.sqr().contains(z * z)
            assert a.conj().contains(z.conjugate())
            assert a.abs().contains(abs(z))
            assert a.abs_sqr().contains(z.real * z.real + z.imag * z.imag)

    def test_recip_fuzz(self):
        rng = random.Random(8)
        done = 0
        while done < 500:
            a = _random_box(rng)
            try:
                r = a.recip()
            except ZeroDivisionBoxError:
                continue
            z = _box_member(rng, a)
            assert r.contains(1.0 / z)
            done += 1
