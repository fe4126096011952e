"""Quaternion arithmetic, spheres, and slice rotation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatspec import I, J, K, ONE, Quaternion, Sphere, rotate_to_slice, sphere_of
from quatspec.errors import ZeroDivisor

from _helpers import assert_quat_close, random_quaternion, rng

FINITE = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


def test_defining_relations():
    assert I * I == Quaternion(-1.0)
    assert J * J == Quaternion(-1.0)
    assert K * K == Quaternion(-1.0)
    assert I * J * K == Quaternion(-1.0)
    assert I * J == K
    assert J * K == I
    assert K * I == J
    assert J * I == -K


def test_conjugate_pair_product():
    p = Quaternion(1.0, 1.0, 0.0, 0.0)
    assert p * p.conjugate() == Quaternion(2.0)


def test_parts():
    q = Quaternion(1.0, 1.0, 1.0, 1.0)
    assert q.conjugate() == Quaternion(1.0, -1.0, -1.0, -1.0)
    assert abs(q) == 2.0
    assert q.real == 1.0
    assert q.imag == Quaternion(0.0, 1.0, 1.0, 1.0)

    five = Quaternion(5.0)
    assert five.conjugate() == five
    assert abs(five) == 5.0
    assert five.imag == Quaternion(0.0)

    pyth = Quaternion(0.0, 3.0, 4.0, 0.0)
    assert abs(pyth) == 5.0
    assert pyth.real == 0.0


def test_inverse_examples():
    assert_quat_close(I.inverse(), -I, tol=0.0)
    assert_quat_close(Quaternion(2.0).inverse(), Quaternion(0.5), tol=0.0)
    q = Quaternion(1.0, 1.0, 1.0, 1.0)
    assert_quat_close(q.inverse(), Quaternion(0.25, -0.25, -0.25, -0.25), 1e-16)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisor):
        Quaternion(0.0).inverse()
    with pytest.raises(ZeroDivisor):
        Quaternion(1e-301).inverse()


def test_norm_multiplicative():
    gen = rng(101)
    for _ in range(10_000):
        p = random_quaternion(gen)
        q = random_quaternion(gen)
        lhs = abs(p * q)
        rhs = abs(p) * abs(q)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)


def test_conjugation_antihomomorphism_exact_on_small_integers():
    gen = rng(102)
    for _ in range(500):
        p = Quaternion(*(float(v) for v in gen.integers(-9, 10, size=4)))
        q = Quaternion(*(float(v) for v in gen.integers(-9, 10, size=4)))
        assert (p * q).conjugate() == q.conjugate() * p.conjugate()


def test_power_matches_repeated_product():
    gen = rng(103)
    for _ in range(50):
        q = random_quaternion(gen)
        acc = ONE
        for k in range(6):
            assert_quat_close(q ** k, acc, 1e-10 * (1 + abs(acc)))
            acc = acc * q


def test_mixed_scalar_arithmetic():
    q = Quaternion(1.0, 2.0, 3.0, 4.0)
    assert q + 1 == Quaternion(2.0, 2.0, 3.0, 4.0)
    assert 1 + q == Quaternion(2.0, 2.0, 3.0, 4.0)
    assert q - 1j == Quaternion(1.0, 1.0, 3.0, 4.0)
    assert 2.0 * q == Quaternion(2.0, 4.0, 6.0, 8.0)
    assert q / 2 == Quaternion(0.5, 1.0, 1.5, 2.0)
    assert_quat_close(q * q.inverse(), ONE, 1e-15)


def test_to_complex_round_trip():
    z = 1.5 - 2.25j
    q = Quaternion.from_complex(z)
    assert q.to_complex() == z
    with pytest.raises(ValueError):
        J.to_complex()


def test_sphere_of_examples():
    assert sphere_of(I) == Sphere(0.0, 1.0)
    assert sphere_of(Quaternion(3.0, 0.0, 4.0, 0.0)) == Sphere(3.0, 4.0)
    assert sphere_of(Quaternion(-2.0)) == Sphere(-2.0, 0.0)


def test_sphere_geometry():
    s = Sphere(1.0, 2.0)
    assert s.representative == 1.0 + 2.0j
    assert s.abs_max() == math.hypot(1.0, 2.0)
    # distance from a point on the axis: hypot(re offset, im_norm)
    assert abs(s.param_distance(4.0, 0.0) - math.hypot(3.0, 2.0)) < 1e-15
    assert s.contains(Quaternion(1.0, 0.0, 2.0, 0.0), tol=1e-12)
    assert not s.contains(Quaternion(1.0, 0.0, 2.1, 0.0), tol=1e-3)
    assert abs(s.distance_to(Quaternion(1.0, 0.0, 0.0, 3.0)) - 1.0) < 1e-15


def test_rotate_to_slice_examples():
    s, z = rotate_to_slice(J)
    r = 1.0 / math.sqrt(2.0)
    assert_quat_close(s, Quaternion(0.0, r, r, 0.0), 1e-15)
    assert z == 1j
    assert_quat_close(s * J * s.inverse(), I, 1e-15)

    s, z = rotate_to_slice(Quaternion(5.0))
    assert s == ONE and z == 5.0 + 0.0j

    s, z = rotate_to_slice(I)
    assert s == ONE and z == 1j


def test_rotate_to_slice_invariants():
    gen = rng(104)
    hard = [
        -I,
        Quaternion(0.3, -1.0, 1e-8, -1e-9),
        Quaternion(0.0, -2.0, 0.0, 1e-13),
        Quaternion(1.0, -0.5, -0.5, -0.5),
    ]
    samples = hard + [random_quaternion(gen) for _ in range(2000)]
    for q in samples:
        s, z = rotate_to_slice(q)
        assert abs(abs(s) - 1.0) <= 1e-14
        assert z.imag >= 0.0
        got = s * q * s.inverse()
        want = Quaternion.from_complex(z)
        assert abs(got - want) <= 1e-12 * (1.0 + abs(q))
        assert sphere_of(want).param_distance(q.real, abs(q.imag)) \
            <= 1e-12 * (1.0 + abs(q))


def test_same_sphere_means_composed_conjugator():
    # two points share a sphere exactly when composing their slice
    # rotations transports one onto the other
    gen = rng(105)
    for _ in range(200):
        q = random_quaternion(gen)
        u = random_quaternion(gen)
        u = u * (1.0 / abs(u))
        p = u * q * u.inverse()
        sp, zp = rotate_to_slice(p)
        sq, zq = rotate_to_slice(q)
        assert abs(zp - zq) <= 1e-12 * (1.0 + abs(q))
        w = sp.inverse() * sq
        assert abs(w * q * w.inverse() - p) <= 1e-11 * (1.0 + abs(q))


@settings(max_examples=200, deadline=None)
@given(a=FINITE, b=FINITE, c=FINITE, d=FINITE,
       e=FINITE, f=FINITE, g=FINITE, h=FINITE)
def test_norm_multiplicative_hypothesis(a, b, c, d, e, f, g, h):
    p = Quaternion(a, b, c, d)
    q = Quaternion(e, f, g, h)
    lhs = abs(p * q)
    rhs = abs(p) * abs(q)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, rhs)


@settings(max_examples=200, deadline=None)
@given(a=FINITE, b=FINITE, c=FINITE, d=FINITE)
def test_rotation_invariant_hypothesis(a, b, c, d):
    q = Quaternion(a, b, c, d)
    s, z = rotate_to_slice(q)
    assert abs(s * q * s.inverse() - Quaternion.from_complex(z)) \
        <= 1e-12 * (1.0 + abs(q))
