"""Stem functions: evaluation, decomposition, validation, catalog."""

import cmath
import json
import math

import numpy as np
import pytest

from quatspec import (
    I,
    rotate_to_slice,
    J,
    K,
    ONE,
    Quaternion,
    StemFunction,
    catalog,
    decompose,
    entire_domain,
    eval_stem,
    from_holomorphic_intrinsic,
    restrict_to_slice,
    stem_compose,
    stem_product,
    stem_sum,
    validate,
)
from quatspec.errors import NotIntrinsic, OutOfDomain, ParseError
from quatspec.slicefn import INTRINSIC, LEFT, RIGHT, AxSymDomain

from _helpers import assert_quat_close, random_quaternion, rng


def _identity_stem():
    return catalog("poly:[0, 1]")


def test_eval_examples():
    square = from_holomorphic_intrinsic(lambda z: z * z, entire_domain())
    assert_quat_close(eval_stem(square, J), Quaternion(-1.0), 1e-15)

    ident = _identity_stem()
    q = Quaternion(1.0, 2.0, 0.0, 0.0)
    assert_quat_close(eval_stem(ident, q), q, 1e-15)

    iq = catalog("monoL:" + json.dumps([[0.0, 1.0, 0.0, 0.0], 1]))
    assert iq.kind == RIGHT
    assert_quat_close(eval_stem(iq, J), K, 1e-15)


def test_eval_out_of_domain():
    f = catalog("log")
    with pytest.raises(OutOfDomain):
        eval_stem(f, Quaternion(-1.0))


def test_eval_at_real_points_uses_f0_only():
    f = catalog("exp")
    assert_quat_close(eval_stem(f, Quaternion(1.0)),
                      Quaternion(math.e), 1e-12)


def test_from_holomorphic_intrinsic():
    f = from_holomorphic_intrinsic(cmath.exp, entire_domain((-4.0, 4.0, 4.0)))
    assert f.kind == INTRINSIC
    got = eval_stem(f, J * math.pi)
    assert_quat_close(got, Quaternion(-1.0), 1e-12)
    with pytest.raises(NotIntrinsic):
        from_holomorphic_intrinsic(lambda z: 1j * z, entire_domain())


def test_restrict_to_slice_examples():
    h = restrict_to_slice(catalog("exp"))
    assert abs(h(1j * math.pi / 2) - 1j) < 1e-12

    ident = restrict_to_slice(_identity_stem())
    assert abs(ident(0.3 - 0.7j) - (0.3 - 0.7j)) < 1e-15

    poly = restrict_to_slice(catalog("poly:[1, 0, 1]"))
    assert abs(poly(2.0 + 0.0j) - 5.0) < 1e-15


def test_restrict_to_slice_rejects_sided():
    g = catalog("monoL:" + json.dumps([[0.0, 1.0, 0.0, 0.0], 1]))
    with pytest.raises(NotIntrinsic):
        restrict_to_slice(g)


def test_slice_restriction_symmetry():
    for name in ("exp", "poly:[0.5, -1, 0, 2]", "log", "sqrt"):
        f = catalog(name)
        h = restrict_to_slice(f)
        for z in (0.7 + 0.3j, 2.0 + 1.5j, 1.3 + 0.01j):
            assert abs(h(z.conjugate()) - h(z).conjugate()) \
                <= 1e-12 * (1.0 + abs(h(z)))


def test_intrinsic_eval_commutes_with_conjugation():
    gen = rng(301)
    f = catalog("exp")
    for _ in range(100):
        q = random_quaternion(gen)
        lhs = eval_stem(f, q.conjugate())
        rhs = eval_stem(f, q).conjugate()
        assert_quat_close(lhs, rhs, 1e-12 * (1.0 + abs(rhs)))


def test_decompose_single_component():
    iq = catalog("monoL:" + json.dumps([[0.0, 1.0, 0.0, 0.0], 1]))
    parts = decompose(iq)
    assert all(p.kind == INTRINSIC for p in parts)
    gen = rng(302)
    for _ in range(20):
        q = random_quaternion(gen)
        assert_quat_close(eval_stem(parts[1], q), eval_stem(_identity_stem(), q),
                          1e-13 * (1 + abs(q)))
        for m in (0, 2, 3):
            assert_quat_close(eval_stem(parts[m], q), Quaternion(0.0), 1e-13)


def test_decompose_two_components():
    # f(q) = q + j q splits into identity parts on the 1 and j slots
    name = json.dumps([[1.0, 0.0, 1.0, 0.0], 1])
    f = catalog("monoL:" + name)
    parts = decompose(f)
    gen = rng(303)
    for _ in range(20):
        q = random_quaternion(gen)
        ident = eval_stem(_identity_stem(), q)
        assert_quat_close(eval_stem(parts[0], q), ident, 1e-13 * (1 + abs(q)))
        assert_quat_close(eval_stem(parts[2], q), ident, 1e-13 * (1 + abs(q)))
        assert_quat_close(eval_stem(parts[1], q), Quaternion(0.0), 1e-13)
        assert_quat_close(eval_stem(parts[3], q), Quaternion(0.0), 1e-13)


@pytest.mark.parametrize("side,units_left", [("L", True), ("R", False)])
def test_decompose_recombination(side, units_left):
    # random one-sided polynomial with quaternion coefficients
    gen = rng(304)
    terms = [(random_quaternion(gen), n) for n in range(5)]
    f = None
    for a, n in terms:
        mono = catalog(f"mono{side}:" + json.dumps([[a.a, a.b, a.c, a.d], n]))
        f = mono if f is None else stem_sum(f, mono)
    assert f.kind == (RIGHT if side == "L" else LEFT)
    parts = decompose(f)
    units = (ONE, I, J, K)
    for _ in range(100):
        q = random_quaternion(gen)
        want = eval_stem(f, q)
        got = Quaternion(0.0)
        for unit, part in zip(units, parts):
            v = eval_stem(part, q)
            got = got + (unit * v if units_left else v * unit)
        assert_quat_close(got, want, 1e-12 * (1.0 + abs(want)))


def test_validate_exp_passes():
    report = validate(catalog("exp"))
    assert report.passed
    assert report.cr_residual < 1e-6
    assert report.compat_residual < 1e-12
    assert report.samples > 100


@pytest.mark.parametrize("name,fd_step", [
    ("poly:[1, -2, 0, 1]", None),
    ("log", 1e-5),
    ("sqrt", 1e-5),
    ("pow:3", None),
    ("ratpoly:[1, 0, 1]/[2, 1]", 1e-6),
])
def test_validate_catalog_functions_pass(name, fd_step):
    # near a cut or a pole the derivatives grow, so the singular entries
    # get a finer difference step than the default
    report = validate(catalog(name), fd_step=fd_step)
    assert report.passed, f"{name}: {report}"


def test_validate_flags_non_holomorphic_stems():
    bad = StemFunction(
        f0=lambda al, be: Quaternion(al * al),
        f1=lambda al, be: Quaternion(0.0),
        domain=entire_domain(),
        kind=INTRINSIC,
        label="alpha^2 stem",
    )
    report = validate(bad)
    assert not report.cr_pass
    assert report.cr_residual > 0.5


def test_validate_flags_compatibility_breakage():
    bad = StemFunction(
        f0=lambda al, be: Quaternion(al),
        f1=lambda al, be: Quaternion(1.0),
        domain=entire_domain(),
        kind=INTRINSIC,
        label="constant f1",
    )
    report = validate(bad)
    assert not report.compat_pass
    assert report.compat_residual >= 1.0 - 1e-12


def test_validate_flags_quaternion_valued_intrinsic_claim():
    bad = StemFunction(
        f0=lambda al, be: Quaternion(al, 0.5, 0.0, 0.0),
        f1=lambda al, be: Quaternion(be),
        domain=entire_domain(),
        kind=INTRINSIC,
        label="imaginary f0",
    )
    report = validate(bad)
    assert not report.intrinsic_pass


def test_stem_sum_and_product_intrinsic():
    gen = rng(305)
    f = catalog("exp")
    g = catalog("poly:[1, 0, -0.5]")
    total = stem_sum(f, g)
    prod = stem_product(f, g)
    assert total.kind == INTRINSIC and prod.kind == INTRINSIC
    for _ in range(50):
        q = random_quaternion(gen)
        fv, gv = eval_stem(f, q), eval_stem(g, q)
        assert_quat_close(eval_stem(total, q), fv + gv, 1e-12 * (1 + abs(fv)))
        assert_quat_close(eval_stem(prod, q), fv * gv,
                          1e-12 * (1.0 + abs(fv) * abs(gv)))


def test_stem_product_sided_sectors():
    # intrinsic times left kind, and right kind times intrinsic, are the
    # arrangements where the product evaluates pointwise in written order
    gen = rng(306)
    a = random_quaternion(gen)
    left_g = catalog("monoR:" + json.dumps([[a.a, a.b, a.c, a.d], 2]))
    right_f = catalog("monoL:" + json.dumps([[a.a, a.b, a.c, a.d], 2]))
    intr = catalog("poly:[0.5, 1]")
    assert left_g.kind == LEFT and right_f.kind == RIGHT

    p1 = stem_product(intr, left_g)
    assert p1.kind == LEFT
    p2 = stem_product(right_f, intr)
    assert p2.kind == RIGHT
    for _ in range(50):
        q = random_quaternion(gen)
        want1 = eval_stem(intr, q) * eval_stem(left_g, q)
        assert_quat_close(eval_stem(p1, q), want1, 1e-11 * (1 + abs(want1)))
        want2 = eval_stem(right_f, q) * eval_stem(intr, q)
        assert_quat_close(eval_stem(p2, q), want2, 1e-11 * (1 + abs(want2)))


def test_stem_product_requires_an_intrinsic_factor():
    a = [[0.0, 1.0, 0.0, 0.0], 1]
    f = catalog("monoL:" + json.dumps(a))
    g = catalog("monoL:" + json.dumps(a))
    with pytest.raises(NotIntrinsic):
        stem_product(f, g)


def test_stem_compose():
    gen = rng(307)
    inner = catalog("poly:[0.2, 0, 0.4]")
    outer = catalog("exp")
    comp = stem_compose(outer, inner)
    h_in = restrict_to_slice(inner)
    for _ in range(50):
        q = random_quaternion(gen)
        s, z = rotate_to_slice(q)
        want_slice = cmath.exp(h_in(z))
        got = eval_stem(comp, q)
        # compare on the slice then transport back
        want = s.inverse() * Quaternion.from_complex(want_slice) * s
        assert_quat_close(got, want, 1e-11 * (1.0 + abs(want)))


def test_stem_compose_requires_intrinsic_inner():
    a = [[0.0, 1.0, 0.0, 0.0], 1]
    sided = catalog("monoL:" + json.dumps(a))
    with pytest.raises(NotIntrinsic):
        stem_compose(catalog("exp"), sided)


def test_catalog_pow_and_ratpoly():
    gen = rng(308)
    cube = catalog("pow:3")
    invsq = catalog("pow:-2")
    rat = catalog("ratpoly:[0, 1]/[1, 1]")  # q / (1 + q)
    for _ in range(30):
        q = random_quaternion(gen, scale=0.8)
        if abs(q) < 0.05 or abs(q + ONE) < 0.1:
            continue
        assert_quat_close(eval_stem(cube, q), q ** 3, 1e-11 * (1 + abs(q) ** 3))
        assert_quat_close(eval_stem(invsq, q), (q ** 2).inverse(),
                          1e-9 * (1.0 + abs(q) ** -2))
        want = q * (ONE + q).inverse()
        assert_quat_close(eval_stem(rat, q), want, 1e-10 * (1 + abs(want)))


def test_catalog_sqrt_square_round_trip():
    gen = rng(309)
    f = catalog("sqrt")
    for _ in range(30):
        q = random_quaternion(gen)
        r = eval_stem(f, q)
        assert_quat_close(r * r, q, 1e-10 * (1.0 + abs(q)))


def test_catalog_rejects_malformed_names():
    for bad in ("nope", "poly:", "poly:[1", "pow:x", "monoL:[1,2]",
                "ratpoly:[1]", "poly:[1, \"a\"]"):
        with pytest.raises(ParseError):
            catalog(bad)


def test_log_domain_excludes_cut():
    f = catalog("log")
    assert not f.domain.contains(-1.0, 0.0)
    assert not f.domain.contains(-2.0, 1e-9)
    assert f.domain.contains(-2.0, 1.0)
    assert f.domain.contains(1.0, 0.0)
    assert not f.domain.contains(0.0, 0.0)


def test_domain_membership_is_even_in_beta():
    for name in ("exp", "log", "sqrt"):
        dom = catalog(name).domain
        for al, be in ((1.0, 0.5), (-2.0, 0.3), (0.7, 2.0)):
            assert dom.contains(al, be) == dom.contains(al, -be)
