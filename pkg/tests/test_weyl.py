"""Star-product algebra on finitely supported coefficient tables."""

import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from nctorus import dynamics, weyl
from nctorus.errors import AlphaMismatchError

ALPHA = 0.30901699437494745


def test_generator_product_phase_by_hand():
    # W(1,0) * W(0,1) lands on (1,1) with twist exp(2 pi i alpha)
    u = weyl.WeylElement.generator(ALPHA, 1, 0)
    v = weyl.WeylElement.generator(ALPHA, 0, 1)
    prod = weyl.star_product(u, v)
    assert set(prod.support()) == {(1, 1)}
    assert_allclose(prod[(1, 1)], cmath.exp(2j * cmath.pi * ALPHA),
                    atol=1e-15)
    # and the reversed order picks up the conjugate twist
    rev = weyl.star_product(v, u)
    assert_allclose(rev[(1, 1)], cmath.exp(-2j * cmath.pi * ALPHA),
                    atol=1e-15)


def test_weyl_relation_quarter_alpha():
    # at alpha = 0.25 the (1,0)(0,1) product carries the phase i and the
    # two orders differ by the square of that twist, here exactly -1
    dev = weyl.weyl_relation_check(0.25, [((1, 0), (0, 1))])
    assert dev < 1e-15
    u = weyl.WeylElement.generator(0.25, 1, 0)
    v = weyl.WeylElement.generator(0.25, 0, 1)
    lhs = weyl.star_product(u, v)
    assert_allclose(lhs[(1, 1)], 1j, atol=1e-15)
    rhs = weyl.star_product(v, u).scaled(-1.0)
    assert weyl.table_distance(lhs, rhs) < 1e-15


def test_relation_sweep_all_alphas():
    pairs = [((m, n), (r, s))
             for m in range(-3, 4) for n in range(-3, 4)
             for r in range(-3, 4) for s in range(-3, 4)]
    for alpha in (0.0, 0.25, ALPHA):
        assert weyl.weyl_relation_check(alpha, pairs) < 1e-14


def test_involution_and_trace():
    f = weyl.WeylElement(ALPHA, {(1, 2): 0.5 + 1j, (0, 0): 2.0, (-1, 0): 1j})
    star = weyl.involution(f)
    assert_allclose(star[(-1, -2)], 0.5 - 1j, atol=1e-15)
    assert_allclose(weyl.trace(f), 2.0 + 0j, atol=1e-15)
    # trace(f* star f) recovers the coefficient l2 mass
    gram = weyl.trace(weyl.star_product(star, f))
    assert_allclose(gram, abs(0.5 + 1j) ** 2 + 4.0 + 1.0, atol=1e-12)
    assert gram.real >= 0.0


def test_coefficient_recovery():
    rng = np.random.default_rng(11)
    f = weyl.random_element(rng, ALPHA, 3, decay=0.5)
    for m, n in ((0, 0), (2, -1), (-3, 3)):
        assert_allclose(weyl.abstract_fourier_coeff(f, m, n),
                        f[(m, n)], atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2),
                          st.floats(-1, 1), st.floats(-1, 1)),
                min_size=1, max_size=4))
def test_star_associativity_property(entries):
    f = weyl.WeylElement(ALPHA, {(m, n): complex(re, im)
                                 for m, n, re, im in entries})
    g = weyl.WeylElement(ALPHA, {(1, -1): 0.7, (0, 2): -0.3j})
    h = weyl.WeylElement(ALPHA, {(-2, 0): 1.1 + 0.2j, (1, 1): 0.4})
    left = weyl.star_product(weyl.star_product(f, g), h)
    right = weyl.star_product(f, weyl.star_product(g, h))
    assert weyl.table_distance(left, right) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3),
       st.floats(-2, 2), st.floats(-2, 2))
def test_star_algebra_axioms_property(m, n, re, im):
    f = weyl.WeylElement(ALPHA, {(m, n): complex(re, im), (0, 1): 0.5})
    g = weyl.WeylElement(ALPHA, {(1, 0): 1.0 - 0.5j})
    lhs = weyl.involution(weyl.star_product(f, g))
    rhs = weyl.star_product(weyl.involution(g), weyl.involution(f))
    assert weyl.table_distance(lhs, rhs) < 1e-12
    assert weyl.table_distance(weyl.involution(weyl.involution(f)), f) < 1e-15


def test_traciality_of_the_trace():
    rng = np.random.default_rng(4)
    f = weyl.random_element(rng, ALPHA, 3, decay=0.0)
    g = weyl.random_element(rng, ALPHA, 3, decay=0.0)
    fg = weyl.trace(weyl.star_product(f, g))
    gf = weyl.trace(weyl.star_product(g, f))
    assert abs(fg - gf) < 1e-12


def test_alpha_mismatch_rejected():
    with pytest.raises(AlphaMismatchError):
        weyl.star_product(weyl.WeylElement.unit(0.25),
                          weyl.WeylElement.unit(0.3))


def test_serialization_roundtrip():
    f = weyl.WeylElement(ALPHA, {(2, -1): 1.5 - 0.5j, (0, 0): 1j})
    again = weyl.WeylElement.from_dict(f.to_dict())
    assert again.alpha == f.alpha
    assert weyl.table_distance(again, f) == 0.0


def test_random_element_is_deterministic():
    a = weyl.random_element(np.random.default_rng(99), ALPHA, 2, decay=1.0)
    b = weyl.random_element(np.random.default_rng(99), ALPHA, 2, decay=1.0)
    assert weyl.table_distance(a, b) == 0.0
    assert a.sup_radius <= 2


def test_smooth_seminorm_frozen_values():
    """Row functions are indexed by the shift (second) index.

    delta_(1,0) has the single row z at shift 0; its angular derivative
    has sup 1 for the identity conjugator and sup (H^-1)' = 1/(1 - 0.3)
    for the benchmark lift.  delta_(0,1) has a constant row at shift 1.
    """
    d = dynamics.benchmark()
    rot = dynamics.rotation(d.alpha)
    unit = weyl.WeylElement.generator(d.alpha, 0, 0)
    e10 = weyl.WeylElement.generator(d.alpha, 1, 0)
    e01 = weyl.WeylElement.generator(d.alpha, 0, 1)
    assert_allclose(weyl.smooth_seminorm(unit, d, 3, 0), 1.0, atol=1e-12)
    assert_allclose(weyl.smooth_seminorm(e10, rot, 0, 1), 1.0, atol=1e-12)
    assert_allclose(weyl.smooth_seminorm(e10, d, 0, 1), 10.0 / 7.0, atol=1e-9)
    assert weyl.smooth_seminorm(e01, d, 0, 1) == 0.0
    assert_allclose(weyl.smooth_seminorm(e01, d, 2, 0), 4.0, atol=1e-12)
