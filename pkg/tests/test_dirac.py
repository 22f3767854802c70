"""Deformed difference operators: blocks, closed forms, bounds."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nctorus import dirac, dynamics, gns
from nctorus.errors import OutOfBoxError
from nctorus.gns import TruncationBox


@pytest.fixture(scope="module")
def growth(bench):
    return dynamics.growth_sequence(bench, 10)


def test_a_sequence_telescopes(bench, growth):
    a = dirac.a_sequence(growth, 8)
    assert dirac.telescoping_deviation(a, growth) < 1e-12
    off = 8
    assert a[off + 0] == 0.0
    # a_1 = 1 / Gamma_1 with Gamma_1 frozen at 1.7827124086389334
    assert_allclose(a[off + 1], 0.56094297383809695, atol=1e-9)
    # forward steps ascend, backward steps descend
    assert all(np.diff(a) > 0.0)


def test_a_sequence_rotation_is_integer():
    rot = dynamics.rotation(0.25)
    growth = dynamics.growth_sequence(rot, 6)
    a = dirac.a_sequence(growth, 5)
    assert_allclose(a, np.arange(-5, 6, dtype=float), atol=1e-13)


def test_undeformed_corner_and_inverse_norm():
    b = TruncationBox(4, 3)
    corner = dirac.undeformed_corner(b, 1.5)
    modes = np.arange(-3, 4)
    assert_allclose(np.diag(corner), 1j * modes - 1.5, atol=1e-15)
    # smallest singular value of the diagonal corner, inverted
    want = 1.0 / np.min(np.abs(1j * modes - 1.5))
    assert_allclose(dirac.diagonal_inverse_norm(b, 1.5), want, atol=1e-13)


def test_deformed_corner_reduces_at_rotation():
    rot = dynamics.rotation(0.3)
    b = TruncationBox(4, 3)
    for n, a_n in ((2, 1.3), (-1, -0.4)):
        corner = dirac.deformed_corner(n, 0.5, rot, b, a_n)
        assert np.max(np.abs(corner - dirac.undeformed_corner(b, a_n))) < 1e-12


def test_deformed_block_is_self_adjoint(bench, growth):
    b = TruncationBox(4, 4)
    a = dirac.a_sequence(growth, 5)
    block = dirac.deformed_block(2, 0.5, bench, b, float(a[5 + 2]))
    assert np.max(np.abs(block - block.conj().T)) < 1e-9


def test_closed_form_rotation_values():
    """At the rotation the matrix elements are exactly diagonal."""
    rot = dynamics.rotation(0.30901699437494745)
    b = TruncationBox(8, 8)
    growth = dynamics.growth_sequence(rot, 8)
    a = dirac.a_sequence(growth, 8)
    # eta = 1/2, (k,l,r,s) = (1,2,1,2): -(i l + a_{-k}) = 1 - 2i
    got = dirac.matrix_element_closed_form(0.5, 1, 2, 1, 2, rot, b, a)
    assert_allclose(got, 1.0 - 2.0j, atol=1e-13)
    # eta = 0: (i l - a_k) delta_{kr} delta_{ls}
    got = dirac.matrix_element_closed_form(0.0, 2, -3, 2, -3, rot, b, a)
    assert_allclose(got, -3.0j - 2.0, atol=1e-13)
    # off the diagonal everything vanishes
    assert abs(dirac.matrix_element_closed_form(0.0, 2, -3, 2, 1, rot, b, a)) < 1e-13
    assert abs(dirac.matrix_element_closed_form(1.0, 2, -3, 1, -3, rot, b, a)) < 1e-13


def test_master_deviation_benchmark(bench, box):
    assert dirac.master_deviation(bench, box, 4) < 1e-7


def test_master_deviation_rotation(rot, box):
    assert dirac.master_deviation(rot, box, 4) < 1e-12


def test_oracle_radius_guard(bench, growth):
    b = TruncationBox(4, 4)
    a = dirac.a_sequence(growth, 4)
    with pytest.raises(OutOfBoxError):
        dirac.matrix_element_oracle_table(0.5, 6, bench, b, a, 4)


def test_resolvent_profile_bounds(bench, box, growth):
    rows = dirac.resolvent_profile(bench, box, range(-4, 5),
                                   (0.0, 0.5, 1.0), growth=growth)
    assert len(rows) == 27
    for row in rows:
        assert row["kernel_dim"] == (1 if row["n"] == 0 else 0)
        assert row["margin"] >= 0.0, row
        assert row["resolvent"] <= row["bound"]


def test_commutator_bound(bench, box, growth):
    for n in (-3, 1, 4):
        for eta in (0.0, 0.25, 0.5, 1.0):
            _, norm, bound = dirac.commutator_block(
                n, eta, bench, box, growth)
            assert norm <= bound * (1.0 + 1e-6), (n, eta)


def test_commutator_rotation_is_exactly_one():
    rot = dynamics.rotation(0.2)
    b = TruncationBox(4, 4)
    growth = dynamics.growth_sequence(rot, 6)
    _, norm, bound = dirac.commutator_block(2, 0.5, rot, b, growth)
    assert_allclose(norm, 1.0, atol=1e-12)
    assert_allclose(bound, 1.0, atol=1e-12)


def test_normalized_step_identity(bench, growth):
    """Every step of a is exactly one reciprocal growth value."""
    a = dirac.a_sequence(growth, 8)
    off = 8
    assert_allclose((a[off + 1] - a[off]) * growth.gamma(1), 1.0, atol=1e-12)
    assert dirac.telescoping_deviation(a, growth) < 1e-12
