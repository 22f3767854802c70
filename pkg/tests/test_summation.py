"""Summation kernels, transference twists, convergence profiles."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nctorus import dynamics, gns, summation, weyl
from nctorus.errors import GridTooSmallError
from nctorus.gns import TruncationBox

# Lebesgue constants of the Dirichlet kernel, mpmath dps = 40
LEBESGUE = {
    1: 1.4359911241769174,
    5: 1.9613605937660149,
    10: 2.2233569241536841,
    100: 3.1387800926548486,
}


def test_fejer_coefficients_are_triangular():
    kern = summation.SummationKernel("fejer", order=4)
    modes = np.arange(-6, 7)
    got = kern.coefficients(modes)
    want = np.clip(1.0 - np.abs(modes) / 5.0, 0.0, None)
    assert_allclose(got, want, atol=1e-15)


def test_abel_coefficients_are_geometric():
    kern = summation.SummationKernel("abel", radius=0.8)
    modes = np.arange(-5, 6)
    assert_allclose(kern.coefficients(modes), 0.8 ** np.abs(modes),
                    atol=1e-15)


def test_abel_kernel_closed_form_matches_mode_sum():
    """Poisson kernel values against a brute-force geometric sum."""
    r = 0.9
    kern = summation.SummationKernel("abel", radius=r)
    theta = 2 * np.pi * np.arange(16) / 16
    brute = np.ones_like(theta, dtype=complex)
    for m in range(1, 200):
        brute += r ** m * (np.exp(1j * m * theta) + np.exp(-1j * m * theta))
    assert_allclose(kern.values(theta), brute.real, atol=1e-9)


def test_positive_kernels_have_unit_mass():
    assert_allclose(summation.SummationKernel("fejer", order=7).l1_norm(),
                    1.0, atol=1e-12)
    assert_allclose(summation.SummationKernel("abel", radius=0.9).l1_norm(),
                    1.0, atol=1e-12)


def test_dirichlet_l1_matches_lebesgue_constants():
    for n, lam in LEBESGUE.items():
        got = summation.SummationKernel("dirichlet", order=n).l1_norm()
        tol = 1e-6 if n <= 10 else 2e-4
        assert abs(got - lam) < tol, n
    # the classical log-rate between orders 10 and 100
    g10 = summation.SummationKernel("dirichlet", order=10).l1_norm()
    g100 = summation.SummationKernel("dirichlet", order=100).l1_norm()
    assert abs((g100 - g10) - 0.91542316850116453) < 1e-3


def test_kernel_validation():
    with pytest.raises(ValueError):
        summation.SummationKernel("gauss", order=3)
    with pytest.raises(ValueError):
        summation.SummationKernel("abel", radius=1.5)


def test_transference_point_must_be_unimodular():
    w = summation.TransferencePoint.from_angles(1.1, 2.3)
    assert abs(abs(w.w1) - 1.0) < 1e-15
    assert abs(abs(w.w2) - 1.0) < 1e-15
    with pytest.raises(ValueError):
        summation.TransferencePoint(1.5, 1.0)


def test_transfer_vector_twists_coefficients(bench, small_box):
    w = summation.TransferencePoint.from_angles(0.7, -1.9)
    x = gns.basis_vector(small_box, 3, -2)
    tx = summation.transfer_vector(x, w)
    got = tx.block(3)[small_box.mode_bound - 2]
    assert_allclose(got, w.w1 ** (-2) * w.w2 ** 3, atol=1e-14)


def test_transfer_operator_on_characters(bench, small_box):
    """rho_w(u_kl) xi = w1^l w2^k e^(kl): the transference identity."""
    w = summation.TransferencePoint.from_angles(1.1, 2.3)
    xi = gns.vacuum(small_box)
    worst = 0.0
    for k in (-2, 0, 1):
        for l in (-1, 0, 3):
            u = gns.build_u_kl(bench, small_box, k, l)
            got = summation.transfer_operator(u, w).apply(xi)
            want = gns.basis_vector(small_box, k, l).scaled(
                w.w1 ** l * w.w2 ** k)
            worst = max(worst, (got - want).norm())
    assert worst < 1e-12


def test_wts_on_generators_and_random(bench, box, rng):
    w = summation.TransferencePoint.from_angles(2.2, 0.4)
    gen_dev = 0.0
    for k, l in ((1, 0), (0, 1), (-2, 3)):
        f = weyl.WeylElement.generator(bench.alpha, k, l)
        gen_dev = max(gen_dev, summation.wts_deviation(f, w, bench, box, 4))
    assert gen_dev < 1e-12
    f = weyl.random_element(rng, bench.alpha, 2, decay=1.0)
    assert summation.wts_deviation(f, w, bench, box, 4) < 1e-10


def test_fejer_profile_halves_per_doubling(bench, box, rng):
    """Interior elements: order-N Fejer error drops like 1/N."""
    f = weyl.random_element(rng, bench.alpha, 2, decay=1.0)
    kernels = [summation.SummationKernel("fejer", order=n) for n in (4, 8, 16)]
    rows = summation.convergence_profile(f, bench, box, "hat", kernels)
    errs = [row["l2_error"] for row in rows]
    assert errs[0] > errs[1] > errs[2] > 0.0
    for a, b in zip(errs, errs[1:]):
        assert 0.3 <= b / a <= 0.7


def test_abel_profile_decreases(bench, box, rng):
    f = weyl.random_element(rng, bench.alpha, 2, decay=1.0)
    kernels = [summation.SummationKernel("abel", radius=r)
               for r in (0.9, 0.99, 0.999)]
    rows = summation.convergence_profile(f, bench, box, "hat", kernels)
    errs = [row["l2_error"] for row in rows]
    assert errs[0] > errs[1] > errs[2] > 0.0


def test_transference_integral_route(bench, box, rng):
    """Fejer smoothing equals the kernel-weighted transference integral."""
    f = weyl.random_element(rng, bench.alpha, 2, decay=1.0)
    x = gns.represent(f, bench, box).apply(gns.vacuum(box))
    dev = summation.transference_integral_check(x, 3, 64, bench)
    assert dev < 1e-9
    with pytest.raises(GridTooSmallError):
        summation.transference_integral_check(x, 3, 6, bench)
