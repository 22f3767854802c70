"""Summation kernels, transference points and smoothed series.

The double series attached to a hat or paren table is summed through
separable kernel weights; the two-angle transference action

    (V_w x)_n(z) = w2^n x_n(w1 z)

multiplies coefficients by pure phases and is the vector side of the
operator resampling implemented in :func:`transfer_operator`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import DiffeoSpec
from .errors import GridTooSmallError
from .fourier import (FourierCoeffs, anti_transform, hat_functional,
                      hat_vector, paren_functional)
from .gns import (GnsOperator, GnsVector, TruncationBox, build_u_kl,
                  represent, vacuum)
from .modular import apply_delta_power
from .weyl import WeylElement


@dataclass(frozen=True)
class TransferencePoint:
    """Point of the two-torus acting by transference."""

    w1: complex
    w2: complex

    def __post_init__(self):
        for w in (self.w1, self.w2):
            if abs(abs(w) - 1.0) > 1e-12:
                raise ValueError(f"transference point {w!r} is not unimodular")
        object.__setattr__(self, "w1", complex(self.w1))
        object.__setattr__(self, "w2", complex(self.w2))

    @classmethod
    def from_angles(cls, phi1: float, phi2: float) -> "TransferencePoint":
        return cls(np.exp(1j * phi1), np.exp(1j * phi2))


@dataclass(frozen=True)
class SummationKernel:
    """Fejer / Abel-Poisson / Dirichlet kernel on the circle.

    ``order`` is the polynomial degree for fejer and dirichlet;
    ``radius`` the Abel parameter in (0, 1).
    """

    kind: str
    order: int = 0
    radius: float = 0.0

    def __post_init__(self):
        if self.kind not in ("fejer", "abel", "dirichlet"):
            raise ValueError(f"unknown kernel {self.kind!r}")
        if self.kind == "abel" and not 0.0 < self.radius < 1.0:
            raise ValueError("abel radius must lie in (0, 1)")
        if self.kind != "abel" and self.order < 0:
            raise ValueError("kernel order must be nonnegative")

    def coefficients(self, js) -> np.ndarray:
        js = np.abs(np.asarray(js, dtype=float))
        if self.kind == "fejer":
            return np.maximum(0.0, 1.0 - js / (self.order + 1.0))
        if self.kind == "abel":
            return self.radius ** js
        return (js <= self.order).astype(float)

    def values(self, angles) -> np.ndarray:
        """Kernel values; mode sums for the polynomial kernels, closed
        form for Abel-Poisson."""
        angles = np.asarray(angles, dtype=float)
        if self.kind == "abel":
            r = self.radius
            return ((1.0 - r * r)
                    / (1.0 - 2.0 * r * np.cos(angles) + r * r))
        js = np.arange(-self.order, self.order + 1)
        weights = self.coefficients(js)
        return np.real(np.exp(1j * np.multiply.outer(js, angles))
                       .T @ weights)

    def l1_norm(self, size: int = 8192) -> float:
        """Quadrature of |kernel| over the circle."""
        theta = 2.0 * np.pi * np.arange(size) / size
        return float(np.mean(np.abs(self.values(theta))))


def transfer_vector(x: GnsVector, w: TransferencePoint) -> GnsVector:
    """Coefficientwise phases ``w2^n w1^l``; an isometry of the box."""
    box = x.box
    pn = np.power(w.w2, box.blocks().astype(float))
    pl = np.power(w.w1, box.modes().astype(float))
    return GnsVector(box, x.coeffs * np.multiply.outer(pn, pl))


def transfer_operator(a: GnsOperator, w: TransferencePoint) -> GnsOperator:
    """Conjugate by the transference unitary: resample multipliers.

    Shift s picks up the phase ``w2^s`` and every multiplier function is
    rotated, ``m(z) -> m(w1 z)``.
    """
    box = a.box
    g = box.grid_size
    freqs = np.fft.fftfreq(g, d=1.0 / g).astype(int)
    twist = np.exp(1j * freqs * np.angle(w.w1))
    terms = {}
    for s, mult in a.terms.items():
        spec = np.fft.fft(mult, axis=1) * twist[None, :]
        terms[s] = (w.w2 ** s) * np.fft.ifft(spec, axis=1)
    return GnsOperator(box, terms)


def table_of(f: WeylElement, d: DiffeoSpec, box: TruncationBox,
             kind: str) -> FourierCoeffs:
    if kind == "hat":
        return hat_functional(f, d, box)
    if kind == "paren":
        return paren_functional(f, d, box, route="vacuum")
    raise ValueError(f"unknown kind {kind!r}")


def summation_reference(f: WeylElement, d: DiffeoSpec, box: TruncationBox,
                        kind: str) -> GnsVector:
    """Limit object of the smoothed series for each kind."""
    x = represent(f, d, box).apply(vacuum(box))
    if kind == "hat":
        return x
    if kind == "paren":
        return apply_delta_power(x, 1.0, d)
    raise ValueError(f"unknown kind {kind!r}")


def smoothed_mean(table: FourierCoeffs, kernel: SummationKernel,
                  d: DiffeoSpec) -> GnsVector:
    """Kernel-damped anti-transform of a coefficient table."""
    box = table.box
    damped = table.damped(kernel.coefficients(box.blocks()),
                          kernel.coefficients(box.modes()))
    return anti_transform(damped, d)


def convergence_profile(f: WeylElement, d: DiffeoSpec, box: TruncationBox,
                        kind: str, kernels) -> list[dict]:
    """Error rows of the smoothed series against its limit.

    Each row reports the kernel parameter, the Hilbert space error of
    the smoothed mean, and the sup error of the damped table.
    """
    table = table_of(f, d, box, kind)
    reference = summation_reference(f, d, box, kind)
    rows = []
    for kernel in kernels:
        mean = smoothed_mean(table, kernel, d)
        damped = table.damped(kernel.coefficients(box.blocks()),
                              kernel.coefficients(box.modes()))
        param = kernel.radius if kernel.kind == "abel" else kernel.order
        rows.append({
            "parameter": param,
            "l2_error": (mean - reference).norm(),
            "sup_coeff_error": float(
                np.max(np.abs(damped.table - table.table))),
        })
    return rows


def transference_integral_check(x: GnsVector, n_order: int, q_points: int,
                                d: DiffeoSpec) -> float:
    """Quadrature transference integral versus the damped table.

    Averages ``F_N(phi1) F_N(phi2) V_w x`` over the ``q_points``-squared
    equispaced grid of transference angles; for tables supported well
    inside the box (support radius at most N) the integral reproduces
    the Fejer-damped coefficients exactly up to rounding.  ``q_points``
    must be at least ``4 n_order + 4``.
    """
    if q_points < 4 * n_order + 4:
        raise GridTooSmallError(
            f"need at least {4 * n_order + 4} quadrature points")
    kernel = SummationKernel("fejer", order=n_order)
    phis = 2.0 * np.pi * np.arange(q_points) / q_points
    weights = kernel.values(phis) / q_points
    acc = np.zeros_like(x.coeffs)
    for i1 in range(q_points):
        for i2 in range(q_points):
            w = TransferencePoint.from_angles(phis[i1], phis[i2])
            acc += (weights[i1] * weights[i2]) * transfer_vector(x, w).coeffs
    box = x.box
    expected = x.coeffs * np.multiply.outer(
        kernel.coefficients(box.blocks()),
        kernel.coefficients(box.modes()))
    return float(np.linalg.norm(acc - expected))


def wts_deviation(f: WeylElement, w: TransferencePoint, d: DiffeoSpec,
                  box: TruncationBox, radius: int) -> float:
    """Sup deviation in the weak transference of hat coefficients.

    Pairing ``pi(f) xi`` against the transferred generators must twist
    the plain hat table by the inverse phases ``w1^{-l} w2^{-k}``.
    """
    x = represent(f, d, box).apply(vacuum(box))
    xi = vacuum(box)
    table = hat_vector(x)
    worst = 0.0
    kr = min(radius, box.block_bound)
    lr = min(radius, box.mode_bound)
    for k in range(-kr, kr + 1):
        for l in range(-lr, lr + 1):
            moved = transfer_operator(build_u_kl(d, box, k, l), w)
            lhs = x.inner(moved.apply(xi))
            rhs = (w.w1 ** (-l)) * (w.w2 ** (-k)) * table.entry(k, l)
            worst = max(worst, abs(lhs - rhs))
    return worst
