"""Deformed Dirac blocks, their resolvent bounds and commutators.

The longitudinal operator acts within block n as ``L_n = d/dtheta -
a_n`` where the drift sequence ``a_n`` accumulates reciprocal growth
numbers; the eta-deformed corner is

    T_n^{(eta)} = P delta_n^{eta-1} L_n delta_n^{-eta} P

with P the mode projection, assembled on the quadrature grid with a
full resolution spectral derivative in the middle.  The matching lower
corner is built independently from the adjoint factors and must agree
with the conjugate transpose of the upper one at truncation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .dynamics import DiffeoSpec, GrowthSequence, growth_sequence, radon_nikodym
from .errors import OutOfBoxError, RouteMismatchError
from .gns import TruncationBox, _context

_ETA_SPECIAL = (0.0, 0.5, 1.0)


def a_sequence(growth: GrowthSequence, block_bound: int) -> np.ndarray:
    """Drift values ``a_n`` for ``|n| <= block_bound``.

    Forward blocks sum ``1 / Gamma_l`` for l = 1..n; backward blocks sum
    ``-1 / Gamma_{l-1}`` so that ``|a_{n-1} - a_n| Gamma_{|n|} = 1``
    telescopes across the whole range (``Gamma_0 = 1``).
    """
    out = np.zeros(2 * block_bound + 1)
    for n in range(1, block_bound + 1):
        out[block_bound + n] = out[block_bound + n - 1] + 1.0 / growth.gamma(n)
    for n in range(1, block_bound + 1):
        out[block_bound - n] = (out[block_bound - n + 1]
                                - 1.0 / growth.gamma(n - 1))
    return out


def telescoping_deviation(a: np.ndarray, growth: GrowthSequence) -> float:
    """Max deviation of ``|a_{n-1} - a_n| Gamma_{|n|}`` from 1."""
    block_bound = (len(a) - 1) // 2
    worst = 0.0
    for n in range(-block_bound + 1, block_bound + 1):
        step = abs(a[n - 1 + block_bound] - a[n + block_bound])
        worst = max(worst, abs(step * growth.gamma(n) - 1.0))
    return worst


def _delta_grid(d: DiffeoSpec, box: TruncationBox, n: int,
                ctx=None) -> np.ndarray:
    """Density of block n on the grid, from the context when in range."""
    if ctx is None:
        ctx = _context(d, box)
    if abs(n) <= box.block_bound:
        return ctx.delta[n + box.block_bound]
    return radon_nikodym(d, n, x=ctx.x)


def _grid_pipeline(box: TruncationBox, left: np.ndarray, drift: float,
                   right: np.ndarray, conjugate: bool = False) -> np.ndarray:
    """Mode matrix of ``P M_left (d/dtheta - drift) M_right P``.

    ``conjugate`` flips the derivative sign, giving the formal adjoint
    factor ``-d/dtheta - drift``.
    """
    g = box.grid_size
    modes = box.modes()
    theta = 2.0 * np.pi * np.arange(g) / g
    waves = np.exp(1j * np.multiply.outer(theta, modes))
    stage = right[:, None] * waves
    spec = np.fft.fft(stage, axis=0)
    freqs = np.fft.fftfreq(g, d=1.0 / g).astype(int)
    sign = -1.0 if conjugate else 1.0
    spec *= (sign * 1j * freqs - drift)[:, None]
    stage = np.fft.ifft(spec, axis=0)
    stage *= left[:, None]
    rows = np.fft.fft(stage, axis=0) / g
    return rows[modes % g]


def deformed_corner(n: int, eta: float, d: DiffeoSpec, box: TruncationBox,
                    a_n: float) -> np.ndarray:
    """Upper corner ``P delta^{eta-1} L delta^{-eta} P`` at block n."""
    delta = _delta_grid(d, box, n)
    return _grid_pipeline(box, delta ** (eta - 1.0), a_n, delta ** (-eta))


def deformed_block(n: int, eta: float, d: DiffeoSpec, box: TruncationBox,
                   a_n: float, check_tol: float = 1e-9) -> np.ndarray:
    """Self-adjoint two-corner block; corners built independently.

    The lower corner uses the adjoint factor ordering; when it deviates
    from the conjugate transpose of the upper corner beyond
    ``check_tol`` a :class:`RouteMismatchError` is raised (at finite
    truncation the two agree exactly because the mode projections
    sandwich both products).
    """
    delta = _delta_grid(d, box, n)
    upper = _grid_pipeline(box, delta ** (eta - 1.0), a_n, delta ** (-eta))
    lower = _grid_pipeline(box, delta ** (-eta), a_n, delta ** (eta - 1.0),
                           conjugate=True)
    dev = float(np.max(np.abs(lower - upper.conj().T)))
    if dev > check_tol:
        raise RouteMismatchError(
            f"corner adjoint deviation {dev:.3e} at block {n}")
    m = box.n_modes
    out = np.zeros((2 * m, 2 * m), dtype=complex)
    out[:m, m:] = upper
    out[m:, :m] = lower
    return out


def undeformed_corner(box: TruncationBox, a_n: float) -> np.ndarray:
    """Diagonal corner with entries ``i l - a_n``."""
    return np.diag(1j * box.modes() - a_n)


def diagonal_inverse_norm(box: TruncationBox, a_n: float) -> float:
    """Norm of the inverse of the undeformed corner.

    For ``a_n = 0`` the mode 0 eigenvalue vanishes; the norm is then
    taken on the complement of the kernel.
    """
    ls = box.modes().astype(float)
    mags = np.sqrt(ls * ls + a_n * a_n)
    if a_n == 0.0:
        mags = mags[ls != 0.0]
    return float(1.0 / np.min(mags))


def matrix_element_closed_form(eta: float, k: int, l: int, r: int, s: int,
                               d: DiffeoSpec, box: TruncationBox,
                               a: np.ndarray) -> complex:
    """Analytic matrix element of the eta-corner at special eta.

    In the plain basis (eta 0 and 1) the element reduces to the drift
    eigenvalue times a Fourier coefficient of ``1/delta_k``; in the
    conjugated basis (eta 1/2) to mode pairing plus a coefficient of
    ``delta_k``.  Blocks are diagonal: vanishes for ``r != k``.
    """
    if eta not in _ETA_SPECIAL:
        raise ValueError("closed forms cover eta in {0, 1/2, 1}")
    if r != k:
        return 0.0 + 0.0j
    ctx = _context(d, box)
    g = box.grid_size
    kk = k + box.block_bound
    a_k = float(a[kk])
    if eta == 0.5:
        key = ("delta_hat", k)
        if key not in ctx.extras:
            ctx.extras[key] = np.fft.fft(ctx.delta[kk].astype(complex)) / g
        hat = ctx.extras[key]
        a_minus = float(a[box.block_bound - k])
        return -(1j * l * (1.0 if l == s else 0.0)
                 + a_minus * hat[(l - s) % g])
    key = ("inv_delta_hat", k)
    if key not in ctx.extras:
        ctx.extras[key] = np.fft.fft(1.0 / ctx.delta[kk].astype(complex)) / g
    hat = ctx.extras[key]
    drift = 1j * l - a_k if eta == 0.0 else 1j * s - a_k
    return drift * hat[(s - l) % g]


def matrix_element_oracle_table(eta: float, k: int, d: DiffeoSpec,
                                box: TruncationBox, a: np.ndarray,
                                radius: int) -> np.ndarray:
    """Grid pipeline matrix elements ``[s, l]`` at block k.

    eta = 0 applies the drift eigenvalue then divides by the density;
    eta = 1 divides first and runs the full spectral derivative; eta =
    1/2 works in the conjugated basis at block ``-k`` with quadrature
    pairings.  Indices run over ``|l|, |s| <= radius``.
    """
    if radius > min(box.block_bound, box.mode_bound) or abs(k) > box.block_bound:
        raise OutOfBoxError("oracle radius exceeds the box")
    ctx = _context(d, box)
    g = box.grid_size
    kk = k + box.block_bound
    a_k = float(a[kk])
    span = np.arange(-radius, radius + 1)
    if eta in (0.0, 1.0):
        waves = np.exp(1j * np.multiply.outer(ctx.theta, span))
        if eta == 0.0:
            stage = waves * (1j * span - a_k)[None, :]
            stage /= ctx.delta[kk][:, None]
        else:
            stage = waves / ctx.delta[kk][:, None]
            spec = np.fft.fft(stage, axis=0)
            freqs = np.fft.fftfreq(g, d=1.0 / g).astype(int)
            spec *= (1j * freqs - a_k)[:, None]
            stage = np.fft.ifft(spec, axis=0)
        rows = np.fft.fft(stage, axis=0) / g
        return rows[span % g]
    if eta != 0.5:
        raise ValueError("oracle covers eta in {0, 1/2, 1}")
    flip = box.n_blocks - 1 - kk
    a_minus = float(a[flip])
    sqrt_delta_inv = ctx.delta[flip] ** (-0.5)
    sel = span + box.mode_bound
    eps_grid = _eps_grid_rows(ctx, box, kk, sel)
    stage = eps_grid.T * sqrt_delta_inv[:, None]
    spec = np.fft.fft(stage, axis=0)
    freqs = np.fft.fftfreq(g, d=1.0 / g).astype(int)
    spec *= (1j * freqs - a_minus)[:, None]
    stage = np.fft.ifft(spec, axis=0)
    stage *= sqrt_delta_inv[:, None]
    return np.conj(eps_grid) @ stage / g


def _eps_grid_rows(ctx, box: TruncationBox, k_index: int,
                   sel: np.ndarray) -> np.ndarray:
    """Conjugated basis functions on the grid, rows indexed by ``sel``.

    Synthesized directly from the density and the iterate angles; going
    through the band-projected coefficient tables would clip the
    analytic tails that the quadrature pairing is supposed to keep.
    """
    key = ("eps_grid", k_index)
    if key not in ctx.extras:
        flip = box.n_blocks - 1 - k_index
        modes = box.modes()
        waves = np.exp(-1j * np.multiply.outer(
            modes, ctx.iterate_angles[flip]))
        ctx.extras[key] = np.sqrt(ctx.delta[flip])[None, :] * waves
    return ctx.extras[key][sel]


def master_deviation(d: DiffeoSpec, box: TruncationBox, radius: int,
                     etas=(0.0, 0.5, 1.0),
                     growth: GrowthSequence | None = None) -> float:
    """Sup deviation of closed-form elements from the grid oracle."""
    if growth is None:
        growth = growth_sequence(d, box.block_bound)
    a = a_sequence(growth, box.block_bound)
    worst = 0.0
    span = range(-radius, radius + 1)
    for eta in etas:
        for k in span:
            oracle = matrix_element_oracle_table(eta, k, d, box, a, radius)
            for si, s in enumerate(span):
                for li, l in enumerate(span):
                    closed = matrix_element_closed_form(
                        eta, k, l, k, s, d, box, a)
                    worst = max(worst, abs(closed - oracle[si, li]))
    return worst


def resolvent_profile(d: DiffeoSpec, box: TruncationBox, ns, etas,
                      growth: GrowthSequence | None = None,
                      slack: float = 1e-6, threads: int = 1) -> list[dict]:
    """Singular value rows of the deformed corners with their bounds.

    Each row carries the smallest singular value, the bound
    ``Gamma_{|n|} ||D_n^{-1}|| (1 + slack)`` on the resolvent norm and
    the margin by which the bound holds.  At n = 0 the corner has a one
    dimensional kernel; the resolvent is then read off the deflated
    (second smallest) singular value.
    """
    n_top = max(abs(int(n)) for n in ns)
    if growth is None:
        growth = growth_sequence(d, n_top)
    a = a_sequence(growth, n_top)
    offset = (len(a) - 1) // 2

    def one(job):
        n, eta = job
        corner = deformed_corner(n, eta, d, box, float(a[n + offset]))
        sigma = np.linalg.svd(corner, compute_uv=False)
        sigma_min = float(sigma[-1])
        kernel_dim = int(np.sum(sigma < 1e-8))
        effective = float(sigma[-2]) if n == 0 else sigma_min
        bound = (growth.gamma(n) * diagonal_inverse_norm(box, float(a[n + offset]))
                 * (1.0 + slack))
        return {
            "n": int(n),
            "eta": float(eta),
            "sigma_min": sigma_min,
            "kernel_dim": kernel_dim,
            "resolvent": 1.0 / effective,
            "bound": bound,
            "margin": bound - 1.0 / effective,
        }

    jobs = [(int(n), float(eta)) for n in ns for eta in etas]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, jobs))
    return [one(job) for job in jobs]


def commutator_block(n: int, eta: float, d: DiffeoSpec, box: TruncationBox,
                     growth: GrowthSequence, generator: str = "shift"):
    """Deformed commutator block with the shift generator (or inverse).

    The commutator of the longitudinal operator with the block shift is
    scalar per block; its eta-deformation is multiplication by

        (a_{n-1} - a_n) delta_n^{eta-1} delta_{n-1}^{-eta}

    (indices n+1 for the inverse shift).  Returns the projected mode
    matrix, its spectral norm, and the growth bound
    ``|step| Gamma_{|n|}^{1-eta} Gamma_{|n'|}^{eta}``.
    """
    bound_needed = max(abs(n), abs(n - 1), abs(n + 1))
    if bound_needed >= len(growth):
        growth = growth_sequence(d, bound_needed)
    a = a_sequence(growth, bound_needed)
    off = bound_needed
    ctx = _context(d, box)
    if generator == "shift":
        other = n - 1
    elif generator == "shift_inverse":
        other = n + 1
    else:
        raise ValueError(f"unknown generator {generator!r}")
    step = float(a[other + off] - a[n + off])
    delta_n = _delta_grid(d, box, n, ctx)
    delta_o = _delta_grid(d, box, other, ctx)
    mult = step * delta_n ** (eta - 1.0) * delta_o ** (-eta)
    g = box.grid_size
    modes = box.modes()
    hats = np.fft.fft(mult.astype(complex)) / g
    matrix = hats[(modes[:, None] - modes[None, :]) % g]
    norm = float(np.linalg.norm(matrix, ord=2))
    bound = (abs(step) * growth.gamma(n) ** (1.0 - eta)
             * growth.gamma(other) ** eta)
    return matrix, norm, bound
