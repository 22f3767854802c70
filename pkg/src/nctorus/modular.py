"""Modular operators attached to the invariant state.

On the block space the positive operator Delta acts within block n as
multiplication by the density ``delta_n(z)``, and the conjugation J is

    (J x)_n(z) = delta_n(z)^{1/2} conj(x_{-n}(f^n(z))).

Powers and more general Borel functions of Delta are blockwise grid
multiplications followed by re-projection onto the retained modes; the
dropped spectral mass is watched and raised as :class:`AliasingError`
when it exceeds the tail tolerance.
"""

from __future__ import annotations

import numpy as np

from .dynamics import DiffeoSpec
from .errors import AliasingError, SingularBlockError
from .gns import GnsVector, TruncationBox, _context, _grid_to_blocks, vacuum, represent
from .weyl import WeylElement, involution

_DEFAULT_TAIL = 1e-6


def _reproject(box: TruncationBox, grid_rows: np.ndarray, ref_norm: float,
               tail_tol: float, label: str) -> GnsVector:
    """Project grid rows back to the mode band, policing the dropped mass."""
    g = box.grid_size
    c = np.fft.fft(grid_rows, axis=1) / g
    freqs = np.fft.fftfreq(g, d=1.0 / g).astype(int)
    outside = np.abs(freqs) > box.mode_bound
    dropped = float(np.sqrt(np.sum(np.abs(c[:, outside]) ** 2)))
    if ref_norm > 0 and dropped / ref_norm > tail_tol:
        raise AliasingError(
            f"{label} dropped {dropped / ref_norm:.3e} relative mass "
            f"(tolerance {tail_tol:.1e})")
    return GnsVector(box, c[:, box.modes() % g])


def apply_delta_power(x: GnsVector, a: float, d: DiffeoSpec,
                      tail_tol: float = _DEFAULT_TAIL) -> GnsVector:
    """Apply ``Delta^(a/2)``: block n multiplies by ``delta_n^(a/2)``.

    The half-power convention makes ``a = 1`` the modular square root
    used by the closure ``S = J Delta^{1/2}``.
    """
    ctx = _context(d, x.box)
    rows = x.on_grid() * ctx.delta_power(0.5 * a)
    return _reproject(x.box, rows, x.norm(), tail_tol, f"Delta^{a}/2")


def _j_phases(ctx) -> np.ndarray:
    """Evaluation phases exp(i l F_n-angles), cached on the context."""
    if "j_phases" not in ctx.extras:
        modes = ctx.box.modes()
        ctx.extras["j_phases"] = np.exp(
            1j * ctx.iterate_angles[:, :, None] * modes[None, None, :])
    return ctx.extras["j_phases"]


def apply_J(x: GnsVector, d: DiffeoSpec,
            tail_tol: float = _DEFAULT_TAIL) -> GnsVector:
    """Modular conjugation, an antiunitary involution."""
    ctx = _context(d, x.box)
    box = x.box
    phases = _j_phases(ctx)
    rows = np.empty((box.n_blocks, box.grid_size), dtype=complex)
    for i in range(box.n_blocks):
        flipped = box.n_blocks - 1 - i
        values = phases[i] @ x.coeffs[flipped]
        rows[i] = np.conj(values)
    rows *= ctx.delta_power(0.5)
    return _reproject(box, rows, x.norm(), tail_tol, "J")


def _j_on_grid(ctx, rows: np.ndarray) -> np.ndarray:
    """One J step on raw grid rows, keeping all grid modes.

    Used by the conjugated Borel calculus, where projecting the
    intermediate vectors onto the retained band would contaminate the
    composite with truncation error that neither route owns.
    """
    g = ctx.box.grid_size
    nb = ctx.box.n_blocks
    if "j_grid_phases" not in ctx.extras:
        freqs = np.fft.fftfreq(g, d=1.0 / g)
        ctx.extras["j_grid_phases"] = np.exp(
            1j * ctx.iterate_angles[:, :, None] * freqs[None, None, :])
    phases = ctx.extras["j_grid_phases"]
    coeffs = np.fft.fft(rows, axis=1) / g
    out = np.empty_like(rows)
    for i in range(nb):
        out[i] = np.conj(phases[i] @ coeffs[nb - 1 - i])
    out *= ctx.delta_power(0.5)
    return out


def tomita_check(f: WeylElement, d: DiffeoSpec, box: TruncationBox,
                 tail_tol: float = _DEFAULT_TAIL) -> float:
    """Deviation of ``J Delta^{1/2} pi(f) xi`` from ``pi(f*) xi``."""
    xi = vacuum(box)
    left = apply_J(apply_delta_power(represent(f, d, box).apply(xi), 1.0, d,
                                     tail_tol), d, tail_tol)
    right = represent(involution(f), d, box).apply(xi)
    return (left - right).norm()


def _fn_values(fn, t: np.ndarray, inverse: bool = False,
               conjugate: bool = False) -> np.ndarray:
    """Evaluate a tagged function descriptor on positive spectra ``t``."""
    arg = 1.0 / t if inverse else t
    kind = fn[0]
    if kind == "power":
        return np.asarray(arg, dtype=complex) ** float(fn[1])
    if kind == "rational":
        num = np.conj(fn[1]) if conjugate else np.asarray(fn[1], dtype=complex)
        den = np.conj(fn[2]) if conjugate else np.asarray(fn[2], dtype=complex)
        den_vals = np.polyval(den, arg)
        if float(np.min(np.abs(den_vals))) < 1e-12:
            raise SingularBlockError(
                "rational denominator vanishes on the spectrum")
        return np.polyval(num, arg) / den_vals
    raise ValueError(f"unknown function descriptor {fn!r}")


def borel_apply(x: GnsVector, fn, d: DiffeoSpec,
                tail_tol: float = _DEFAULT_TAIL) -> GnsVector:
    """Apply ``fn(Delta)`` for fn in the small dictionary.

    ``fn`` is ``("power", a)`` for ``t^a`` or ``("rational", num, den)``
    with polynomial coefficient sequences in numpy order.
    """
    ctx = _context(d, x.box)
    rows = x.on_grid() * _fn_values(fn, ctx.delta)
    return _reproject(x.box, rows, x.norm(), tail_tol, "Borel calculus")


def conjugated_borel_apply(x: GnsVector, fn, d: DiffeoSpec,
                           tail_tol: float = _DEFAULT_TAIL) -> GnsVector:
    """Apply ``J fn(Delta) J`` with intermediates at grid resolution.

    Only the final result is projected back onto the retained band, so
    the composite is exact up to grid aliasing of analytic tails.
    """
    ctx = _context(d, x.box)
    rows = _j_on_grid(ctx, x.on_grid())
    rows = rows * _fn_values(fn, ctx.delta)
    rows = _j_on_grid(ctx, rows)
    return _reproject(x.box, rows, x.norm(), tail_tol,
                      "conjugated Borel calculus")


def borel_identity_check(fn, x: GnsVector, d: DiffeoSpec,
                         tail_tol: float = _DEFAULT_TAIL) -> float:
    """Deviation in ``J fn(Delta) J = conj-fn(Delta^{-1})`` applied to x."""
    left = conjugated_borel_apply(x, fn, d, tail_tol)
    ctx = _context(d, x.box)
    rows = x.on_grid() * _fn_values(fn, ctx.delta, inverse=True,
                                    conjugate=True)
    right = _reproject(x.box, rows, x.norm(), tail_tol, "Borel calculus")
    return (left - right).norm()
