"""Concrete Hilbert space model: blocks of circle functions.

A vector is a family ``(x_n)_{|n| <= K}`` of trigonometric polynomials
with modes ``|l| <= M``; the pair ``(K, M)`` plus quadrature grid size
is a :class:`TruncationBox`.  Represented algebra elements act block
diagonally up to shifts,

    (A x)_n = sum_s m_{n, s} . x_{n - s},

with multiplier functions ``m_{n, s}(z) = sum_m f(m, s)
exp(i m (psi(z) + 2 pi alpha (2 n - s)))`` where ``psi`` is the angle of
``h^{-1}(z)``.  Everything downstream (modular operators, transforms,
Dirac blocks) reuses the cached per-box context built here.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dynamics import DiffeoSpec, iterate_lift, radon_nikodym
from .errors import AlphaMismatchError, OutOfBoxError, TailMassError
from .grids import default_grid_size, grid_angles, project_to_modes
from .weyl import WeylElement, star_product


@dataclass(frozen=True)
class TruncationBox:
    """Block bound K, mode bound M and quadrature grid size G.

    G defaults to the smallest power of two at least ``8 (M + 1)`` and
    is validated against that floor, which keeps multiplier products
    effectively alias free for the analytic conjugators used here.
    """

    block_bound: int
    mode_bound: int
    grid_size: int = 0

    def __post_init__(self):
        if self.block_bound < 0 or self.mode_bound < 0:
            raise ValueError("bounds must be nonnegative")
        g = self.grid_size or default_grid_size(self.mode_bound)
        if g & (g - 1) or g < 8 * (self.mode_bound + 1):
            raise ValueError(
                f"grid size {g} must be a power of two >= 8 (M + 1)")
        object.__setattr__(self, "grid_size", int(g))

    @property
    def n_blocks(self) -> int:
        return 2 * self.block_bound + 1

    @property
    def n_modes(self) -> int:
        return 2 * self.mode_bound + 1

    @property
    def dim(self) -> int:
        return self.n_blocks * self.n_modes

    def blocks(self) -> np.ndarray:
        return np.arange(-self.block_bound, self.block_bound + 1)

    def modes(self) -> np.ndarray:
        return np.arange(-self.mode_bound, self.mode_bound + 1)


class _Context:
    """Per (dynamics, box) precomputation shared across modules."""

    def __init__(self, d: DiffeoSpec, box: TruncationBox):
        self.d = d
        self.box = box
        g = box.grid_size
        self.theta = grid_angles(g)
        self.x = np.arange(g) / g
        self.psi = 2.0 * np.pi * d.lift.inverse(self.x)
        blocks = box.blocks()
        self.iterate_angles = np.empty((box.n_blocks, g))
        self.delta = np.empty((box.n_blocks, g))
        for i, n in enumerate(blocks):
            self.iterate_angles[i] = 2.0 * np.pi * iterate_lift(d, int(n), self.x)
            self.delta[i] = radon_nikodym(d, int(n), x=self.x)
        self._delta_pows: dict[float, np.ndarray] = {}
        self.extras: dict = {}

    def delta_power(self, a: float) -> np.ndarray:
        """Blockwise ``delta_n ** a`` on the grid, cached per exponent."""
        a = float(a)
        if a not in self._delta_pows:
            self._delta_pows[a] = self.delta ** a
        return self._delta_pows[a]


@lru_cache(maxsize=8)
def _context(d: DiffeoSpec, box: TruncationBox) -> _Context:
    return _Context(d, box)


def _blocks_to_grid(box: TruncationBox, coeffs: np.ndarray) -> np.ndarray:
    buf = np.zeros((coeffs.shape[0], box.grid_size), dtype=complex)
    buf[:, box.modes() % box.grid_size] = coeffs
    return np.fft.ifft(buf, axis=1) * box.grid_size


def _grid_to_blocks(box: TruncationBox, grid: np.ndarray) -> np.ndarray:
    c = np.fft.fft(grid, axis=1) / box.grid_size
    return c[:, box.modes() % box.grid_size]


class GnsVector:
    """Block family of mode coefficients, shape (2K + 1, 2M + 1).

    ``coeffs[n + K, l + M]`` is the coefficient of ``z^l`` in block n.
    """

    __slots__ = ("box", "coeffs")

    def __init__(self, box: TruncationBox, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (box.n_blocks, box.n_modes):
            raise ValueError(
                f"coefficient shape {coeffs.shape} does not match box")
        self.box = box
        self.coeffs = coeffs

    @classmethod
    def zeros(cls, box: TruncationBox) -> "GnsVector":
        return cls(box, np.zeros((box.n_blocks, box.n_modes), dtype=complex))

    def block(self, n: int) -> np.ndarray:
        if abs(n) > self.box.block_bound:
            raise OutOfBoxError(f"block {n} outside |n| <= {self.box.block_bound}")
        return self.coeffs[n + self.box.block_bound]

    def copy(self) -> "GnsVector":
        return GnsVector(self.box, self.coeffs.copy())

    def scaled(self, factor: complex) -> "GnsVector":
        return GnsVector(self.box, factor * self.coeffs)

    def __add__(self, other: "GnsVector") -> "GnsVector":
        return GnsVector(self.box, self.coeffs + other.coeffs)

    def __sub__(self, other: "GnsVector") -> "GnsVector":
        return GnsVector(self.box, self.coeffs - other.coeffs)

    def inner(self, other: "GnsVector") -> complex:
        """Hilbert inner product, linear in the first slot."""
        return complex(np.sum(self.coeffs * np.conj(other.coeffs)))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def on_grid(self) -> np.ndarray:
        """All blocks evaluated on the quadrature grid, shape (2K+1, G)."""
        return _blocks_to_grid(self.box, self.coeffs)


def vacuum(box: TruncationBox) -> GnsVector:
    """Cyclic vector: constant 1 in block 0."""
    return basis_vector(box, 0, 0)


def basis_vector(box: TruncationBox, k: int, l: int) -> GnsVector:
    """Orthonormal basis vector ``z^l`` sitting in block k."""
    if abs(k) > box.block_bound or abs(l) > box.mode_bound:
        raise OutOfBoxError(f"(k, l) = ({k}, {l}) outside the box")
    out = GnsVector.zeros(box)
    out.coeffs[k + box.block_bound, l + box.mode_bound] = 1.0
    return out


def random_vector(rng: np.random.Generator, box: TruncationBox,
                  block_margin: int = 0, mode_margin: int = 0,
                  normalize: bool = True) -> GnsVector:
    """Random vector supported away from the box edges by the margins."""
    coeffs = np.zeros((box.n_blocks, box.n_modes), dtype=complex)
    bs = slice(block_margin, box.n_blocks - block_margin)
    ms = slice(mode_margin, box.n_modes - mode_margin)
    shape = (box.n_blocks - 2 * block_margin, box.n_modes - 2 * mode_margin)
    coeffs[bs, ms] = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if normalize:
        coeffs /= np.linalg.norm(coeffs)
    return GnsVector(box, coeffs)


class GnsOperator:
    """Shift-banded operator given by multiplier samples per shift.

    ``terms[s]`` has shape (2K + 1, G); row ``n + K`` holds the
    multiplier applied to the source block ``n - s`` when producing
    block n.
    """

    __slots__ = ("box", "terms")

    def __init__(self, box: TruncationBox, terms: dict[int, np.ndarray]):
        self.box = box
        self.terms = {int(s): np.asarray(t, dtype=complex)
                      for s, t in terms.items()}

    def apply_to_grid(self, source: np.ndarray) -> np.ndarray:
        """Act on raw grid rows and return grid rows.

        Products of these operators are pointwise in the grid picture,
        so chaining applications here keeps composites exact; the band
        projection happens only in :meth:`apply`.
        """
        k = self.box.block_bound
        out = np.zeros_like(source)
        for s, mult in self.terms.items():
            lo = max(-k, -k + s)
            hi = min(k, k + s)
            if lo > hi:
                continue
            rows = slice(lo + k, hi + k + 1)
            src = slice(lo - s + k, hi - s + k + 1)
            out[rows] += mult[rows] * source[src]
        return out

    def apply(self, x: GnsVector) -> GnsVector:
        if x.box != self.box:
            raise ValueError("vector box does not match operator box")
        out = self.apply_to_grid(x.on_grid())
        return GnsVector(self.box, _grid_to_blocks(self.box, out))

    def adjoint(self) -> "GnsOperator":
        """Adjoint via ``(A*)_{n, s} = conj(m_{n + s... })`` reindexing.

        Concretely the shift -s multiplier row n is the conjugate of the
        shift s multiplier row n + s, zero where that row leaves the box.
        """
        k = self.box.block_bound
        new_terms: dict[int, np.ndarray] = {}
        for s, mult in self.terms.items():
            arr = np.zeros_like(mult)
            for i in range(mult.shape[0]):
                j = i + s
                if 0 <= j < mult.shape[0]:
                    arr[i] = np.conj(mult[j])
            new_terms[-s] = new_terms.get(-s, 0) + arr
        return GnsOperator(self.box, new_terms)

    def scaled(self, factor: complex) -> "GnsOperator":
        return GnsOperator(self.box,
                           {s: factor * t for s, t in self.terms.items()})

    def __add__(self, other: "GnsOperator") -> "GnsOperator":
        if other.box != self.box:
            raise ValueError("operator boxes differ")
        terms = {s: t.copy() for s, t in self.terms.items()}
        for s, t in other.terms.items():
            terms[s] = terms.get(s, 0) + t
        return GnsOperator(self.box, terms)

    def __sub__(self, other: "GnsOperator") -> "GnsOperator":
        return self + other.scaled(-1.0)

    def dense(self) -> np.ndarray:
        """Dense matrix in the ``basis_vector`` ordering (blocks outer)."""
        box = self.box
        k, g = box.block_bound, box.grid_size
        modes = box.modes()
        diff = (modes[:, None] - modes[None, :]) % g
        dim = box.dim
        out = np.zeros((dim, dim), dtype=complex)
        for s, mult in self.terms.items():
            hats = np.fft.fft(mult, axis=1) / g
            for n in range(max(-k, -k + s), min(k, k + s) + 1):
                rows = slice((n + k) * box.n_modes, (n + k + 1) * box.n_modes)
                cols = slice((n - s + k) * box.n_modes,
                             (n - s + k + 1) * box.n_modes)
                out[rows, cols] = hats[n + k][diff]
        return out

    def norm_estimate(self) -> float:
        """Spectral norm of the dense truncation."""
        return float(np.linalg.norm(self.dense(), ord=2))


def represent(f: WeylElement, d: DiffeoSpec, box: TruncationBox) -> GnsOperator:
    """Image of a coefficient table in the block representation."""
    if f.alpha != d.alpha:
        raise AlphaMismatchError(
            f"element alpha {f.alpha!r} does not match dynamics {d.alpha!r}")
    ctx = _context(d, box)
    rows: dict[int, dict[int, complex]] = {}
    for p, v in f.items():
        rows.setdefault(p.n, {})[p.m] = v
    wave_cache: dict[int, np.ndarray] = {}

    def mode_wave(m: int) -> np.ndarray:
        if m not in wave_cache:
            wave_cache[m] = np.exp(1j * m * ctx.psi)
        return wave_cache[m]

    terms: dict[int, np.ndarray] = {}
    blocks = box.blocks()
    for s, row in rows.items():
        if abs(s) > 2 * box.block_bound:
            warnings.warn(
                f"shift {s} exceeds the block range; term dropped",
                stacklevel=2)
            continue
        mult = np.zeros((box.n_blocks, box.grid_size), dtype=complex)
        for m, v in row.items():
            wave = mode_wave(m)
            twist = np.exp(2j * np.pi * d.alpha * m * (2 * blocks - s))
            mult += v * twist[:, None] * wave[None, :]
        terms[s] = mult
    return GnsOperator(box, terms)


def conjugator_mode_table(d: DiffeoSpec, l: int, mode_bound: int) -> np.ndarray:
    """Fourier coefficients of ``h^l`` for modes ``-mode_bound..mode_bound``."""
    g = default_grid_size(mode_bound)
    x = np.arange(g) / g
    values = np.exp(2j * np.pi * l * d.lift.value(x))
    return project_to_modes(values, mode_bound).coeffs


@lru_cache(maxsize=None)
def _u_kl_cached(d: DiffeoSpec, box: TruncationBox, k: int, l: int,
                 tail_tol: float) -> GnsOperator:
    if l == 0:
        g_l = WeylElement.unit(d.alpha)
    else:
        mode_bound = max(3 * box.mode_bound, 4 * abs(l), 16)
        while True:
            coeffs = conjugator_mode_table(d, l, mode_bound)
            tail = float(np.sqrt(max(0.0, 1.0 - np.sum(np.abs(coeffs) ** 2))))
            if tail <= tail_tol:
                break
            mode_bound *= 2
            if mode_bound > 1 << 16:
                raise TailMassError(
                    f"conjugator power {l} tail stuck at {tail:.3e}")
        table = {(m, 0): c for m, c in
                 zip(range(-mode_bound, mode_bound + 1), coeffs)}
        g_l = WeylElement(d.alpha, table)
    f_k = WeylElement.generator(d.alpha, 0, k)
    return represent(star_product(f_k, g_l), d, box)


def build_u_kl(d: DiffeoSpec, box: TruncationBox, k: int, l: int,
               tail_tol: float = 1e-10) -> GnsOperator:
    """Unitary generator pair product ``u_kl`` as a represented operator.

    The conjugator power ``h^l`` is expanded adaptively until the
    dropped spectral mass is below ``tail_tol`` (Parseval against the
    unit modulus of ``h^l``).
    """
    return _u_kl_cached(d, box, int(k), int(l), float(tail_tol))


def state_coefficients(d: DiffeoSpec, mode_bound: int,
                       size: int = 8192) -> np.ndarray:
    """Moments ``mu(m) = integral exp(2 pi i m h^{-1}(x)) dx``.

    Indexed ``-mode_bound .. mode_bound``; these are the coefficients of
    the invariant state on the first generator row.
    """
    x = np.arange(size) / size
    u = d.lift.inverse(x)
    ms = np.arange(-mode_bound, mode_bound + 1)
    return np.exp(2j * np.pi * np.multiply.outer(ms, u)).mean(axis=1)


def state_eval(f: WeylElement, d: DiffeoSpec, route: str = "series",
               box: TruncationBox | None = None) -> complex:
    """Invariant state applied to a table, by series or by inner product.

    The series route contracts the ``n = 0`` row of the table against
    the moment sequence; the gns route represents the element on a box
    and takes the vacuum expectation.  The two agree within quadrature
    accuracy and are compared in the verification suite.
    """
    if route == "series":
        radius = max((abs(p.m) for p, _ in f.items()), default=0)
        mu = state_coefficients(d, radius)
        return complex(sum(v * mu[p.m + radius]
                           for p, v in f.items() if p.n == 0))
    if route == "gns":
        if box is None:
            k = max(1, max((abs(p.n) for p, _ in f.items()), default=0))
            m = max(1, f.sup_radius)
            box = TruncationBox(k, m)
        xi = vacuum(box)
        return represent(f, d, box).apply(xi).inner(xi)
    raise ValueError(f"unknown route {route!r}")
