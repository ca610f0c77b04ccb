"""Continuous-variable register on a self-dual quadrature grid.

Amplitudes are stored as wavefunction samples multiplied by ``sqrt(spacing)``,
so ``sum(|a_j|**2)`` is a probability and no quadrature weights leak out of
this module. The grid spacing is fixed to ``sqrt(pi / n_points)``; with that
choice the Fourier gate ``exp(2i q q') / sqrt(pi)`` maps the grid onto itself
and its discretization is an exactly unitary matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import GridError, ResolutionError

PAPER = "paper"
NORMALIZED = "normalized"
CONVENTIONS = (PAPER, NORMALIZED)

#: Amplitude formula used for the ``paper`` convention, stored in run records.
PAPER_AMPLITUDE_FORMULA = "sqrt(spacing) * (pi*s)**-0.5 * exp(-q**2/s**2)"


def _readonly(a):
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class QuadratureGrid:
    """Cell-centred grid of ``n_points`` on ``[-half_width, half_width]``."""

    n_points: int

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise GridError(f"n_points must be an integer, got {n!r}")
        if n < 8 or n & (n - 1):
            raise GridError(f"n_points must be a power of two >= 8, got {n}")

    @cached_property
    def spacing(self) -> float:
        return math.sqrt(math.pi / self.n_points)

    @cached_property
    def half_width(self) -> float:
        return self.n_points * self.spacing / 2

    @cached_property
    def points(self) -> np.ndarray:
        # (j - (n-1)/2) is exact in binary, so the grid is exactly antisymmetric
        j = np.arange(self.n_points, dtype=float)
        return _readonly((j - (self.n_points - 1) / 2) * self.spacing)

    def nearest_index(self, q: float) -> int:
        return int(np.argmin(np.abs(self.points - q)))

    def resolves(self, width: float) -> bool:
        """True when a feature of the given width is sampled finely and fully."""
        return self.spacing <= width / 4 and self.half_width >= 5 * width


def make_grid(n_points: int) -> QuadratureGrid:
    return QuadratureGrid(int(n_points) if isinstance(n_points, np.integer) else n_points)


@dataclass(frozen=True, eq=False)
class CvState:
    """Immutable amplitude vector over a :class:`QuadratureGrid`.

    ``q0`` is the snapped centre for position eigenstates (and states derived
    from them); ``convention`` tags squeezed states with their normalization.
    """

    grid: QuadratureGrid
    amplitudes: np.ndarray
    q0: float | None = None
    convention: str | None = None

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.shape != (self.grid.n_points,):
            raise GridError(
                f"amplitude vector of shape {a.shape} does not fit a "
                f"{self.grid.n_points}-point grid"
            )
        object.__setattr__(self, "amplitudes", _readonly(a))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def renormalize(self) -> CvState:
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot renormalize the zero vector")
        return self.evolve(self.amplitudes / n)

    def evolve(self, amplitudes) -> CvState:
        """New state on the same grid carrying the same tags."""
        return CvState(self.grid, amplitudes, q0=self.q0, convention=self.convention)


@dataclass(frozen=True)
class GaussianParams:
    s: float
    delta_s: float = 0.0

    def __post_init__(self):
        if not self.s > 0 or not math.isfinite(self.s):
            raise ValueError(f"width parameter s must be positive, got {self.s}")
        if not self.delta_s >= 0 or not math.isfinite(self.delta_s):
            raise ValueError(f"delta_s must be non-negative, got {self.delta_s}")

    @property
    def r(self) -> float:
        return math.log(self.s)

    def window(self) -> tuple[float, float]:
        """Bounds ``(s - delta_s/2, s + delta_s/2)`` of the squeezed window."""
        lo = self.s - self.delta_s / 2
        if lo <= 0:
            raise ValueError(
                f"squeezed window reaches t <= 0: s - delta_s/2 = {lo}"
            )
        return lo, self.s + self.delta_s / 2


def check_same_grid(*states) -> QuadratureGrid:
    grid = states[0].grid
    for st in states[1:]:
        if st.grid.n_points != grid.n_points:
            raise GridError(
                f"grid mismatch: {grid.n_points} vs {st.grid.n_points} points"
            )
    return grid


def require_resolved(grid: QuadratureGrid, width: float, what: str, allow_unresolved=False):
    if grid.resolves(width):
        return
    msg = (
        f"{what} of width {width:g} is not resolved by the {grid.n_points}-point "
        f"grid (need spacing <= {width / 4:g}, have {grid.spacing:g}; "
        f"need half_width >= {5 * width:g}, have {grid.half_width:g})"
    )
    if not allow_unresolved:
        raise ResolutionError(msg)
    warnings.warn(msg, RuntimeWarning, stacklevel=3)


def position_eigenstate(grid: QuadratureGrid, q0: float) -> CvState:
    if not abs(q0) <= grid.half_width - grid.spacing:
        raise GridError(
            f"q0={q0} outside the usable range +/-{grid.half_width - grid.spacing:.6g}"
        )
    j = grid.nearest_index(q0)
    a = np.zeros(grid.n_points, dtype=complex)
    a[j] = 1.0
    return CvState(grid, a, q0=float(grid.points[j]))


def build_squeezed_state(
    grid: QuadratureGrid,
    params: GaussianParams,
    convention: str = NORMALIZED,
    allow_unresolved: bool = False,
) -> CvState:
    """Sample ``G_s(q) = (pi s)**-1/2 exp(-q**2/s**2)`` on the grid.

    The ``paper`` convention keeps the prefactor as written, which leaves
    ``sum |a|**2 = 1/sqrt(2 pi)``; ``normalized`` rescales to unit norm.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    s = params.s
    require_resolved(grid, s, "squeezed state", allow_unresolved)
    q = grid.points
    a = math.sqrt(grid.spacing) * (math.pi * s) ** -0.5 * np.exp(-(q**2) / s**2)
    if convention == NORMALIZED:
        a = a / np.linalg.norm(a)
    return CvState(grid, a.astype(complex), convention=convention)


@lru_cache(maxsize=32)
def _phase_ramp(n: int) -> np.ndarray:
    j = np.arange(n)
    sign = np.where(j % 2 == 0, 1.0, -1.0)
    return _readonly(sign * np.exp(1j * np.pi * j / n))


def fourier(state: CvState, direction: str = "forward") -> CvState:
    """Fourier gate with kernel ``exp(+2i q q') / sqrt(pi)`` (``inverse``: conjugate).

    On the self-dual grid the kernel matrix ``exp(2i p_k q_j) / sqrt(n)`` factors
    into an orthonormal DFT between two linear phase ramps and a global phase
    ``-exp(i pi / 2n)``, so the result is unitary to rounding error.
    """
    n = state.grid.n_points
    ramp = _phase_ramp(n)
    glob = -np.exp(1j * np.pi / (2 * n))
    a = state.amplitudes
    if direction == "forward":
        out = glob * ramp * np.fft.ifft(ramp * a, norm="ortho")
    elif direction == "inverse":
        out = np.conj(glob) * np.conj(ramp) * np.fft.fft(np.conj(ramp) * a, norm="ortho")
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    return state.evolve(out)


def parity(state: CvState) -> CvState:
    """``psi(q) -> psi(-q)``; on the symmetric grid this reverses the vector."""
    return state.evolve(state.amplitudes[::-1])


def _bits_for(grid: QuadratureGrid, f) -> np.ndarray:
    bits = np.asarray(getattr(f, "values", f))
    if bits.shape != (grid.n_points,):
        raise GridError(
            f"function defined on {bits.shape[0] if bits.ndim else 0} points, "
            f"grid has {grid.n_points}"
        )
    return bits


def apply_phase_function(state: CvState, f) -> CvState:
    """Multiply amplitude ``j`` by ``(-1)**f(q_j)``. ``f`` is an OracleSpec or bit array."""
    bits = _bits_for(state.grid, f)
    sign = np.where(bits.astype(bool), -1.0, 1.0)
    return state.evolve(sign * state.amplitudes)


def overlap(a: CvState, b: CvState) -> complex:
    check_same_grid(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: CvState, b: CvState) -> float:
    """``|<a|b>|**2`` after normalizing both states."""
    return abs(overlap(a, b)) ** 2 / (a.norm() ** 2 * b.norm() ** 2)


def gaussian_width(state: CvState) -> float:
    """Width ``w`` of a centred profile ``|a|**2 ~ exp(-2 q**2 / w**2)`` from its second moment."""
    p = state.probabilities()
    q = state.grid.points
    return 2.0 * math.sqrt(float(np.sum(p * q**2) / np.sum(p)))
