"""Alice's window measurements and Monte-Carlo readout.

Position windows are half-open intervals ``[lo, hi)`` on the grid, so windows
that tile the axis partition it exactly. The squeezed-family window sums
``w_t |t><t|`` over normalized squeezed states ``|t>``. Those states are not
mutually orthogonal, so the operator is not a projector: it is applied
literally and its output norm is reported as a *weight*, not a probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cv import NORMALIZED, CvState, GaussianParams, QuadratureGrid, build_squeezed_state
from .errors import GridError

POSITION = "position"
SQUEEZED = "squeezed"

NULL_THRESHOLD = 1e-14


@dataclass(frozen=True)
class MeasurementWindow:
    center: float
    width: float
    basis: str = POSITION
    t_resolution: int = 64

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"window width must be positive, got {self.width}")
        if self.basis not in (POSITION, SQUEEZED):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.basis == SQUEEZED and not self.center - self.width / 2 > 0:
            raise ValueError(
                f"squeezed window [{self.lo:g}, {self.hi:g}] must stay above t = 0"
            )
        if self.t_resolution < 1:
            raise ValueError("t_resolution must be positive")

    @property
    def lo(self) -> float:
        return self.center - self.width / 2

    @property
    def hi(self) -> float:
        return self.center + self.width / 2

    @classmethod
    def in_spacings(cls, grid: QuadratureGrid, center: float, n_spacings: float = 3.0) -> MeasurementWindow:
        return cls(center, n_spacings * grid.spacing)


class Projection(NamedTuple):
    state: CvState
    probability: float
    null_outcome: bool
    raw: CvState


class SqueezedProjection(NamedTuple):
    state: CvState
    weight: float


def position_mask(grid: QuadratureGrid, w: MeasurementWindow) -> np.ndarray:
    L = grid.half_width
    slack = 1e-12 * L
    if w.lo < -L - slack or w.hi > L + slack:
        raise GridError(f"window [{w.lo:g}, {w.hi:g}) extends outside the grid [-{L:g}, {L:g}]")
    q = grid.points
    return (q >= w.lo) & (q < w.hi)


def window_project_position(state: CvState, w: MeasurementWindow) -> Projection:
    if w.basis != POSITION:
        raise ValueError("window_project_position needs a position-basis window")
    mask = position_mask(state.grid, w)
    raw = state.evolve(np.where(mask, state.amplitudes, 0.0))
    p = float(np.sum(np.abs(raw.amplitudes) ** 2))
    if p > NULL_THRESHOLD:
        return Projection(raw.evolve(raw.amplitudes / math.sqrt(p)), p, False, raw)
    return Projection(raw, p, True, raw)


def _t_nodes(w: MeasurementWindow):
    t = np.linspace(w.lo, w.hi, w.t_resolution)
    h = (w.hi - w.lo) / (w.t_resolution - 1)
    weights = np.full(w.t_resolution, h)
    weights[[0, -1]] = h / 2
    return t, weights


def squeezed_family(grid: QuadratureGrid, w: MeasurementWindow, allow_unresolved: bool = False):
    """Rows are normalized squeezed states ``|t>`` at the trapezoid nodes; also returns the weights."""
    t, weights = _t_nodes(w)
    rows = np.array([
        build_squeezed_state(grid, GaussianParams(float(tk)), NORMALIZED, allow_unresolved).amplitudes.real
        for tk in t
    ])
    return rows, weights


def squeezed_window_operator(grid: QuadratureGrid, w: MeasurementWindow, allow_unresolved: bool = False) -> np.ndarray:
    """Dense matrix ``sum_t w_t |t><t|`` (real symmetric)."""
    rows, weights = squeezed_family(grid, w, allow_unresolved)
    return (rows.T * weights) @ rows


def window_project_squeezed(state: CvState, w: MeasurementWindow, allow_unresolved: bool = False) -> SqueezedProjection:
    if w.basis != SQUEEZED:
        raise ValueError("window_project_squeezed needs a squeezed-basis window")
    if w.t_resolution < 16:
        raise ValueError(f"t_resolution must be >= 16, got {w.t_resolution}")
    rows, weights = squeezed_family(state.grid, w, allow_unresolved)
    out = rows.T @ (weights * (rows @ state.amplitudes))
    return SqueezedProjection(state.evolve(out), float(np.sum(np.abs(out) ** 2)))


def sample_outcome(state: CvState, seed: int, size: int | None = None):
    """Grid index (or array of indices) drawn from ``|a_j|**2``."""
    p = state.probabilities()
    rng = np.random.default_rng(seed)
    draw = rng.choice(state.grid.n_points, size=size, p=p / p.sum())
    return int(draw) if size is None else draw
