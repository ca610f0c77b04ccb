"""Deutsch-Jozsa oracle for the hybrid register.

Two execution modes are provided. The semiclassical mode applies the net
phase ``(-1)**f(q)`` directly, with Bob's qubit as a spectator. The coherent
mode keeps the feed-forward ancilla as a quantum register: on every grid
branch it is prepared in ``|f(q_j)>`` and then drives a CNOT onto Bob's qubit.
Uncomputing the ancilla recovers the semiclassical state exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .cv import CvState, QuadratureGrid, apply_phase_function, fourier
from .dualrail import MINUS, DualRailState
from .errors import GridError, PromiseViolation, StateError

CONSTANT = "constant"
BALANCED = "balanced"

FUNCTION_KINDS = ("const0", "const1", "step", "parity_bins", "random_balanced")


class QueryCounter:
    """Counts oracle invocations for one run context."""

    def __init__(self):
        self.count = 0

    def tick(self):
        self.count += 1


def _tick(counter):
    if counter is not None:
        counter.tick()


@dataclass(frozen=True, eq=False)
class OracleSpec:
    values: np.ndarray
    declared_class: str
    label: str = ""

    def __post_init__(self):
        v = np.array(self.values, dtype=np.uint8)
        if v.ndim != 1 or np.any(v > 1):
            raise ValueError("OracleSpec values must be a 1-D bit vector")
        if self.declared_class not in (CONSTANT, BALANCED):
            raise ValueError(f"declared_class must be constant or balanced, not {self.declared_class!r}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n_points(self) -> int:
        return self.values.shape[0]

    def bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.values)

    def to_dict(self) -> dict:
        return {"label": self.label, "declared_class": self.declared_class, "values": self.bitstring()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> OracleSpec:
        bits = d["values"]
        if set(bits) - {"0", "1"}:
            raise ValueError("values must be a string of 0/1 characters")
        return cls(np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0"), d["declared_class"], d.get("label", ""))

    @classmethod
    def from_json(cls, text: str) -> OracleSpec:
        return cls.from_dict(json.loads(text))


def validate_promise(f: OracleSpec, grid: QuadratureGrid | None = None) -> str:
    """Return the verified class of ``f``; raise if the promise or the label fails."""
    n = f.n_points
    if grid is not None and n != grid.n_points:
        raise GridError(f"function has {n} values, grid has {grid.n_points} points")
    ones = int(f.values.sum())
    if ones in (0, n):
        found = CONSTANT
    elif 2 * ones == n:
        found = BALANCED
    else:
        raise PromiseViolation(
            f"function {f.label!r} has {ones} ones out of {n}: neither constant nor balanced",
            ones=ones,
        )
    if found != f.declared_class:
        raise PromiseViolation(
            f"function {f.label!r} declared {f.declared_class} but is {found} ({ones} ones)",
            ones=ones,
        )
    return found


def make_function(kind: str, grid: QuadratureGrid, width: int | None = None, seed: int | None = None) -> OracleSpec:
    n = grid.n_points
    if kind == "const0":
        spec = OracleSpec(np.zeros(n), CONSTANT, "const0")
    elif kind == "const1":
        spec = OracleSpec(np.ones(n), CONSTANT, "const1")
    elif kind == "step":
        spec = OracleSpec(grid.points >= 0, BALANCED, "step")
    elif kind == "parity_bins":
        if width is None or width < 1 or n % width or (n // width) % 2:
            raise ValueError(
                f"parity_bins width must divide {n} into an even number of bins, got {width}"
            )
        spec = OracleSpec((np.arange(n) // width) % 2, BALANCED, f"parity_bins({width})")
    elif kind == "random_balanced":
        if seed is None:
            raise ValueError("random_balanced needs a seed")
        rng = np.random.default_rng(seed)
        bits = np.zeros(n, dtype=np.uint8)
        bits[rng.permutation(n)[: n // 2]] = 1
        spec = OracleSpec(bits, BALANCED, f"random_balanced({seed})")
    else:
        raise ValueError(f"unknown function kind {kind!r}; expected one of {FUNCTION_KINDS}")
    validate_promise(spec, grid)
    return spec


@dataclass(frozen=True, eq=False)
class HybridState:
    """Joint amplitudes indexed ``[grid point j, ancilla bit c, Bob bit b]``."""

    grid: QuadratureGrid
    amplitudes: np.ndarray
    q0: float | None = None

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.shape != (self.grid.n_points, 2, 2):
            raise GridError(f"hybrid amplitudes must have shape ({self.grid.n_points}, 2, 2), got {a.shape}")
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def from_product(cls, cv: CvState, ancilla: DualRailState, bob: DualRailState) -> HybridState:
        a = np.einsum("j,c,b->jcb", cv.amplitudes, ancilla.amplitudes, bob.amplitudes)
        return cls(cv.grid, a, q0=cv.q0)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def ancilla_population(self, bit: int = 1) -> float:
        return float(np.sum(np.abs(self.amplitudes[:, bit, :]) ** 2))

    def reduced_bob(self) -> np.ndarray:
        m = self.amplitudes.reshape(-1, 2)
        return m.T @ m.conj()

    def cv_bob_purity(self) -> float:
        """Purity of the CV x Bob state left after discarding the ancilla."""
        v = self.amplitudes.transpose(1, 0, 2).reshape(2, -1)
        gram = v.conj() @ v.T
        return float(np.sum(np.abs(gram) ** 2) / self.norm() ** 4)

    def project_bob(self, bob: DualRailState, ancilla_bit: int = 0) -> CvState:
        """CV amplitudes conditioned on the given ancilla bit and Bob state (unnormalized)."""
        cv = self.amplitudes[:, ancilla_bit, :] @ bob.amplitudes.conj()
        return CvState(self.grid, cv, q0=self.q0)


def bob_fidelity(state: HybridState, reference: DualRailState) -> float:
    """``<ref| rho_Bob |ref>`` for Bob's reduced state."""
    r = reference.amplitudes
    return float(np.real(r.conj() @ state.reduced_bob() @ r))


def _check_kickback(bob: DualRailState):
    if 1.0 - bob.fidelity(MINUS) > 1e-9:
        raise StateError(
            f"Bob's qubit must be (|0> - |1>)/sqrt(2) for phase kickback, got {bob.amplitudes}"
        )


def apply_oracle_semiclassical(cv: CvState, bob: DualRailState, f: OracleSpec, counter: QueryCounter | None = None):
    """Net action of the oracle: phase ``(-1)**f(q)`` on Alice, Bob untouched."""
    _check_kickback(bob)
    if f.n_points != cv.grid.n_points:
        raise GridError(f"function has {f.n_points} values, grid has {cv.grid.n_points} points")
    _tick(counter)
    return apply_phase_function(cv, f), bob


def _flip_ancilla_where(amps: np.ndarray, bits: np.ndarray) -> np.ndarray:
    out = amps.copy()
    m = bits.astype(bool)
    out[m] = amps[m][:, ::-1, :]
    return out


def _bits(state: HybridState, f: OracleSpec) -> np.ndarray:
    if f.n_points != state.grid.n_points:
        raise GridError(f"function has {f.n_points} values, grid has {state.grid.n_points} points")
    return f.values


def apply_oracle_coherent(state: HybridState, f: OracleSpec, counter: QueryCounter | None = None) -> HybridState:
    bits = _bits(state, f)
    residual = state.ancilla_population(1)
    if residual > 1e-12:
        raise StateError(f"ancilla must start in |0> on every branch (|1> population {residual:.3g})")
    _tick(counter)
    # branchwise feed-forward: ancilla |0> -> |f(q_j)>
    amps = _flip_ancilla_where(state.amplitudes, bits)
    # CNOT ancilla -> Bob on every branch
    amps[:, 1, :] = amps[:, 1, ::-1].copy()
    return HybridState(state.grid, amps, q0=state.q0)


def uncompute_ancilla(state: HybridState, f: OracleSpec) -> HybridState:
    amps = _flip_ancilla_where(state.amplitudes, _bits(state, f))
    residual = float(np.sum(np.abs(amps[:, 1, :]) ** 2))
    if residual > 1e-9:
        raise StateError(
            f"ancilla not returned to |0> (residual population {residual:.3g}); "
            "function differs from the one used by the oracle"
        )
    return HybridState(state.grid, amps, q0=state.q0)


def ancilla_discard_study(state: HybridState, window=None) -> dict:
    """Compare discarding the ancilla with coherently recombining it.

    ``window_prob_shift`` is the final window probability of the discarded
    (mixed) path minus that of the coherent path, after the inverse Fourier
    gate on Alice's register. The default window is one grid spacing around
    the state's ``q0`` (or the grid point nearest 0).
    """
    from .measurement import MeasurementWindow, position_mask

    grid = state.grid
    if window is None:
        centre = state.q0 if state.q0 is not None else float(grid.points[grid.nearest_index(0.0)])
        window = MeasurementWindow(centre, grid.spacing)
    mask = position_mask(grid, window)

    def window_prob(vec):
        out = fourier(CvState(grid, vec), "inverse").amplitudes
        return float(np.sum(np.abs(out[mask]) ** 2))

    a = state.amplitudes / state.norm()
    p_mixed = sum(window_prob(a[:, c, b]) for c in (0, 1) for b in (0, 1))
    recombined = a.sum(axis=1)
    p_coherent = sum(window_prob(recombined[:, b]) for b in (0, 1))
    return {"cv_purity": state.cv_bob_purity(), "window_prob_shift": p_mixed - p_coherent}


def cv_from_hybrid(state: HybridState, bob: DualRailState) -> CvState:
    """Alice's register from an ancilla-free product state with Bob in ``bob``."""
    return state.project_bob(bob, ancilla_bit=0)

