"""Dual-rail photonic qubits in the two-dimensional logical subspace.

Logical ``|0>`` is a photon in the lower rail, ``|1>`` a photon in the upper
rail. Two-qubit states are ordered ``(c, b)`` = (control/ancilla, Bob) with
flat index ``2*c + b``: ``00, 01, 10, 11``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

_NORM_TOL = 1e-12


def _frozen(a, size):
    a = np.array(a, dtype=complex)
    if a.shape != (size,):
        raise ValueError(f"expected {size} amplitudes, got shape {a.shape}")
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DualRailState:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = _frozen(self.amplitudes, 2)
        if abs(np.vdot(a, a).real - 1.0) > _NORM_TOL:
            raise ValueError(f"dual-rail state not normalized: {a}")
        object.__setattr__(self, "amplitudes", a)

    @property
    def a0(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def a1(self) -> complex:
        return complex(self.amplitudes[1])

    def fidelity(self, other: DualRailState) -> float:
        return abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = _frozen(self.amplitudes, 4)
        if abs(np.vdot(a, a).real - 1.0) > _NORM_TOL:
            raise ValueError("two-qubit state not normalized")
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def product(cls, control: DualRailState, target: DualRailState) -> TwoQubitState:
        return cls(np.kron(control.amplitudes, target.amplitudes))

    def reduced_target(self) -> np.ndarray:
        """Density matrix of Bob's qubit after tracing out the control."""
        m = self.amplitudes.reshape(2, 2)
        return m.T @ m.conj()

    def reduced_control(self) -> np.ndarray:
        m = self.amplitudes.reshape(2, 2)
        return m @ m.conj().T


def make_dualrail(bit: int) -> DualRailState:
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    a = np.zeros(2, dtype=complex)
    a[bit] = 1.0
    return DualRailState(a)


#: Bob's register after the Hadamard on |1>, the eigenstate used for kickback.
MINUS = DualRailState(np.array([1.0, -1.0]) / math.sqrt(2))


def beam_splitter_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]])


def beam_splitter(state: DualRailState, theta: float) -> DualRailState:
    """Real involutive beam splitter; ``theta = pi/4`` is the Hadamard."""
    return DualRailState(beam_splitter_matrix(theta) @ state.amplitudes)


def hadamard(state: DualRailState) -> DualRailState:
    return beam_splitter(state, math.pi / 4)


def phase_shift(state: DualRailState, phi: float) -> DualRailState:
    """Phase ``exp(i phi)`` on the upper rail (logical ``|1>``)."""
    return DualRailState(state.amplitudes * np.array([1.0, np.exp(1j * phi)]))


_CNOT_ORDER = np.array([0, 1, 3, 2])


def cnot(joint: TwoQubitState) -> TwoQubitState:
    """``|x>_c |y>_b -> |x>_c |y xor x>_b``: swaps the ``10`` and ``11`` amplitudes."""
    return TwoQubitState(joint.amplitudes[_CNOT_ORDER])


def prepare_feedforward_ancilla(f_value: int) -> DualRailState:
    """Control qubit fired by the oracle's classical output ``f(q)``."""
    if f_value not in (0, 1):
        raise ValueError(f"f_value must be 0 or 1, got {f_value!r}")
    log.debug("feed-forward f=%d: %s-rail source fires", f_value, "upper" if f_value else "lower")
    return make_dualrail(f_value)
