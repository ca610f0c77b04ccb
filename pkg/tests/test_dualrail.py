import math

import numpy as np
import pytest

from hybriddj.dualrail import (
    MINUS,
    DualRailState,
    TwoQubitState,
    beam_splitter,
    beam_splitter_matrix,
    cnot,
    hadamard,
    make_dualrail,
    phase_shift,
    prepare_feedforward_ancilla,
)

R2 = 1 / math.sqrt(2)


def test_make_dualrail():
    np.testing.assert_array_equal(make_dualrail(1).amplitudes, [0, 1])
    np.testing.assert_array_equal(make_dualrail(0).amplitudes, [1, 0])
    assert np.vdot(make_dualrail(1).amplitudes, make_dualrail(1).amplitudes) == 1
    with pytest.raises(ValueError):
        make_dualrail(2)


def test_hadamard_on_one_gives_minus():
    out = beam_splitter(make_dualrail(1), math.pi / 4)
    np.testing.assert_allclose(out.amplitudes, [R2, -R2], atol=1e-15)
    assert out.fidelity(MINUS) == pytest.approx(1.0, abs=1e-15)


def test_beam_splitter_involutive():
    m = beam_splitter_matrix(math.pi / 4)
    np.testing.assert_allclose(m @ m, np.eye(2), atol=1e-15)
    st = hadamard(hadamard(make_dualrail(1)))
    np.testing.assert_allclose(st.amplitudes, [0, 1], atol=1e-15)


def test_beam_splitter_theta_zero_is_z():
    st = DualRailState([0.6, 0.8j])
    np.testing.assert_allclose(beam_splitter(st, 0.0).amplitudes, [0.6, -0.8j])


def test_beam_splitter_orthogonal_random(rng):
    for theta in rng.uniform(-np.pi, np.pi, 20):
        m = beam_splitter_matrix(theta)
        np.testing.assert_allclose(m.T @ m, np.eye(2), atol=1e-12)
        st = DualRailState(np.array([np.cos(theta), 1j * np.sin(theta)]))
        assert abs(np.linalg.norm(beam_splitter(st, theta).amplitudes) - 1) <= 1e-12


def test_phase_shift_keeps_norm():
    st = phase_shift(MINUS, 0.3)
    assert abs(np.linalg.norm(st.amplitudes) - 1) <= 1e-12
    np.testing.assert_allclose(st.amplitudes, [R2, -R2 * np.exp(0.3j)])


def test_cnot_basis():
    out = cnot(TwoQubitState.product(make_dualrail(1), make_dualrail(0)))
    np.testing.assert_array_equal(out.amplitudes, TwoQubitState.product(make_dualrail(1), make_dualrail(1)).amplitudes)
    same = TwoQubitState.product(make_dualrail(0), make_dualrail(1))
    np.testing.assert_array_equal(cnot(same).amplitudes, same.amplitudes)


def test_cnot_kickback_minus_sign():
    joint = TwoQubitState.product(make_dualrail(1), MINUS)
    # permuting 10 <-> 11 of (0, 0, 1/sqrt2, -1/sqrt2) gives (0, 0, -1/sqrt2, 1/sqrt2)
    np.testing.assert_allclose(cnot(joint).amplitudes, -joint.amplitudes, atol=1e-15)


def test_cnot_squared_identity(rng):
    a = rng.normal(size=4) + 1j * rng.normal(size=4)
    st = TwoQubitState(a / np.linalg.norm(a))
    np.testing.assert_array_equal(cnot(cnot(st)).amplitudes, st.amplitudes)


def test_kickback_general_control(rng):
    for _ in range(20):
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        c /= np.linalg.norm(c)
        ctrl = DualRailState(c)
        out = cnot(TwoQubitState.product(ctrl, MINUS))
        expected = TwoQubitState.product(DualRailState(c * [1, -1]), MINUS)
        np.testing.assert_allclose(out.amplitudes, expected.amplitudes, atol=1e-12)
        rho = out.reduced_target()
        assert np.real(MINUS.amplitudes.conj() @ rho @ MINUS.amplitudes) == pytest.approx(1, abs=1e-12)


def test_feedforward_ancilla(caplog):
    with caplog.at_level("DEBUG", logger="hybriddj.dualrail"):
        zero = prepare_feedforward_ancilla(0)
        one = prepare_feedforward_ancilla(1)
    np.testing.assert_array_equal(zero.amplitudes, [1, 0])
    np.testing.assert_array_equal(one.amplitudes, [0, 1])
    assert "lower-rail" in caplog.text and "upper-rail" in caplog.text
    with pytest.raises(ValueError):
        prepare_feedforward_ancilla(3)
