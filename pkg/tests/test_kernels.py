import numpy as np
import pytest

from hybriddj import kernels

from oracles import mp_t_integral

BACKENDS = kernels.available_backends()

CASES = [
    # q, lo, hi, s
    (0.5, 0.275, 0.325, 0.3),
    (0.0, 0.9, 1.1, 1.0),
    (1e-4, 0.9, 1.1, 1.0),
    (-1.3, 0.15, 0.6, 0.375),
    (2.0, 0.01, 0.05, 0.03),
]


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return BACKENDS[request.param]


def test_compiled_backend_present():
    # the extension is built by `pip install -e .`; fallback-only installs skip
    if "cython" not in BACKENDS:
        pytest.skip("compiled kernel not built")
    assert kernels.BACKEND == "cython"


@pytest.mark.parametrize("q, lo, hi, s", CASES)
@pytest.mark.parametrize("full", [False, True])
def test_t_integral_against_mpmath(backend, q, lo, hi, s, full):
    value, err, ok = backend.t_integral(q, lo, hi, s, full)
    assert ok and err <= 1e-12
    assert value == pytest.approx(mp_t_integral(q, lo, hi, s, full), rel=1e-12, abs=1e-15)


def test_many_matches_scalar(backend):
    qs = np.linspace(-2, 2, 41).reshape(1, 41)
    vals, errs, ok = backend.t_integral_many(qs, 0.2, 0.4, 0.3, True)
    assert ok and vals.shape == qs.shape == errs.shape
    for q, v in zip(qs.ravel(), vals.ravel()):
        assert v == backend.t_integral(q, 0.2, 0.4, 0.3, True)[0]


def test_empty_interval(backend):
    assert backend.t_integral(0.3, 0.5, 0.5, 0.5, False) == (0.0, 0.0, True)


def test_non_convergence_reported(backend):
    value, err, ok = backend.t_integral(0.3, 0.01, 2.0, 0.5, True, epsabs=1e-300, limit=3)
    assert not ok and err > 1e-300 and np.isfinite(value)


def test_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("only one backend available")
    qs = np.linspace(-3, 3, 101)
    a = BACKENDS["cython"].t_integral_many(qs, 0.05, 0.3, 0.175, True)[0]
    b = BACKENDS["python"].t_integral_many(qs, 0.05, 0.3, 0.175, True)[0]
    np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-300)
