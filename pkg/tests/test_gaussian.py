import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybriddj.cv import GaussianParams, make_grid
from hybriddj.errors import QuadratureError, ResolutionError
from hybriddj.gaussian import (
    PAPER_CLAIMED_PROBABILITY,
    TaggedValue,
    approximation_gap,
    constant_success_probability,
    exact_t_integral,
    gamma_err,
    gamma_err_derivative_bound,
    post_measurement_profile,
    probability_claim_report,
    squeezing_conversions,
)

from oracles import mp_t_integral

SQRT_PI = math.sqrt(math.pi)


@pytest.mark.parametrize("q", [0.3, 1.7])
def test_gamma_err_even(q):
    p = GaussianParams(0.8, 0.3)
    assert gamma_err(q, p) == gamma_err(-q, p)


def test_gamma_err_limit_value():
    p = GaussianParams(1.0, 0.2)
    # (2/sqrt(pi)) (1/0.9 - 1/1.1), 40-digit mpmath
    assert gamma_err(0.0, p) == pytest.approx(0.22795538729202274, rel=1e-14)
    assert gamma_err(0.0, p) == pytest.approx(0.22800, abs=5e-5)
    # quadrature oracle at q=1e-4: (2/sqrt(pi)) int dt/t^2 exp(-q^2/t^2)
    via_quad = 2 / SQRT_PI * mp_t_integral(1e-4, 0.9, 1.1)
    assert gamma_err(1e-4, p) == pytest.approx(via_quad, rel=1e-12)
    assert via_quad == pytest.approx(0.22795538495843196, rel=1e-12)


def test_gamma_err_zero_window():
    p = GaussianParams(0.5, 0.0)
    np.testing.assert_array_equal(gamma_err(np.linspace(-3, 3, 13), p), 0.0)


def test_gamma_err_vector_and_scalar():
    p = GaussianParams(0.5, 0.1)
    qs = np.array([-1.0, 0.0, 1e-9, 0.4])
    out = gamma_err(qs, p)
    assert out.shape == (4,)
    assert isinstance(gamma_err(0.4, p), float)
    assert out[3] == gamma_err(0.4, p)


def test_gamma_err_invalid():
    with pytest.raises(ValueError):
        gamma_err(0.1, GaussianParams(0.2, 0.4))


def test_approximated_integral_erf_form():
    p = GaussianParams(0.3, 0.05)
    val = exact_t_integral(0.5, p, "approximated")
    assert val == pytest.approx(SQRT_PI / 2 * gamma_err(0.5, p), rel=1e-8)
    assert val == pytest.approx(0.034465163718218890, rel=1e-12)


def test_full_vs_approximated_gap_reported():
    p = GaussianParams(0.3, 0.05)
    full = exact_t_integral(0.5, p, "full")
    assert full == pytest.approx(0.024449138230832006, rel=1e-12)
    # order s^2/t^2 ~ 1 on the window: the "small" correction is ~29 %
    assert approximation_gap(0.5, p) == pytest.approx(-0.29061302506136760, rel=1e-10)


def test_integrals_at_zero():
    p = GaussianParams(0.3, 0.05)
    for mode in ("approximated", "full"):
        v = exact_t_integral(0.0, p, mode)
        assert math.isfinite(v) and v > 0


def test_quadrature_failure_surfaces_error():
    with pytest.raises(QuadratureError) as err:
        exact_t_integral(0.3, GaussianParams(1.0, 1.9), "full", epsabs=1e-300)
    assert err.value.abserr > 0


def test_bad_mode():
    with pytest.raises(ValueError):
        exact_t_integral(0.3, GaussianParams(1.0, 0.1), "sloppy")


def test_profile_closed_form_is_antiderivative():
    g = make_grid(64)
    p = GaussianParams(0.2, 0.02)
    prof = post_measurement_profile(g, p)
    approx = np.array([exact_t_integral(q, p, "approximated") for q in g.points]) / math.pi
    assert np.max(np.abs(prof.closed_form - approx)) <= 1e-8


def test_profile_even_and_peaked_at_origin():
    g = make_grid(256)
    prof = post_measurement_profile(g, GaussianParams(0.5, 0.1))
    np.testing.assert_allclose(prof.closed_form, prof.closed_form[::-1], atol=1e-10, rtol=0)
    np.testing.assert_allclose(prof.exact, prof.exact[::-1], atol=1e-10, rtol=0)
    assert np.argmax(prof.closed_form) in (127, 128)
    assert np.all(np.isfinite(prof.exact))


def test_profile_csv_columns():
    prof = post_measurement_profile(make_grid(64), GaussianParams(0.5, 0.1))
    buf = io.StringIO()
    prof.write_csv(buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == ["q", "exact", "closed_form", "abs_gap"]
    assert len(rows) == 65
    assert "\r" not in buf.getvalue()
    assert rows[1][0] == f"{prof.q_values[0]:.11e}"


def test_profile_resolution_guard():
    with pytest.raises(ResolutionError):
        post_measurement_profile(make_grid(64), GaussianParams(2.0, 0.5))


@pytest.mark.parametrize("s", [1.0, 0.5])
def test_normalized_constant_probability_is_one(s):
    prob = constant_success_probability(GaussianParams(s), make_grid(256), "normalized")
    assert prob.convention == "normalized"
    assert prob.value == pytest.approx(1.0, abs=1e-6)


def test_paper_convention_probability_recorded():
    prob = constant_success_probability(GaussianParams(0.5), make_grid(256), "paper", value=1)
    # squared norm of the unnormalized state, (1/sqrt(2 pi))^2
    assert prob.convention == "paper"
    assert prob.value == pytest.approx(1 / (2 * math.pi), rel=1e-10)


def test_claim_report_tags_and_note():
    rep = probability_claim_report(GaussianParams(0.5), make_grid(256))
    assert rep["claimed"] == PAPER_CLAIMED_PROBABILITY
    assert rep["paper"].convention == "paper"
    assert rep["normalized"].convention == "normalized"
    assert "0.5" in rep["note"]


def test_constant_probability_needs_resolution():
    with pytest.raises(ResolutionError):
        constant_success_probability(GaussianParams(0.05), make_grid(256))


def test_tagged_values_refuse_mixing():
    a = TaggedValue(0.2, "paper")
    b = TaggedValue(0.3, "normalized")
    with pytest.raises(TypeError):
        a - b
    assert (a + TaggedValue(0.1, "paper")).value == pytest.approx(0.3)
    assert (b - 0.1).convention == "normalized"


def test_squeezing_conversions():
    assert squeezing_conversions(1.0)["r"] == 0.0
    assert squeezing_conversions(math.e)["r"] == pytest.approx(1.0, abs=1e-15)
    for s in (0.1, 0.5, 2.0):
        assert math.exp(squeezing_conversions(s)["r"]) == pytest.approx(s, abs=1e-15)
    assert GaussianParams(0.5).r == math.log(0.5)
    with pytest.raises(ValueError):
        squeezing_conversions(0.0)


def random_triples(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        s = rng.uniform(0.05, 2.0)
        ds = rng.uniform(0.01, 1.0) * s
        if s - ds / 2 <= 0.01:
            continue
        q = rng.uniform(-2.0, 2.0) * s
        out.append((q, s, ds))
    return out


def test_closed_form_vs_quadrature_50_triples():
    worst = 0.0
    for q, s, ds in random_triples(50, 17):
        p = GaussianParams(s, ds)
        closed = gamma_err(q, p) / math.sqrt(4 * math.pi)
        quad = exact_t_integral(q, p, "approximated") / math.pi
        worst = max(worst, abs(closed - quad) / abs(quad))
    assert worst <= 1e-8


def test_small_q_continuity():
    for s, ds in [(1.0, 0.2), (0.1, 0.05), (2.0, 3.0)]:
        p = GaussianParams(s, ds)
        c = gamma_err_derivative_bound(p, 1e-6)
        jump = abs(gamma_err(1e-6, p) - gamma_err(0.0, p))
        assert jump <= 1e-6 * c
        assert jump <= 1e-6
        # across the branch switch at 1e-8
        assert abs(gamma_err(1.0001e-8, p) - gamma_err(0.9999e-8, p)) <= 1e-12


def test_monotonic_in_window_width():
    q = 0.7
    for s in np.linspace(0.3, 2.0, 10):
        values = [gamma_err(q, GaussianParams(s, f * s)) for f in np.linspace(0.0, 1.5, 10)]
        assert np.all(np.diff(values) > 0)


@settings(max_examples=100, deadline=None)
@given(
    q=st.floats(-5, 5),
    s=st.floats(0.05, 3.0),
    frac=st.floats(0.0, 1.9),
)
def test_gamma_err_even_and_nonnegative(q, s, frac):
    p = GaussianParams(s, frac * s)
    assert gamma_err(q, p) == gamma_err(-q, p)
    assert gamma_err(q, p) >= 0
