import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irsfleet import (
    RadioParams,
    build_layout,
    cascade_amplification,
    cascaded_path_loss_db,
    cascaded_snr_db,
    compute_distances,
    direct_path_loss_db,
    direct_snr_db,
    draw_nlos_set,
    los_probability,
    realize_channel,
    rician_amplitude_mean,
    snr_ratio,
    weak_coverage_set,
)
from irsfleet.channel import nlos_members
from irsfleet.oracles import empirical_mean_amplitude, sample_rician_fading

PARAMS = RadioParams()


# ---------------------------------------------------------------- LoS model

def test_los_probability_values():
    assert los_probability(10.0) == 1.0
    assert los_probability(36.0) == pytest.approx(0.5 + math.exp(-1.0) * 0.5, abs=1e-12)
    assert los_probability(72.0) == pytest.approx(0.25 + math.exp(-2.0) * 0.75, abs=1e-12)


def test_los_probability_continuous_at_breakpoint():
    below = los_probability(18.0 - 1e-12)
    at = los_probability(18.0)
    formula_at = 18.0 / 18.0 + math.exp(-0.5) * (1.0 - 18.0 / 18.0)
    assert abs(at - formula_at) < 1e-12
    assert abs(at - below) < 1e-12


def test_los_probability_rejects_negative():
    with pytest.raises(ValueError):
        los_probability(-1.0)


@given(st.floats(min_value=18.0, max_value=5000.0))
@settings(max_examples=100, deadline=None)
def test_los_probability_range_and_decrease(d):
    p = los_probability(d)
    assert 0.0 < p <= 1.0
    assert los_probability(d + 1.0) <= p + 1e-15


def test_los_probability_vectorized():
    out = los_probability(np.array([0.0, 10.0, 36.0, 72.0]))
    assert out.shape == (4,)
    assert out[0] == 1.0 and out[1] == 1.0


# ------------------------------------------------------------ blockage draw

def test_nlos_members_boundary_draws():
    p = los_probability(np.array([10.0, 36.0, 120.0]))
    zeros = np.zeros(3)
    ones = np.ones(3)
    # inverted comparator: probability must exceed the draw
    assert nlos_members(p, zeros, "inverted").all()
    assert not nlos_members(p, ones, "inverted").any()
    # conventional comparator: draw at or above the probability
    assert not nlos_members(p, zeros, "conventional").any()
    assert nlos_members(p, ones, "conventional").all()


def test_nlos_rule_validated():
    with pytest.raises(ValueError):
        nlos_members(np.array([0.5]), np.array([0.5]), "bogus")


def test_draw_nlos_set_reproducible_and_calibrated():
    layout = build_layout(9, 9, 20.0, (8.5, 2.0, 10.5))
    tables = compute_distances(layout)
    p = los_probability(tables.d2_bs_ut)

    first = draw_nlos_set(tables, np.random.Generator(np.random.Philox(42)))
    second = draw_nlos_set(tables, np.random.Generator(np.random.Philox(42)))
    assert np.array_equal(first, second)

    trials = 10_000
    for rule, expect in (
        ("conventional", float((1.0 - p).sum())),
        ("inverted", float(p.sum())),
    ):
        rng = np.random.Generator(np.random.Philox(7))
        sizes = [
            draw_nlos_set(tables, rng, rule).size for _ in range(trials)
        ]
        sigma = math.sqrt(float((p * (1.0 - p)).sum()) / trials)
        assert abs(np.mean(sizes) - expect) < 3.0 * sigma


# ------------------------------------------------------------- link budgets

def test_direct_path_loss_examples():
    assert direct_path_loss_db(1.0, False, PARAMS) == pytest.approx(-61.38)
    assert direct_path_loss_db(1.0, True, PARAMS) == pytest.approx(-61.38)
    assert direct_path_loss_db(100.0, False, PARAMS) == pytest.approx(-103.38)
    assert direct_path_loss_db(100.0, True, PARAMS) == pytest.approx(-124.78)
    with pytest.raises(ValueError):
        direct_path_loss_db(0.0, True, PARAMS)


def test_direct_snr_examples():
    assert direct_snr_db(-124.78, PARAMS) == pytest.approx(7.22)
    assert direct_snr_db(-103.38, PARAMS) == pytest.approx(28.62)
    assert direct_snr_db(-(37.0 + 95.0), PARAMS) == pytest.approx(0.0)


def test_weak_coverage_thresholds():
    snr = np.array([5.0, 15.0, 9.99, 25.0])
    nlos = np.array([0, 2, 3])
    no_bar = RadioParams(snr_threshold_db=-math.inf)
    assert weak_coverage_set(nlos, snr, no_bar).size == 0
    all_bar = RadioParams(snr_threshold_db=math.inf)
    assert np.array_equal(weak_coverage_set(nlos, snr, all_bar), nlos)
    assert np.array_equal(weak_coverage_set(nlos, snr, PARAMS), [0, 2])


def test_weak_set_matches_inverted_link_budget():
    # under defaults a non-LoS cell is weak exactly when its 3-D distance
    # exceeds the budget implied by the 10 dB bar
    layout = build_layout(9, 9, 20.0, (8.5, 2.0, 10.5))
    tables = compute_distances(layout)
    nlos = np.arange(layout.n_grids)  # force every cell non-LoS
    pl = direct_path_loss_db(tables.l_bs_ut, np.ones(layout.n_grids, bool), PARAMS)
    weak = weak_coverage_set(nlos, direct_snr_db(pl, PARAMS), PARAMS)
    bound = 10.0 ** (
        (PARAMS.tx_power_dbm - PARAMS.noise_power_dbm + PARAMS.a_d_db
         - PARAMS.snr_threshold_db) / (10.0 * PARAMS.eta2)
    )
    assert np.array_equal(weak, np.flatnonzero(tables.l_bs_ut > bound))
    assert bound == pytest.approx(81.7, abs=0.1)


# -------------------------------------------------- cascaded-link closed form

def test_rician_amplitude_mean_special_values():
    assert rician_amplitude_mean(0.0) == pytest.approx(1.0, abs=1e-14)
    assert rician_amplitude_mean(10.0) == pytest.approx(1.10313, abs=1e-5)
    # full-coherence limit
    assert rician_amplitude_mean(1e4) == pytest.approx(2.0 / math.sqrt(math.pi), abs=1e-3)
    assert rician_amplitude_mean(1e6) == pytest.approx(2.0 / math.sqrt(math.pi), abs=1e-4)
    with pytest.raises(ValueError):
        rician_amplitude_mean(-0.5)


@pytest.mark.parametrize("k", [0.0, 0.5, 1.0, 10.0, 100.0])
def test_rician_amplitude_mean_against_mpmath(k):
    # independent high-precision route: generalized Laguerre via mpmath
    expect = float(mpmath.laguerre(0.5, 0, -k) / mpmath.sqrt(1 + k))
    assert rician_amplitude_mean(k) == pytest.approx(expect, rel=1e-12)


@pytest.mark.parametrize("k", [0.0, 1.0, 10.0])
def test_rician_amplitude_mean_against_sampling(k):
    rng = np.random.Generator(np.random.Philox(11))
    sampled = empirical_mean_amplitude(k, 400_000, rng)
    closed = math.sqrt(math.pi) / 2.0 * rician_amplitude_mean(k)
    assert sampled == pytest.approx(closed, rel=5e-3)


@pytest.mark.parametrize("k", [0.0, 10.0])
def test_fading_sampler_unit_power(k):
    rng = np.random.Generator(np.random.Philox(3))
    h = sample_rician_fading(k, 100_000, rng)
    assert float(np.mean(np.abs(h) ** 2)) == pytest.approx(1.0, rel=0.01)


def test_cascade_amplification_values():
    assert cascade_amplification(1, 10.0) == pytest.approx(1.0, abs=1e-12)
    assert cascade_amplification(2304, 10.0) == pytest.approx(4.8495e6, rel=1e-3)
    # full-coherence ceiling
    assert cascade_amplification(2304, 1e6) == pytest.approx(2304.0**2, rel=1e-3)


def test_cascade_amplification_variant_forms():
    # the denominator variant coincides with the standard form at K = 0
    assert cascade_amplification(64, 0.0, mean_in_denominator=True) == pytest.approx(
        cascade_amplification(64, 0.0), rel=1e-12
    )
    # and explodes past the coherent ceiling at the default operating point
    assert cascade_amplification(2304, 10.0, mean_in_denominator=True) > 2304.0**2


@given(
    n=st.integers(min_value=1, max_value=4096),
    k=st.floats(min_value=0.0, max_value=1e4),
)
@settings(max_examples=200, deadline=None)
def test_cascade_amplification_bounds(n, k):
    amp = cascade_amplification(n, k)
    assert n - 1e-9 <= amp <= n * n + 1e-6
    assert cascade_amplification(n, k + 1.0) >= amp - 1e-9
    assert cascade_amplification(n + 1, k) >= amp - 1e-9


def test_cascaded_path_loss_and_snr():
    assert cascaded_path_loss_db(1.0, 1.0, PARAMS) == pytest.approx(-112.76)
    amp_db = 10.0 * math.log10(cascade_amplification(2304, 10.0))
    expect = (
        -56.38 - 24.0 * math.log10(50.0)
        - 56.38 - 24.0 * math.log10(20.0)
        + amp_db + 37.0 + 95.0
    )
    assert cascaded_snr_db(50.0, 20.0, PARAMS) == pytest.approx(expect, abs=1e-9)
    assert expect == pytest.approx(14.10, abs=0.01)
    with pytest.raises(ValueError):
        cascaded_snr_db(0.0, 20.0, PARAMS)


def test_cascaded_snr_distance_doubling_law():
    base = cascaded_snr_db(50.0, 20.0, PARAMS)
    doubled = cascaded_snr_db(100.0, 40.0, PARAMS)
    assert base - doubled == pytest.approx(2.0 * 10.0 * 2.4 * math.log10(2.0), abs=1e-9)


# ------------------------------------------------------------------ SNR ratio

def test_snr_ratio_values():
    assert snr_ratio(7.22, -math.inf) == pytest.approx(1.0)
    assert snr_ratio(13.0, 13.0) == pytest.approx(2.0)
    d_lin = 10.0 ** 0.722
    c_lin = 10.0 ** 1.410
    assert snr_ratio(7.22, 14.10) == pytest.approx((d_lin + c_lin) / d_lin)
    assert snr_ratio(7.22, 14.10) == pytest.approx(5.875, abs=2e-3)


@given(
    gd=st.floats(min_value=-60.0, max_value=60.0),
    gc=st.floats(min_value=-60.0, max_value=60.0),
    offset=st.floats(min_value=-30.0, max_value=30.0),
)
@settings(max_examples=200, deadline=None)
def test_snr_ratio_offset_invariance(gd, gc, offset):
    assert snr_ratio(gd, gc) >= 1.0
    assert snr_ratio(gd + offset, gc + offset) == pytest.approx(
        snr_ratio(gd, gc), rel=1e-9
    )


# ----------------------------------------------------------------- params

def test_radio_params_validation():
    with pytest.raises(ValueError):
        RadioParams(eta1=3.5)  # LoS exponent above NLoS
    with pytest.raises(ValueError):
        RadioParams(eta3=3.2)  # reflected exponent not below NLoS
    with pytest.raises(ValueError):
        RadioParams(n_elements=2000)  # not a square
    with pytest.raises(ValueError):
        RadioParams(n_elements=36)  # side not a multiple of 4
    with pytest.raises(ValueError):
        RadioParams(nlos_rule="sometimes")
    for n in (16, 64, 256, 2304):
        RadioParams(n_elements=n)


def test_realize_channel_consistency():
    layout = build_layout(9, 9, 20.0, (8.5, 2.0, 10.5))
    tables = compute_distances(layout)
    rng = np.random.Generator(np.random.Philox(5))
    real = realize_channel(tables, PARAMS, rng)
    assert real.los_draws.shape == (81,)
    assert ((real.los_draws >= 0) & (real.los_draws < 1)).all()
    assert set(real.weak_set) <= set(real.nlos_set)
    assert (real.direct_snr_db[real.weak_set] < PARAMS.snr_threshold_db).all()
    again = realize_channel(tables, PARAMS, np.random.Generator(np.random.Philox(5)))
    assert np.array_equal(real.los_draws, again.los_draws)
    assert np.array_equal(real.weak_set, again.weak_set)
