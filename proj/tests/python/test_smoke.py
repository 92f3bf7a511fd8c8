"""Smoke tests for the Python bindings: thin checks that the C++ core is
reachable and returns the values the unit suite pins down in depth."""

import math

import pytest

import zrplab as z


def test_fugacity_closed_forms():
    g = z.RateFunction.constant_rate()
    m = z.solve_fugacity(g, 1.0)
    assert abs(m.alpha - 0.5) < 1e-10
    assert abs(m.chi - 2.0) < 1e-10
    assert abs(m.c - m.alpha) < 1e-10
    assert abs(m.c_prime - 0.25) < 1e-9

    lin = z.RateFunction.linear()
    for rho in (0.5, 1.0, 2.0):
        assert abs(z.solve_fugacity(lin, rho).alpha - rho) < 1e-10


def test_validation_errors():
    bad = z.RateFunction.tabulated([0.0, 2.0, 1.0])
    with pytest.raises(z.ZrplabError):
        z.validate_rate_function(bad)


def test_simulation_conserves_particles():
    g = z.RateFunction.constant_rate()
    m = z.solve_fugacity(g, 1.0)
    cfg = z.sample_configuration(m, 64, 42, g)
    total = cfg.total
    params = z.ModelParams(64, 1.0, 0.5, 1.0, g)
    out = z.simulate(cfg, params, 0.05, 7)
    assert out["events"] > 0
    assert cfg.total == total


def test_height_and_field_identities():
    g = z.RateFunction.constant_rate()
    cfg = z.Configuration([2, 0, 1, 1], g)
    h = z.HeightField(cfg, 1.0, 0)
    vals = [v * 2.0 for v in h.values()]  # times sqrt(N)
    assert vals == pytest.approx([0.0, 1.0, 0.0, 0.0, 0.0])

    params = z.ModelParams(4, 0.0, 0.5, 1.0, g)
    direct = z.fluctuation_field(cfg, 1, 0.0, params, 0.25)
    sbp = z.field_by_sbp(h, 1, 0.0, params, 0.25)
    assert direct == pytest.approx(sbp, abs=1e-12)


def test_walk_roundtrip():
    g = z.RateFunction.constant_rate()
    m = z.solve_fugacity(g, 0.8)
    cfg = z.sample_configuration(m, 32, 5, g)
    walk = z.walk_from_config(cfg)
    back = z.config_from_walk(walk, g)
    assert list(back.occupancies) == list(cfg.occupancies)


def test_envelope_and_small_ball():
    lin = z.RateFunction.linear()
    m = z.solve_fugacity(lin, 0.5)
    out = z.envelope_sample(z.TargetProfile.flat(), 1.5, 0.5, 16, 100000, m, lin, 11)
    assert out["attempts"] >= 1

    est = z.brownian_small_ball(1.0, 1.0, 50000, 3, 64)
    ser = z.small_ball_series(1.0, 1.0)
    assert abs(est - ser) < 5 * math.sqrt(ser / 50000)


def test_sandwich_trivial_pair():
    g = z.RateFunction.constant_rate()
    params = z.ModelParams(32, 1.0, 0.5, 1.0, g)
    rep = z.sandwich_run(params, 0.1, 1.0, 0.02, 9)
    assert rep["violated"] is False
    assert rep["max_gap"] == 0.0


def test_spectral_field_decay():
    f = z.SpectralField(8, 0.125, 0.0, True)
    # no noise: exact heat decay of the paired mode
    before = f.stationary_sd(1)
    assert before == 0.0  # noiseless field has no stationary spread
