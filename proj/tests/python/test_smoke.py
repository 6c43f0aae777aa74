import math

import numpy as np
import pytest

import pslight


def test_partner_is_conjugate():
    env = pslight.SpectralEnvelope()
    grid = pslight.TimeGrid(0.0, 0.05, 400)
    modes = pslight.sample_chaotic_modes(env, 128, 4.0, 3)
    e1 = pslight.synthesize_field(modes, grid)
    e2 = pslight.synthesize_field(pslight.conjugate_partner_modes(modes), grid)
    assert np.array_equal(e2, np.conj(e1))


def test_two_routes_agree():
    env = pslight.SpectralEnvelope()
    offsets = pslight.symmetric_offsets(64, 4.0)
    grid = pslight.TimeGrid(0.0, 4 * math.pi / (offsets[1] - offsets[0]) / 2048, 2048)
    modes = pslight.sample_chaotic_modes(env, 64, 4.0, 5)
    med = pslight.DispersiveMedium.from_reduced(1.5)
    a = pslight.apply_dispersion_series(pslight.synthesize_field(modes, grid), grid, med)
    b = pslight.synthesize_field(pslight.apply_dispersion_modes(modes, med), grid)
    assert np.max(np.abs(a - b)) / np.max(np.abs(b)) < 1e-9


def test_pair_correlation_hbt():
    spec = pslight.EnsembleSpec()
    spec.n_modes = 128
    spec.n_realizations = 400
    lags = [i * 0.05 for i in range(-240, 241)]
    med = pslight.DispersiveMedium.from_reduced(1.0)
    res = pslight.pair_correlation(spec, lags, med, pslight.DispersiveMedium.from_reduced(-1.0), background_min_lag=8.0)
    assert 1.8 < res.reference.peak_to_background() < 2.2
    assert abs(res.zero_lag.deficit) < 4 * res.zero_lag.stderr + 1e-12
    assert res.dispersed.g2.shape == (481,)


def test_quantum_cancellation():
    s = pslight.gaussian_biphoton_spectrum(pslight.SpectralEnvelope(), 256)
    lags = [i * 0.05 for i in range(-100, 101)]
    none = pslight.DispersiveMedium()
    ref = pslight.coincidence_profile(s, lags, none, none)
    out = pslight.coincidence_profile(s, lags, pslight.DispersiveMedium(3.0), pslight.DispersiveMedium(-3.0))
    assert np.array_equal(ref.g2, out.g2)
    assert ref.background == 0.0


def test_fit_and_rank_error():
    rows = [pslight.SweepRow(b1, b2, 0.7 * (b1 + b2) ** 2) for b1 in (-0.5, 0, 0.5) for b2 in (-0.5, 0, 0.5)]
    fit = pslight.fit_quadratic_surface(rows)
    assert fit.d == pytest.approx(1.4, abs=1e-8)
    with pytest.raises(pslight.RankError):
        pslight.fit_quadratic_surface(rows[:5])


def test_run_scenario(tmp_path):
    summary = pslight.run("quantum", tmp_path, media={"d1": 0.5, "d2": 0.5})
    assert summary["scenario"] == "quantum"
    assert summary["rms_width"] == pytest.approx(summary["oracle_rms_width"], rel=0.01)
    assert (tmp_path / "quantum_profile.csv").exists()
    with pytest.raises(pslight.ConfigError):
        pslight.run("hbt", tmp_path, n_realizations=0)
    with pytest.raises(pslight.NumericalGuardError):
        pslight.run("hbt", tmp_path, grid={"step": 1.0}, n_realizations=10)
