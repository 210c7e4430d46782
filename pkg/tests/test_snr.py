import math

import numpy as np
import pytest

from rissnr.channel import ChannelModel, ChannelRealization, CorrelationSpec, SystemGeometry, sample_realization
from rissnr.gains import LinkGains
from rissnr.snr import global_channel, instantaneous_snr, optimal_phases, optimal_snr, optimal_snr_batch


def realizations(count, geom, spec, beta_d=0.59, seed=0):
    model = ChannelModel.build(geom, spec)
    for i in range(count):
        yield sample_realization(model, beta_d, np.random.Philox(key=seed, counter=i * 1000))


def test_single_element_phase():
    real = ChannelRealization(np.array([1.0 + 0j]), np.array([np.exp(1j * math.pi / 4)]),
                              np.array([1.0 + 0j]), np.array([1.0 + 0j]))
    phases = optimal_phases(real)
    assert phases[0] == pytest.approx(np.exp(-1j * math.pi / 4), abs=1e-15)
    h = global_channel(real, phases, LinkGains(1.0, 1.0, 1.0))
    assert h[0] == pytest.approx(2.0, abs=1e-15)


def test_phases_unit_modulus_and_constructive():
    gains = LinkGains()
    for real in realizations(50, SystemGeometry(M_y=2, M_z=2, N_y=2, N_z=4), CorrelationSpec(0.5, 0.5)):
        phases = optimal_phases(real)
        np.testing.assert_allclose(np.abs(phases), 1.0, atol=1e-12)
        h = global_channel(real, phases, gains)
        cascade = h - real.h_d
        cross = np.vdot(cascade, real.h_d)
        assert cross.real >= 0 and abs(cross.imag) <= 1e-12 * max(abs(cross), 1e-300)


def test_beta_br_zero_gives_direct_channel():
    real = next(realizations(1, SystemGeometry(), CorrelationSpec()))
    h = global_channel(real, optimal_phases(real), LinkGains(beta_br=0.0))
    np.testing.assert_array_equal(h, real.h_d)


def test_no_direct_path_closed_form():
    real = next(realizations(1, SystemGeometry(M_y=2, M_z=2, N_y=4, N_z=2), CorrelationSpec()))
    real = ChannelRealization(np.zeros_like(real.h_d), real.h_ru_tilde, real.a_b, real.a_r)
    gains = LinkGains(0.0, 0.01, 0.5)
    with pytest.warns(RuntimeWarning):
        h = global_channel(real, optimal_phases(real), gains)
    y = np.sum(np.abs(real.h_ru_tilde))
    np.testing.assert_allclose(h, math.sqrt(0.005) * y * real.a_b, rtol=1e-12)


def test_instantaneous_snr():
    assert instantaneous_snr(np.zeros(4), 1.0) == 0.0
    a_b = np.exp(1j * np.arange(6) * 0.3)
    assert instantaneous_snr(a_b, 1.0) == pytest.approx(6.0, rel=1e-14)
    with pytest.raises(ValueError):
        instantaneous_snr(a_b, 0.0)


def test_phase_argmax_against_random_phases(rng):
    gains = LinkGains()
    for real in realizations(100, SystemGeometry(M_y=2, M_z=2, N_y=4, N_z=2), CorrelationSpec(0.3, 0.6), seed=4):
        best = instantaneous_snr(global_channel(real, optimal_phases(real), gains), gains.tau_bar)
        opt = optimal_phases(real)
        for _ in range(100):
            rand = np.exp(2j * math.pi * rng.random(real.a_r.size))
            assert instantaneous_snr(global_channel(real, rand, gains), 1.0) <= best * (1 + 1e-12)
            perturbed = opt * np.exp(1j * 0.3 * rng.standard_normal(real.a_r.size))
            assert instantaneous_snr(global_channel(real, perturbed, gains), 1.0) <= best * (1 + 1e-12)


def test_closed_form_equals_full_channel():
    gains = LinkGains(0.59, 1 / 400, 0.59, 3.0)
    worst = 0.0
    for real in realizations(1000, SystemGeometry(M_y=2, M_z=2, N_y=4, N_z=4), CorrelationSpec(0.7, 0.7), seed=8):
        full = instantaneous_snr(global_channel(real, optimal_phases(real), gains), gains.tau_bar)
        closed = optimal_snr(real, gains)
        worst = max(worst, abs(full - closed.snr) / full)
        alpha = math.sqrt(gains.beta_cascade) * closed.psi * closed.Y
        expansion = (np.vdot(real.h_d, real.h_d) + 2 * (np.conj(alpha) * np.vdot(real.a_b, real.h_d)).real
                     + abs(alpha) ** 2 * np.vdot(real.a_b, real.a_b)).real * gains.tau_bar
        assert expansion == pytest.approx(full, rel=1e-10)
        assert abs(closed.psi) == pytest.approx(1.0, abs=1e-12)
    assert worst <= 1e-10


def test_batch_matches_per_realization():
    gains = LinkGains(0.59, 1 / 400, 0.59, 2.0)
    reals = list(realizations(20, SystemGeometry(M_y=2, M_z=2, N_y=2, N_z=2), CorrelationSpec(0.4, 0.2)))
    h_d = np.stack([r.h_d for r in reals])
    h_ru = np.stack([r.h_ru_tilde for r in reals])
    snr, y = optimal_snr_batch(h_d, h_ru, reals[0].a_b, gains)
    for k, r in enumerate(reals):
        s = optimal_snr(r, gains)
        assert snr[k] == pytest.approx(s.snr, rel=1e-12)
        assert y[k] == pytest.approx(s.Y, rel=1e-12)


def test_global_phase_corotation():
    gains = LinkGains()
    real = next(realizations(1, SystemGeometry(M_y=2, M_z=2, N_y=2, N_z=2), CorrelationSpec(0.5, 0.5), seed=2))
    base = optimal_snr(real, gains).snr
    rot = np.exp(1j * 1.234)
    rotated = ChannelRealization(real.h_d * rot, real.h_ru_tilde, real.a_b, real.a_r)
    sample = optimal_snr(rotated, gains)
    assert sample.snr == pytest.approx(base, rel=1e-12)
    assert sample.psi == pytest.approx(optimal_snr(real, gains).psi * rot, abs=1e-12)
    phases_rot = optimal_phases(rotated)
    assert instantaneous_snr(global_channel(rotated, phases_rot, gains), 1.0) == pytest.approx(base, rel=1e-12)


def test_dimension_checks():
    real = next(realizations(1, SystemGeometry(M_y=2, M_z=1, N_y=2, N_z=1), CorrelationSpec()))
    with pytest.raises(ValueError):
        global_channel(real, np.ones(3), LinkGains())
