import numpy as np
import pytest

from specpred.errors import CalibrationFailed
from specpred.spectral import SpectralConfig, omega
from specpred.synthgen import (SweepFailure, SynthSpec, _synthesize, derive_seed, generate_sweep,
                               generate_with_target_omega, mixture_shape, parse_targets,
                               random_phases, synth_from_spectrum)


def test_point_mass_gives_sinusoid():
    L, j = 1024, 37
    shape = np.zeros(L // 2)
    shape[j - 1] = 1.0
    x = synth_from_spectrum(shape, L, seed=3).values
    spec = np.abs(np.fft.rfft(x))
    assert np.argmax(spec) == j
    assert np.delete(spec, j).max() < 1e-9 * spec[j]
    # a standardised sinusoid has amplitude sqrt(2)
    assert np.max(np.abs(x)) == pytest.approx(np.sqrt(2), rel=1e-3)


def test_uniform_shape_is_white_like():
    vals = [omega(synth_from_spectrum(np.full(2048, 1 / 2048), 4096, s)).omega for s in range(5)]
    assert max(vals) < 0.1


def test_synth_deterministic_and_standardised():
    shape = mixture_shape(0.3, 2048)
    a = synth_from_spectrum(shape, 4096, 11).values
    b = synth_from_spectrum(shape, 4096, 11).values
    assert np.array_equal(a, b)
    assert abs(a.mean()) < 1e-9 and abs(a.var() - 1) < 1e-6
    assert not np.array_equal(a, synth_from_spectrum(shape, 4096, 12).values)


def test_invalid_shape():
    with pytest.raises(ValueError):
        synth_from_spectrum(np.ones(10), 20, 0)
    with pytest.raises(ValueError):
        synth_from_spectrum(np.full(8, 1 / 8), 20, 0)
    bad = np.full(10, 0.1)
    bad[0] = -0.1
    bad[1] = 0.3
    with pytest.raises(ValueError):
        synth_from_spectrum(bad, 20, 0)


def test_target_half():
    r = generate_with_target_omega(SynthSpec(0.50, 4096, 7))
    assert 0.48 <= r.achieved_omega <= 0.52
    assert 0 <= r.mixing_weight <= 1 and r.iterations_used >= 1


@pytest.mark.parametrize("target", [0.2, 0.8])
def test_sweep_range_endpoints(target):
    r = generate_with_target_omega(SynthSpec(target, 4096, 1))
    assert abs(r.achieved_omega - target) <= 0.02


def test_unreachable_target_fails():
    # the largest reachable value is the pure-peak shape (alpha = 1)
    ceiling = omega(_synthesize(mixture_shape(1.0, 128), random_phases(128, 5), 256)).omega
    assert ceiling < 0.999 - 0.02
    with pytest.raises(CalibrationFailed) as info:
        generate_with_target_omega(SynthSpec(0.999, 256, 5))
    assert info.value.best_alpha == pytest.approx(1.0, abs=1e-6)
    assert info.value.best_omega == pytest.approx(ceiling, abs=1e-6)


def test_three_harmonics_cap_below_point_eight():
    # documents why a single harmonic is the default
    ceiling = omega(_synthesize(mixture_shape(1.0, 2048, 3), random_phases(2048, 0), 4096)).omega
    assert ceiling < 0.78
    with pytest.raises(CalibrationFailed):
        generate_with_target_omega(SynthSpec(0.8, 4096, 0, n_harmonics=3))


def test_monotone_in_alpha():
    for seed in (0, 1, 2):
        phases = random_phases(2048, seed)
        grid = np.linspace(0, 1, 20)
        vals = [omega(_synthesize(mixture_shape(a, 2048), phases, 4096)).omega for a in grid]
        assert np.all(np.diff(vals) >= -1e-3)


def test_round_trip_measurement():
    r = generate_with_target_omega(SynthSpec(0.35, 2048, 9))
    assert abs(omega(r.series).omega - r.achieved_omega) <= 1e-9
    assert abs(r.series.values.mean()) < 1e-9 and abs(r.series.values.var() - 1) < 1e-6


def test_sweep_composition_and_determinism():
    single = generate_sweep([0.4], 1, 1024, seed=3)
    direct = generate_with_target_omega(SynthSpec(0.4, 1024, derive_seed(3, 0)), name=single[0].series.name)
    assert np.array_equal(single[0].series.values, direct.series.values)
    assert single[0].achieved_omega == direct.achieved_omega

    a = generate_sweep([0.3, 0.6], 2, 1024, seed=5)
    b = generate_sweep([0.3, 0.6], 2, 1024, seed=5)
    assert [r.series.name for r in a] == ["omega_0.30_00", "omega_0.30_01", "omega_0.60_00", "omega_0.60_01"]
    for x, y in zip(a, b):
        assert np.array_equal(x.series.values, y.series.values)


def test_sweep_collects_failures():
    res = generate_sweep([0.5, 0.999], 1, 256, seed=0)
    assert not isinstance(res[0], SweepFailure)
    assert isinstance(res[1], SweepFailure)
    assert res[1].to_dict()["status"] == "CalibrationFailed"


def test_taper_choice_is_respected():
    r = generate_with_target_omega(SynthSpec(0.5, 1024, 2), spectral_cfg=SpectralConfig(taper="none"))
    assert abs(omega(r.series, SpectralConfig(taper="none")).omega - 0.5) <= 0.02


def test_parse_targets():
    assert parse_targets("0.2:0.8:0.1") == [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
    assert parse_targets("0.25, 0.5") == [0.25, 0.5]
    with pytest.raises(ValueError):
        parse_targets("0.2:0.8")


def test_spec_validation():
    for kw in ({"target_omega": 1.0}, {"target_omega": 0.5, "length": 100},
               {"target_omega": 0.5, "tolerance": 0}, {"target_omega": 0.5, "n_harmonics": 0}):
        with pytest.raises(ValueError):
            SynthSpec(**kw)
