import numpy as np
import pytest
from hypothesis import given, strategies as st

from specpred.errors import AllSeriesDegenerate
from specpred.selector import (SelectorPolicy, classify_regime, recommend, reliability_check,
                               split_half_drift)
from specpred.series_io import Dataset
from specpred.spectral import SpectralConfig


def _sine(T, period=32.0):
    return np.sin(2 * np.pi * np.arange(T) / period)


@pytest.mark.parametrize("om,regime", [(0.40, "mid"), (0.50, "mid"), (0.66, "high"), (0.30, "low"),
                                       (0.0, "low"), (1.0, "high"), (0.45, "mid")])
def test_regime_boundaries(om, regime):
    assert classify_regime(om) == regime


def test_regime_rejects_out_of_range():
    for bad in (-0.01, 1.01, float("nan")):
        with pytest.raises(ValueError):
            classify_regime(bad)


@given(st.floats(0, 1), st.floats(0, 1))
def test_regime_monotone(a, b):
    order = {"low": 0, "mid": 1, "high": 2}
    lo, hi = sorted((a, b))
    assert order[classify_regime(lo)] <= order[classify_regime(hi)]


def test_policy_validation():
    with pytest.raises(ValueError):
        SelectorPolicy(high_threshold=0.3, low_threshold=0.4)
    with pytest.raises(ValueError):
        SelectorPolicy(min_length=0)
    assert classify_regime(0.35, SelectorPolicy(0.3, 0.3)) == "high"


def test_clean_sine_has_no_warnings():
    d = Dataset.from_arrays("s", {"a": _sine(4096), "b": _sine(4096, 50.0)})
    assert reliability_check(d) == []


def test_short_series_warning():
    d = Dataset.from_arrays("s", {"a": _sine(500)})
    assert "short_series" in reliability_check(d)
    d = Dataset.from_arrays("s", {"a": _sine(1000)})
    assert "short_series" in reliability_check(d)
    d = Dataset.from_arrays("s", {"a": _sine(1001)})
    assert "short_series" not in reliability_check(d)


def test_sine_then_noise_is_nonstationary(rng):
    x = np.concatenate([_sine(2048), rng.normal(size=2048)])
    assert split_half_drift(x) > 0.10
    assert "nonstationary" in reliability_check(Dataset.from_arrays("s", {"a": x}))


def test_drift_with_one_degenerate_half(rng):
    x = np.concatenate([np.zeros(2048), rng.normal(size=2048)])
    assert split_half_drift(x) == float("inf")
    assert split_half_drift(np.zeros(4096)) is None


def test_exogenous_and_degenerate_flags():
    d = Dataset.from_arrays("s", {"a": _sine(4096), "flat": np.ones(4096)})
    w = reliability_check(d, SelectorPolicy(exogenous_dominated=True))
    assert "exogenous_flagged" in w and "degenerate_series_present" in w


def test_recommend_high():
    r = recommend(Dataset.from_arrays("clean", {"a": _sine(4096)}))
    assert r.regime == "high" and r.confident
    assert r.families[0][0] == "zero_shot"
    assert 0.8 < r.omega < 0.95
    assert "zero_shot" in r.verdict()


def test_recommend_low(rng):
    r = recommend(Dataset.from_arrays("noise", {"a": rng.normal(size=4096)}))
    assert r.regime == "low" and r.confident and r.omega < 0.1
    assert [f for f, _ in r.families] == ["statistical", "deep_learning"]


def test_recommend_short_sine():
    r = recommend(Dataset.from_arrays("short", {"a": _sine(800)}))
    assert r.regime == "high" and not r.confident
    assert r.warnings == ("short_series",)
    assert all("Not confident" in note for _, note in r.families)


def test_recommend_mid_family_list():
    from specpred.synthgen import SynthSpec, generate_with_target_omega
    x = generate_with_target_omega(SynthSpec(0.45, 4096, 3, tolerance=0.01)).series.values
    r = recommend(Dataset.from_arrays("mid", {"a": x}))
    assert r.regime == "mid"
    assert [f for f, _ in r.families] == ["statistical", "deep_learning", "zero_shot"]
    assert "latency" in r.families[0][1]


def test_recommend_affine_invariant(rng):
    x = _sine(4096) + 0.5 * rng.normal(size=4096)
    base = recommend(Dataset.from_arrays("d", {"a": x}))
    for a, b in ((3.0, 10.0), (-0.01, -5.0)):
        r = recommend(Dataset.from_arrays("d", {"a": a * x + b}))
        assert (r.regime, r.families, r.warnings) == (base.regime, base.families, base.warnings)
        assert r.omega == pytest.approx(base.omega, abs=1e-9)


def test_recommend_deterministic_and_all_degenerate():
    d = Dataset.from_arrays("s", {"a": _sine(2048)})
    assert recommend(d) == recommend(d)
    with pytest.raises(AllSeriesDegenerate):
        recommend(Dataset.from_arrays("flat", {"a": np.ones(2048)}))


def test_to_dict_shape():
    r = recommend(Dataset.from_arrays("s", {"a": _sine(2048)}), lle=0.01)
    d = r.to_dict()
    assert set(d) == {"dataset", "omega", "lle", "regime", "warnings", "families", "confident"}
    assert d["lle"] == 0.01 and d["families"][0]["family"] == "zero_shot"


def test_taper_passed_through():
    d = Dataset.from_arrays("s", {"a": _sine(2048, 33.3)})
    a = recommend(d).omega
    b = recommend(d, spectral_cfg=SpectralConfig(taper="none")).omega
    assert a != b
