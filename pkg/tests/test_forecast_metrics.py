import numpy as np
import pytest
from hypothesis import given, strategies as st

from specpred.errors import DataError, LoadError, UndefinedDelta
from specpred.forecast_metrics import (MetricRow, mse, read_metric_rows, relative_error_delta,
                                       smape, write_metric_rows)

finite = st.floats(-1e6, 1e6, allow_nan=False)
pairs = st.integers(1, 30).flatmap(lambda n: st.tuples(st.lists(finite, min_size=n, max_size=n),
                                                       st.lists(finite, min_size=n, max_size=n)))


def test_smape_examples():
    assert smape([1, 2, -3], [1, 2, -3]) == 0
    assert smape([1, 1], [3, 3]) == 1.0
    assert smape([2, -3], [-2, 3]) == 2.0


def test_smape_zero_over_zero_is_zero():
    assert smape([0, 1], [0, 1]) == 0
    assert smape([0, 1], [0, 3]) == pytest.approx(0.5)


def test_mse_examples():
    assert mse([1, 2], [1, 2]) == 0
    assert mse([0, 0], [1, -1]) == 1.0
    assert mse([1, 2, 3], [2, 2, 2]) == pytest.approx(2 / 3)


def test_invalid_pairs():
    with pytest.raises(DataError):
        smape([1, 2], [1])
    with pytest.raises(DataError):
        mse([], [])
    with pytest.raises(DataError):
        smape([np.nan], [1])


@given(pairs)
def test_smape_symmetric_and_bounded(p):
    y, f = p
    assert smape(y, f) == smape(f, y)
    assert 0.0 <= smape(y, f) <= 2.0


@given(pairs, st.floats(1e-3, 1e3).flatmap(lambda v: st.sampled_from([v, -v])))
def test_smape_scale_invariant(p, a):
    y, f = np.array(p[0]), np.array(p[1])
    assert abs(smape(a * y, a * f) - smape(y, f)) <= 1e-12


# magnitudes kept away from the subnormal range, where a squared difference underflows to 0
unit = st.integers(-10**6, 10**6).map(lambda k: k / 1000)
unit_pairs = st.integers(1, 30).flatmap(lambda n: st.tuples(st.lists(unit, min_size=n, max_size=n),
                                                            st.lists(unit, min_size=n, max_size=n)))


@given(unit_pairs)
def test_mse_zero_iff_equal(p):
    y, f = p
    assert (mse(y, f) == 0) == (y == f)
    assert mse(y, y) == 0


def test_delta_examples():
    assert relative_error_delta(0.4, 0.5) == pytest.approx(-25.0)
    assert relative_error_delta(0.5, 0.4) == pytest.approx(20.0)
    with pytest.raises(UndefinedDelta):
        relative_error_delta(0.0, 0.1)


def test_delta_is_not_antisymmetric():
    a, b = 0.4, 0.5
    assert relative_error_delta(a, b) != -relative_error_delta(b, a)
    assert relative_error_delta(b, a) == pytest.approx(100 * (b - a) / b)


def test_metric_row_validation():
    with pytest.raises(ValueError):
        MetricRow("m", "magic", "d", 0.1)
    with pytest.raises(ValueError):
        MetricRow("m", "statistical", "d", 2.5)
    with pytest.raises(ValueError):
        MetricRow("m", "statistical", "d", 0.5, -1.0)


def test_metric_csv_roundtrip(tmp_path):
    rows = [MetricRow("Naive", "statistical", "a", 0.25, 1.5),
            MetricRow("Moirai", "zero_shot", "a", 0.125, None)]
    p = tmp_path / "m.csv"
    write_metric_rows(p, rows)
    assert p.read_text().splitlines()[0] == "model,family,dataset,smape,mse"
    assert read_metric_rows(p) == rows
    write_metric_rows(p, [MetricRow("Naive", "statistical", "a", 0.25)])
    assert p.read_text().splitlines()[0] == "model,family,dataset,smape"


def test_metric_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("model,dataset,smape\nx,y,0.1\n")
    with pytest.raises(LoadError, match="family"):
        read_metric_rows(p)
    p.write_text("model,family,dataset,smape\nx,statistical,y,abc\n")
    with pytest.raises(LoadError):
        read_metric_rows(p)
