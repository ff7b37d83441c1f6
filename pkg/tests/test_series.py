import math
from datetime import date

import numpy as np
import pytest

import mfscale as mf
from mfscale.errors import (
    CsvFormatError,
    NonPositiveValue,
    OutOfRange,
    TooShort,
    WrongRepresentation,
)

from conftest import quick_h2


class TestSeriesConstruction:
    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            mf.Series([1.0, np.nan], "profile")

    def test_inf_rejected(self):
        with pytest.raises(ValueError):
            mf.Series([1.0, np.inf], "profile")

    def test_price_must_be_positive(self):
        with pytest.raises(NonPositiveValue):
            mf.Series([1.0, 0.0, 2.0], "price")

    def test_unknown_representation(self):
        with pytest.raises(WrongRepresentation):
            mf.Series([1.0], "prices")

    def test_values_frozen(self):
        s = mf.Series([1.0, 2.0], "price")
        with pytest.raises(ValueError):
            s.values[0] = 5.0

    def test_timestamps_alignment(self):
        with pytest.raises(ValueError):
            mf.Series([1.0, 2.0], "price", timestamps=(date(2020, 1, 1),))

    def test_timestamps_must_increase(self):
        ts = (date(2020, 1, 2), date(2020, 1, 1))
        with pytest.raises(ValueError):
            mf.Series([1.0, 2.0], "price", timestamps=ts)

    def test_fingerprint_changes_with_values(self):
        a = mf.Series([1.0, 2.0], "price")
        b = mf.Series([1.0, 3.0], "price")
        assert a.fingerprint() != b.fingerprint()
        assert a.fingerprint() == mf.Series([1.0, 2.0], "price").fingerprint()


class TestToLog:
    def test_exact_logs(self):
        s = mf.Series([1.0, math.e, math.e**2], "price")
        out = mf.to_log(s)
        assert out.representation == "log-price"
        np.testing.assert_allclose(out.values, [0.0, 1.0, 2.0], atol=1e-15)

    def test_constant(self):
        s = mf.Series([3.0, 3.0, 3.0], "price")
        np.testing.assert_allclose(mf.to_log(s).values, math.log(3.0))

    def test_wrong_representation(self):
        s = mf.Series([1.0, 2.0], "log-price")
        with pytest.raises(WrongRepresentation):
            mf.to_log(s)


class TestToReturns:
    def test_finite_differences(self):
        s = mf.Series([0.0, 1.0, 3.0, 6.0], "profile")
        out = mf.to_returns(s)
        assert out.representation == "return"
        np.testing.assert_array_equal(out.values, [1.0, 2.0, 3.0])

    def test_constant_gives_zeros(self):
        s = mf.Series([2.0, 2.0, 2.0], "price")
        np.testing.assert_array_equal(mf.to_returns(s).values, [0.0, 0.0])

    def test_too_short(self):
        with pytest.raises(TooShort):
            mf.to_returns(mf.Series([1.0], "price"))

    def test_already_returns(self):
        with pytest.raises(WrongRepresentation):
            mf.to_returns(mf.Series([1.0, 2.0], "return"))

    def test_timestamps_shift_to_later_endpoint(self):
        ts = (date(2020, 1, 1), date(2020, 1, 2), date(2020, 1, 3))
        s = mf.Series([1.0, 2.0, 3.0], "price", timestamps=ts)
        assert mf.to_returns(s).timestamps == ts[1:]


class TestToProfile:
    def test_alternating(self):
        s = mf.Series([1.0, -1.0, 1.0, -1.0], "return")
        np.testing.assert_allclose(mf.to_profile(s).values, [1.0, 0.0, 1.0, 0.0])

    def test_zeros(self):
        s = mf.Series([0.0, 0.0, 0.0], "return")
        np.testing.assert_array_equal(mf.to_profile(s).values, [0.0, 0.0, 0.0])

    def test_constant_annihilated(self):
        s = mf.Series([2.0, 2.0, 2.0], "return")
        np.testing.assert_allclose(mf.to_profile(s).values, [0.0, 0.0, 0.0], atol=1e-15)

    def test_wrong_representation(self):
        with pytest.raises(WrongRepresentation):
            mf.to_profile(mf.Series([1.0, 2.0], "price"))

    def test_last_value_near_zero(self, rng):
        x = rng.normal(0, 3, 1000)
        prof = mf.to_profile(mf.Series(x, "return"))
        assert abs(prof.values[-1]) <= 1e-9 * x.size * np.abs(x).max()


class TestIntegrateReturns:
    def test_round_trip_example(self):
        r = mf.Series([1.0, 2.0, 3.0], "return")
        out = mf.integrate_returns(r, 0.0)
        np.testing.assert_allclose(out.values, [0.0, 1.0, 3.0, 6.0])
        assert len(out) == len(r) + 1

    def test_empty_returns(self):
        out = mf.integrate_returns(mf.Series([], "return"), 5.0)
        np.testing.assert_array_equal(out.values, [5.0])

    def test_inverse_of_to_returns(self, rng):
        for _ in range(20):
            prices = np.exp(rng.normal(0, 0.4, 200).cumsum() * 0.1 + 1.0)
            logp = mf.to_log(mf.Series(prices, "price"))
            rebuilt = mf.integrate_returns(
                mf.to_returns(logp), float(logp.values[0]), representation="log-price"
            )
            np.testing.assert_allclose(rebuilt.values, logp.values, rtol=1e-10)

    def test_wrong_representation(self):
        with pytest.raises(WrongRepresentation):
            mf.integrate_returns(mf.Series([1.0], "price"), 0.0)


class TestSlice:
    def test_basic(self):
        s = mf.Series([1.0, 2.0, 3.0, 4.0], "profile")
        out = mf.slice_series(s, mf.SliceSpec(1, 3))
        np.testing.assert_array_equal(out.values, [2.0, 3.0])

    def test_full_range_identity(self):
        s = mf.Series([1.0, 2.0, 3.0], "profile")
        out = mf.slice_series(s, mf.SliceSpec(0, 3))
        np.testing.assert_array_equal(out.values, s.values)

    def test_out_of_range(self):
        s = mf.Series([1.0, 2.0, 3.0], "profile")
        with pytest.raises(OutOfRange):
            mf.slice_series(s, mf.SliceSpec(1, 5))

    def test_invalid_spec(self):
        with pytest.raises(OutOfRange):
            mf.SliceSpec(3, 3)
        with pytest.raises(OutOfRange):
            mf.SliceSpec(-1, 2)

    def test_composition(self, rng):
        x = rng.normal(0, 1, 50)
        s = mf.Series(x, "profile")
        for _ in range(25):
            a = int(rng.integers(0, 40))
            b = int(rng.integers(a + 2, 51))
            c = int(rng.integers(0, b - a - 1))
            d = int(rng.integers(c + 1, b - a + 1))
            lhs = mf.slice_series(mf.slice_series(s, mf.SliceSpec(a, b)), mf.SliceSpec(c, d))
            rhs = mf.slice_series(s, mf.SliceSpec(a + c, a + d))
            np.testing.assert_array_equal(lhs.values, rhs.values)

    def test_timestamps_sliced(self):
        ts = tuple(date(2020, 1, d) for d in (1, 2, 3, 4))
        s = mf.Series([1.0, 2.0, 3.0, 4.0], "price", timestamps=ts)
        out = mf.slice_series(s, mf.SliceSpec(1, 3))
        assert out.timestamps == ts[1:3]


class TestShuffle:
    def test_same_seed_identical(self, rng):
        s = mf.Series(rng.normal(0, 1, 100).cumsum(), "profile")
        a = mf.shuffle_returns(s, seed=7)
        b = mf.shuffle_returns(s, seed=7)
        np.testing.assert_array_equal(a.values, b.values)

    def test_different_seeds_differ(self, rng):
        s = mf.Series(rng.normal(0, 1, 100).cumsum(), "profile")
        a = mf.shuffle_returns(s, seed=7)
        b = mf.shuffle_returns(s, seed=8)
        assert not np.array_equal(a.values, b.values)

    def test_returns_multiset_preserved(self, rng):
        s = mf.Series(rng.normal(0, 1, 200).cumsum(), "profile")
        original = np.sort(np.diff(s.values))
        shuffled = np.sort(np.diff(mf.shuffle_returns(s, seed=3).values))
        np.testing.assert_allclose(shuffled, original, rtol=1e-12)

    def test_endpoints_and_length(self, rng):
        s = mf.Series(rng.normal(0, 1, 150).cumsum(), "profile")
        out = mf.shuffle_returns(s, seed=11)
        assert len(out) == len(s)
        assert out.values[0] == s.values[0]
        np.testing.assert_allclose(out.values[-1], s.values[-1], rtol=1e-10)

    def test_too_short(self):
        with pytest.raises(TooShort):
            mf.shuffle_returns(mf.Series([1.0], "price"), seed=1)

    def test_shuffled_rmd_recovers_memoryless_h2(self):
        # persistent input (H=0.7) loses its memory under permutation:
        # h(2) of the shuffle sits at the uncorrelated value 1/2
        h2s = []
        for seed in range(20):
            trace = mf.generate_rmd(mf.RmdParams(hurst=0.7, levels=14, seed=seed))
            shuffled = mf.shuffle_returns(trace, seed=1000 + seed)
            h2s.append(quick_h2(shuffled))
        assert abs(np.mean(h2s) - 0.5) <= 0.05


class TestCsv:
    def test_round_trip_index_form(self, tmp_path, rng):
        s = mf.Series(rng.normal(0, 1, 40).cumsum(), "profile")
        path = tmp_path / "series.csv"
        mf.write_csv(s, path)
        back = mf.read_csv(path, representation="profile")
        np.testing.assert_array_equal(back.values, s.values)
        assert back.timestamps is None

    def test_round_trip_dated_form(self, tmp_path):
        ts = tuple(date(2020, 1, d) for d in (1, 2, 5))
        s = mf.Series([10.0, 11.0, 12.0], "price", timestamps=ts)
        path = tmp_path / "series.csv"
        mf.write_csv(s, path)
        back = mf.read_csv(path)
        np.testing.assert_array_equal(back.values, s.values)
        assert back.timestamps == ts

    def test_semicolon_and_header(self, tmp_path):
        path = tmp_path / "prices.csv"
        path.write_text("date;close\n2020-01-01;100.5\n2020-01-02;101.25\n")
        s = mf.read_csv(path)
        np.testing.assert_array_equal(s.values, [100.5, 101.25])
        assert s.timestamps == (date(2020, 1, 1), date(2020, 1, 2))

    def test_headerless_single_column(self, tmp_path):
        path = tmp_path / "vals.csv"
        path.write_text("1.5\n2.5\n3.5\n")
        s = mf.read_csv(path)
        np.testing.assert_array_equal(s.values, [1.5, 2.5, 3.5])

    def test_non_numeric_close_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("date,close\n2020-01-01,100.0\n2020-01-02,oops\n")
        with pytest.raises(CsvFormatError, match="line 3"):
            mf.read_csv(path)

    def test_too_many_columns(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2,3\n")
        with pytest.raises(CsvFormatError):
            mf.read_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("\n")
        with pytest.raises(CsvFormatError):
            mf.read_csv(path)

    def test_nonpositive_price_rejected(self, tmp_path):
        path = tmp_path / "zero.csv"
        path.write_text("close\n1.0\n0.0\n")
        with pytest.raises(NonPositiveValue):
            mf.read_csv(path)
