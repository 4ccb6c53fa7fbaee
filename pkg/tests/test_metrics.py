import json
import math

import numpy as np
import pytest

from softedge import (
    RegionClass,
    compare_quantizers,
    derive_config,
    fake_quant,
    mse,
    region_breakdown,
    sqnr_db,
)
from softedge.errors import EmptyTensor, LengthMismatch, ZeroSignal


class TestMse:
    def test_identical_is_zero(self):
        assert mse([1, 2], [1, 2]) == 0.0

    def test_unit(self):
        assert mse([0, 0], [1, -1]) == 1.0

    def test_single(self):
        assert mse([3], [0]) == 9.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            mse([1, 2], [1])

    def test_empty(self):
        with pytest.raises(EmptyTensor):
            mse([], [])

    def test_nonnegative_zero_iff_identical(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=100)
        b = a + rng.normal(scale=1e-3, size=100)
        assert mse(a, b) > 0
        assert mse(a, a) == 0


class TestSqnr:
    def test_lossless_is_inf(self):
        assert sqnr_db([1, 2], [1, 2]) == math.inf

    def test_20db(self):
        assert sqnr_db([10], [9]) == pytest.approx(20.0)

    def test_3db(self):
        assert sqnr_db([1, 1], [0, 1]) == pytest.approx(10 * math.log10(2))

    def test_zero_signal(self):
        with pytest.raises(ZeroSignal):
            sqnr_db([0, 0], [1, 0])

    def test_decreasing_in_error(self):
        rng = np.random.default_rng(6)
        ref = rng.normal(size=1000)
        prev = math.inf
        for noise in (1e-6, 1e-3, 1e-1):
            cur = sqnr_db(ref, ref + noise)
            assert cur < prev
            prev = cur


class TestRegionBreakdown:
    def test_three_region_example(self, unit_cfg):
        small, medium, large = region_breakdown([5.1, 50.3, -200.0], unit_cfg)
        assert (small.count, medium.count, large.count) == (1, 1, 1)
        assert small.max_abs_err == pytest.approx(0.1)
        assert medium.max_abs_err == pytest.approx(0.3)
        assert large.max_abs_err == pytest.approx(1.0)

    def test_all_zero(self, unit_cfg):
        small, medium, large = region_breakdown(np.zeros(10), unit_cfg)
        assert small.count == 10 and small.mse == 0.0
        assert medium.count == 0 and large.count == 0

    def test_no_large_values(self, unit_cfg):
        _, _, large = region_breakdown([1.0, 20.0, 100.0], unit_cfg)
        assert large.count == 0 and large.mse == 0.0 and large.max_abs_err == 0.0

    def test_counts_sum_to_n(self, unit_cfg):
        rng = np.random.default_rng(12)
        t = rng.uniform(-300, 300, 5000)
        stats = region_breakdown(t, unit_cfg)
        assert sum(r.count for r in stats) == 5000
        assert sum(r.fraction for r in stats) == pytest.approx(1.0)


class TestCompareQuantizers:
    def test_single_outlier(self, unit_cfg):
        r = compare_quantizers([200.0], unit_cfg)
        assert r.soft_edge.mse == pytest.approx(1.0)
        assert r.int8.mse == pytest.approx(5329.0)
        assert r.delta_mse < 0
        assert r.delta_sqnr_db > 0

    def test_gaussian_gain_band(self):
        from softedge.synth import DistSpec, generate

        t = generate(DistSpec(kind="gaussian", n=10**6, seed=42, std=4.0))
        r = compare_quantizers(t, derive_config(1.0))
        assert 10.0 <= r.delta_sqnr_db <= 13.0

    def test_mixture_favors_soft_edge(self):
        from softedge import calibrate
        from softedge.synth import DistSpec, generate

        t = generate(DistSpec(kind="outlier_mixture", n=10**5, seed=7))
        r = compare_quantizers(t, calibrate(t, 99.99))
        assert r.soft_edge.mse < r.int8.mse

    def test_medium_only_tensor_identical_reports(self, unit_cfg):
        rng = np.random.default_rng(13)
        t = rng.uniform(16, 127, 2000) * rng.choice([-1, 1], 2000)
        r = compare_quantizers(t, unit_cfg)
        assert r.soft_edge == r.int8
        assert r.delta_mse == 0.0 and r.delta_sqnr_db == 0.0

    def test_deltas_recompute_exactly(self, unit_cfg):
        rng = np.random.default_rng(14)
        t = rng.uniform(-200, 200, 1000)
        r = compare_quantizers(t, unit_cfg)
        assert r.delta_mse == r.soft_edge.mse - r.int8.mse
        assert r.delta_sqnr_db == r.soft_edge.sqnr_db - r.int8.sqnr_db

    def test_empty(self, unit_cfg):
        with pytest.raises(EmptyTensor):
            compare_quantizers([], unit_cfg)


class TestSerialization:
    def test_json_inf_sentinel(self, unit_cfg):
        # exactly representable values: both quantizers lossless
        r = compare_quantizers([1.0, 50.0], unit_cfg)
        doc = json.loads(r.to_json())
        assert doc["quantizers"]["soft_edge"]["sqnr_db"] == "inf"
        assert doc["deltas"]["sqnr_db"] == 0

    def test_json_structure(self, unit_cfg):
        rng = np.random.default_rng(15)
        r = compare_quantizers(rng.uniform(-200, 200, 100), unit_cfg)
        doc = json.loads(r.to_json())
        assert set(doc) == {"config", "n", "quantizers", "regions", "deltas"}
        assert [x["region"] for x in doc["regions"]] == ["Small", "Medium", "Large"]

    def test_csv_shape(self, unit_cfg):
        rng = np.random.default_rng(16)
        r = compare_quantizers(rng.uniform(-200, 200, 100), unit_cfg)
        lines = r.to_csv().strip().split("\n")
        assert len(lines) == 1 + 2 + 3  # header, two quantizers, three regions
        assert lines[0].startswith("kind,name,count,fraction,mse,sqnr_db")


def test_fake_quant_error_drives_report(unit_cfg):
    rng = np.random.default_rng(17)
    t = rng.uniform(-50, 50, 500)
    r = compare_quantizers(t, unit_cfg)
    fq = fake_quant(t, unit_cfg).astype(np.float64)
    assert r.soft_edge.mse == pytest.approx(mse(t, fq), rel=1e-15)
    small, _, _ = region_breakdown(t, unit_cfg)
    assert small.region is RegionClass.SMALL
