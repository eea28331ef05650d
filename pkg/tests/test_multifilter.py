import math

import numpy as np
import pytest

from ldme import (
    DegenerateDownweight,
    Interval,
    PointSet,
    RunConfig,
    WeightFn,
    basic_multifilter,
    quantile_interval,
    soft_downweight,
    truncated_variance,
    weighted_variance,
)
from oracles import (
    quantile_interval_naive,
    split_conditions_hold,
    truncated_variance_naive,
)


def embed_1d(values):
    """Lift 1-D values to 2-D points whose first axis carries the data."""
    vals = np.asarray(values, dtype=float)
    return PointSet(np.column_stack([vals, np.zeros_like(vals)]))


E1 = np.array([1.0, 0.0])


class TestInterval:
    def test_requires_ordered_endpoints(self):
        with pytest.raises(ValueError):
            Interval(2.0, 1.0)

    def test_doubled_contains_original(self):
        iv = Interval(-1.0, 5.0)
        big = iv.doubled()
        assert big.a <= iv.a and big.b >= iv.b
        assert big.center == pytest.approx(iv.center)
        assert big.half_width == pytest.approx(2 * iv.half_width)


class TestQuantileInterval:
    def test_unit_weights_integer_grid(self):
        iv = quantile_interval(np.arange(10.0), WeightFn(np.ones(10)), 0.8)
        assert (iv.a, iv.b) == (1.0, 8.0)

    def test_single_supported_point(self):
        iv = quantile_interval(
            np.array([5.0, -3.0, 9.0]), WeightFn([0.0, 1.0, 0.0]), 0.3
        )
        assert (iv.a, iv.b) == (-3.0, -3.0)

    def test_tiny_weight_above(self):
        iv = quantile_interval(np.array([0.0, 100.0]), WeightFn([1.0, 0.001]), 0.4)
        assert (iv.a, iv.b) == (0.0, 0.0)

    def test_random_matches_naive_scan(self):
        rng = np.random.default_rng(20)
        for _ in range(60):
            n = int(rng.integers(1, 100))
            proj = np.round(rng.normal(size=n) * 5, 2)  # provoke ties
            wts = rng.uniform(0, 1, n)
            wts[rng.integers(0, n)] = 1.0
            alpha = float(rng.uniform(0.02, 0.49))
            iv = quantile_interval(proj, WeightFn(wts), alpha)
            a, b = quantile_interval_naive(proj, wts, alpha)
            assert iv.a == a and iv.b == b

    def test_zero_total_raises(self):
        with pytest.raises(ValueError):
            quantile_interval(np.array([1.0]), WeightFn([0.0]), 0.2)


class TestTruncatedVariance:
    def test_constant_data(self):
        w = WeightFn([0.3, 0.7, 0.0])
        proj = np.array([4.0, 4.0, 9.0])
        assert truncated_variance(proj, w, Interval(0.0, 5.0)) == 0.0

    def test_outside_point_excluded(self):
        proj = np.array([0.0, 2.0, 100.0])
        got = truncated_variance(proj, WeightFn(np.ones(3)), Interval(-1.0, 3.0))
        assert got == pytest.approx(1.0)

    def test_random_matches_filtered_naive(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            proj = rng.normal(size=50) * 10
            wts = rng.uniform(0.01, 1, 50)
            lo = float(np.quantile(proj, 0.2))
            hi = float(np.quantile(proj, 0.9))
            got = truncated_variance(proj, WeightFn(wts), Interval(lo, hi))
            want = truncated_variance_naive(proj, wts, lo, hi)
            np.testing.assert_allclose(got, want, rtol=1e-9)

    def test_zero_weight_inside_raises(self):
        with pytest.raises(ValueError):
            truncated_variance(
                np.array([0.0, 10.0]), WeightFn([0.0, 1.0]), Interval(-1.0, 1.0)
            )


class TestSoftDownweight:
    def test_argmax_zeroed_inside_untouched(self):
        w = soft_downweight(np.array([0.0, 10.0]), WeightFn([1.0, 1.0]), Interval(0.0, 1.0))
        np.testing.assert_array_equal(w.weights, [1.0, 0.0])

    def test_direct_formula(self):
        w = soft_downweight(
            np.array([0.0, 3.0, 6.0]), WeightFn(np.ones(3)), Interval(0.0, 2.0)
        )
        np.testing.assert_allclose(w.weights, [1.0, 15.0 / 16.0, 0.0])

    def test_max_over_supported_points_only(self):
        w = soft_downweight(
            np.array([-5.0, 0.0, 5.0]), WeightFn([1.0, 1.0, 0.0]), Interval(-1.0, 1.0)
        )
        np.testing.assert_array_equal(w.weights, [0.0, 1.0, 0.0])

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateDownweight):
            soft_downweight(np.array([0.0, 0.5]), WeightFn([1.0, 1.0]), Interval(0.0, 1.0))

    def test_monotone_and_zeroes_argmax(self):
        rng = np.random.default_rng(22)
        for _ in range(50):
            proj = rng.normal(size=40) * 8
            wts = rng.uniform(0, 1, 40)
            wts[rng.integers(0, 40)] = 1.0
            lo, hi = np.sort(rng.normal(size=2) * 2)
            f = np.maximum(lo - proj, 0) + np.maximum(proj - hi, 0)
            if not (f[wts > 0] > 0).any():
                continue
            w_new = soft_downweight(proj, WeightFn(wts), Interval(lo, hi))
            assert (w_new.weights <= wts + 1e-15).all()
            assert ((wts > 0) & (w_new.weights == 0.0)).any()


def run_multifilter_1d(values, weights, alpha, big_c=20.0):
    ps = embed_1d(values)
    cfg = RunConfig(alpha=min(alpha, 0.49), big_c=big_c)
    return basic_multifilter(ps, WeightFn(weights), E1, alpha, cfg), ps


class TestBasicMultifilter:
    def test_small_variance_certifies(self):
        rng = np.random.default_rng(23)
        vals = rng.normal(size=300)
        out, _ = run_multifilter_1d(vals, np.ones(300), 0.2)
        assert out.tag == "certified"
        assert weighted_variance(vals, WeightFn(np.ones(300))) <= 2 * 20 * math.log2(10) ** 2

    def test_two_far_clusters_split(self):
        vals = np.concatenate([np.zeros(50), np.full(50, 100.0)])
        out, _ = run_multifilter_1d(vals, np.ones(100), 0.2)
        assert out.tag == "split"
        sp = out.split_params
        assert split_conditions_hold(vals, np.ones(100), 0.2, sp.t, sp.R)
        right, left = out.children
        assert right.total == 50.0 and left.total == 50.0

    def test_far_small_mass_reweighted(self):
        rng = np.random.default_rng(24)
        vals = np.concatenate([rng.uniform(-0.01, 0.01, 96), np.full(4, 1e4)])
        out, _ = run_multifilter_1d(vals, np.ones(100), 0.8)
        assert out.tag == "reweighted"
        (w_new,) = out.children
        far = w_new.weights[96:]
        assert (far <= 1e-6).all()
        assert far.min() == 0.0

    def test_certified_threshold_is_sharp(self):
        # A tight core plus a small far mass (below the per-side trim budget,
        # so the windowed gate stays quiet): certification flips exactly when
        # the far mass pushes the full variance over the gate.
        alpha, big_c = 0.2, 20.0
        gate = 2 * big_c * math.log2(2 / alpha) ** 2

        rng = np.random.default_rng(25)
        core = rng.normal(size=490)
        core = (core - core.mean()) / core.std()

        def instance(dist):
            return np.concatenate([core, np.full(10, dist)])

        # far mass fraction 10/500 = 0.02 < alpha/8 = 0.025
        var_of = lambda vals: weighted_variance(vals, WeightFn(np.ones(500)))

        low = instance(80.0)
        assert var_of(low) < gate
        out, _ = run_multifilter_1d(low, np.ones(500), alpha)
        assert out.tag == "certified"

        high = instance(200.0)
        assert var_of(high) > gate
        out, _ = run_multifilter_1d(high, np.ones(500), alpha)
        assert out.tag == "reweighted"

    def test_invariants_on_random_instances(self):
        rng = np.random.default_rng(26)
        tags = set()
        for _ in range(120):
            n = int(rng.integers(20, 120))
            centers = rng.normal(size=rng.integers(1, 4)) * rng.uniform(0, 300)
            vals = rng.choice(centers, size=n) + rng.normal(size=n)
            wts = rng.uniform(0, 1, n)
            wts[rng.integers(0, n)] = 1.0
            alpha = float(rng.uniform(0.05, 0.45))
            try:
                out, _ = run_multifilter_1d(vals, wts, alpha)
            except Exception:
                continue
            tags.add(out.tag)
            w_before = float(wts.sum())
            for child in out.children:
                assert (child.weights <= wts + 1e-15).all()
                assert (child.weights >= 0.0).all()
                assert ((wts > 0) & (child.weights == 0.0)).any()
            if out.tag == "split":
                right, left = out.children
                assert (
                    right.total**2 + left.total**2
                    <= w_before**2 * (1 + 1e-9)
                )
                assert right.total < w_before and left.total < w_before
                # children are parent weights under indicators overlapping
                # exactly on [t - R, t + R)
                sp = out.split_params
                in_overlap = (vals >= sp.t - sp.R) & (vals < sp.t + sp.R)
                both = (right.weights > 0) & (left.weights > 0)
                np.testing.assert_array_equal(both, in_overlap & (wts > 0))
                np.testing.assert_allclose(
                    np.maximum(right.weights, left.weights)[in_overlap],
                    wts[in_overlap],
                )
        assert {"certified", "split"} <= tags

    def test_flat_spread_data_aborts_with_diagnostics(self):
        # Uniformly spread data with variance above the gate has tails too
        # thin for any feasible split at the default big_c; the pass must
        # abort loudly instead of weakening its certificate.
        from ldme import InfeasibleSplit
        from oracles import split_feasible_bruteforce

        vals = np.linspace(0.0, 90.0, 200)
        assert not split_feasible_bruteforce(vals, np.ones(200), 0.25)
        with pytest.raises(InfeasibleSplit) as exc:
            run_multifilter_1d(vals, np.ones(200), 0.25)
        assert "variance_gate" in exc.value.details

    def test_nice_iteration_property_on_planted_instances(self):
        # With a planted low-variance subset holding >= 3/4 of its mass, at
        # least one child loses inlier mass a 24*lg(2/alpha) factor slower
        # than total mass.
        rng = np.random.default_rng(27)
        checked = 0
        for trial in range(200):
            s_count = int(rng.integers(30, 80))
            n_junk = int(rng.integers(20, 100))
            alpha = float(rng.uniform(0.1, 0.45))
            if s_count < alpha * (s_count + n_junk):
                continue
            s_vals = rng.normal(size=s_count)
            s_vals = (s_vals - s_vals.mean()) / max(s_vals.std(), 1.0)
            junk = rng.choice([-1.0, 1.0], n_junk) * rng.uniform(5, 500, n_junk)
            vals = np.concatenate([s_vals, junk])
            wts = np.concatenate(
                [rng.uniform(0.85, 1.0, s_count), rng.uniform(0, 1, n_junk)]
            )
            w = WeightFn(wts)
            ws_before = float(wts[:s_count].sum())
            assert ws_before >= 0.75 * s_count
            try:
                out, _ = run_multifilter_1d(vals, wts, alpha)
            except Exception:
                continue
            if not out.children:
                continue
            checked += 1
            lg24 = 24.0 * math.log2(2.0 / alpha)
            nice = False
            for child in out.children:
                ds = ws_before - float(child.weights[:s_count].sum())
                dt = w.total - child.total
                if ds * w.total * lg24 <= dt * ws_before * (1 + 1e-9) + 1e-12:
                    nice = True
            assert nice, f"trial {trial}: no nice child"
        assert checked >= 50
