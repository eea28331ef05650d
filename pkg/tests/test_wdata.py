import numpy as np
import pytest

from ldme import (
    PointSet,
    WeightFn,
    approx_top_eigenpair,
    cov_matvec,
    project,
    weighted_mean,
    weighted_variance,
    weighted_variance_along,
)
from oracles import (
    dense_weighted_cov,
    dot_naive,
    top_eigenpair_dense,
    weighted_mean_naive,
    weighted_variance_naive,
)


class TestPointSet:
    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            PointSet([[1.0, np.nan]])
        with pytest.raises(ValueError):
            PointSet([[np.inf, 0.0]])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            PointSet(np.zeros((0, 3)))

    def test_is_immutable(self):
        ps = PointSet([[1.0, 2.0]])
        with pytest.raises(ValueError):
            ps.points[0, 0] = 5.0

    def test_single_vector_promoted_to_row(self):
        ps = PointSet([1.0, 2.0, 3.0])
        assert ps.n == 1 and ps.d == 3


class TestWeightFn:
    def test_range_validation(self):
        with pytest.raises(ValueError):
            WeightFn([0.5, 1.5])
        with pytest.raises(ValueError):
            WeightFn([-0.1])

    def test_total_matches_recomputed_sum(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            w = WeightFn(rng.uniform(0, 1, rng.integers(1, 200)))
            recomputed = float(np.sum(w.weights))
            assert abs(w.total - recomputed) <= 1e-12 * max(recomputed, 1.0)

    def test_is_immutable(self):
        w = WeightFn([0.5])
        with pytest.raises(ValueError):
            w.weights[0] = 1.0


class TestProject:
    def test_axis_projection(self):
        ps = PointSet([[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_array_equal(project(ps, np.array([1.0, 0.0])), [1.0, 0.0])

    def test_dot_product_identity(self):
        ps = PointSet([[3.0, 4.0]])
        np.testing.assert_allclose(project(ps, np.array([0.6, 0.8])), [5.0])

    def test_matches_naive_dot(self):
        rng = np.random.default_rng(1)
        pts = rng.normal(size=(20, 7))
        v = rng.normal(size=7)
        v /= np.linalg.norm(v)
        np.testing.assert_allclose(
            project(PointSet(pts), v), dot_naive(pts, v), rtol=1e-9
        )

    def test_dimension_mismatch_raises(self):
        with pytest.raises(ValueError):
            project(PointSet([[1.0, 2.0]]), np.array([1.0, 0.0, 0.0]))

    def test_non_unit_raises(self):
        with pytest.raises(ValueError):
            project(PointSet([[1.0, 2.0]]), np.array([1.0, 1.0]))


class TestWeightedMean:
    def test_uniform_mean(self):
        ps = PointSet([[0.0, 0.0], [2.0, 2.0]])
        np.testing.assert_allclose(weighted_mean(ps, WeightFn([1, 1])), [1.0, 1.0])

    def test_single_supported_point(self):
        ps = PointSet([[0.0, 0.0], [2.0, 2.0]])
        np.testing.assert_allclose(weighted_mean(ps, WeightFn([1, 0])), [0.0, 0.0])

    def test_matches_naive(self):
        pts = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        wts = np.array([0.5, 0.5, 1.0])
        np.testing.assert_allclose(
            weighted_mean(PointSet(pts), WeightFn(wts)),
            weighted_mean_naive(pts, wts),
            rtol=1e-12,
        )

    def test_random_matches_naive(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            pts = rng.normal(size=(rng.integers(1, 100), rng.integers(1, 30)))
            wts = rng.uniform(0, 1, pts.shape[0])
            wts[0] = 1.0  # keep total positive
            np.testing.assert_allclose(
                weighted_mean(PointSet(pts), WeightFn(wts)),
                weighted_mean_naive(pts, wts),
                rtol=1e-9,
                atol=1e-12,
            )

    def test_zero_total_raises(self):
        with pytest.raises(ValueError):
            weighted_mean(PointSet([[1.0]]), WeightFn([0.0]))


class TestWeightedVariance:
    def test_two_point_variance(self):
        ps = PointSet([[0.0], [2.0]])
        assert weighted_variance_along(ps, WeightFn([1, 1]), np.array([1.0])) == 1.0

    def test_single_supported_point_is_zero(self):
        ps = PointSet([[5.0, 1.0], [9.0, 3.0]])
        w = WeightFn([0.0, 0.7])
        v = np.array([1.0, 0.0])
        assert weighted_variance_along(ps, w, v) == 0.0

    def test_random_matches_two_pass_naive(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            vals = rng.normal(size=30) * rng.uniform(0.1, 10)
            wts = rng.uniform(0, 1, 30)
            wts[3] = 0.9
            got = weighted_variance(vals, WeightFn(wts))
            want = weighted_variance_naive(vals, wts)
            np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-12)

    def test_agrees_with_cov_matvec_quadratic_form(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n, d = rng.integers(2, 60), rng.integers(1, 12)
            pts = rng.normal(size=(n, d)) * 3.0
            wts = rng.uniform(0, 1, n)
            wts[0] = 1.0
            v = rng.normal(size=d)
            v /= np.linalg.norm(v)
            ps, w = PointSet(pts), WeightFn(wts)
            direct = weighted_variance_along(ps, w, v)
            quad = float(v @ cov_matvec(ps, w, v))
            np.testing.assert_allclose(direct, quad, rtol=1e-9, atol=1e-12)


class TestCovMatvec:
    def test_rank_one_covariance(self):
        ps = PointSet([[1.0, 0.0], [-1.0, 0.0]])
        out = cov_matvec(ps, WeightFn([1, 1]), np.array([1.0, 0.0]))
        np.testing.assert_allclose(out, [1.0, 0.0], atol=1e-12)

    def test_single_supported_point_gives_zero(self):
        ps = PointSet([[3.0, 1.0], [2.0, 2.0]])
        out = cov_matvec(ps, WeightFn([0.0, 1.0]), np.array([0.3, 0.7]))
        np.testing.assert_allclose(out, [0.0, 0.0], atol=1e-12)

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(40, 8)) * 2.0
        wts = rng.uniform(0, 1, 40)
        cov = dense_weighted_cov(pts, wts)
        ps, w = PointSet(pts), WeightFn(wts)
        for _ in range(10):
            u = rng.normal(size=8)
            np.testing.assert_allclose(
                cov_matvec(ps, w, u), cov @ u, rtol=1e-9, atol=1e-12
            )


class TestApproxTopEigenpair:
    def test_single_spread_axis(self):
        rng = np.random.default_rng(6)
        pts = np.tile(rng.normal(size=12), (40, 1))
        pts[:, 0] = rng.normal(size=40) * 4.0
        ps, w = PointSet(pts), WeightFn(np.ones(40))
        eig = approx_top_eigenpair(ps, w, 1e-3, rng=0)
        axis = np.zeros(12)
        axis[0] = 1.0
        assert min(
            np.linalg.norm(eig.direction - axis), np.linalg.norm(eig.direction + axis)
        ) < 1e-6
        lam, _ = top_eigenpair_dense(pts, np.ones(40))
        np.testing.assert_allclose(eig.value, lam, rtol=1e-9)

    def test_identical_points_degenerate(self):
        ps = PointSet(np.tile([2.0, -1.0, 3.0], (7, 1)))
        eig = approx_top_eigenpair(ps, WeightFn(np.ones(7)), 1e-2, rng=1)
        assert eig.degenerate
        assert eig.value == 0.0
        np.testing.assert_allclose(np.linalg.norm(eig.direction), 1.0, rtol=1e-9)

    def test_value_is_rayleigh_quotient(self):
        rng = np.random.default_rng(7)
        for seed in range(30):
            n, d = 50, 9
            pts = rng.normal(size=(n, d)) @ np.diag(rng.uniform(0.1, 5, d))
            wts = rng.uniform(0, 1, n)
            wts[0] = 1.0
            ps, w = PointSet(pts), WeightFn(wts)
            eig = approx_top_eigenpair(ps, w, 1e-3, rng=seed)
            ray = float(eig.direction @ cov_matvec(ps, w, eig.direction))
            np.testing.assert_allclose(eig.value, ray, rtol=1e-9, atol=1e-15)

    def test_half_top_eigenvalue_guarantee(self):
        rng = np.random.default_rng(8)
        n, d = 60, 20
        pts = rng.normal(size=(n, d)) @ rng.normal(size=(d, d))
        wts = rng.uniform(0.2, 1, n)
        lam_max, _ = top_eigenpair_dense(pts, wts)
        ps, w = PointSet(pts), WeightFn(wts)
        hits = sum(
            approx_top_eigenpair(ps, w, 1e-3, rng=seed).value >= lam_max / 2.0
            for seed in range(1000)
        )
        assert hits >= 995

    def test_twice_value_dominates_all_directions(self):
        rng = np.random.default_rng(9)
        for trial in range(200):
            n, d = 30, 6
            pts = rng.normal(size=(n, d)) * rng.uniform(0.5, 4)
            wts = rng.uniform(0, 1, n)
            wts[0] = 1.0
            ps, w = PointSet(pts), WeightFn(wts)
            eig = approx_top_eigenpair(ps, w, 1e-3, rng=trial)
            lam_max, _ = top_eigenpair_dense(pts, wts)
            assert lam_max <= 2.0 * eig.value * (1.0 + 1e-9)

    def test_reproducible_given_seed(self):
        rng = np.random.default_rng(10)
        pts = rng.normal(size=(25, 5))
        ps, w = PointSet(pts), WeightFn(np.ones(25))
        a = approx_top_eigenpair(ps, w, 1e-2, rng=123)
        b = approx_top_eigenpair(ps, w, 1e-2, rng=123)
        assert a.value == b.value
        np.testing.assert_array_equal(a.direction, b.direction)

    def test_invalid_delta_raises(self):
        ps = PointSet([[1.0], [2.0]])
        with pytest.raises(ValueError):
            approx_top_eigenpair(ps, WeightFn([1, 1]), 0.0)
