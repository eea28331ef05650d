"""Weighted point sets and the spectral kernel built on them.

A PointSet is an immutable n x d sample matrix; every soft-filtering state
lives in a WeightFn attached to it. All operations here cost O(n*d) per
pass and the weighted covariance is applied implicitly, never materialized
as a d x d matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

UNIT_TOL = 1e-9
DEGENERATE_COV_REL = 1e-12


class PointSet:
    """Immutable set of n points in R^d, stored row-major."""

    __slots__ = ("points", "n", "d", "coord_scale")

    def __init__(self, points) -> None:
        pts = np.array(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1)
        if pts.ndim != 2:
            raise ValueError(f"points must form a 2-D array, got shape {pts.shape}")
        n, d = pts.shape
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must have finite coordinates")
        pts.flags.writeable = False
        self.points = pts
        self.n = n
        self.d = d
        self.coord_scale = float(np.abs(pts).max())

    def __repr__(self) -> str:
        return f"PointSet(n={self.n}, d={self.d})"


class WeightFn:
    """Per-point weights in [0, 1] for a PointSet of matching length.

    The total mass is computed once at construction and cached.
    """

    __slots__ = ("weights", "total")

    def __init__(self, weights) -> None:
        w = np.array(weights, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError(f"weights must be 1-D, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if (w < 0.0).any() or (w > 1.0).any():
            raise ValueError("weights must lie in [0, 1]")
        w.flags.writeable = False
        self.weights = w
        self.total = float(w.sum())

    def __len__(self) -> int:
        return self.weights.shape[0]

    def __repr__(self) -> str:
        return f"WeightFn(n={len(self)}, total={self.total:.6g})"


@dataclass(frozen=True)
class EigenPair:
    """Approximate top eigenpair of a weighted covariance.

    ``value`` always equals the Rayleigh quotient of ``direction`` against
    the weighted covariance (recomputed at return time), except in the
    degenerate zero-covariance case where it is exactly 0.
    """

    value: float
    direction: np.ndarray
    degenerate: bool = False


def _check_pair(ps: PointSet, w: WeightFn) -> None:
    if len(w) != ps.n:
        raise ValueError(f"weight length {len(w)} does not match n={ps.n}")


def _check_unit(v: np.ndarray, d: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (d,):
        raise ValueError(f"direction has shape {v.shape}, expected ({d},)")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > UNIT_TOL:
        raise ValueError(f"direction must be a unit vector, got norm {norm}")
    return v


def project(ps: PointSet, v: np.ndarray) -> np.ndarray:
    """Project every point onto the unit vector v."""
    v = _check_unit(v, ps.d)
    return ps.points @ v


def weighted_mean(ps: PointSet, w: WeightFn) -> np.ndarray:
    """Mean of the points under w, (1/w(T)) * sum_x w(x) x."""
    _check_pair(ps, w)
    if w.total <= 0.0:
        raise ValueError("weight function has zero total mass")
    return (w.weights @ ps.points) / w.total


def weighted_variance(values: np.ndarray, w: WeightFn) -> float:
    """Weighted variance of a 1-D array of values (two-pass)."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != w.weights.shape:
        raise ValueError("values and weights must have matching length")
    if w.total <= 0.0:
        raise ValueError("weight function has zero total mass")
    mean = float(w.weights @ values) / w.total
    dev = values - mean
    return float(w.weights @ (dev * dev)) / w.total


def weighted_variance_along(ps: PointSet, w: WeightFn, v: np.ndarray) -> float:
    """Weighted variance of the projections onto v; equals v' Cov_w v."""
    return weighted_variance(project(ps, v), w)


def cov_matvec(ps: PointSet, w: WeightFn, u: np.ndarray) -> np.ndarray:
    """Apply the weighted covariance to u in O(n*d) without forming it.

    Uses two centered passes: p_i = w_i * <x_i - mu, u>, then
    (1/w(T)) * sum_i p_i (x_i - mu).
    """
    _check_pair(ps, w)
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (ps.d,):
        raise ValueError(f"vector has shape {u.shape}, expected ({ps.d},)")
    if w.total <= 0.0:
        raise ValueError("weight function has zero total mass")
    mu = weighted_mean(ps, w)
    p = w.weights * (ps.points @ u - mu @ u)
    return (ps.points.T @ p - mu * p.sum()) / w.total


def approx_top_eigenpair(
    ps: PointSet,
    w: WeightFn,
    delta: float,
    rng: np.random.Generator | int | None = None,
) -> EigenPair:
    """Approximate top eigenpair of the weighted covariance by power iteration.

    With probability >= 1 - delta over the random start, the returned value
    is at least half the true top eigenvalue. The value is the exact
    Rayleigh quotient of the returned unit direction. Deterministic for a
    fixed rng/seed. The iteration cap scales as log(d / delta); iteration
    exits early once the Rayleigh quotient has stabilized.

    Args:
        ps: the point set.
        w: weights with positive total mass.
        delta: failure probability, in (0, 1).
        rng: numpy Generator or seed for the start vector.

    Returns:
        EigenPair; ``degenerate`` is set when the covariance is numerically
        zero, in which case value is 0 and the direction is an arbitrary
        unit vector.
    """
    _check_pair(ps, w)
    if w.total <= 0.0:
        raise ValueError("weight function has zero total mass")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)

    X = ps.points
    ww = w.weights
    total = w.total
    mu = weighted_mean(ps, w)

    def matvec(u: np.ndarray) -> np.ndarray:
        p = ww * (X @ u - mu @ u)
        return (X.T @ p - mu * p.sum()) / total

    max_iters = int(np.ceil(24.0 * np.log(ps.d / delta)))
    v = gen.standard_normal(ps.d)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:  # measure-zero start; fall back to a basis vector
        v = np.zeros(ps.d)
        v[0] = 1.0
    else:
        v = v / norm

    prev_rq = -np.inf
    stable = 0
    for _ in range(max_iters):
        y = matvec(v)
        rq = float(v @ y)
        ny = float(np.linalg.norm(y))
        if ny == 0.0:
            break
        v = y / ny
        if abs(rq - prev_rq) <= 1e-13 * max(abs(rq), 1e-300):
            stable += 1
            if stable >= 2:
                break
        else:
            stable = 0
        prev_rq = rq

    value = float(v @ cov_matvec(ps, w, v))
    if value < 0.0:
        value = 0.0
    if value <= DEGENERATE_COV_REL * ps.coord_scale**2:
        return EigenPair(value=0.0, direction=v, degenerate=True)
    return EigenPair(value=value, direction=v, degenerate=False)
