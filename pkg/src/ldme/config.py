"""Run-wide configuration and configuration errors."""

from __future__ import annotations

from dataclasses import dataclass


class ConfigError(ValueError):
    """Raised when a configuration value is missing or out of range."""


@dataclass(frozen=True)
class RunConfig:
    """All universal constants of the estimator.

    Attributes:
        alpha: assumed inlier fraction, in (0, 1/2).
        sigma: known covariance scale of the inliers (Cov <= sigma^2 I).
        scale_c: extra rescale constant, >= 1; points are divided by
            scale_c * sigma before filtering.
        big_c: variance-threshold constant of the filtering rule.
        seed: seed for all internal randomness (eigensolver starts).
        power_delta: total failure probability budget for the eigensolver.
        trace: whether list_decode_mean records per-iteration trace events.
    """

    alpha: float
    sigma: float = 1.0
    scale_c: float = 2.0
    big_c: float = 20.0
    seed: int = 0
    power_delta: float = 0.01
    trace: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 0.5:
            raise ConfigError(f"alpha: must be in (0, 1/2), got {self.alpha}")
        if not self.sigma > 0.0:
            raise ConfigError(f"sigma: must be positive, got {self.sigma}")
        if not self.scale_c >= 1.0:
            raise ConfigError(f"scale_c: must be >= 1, got {self.scale_c}")
        if not self.big_c > 0.0:
            raise ConfigError(f"big_c: must be positive, got {self.big_c}")
        if not 0.0 < self.power_delta < 1.0:
            raise ConfigError(
                f"power_delta: must be in (0, 1), got {self.power_delta}"
            )

    @property
    def rescale_factor(self) -> float:
        return self.scale_c * self.sigma
