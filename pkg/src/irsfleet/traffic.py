"""Spatio-temporal log-normal traffic demand and the demand-gated gain."""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "TrafficModel",
    "TrafficField",
    "default_epoch_profile",
    "sample_traffic",
    "gate_gain",
    "write_traffic_csv",
]

PROFILE_LOW = 0.8
PROFILE_HIGH = 1.4


def default_epoch_profile(epochs: int) -> tuple[float, ...]:
    """Sinusoidal per-epoch mean multipliers spanning exactly [0.8, 1.4]."""
    t = np.arange(1, epochs + 1)
    return tuple(1.1 + 0.3 * np.sin(2.0 * np.pi * (t - 1) / epochs))


@dataclass(frozen=True)
class TrafficModel:
    """Log-normal demand field: i.i.d. across cells, resampled per epoch.

    `sigma_log` is the standard deviation of the underlying normal (log
    scale). The log-mean is calibrated per epoch so the distribution mean
    equals base_mean times the epoch multiplier. The gating threshold is
    `threshold_fraction` of that mean.
    """

    base_mean: float = 702.0          # Mbps/km^2
    sigma_log: float = 2.8
    epochs: int = 12
    epoch_profile: tuple[float, ...] | None = None
    threshold_fraction: float = 0.01

    def __post_init__(self) -> None:
        if self.base_mean <= 0:
            raise ValueError("base mean demand must be positive")
        if self.sigma_log <= 0:
            raise ValueError("sigma_log must be positive")
        if self.epochs < 1:
            raise ValueError("need at least one epoch")
        if not 0.0 < self.threshold_fraction < 1.0:
            raise ValueError("threshold_fraction must lie in (0, 1)")
        if self.epoch_profile is None:
            object.__setattr__(
                self, "epoch_profile", default_epoch_profile(self.epochs)
            )
        else:
            profile = tuple(float(x) for x in self.epoch_profile)
            if len(profile) != self.epochs:
                raise ValueError("epoch_profile length must match epochs")
            eps = 1e-9
            if min(profile) < PROFILE_LOW - eps or max(profile) > PROFILE_HIGH + eps:
                raise ValueError(
                    f"epoch multipliers must lie in [{PROFILE_LOW}, {PROFILE_HIGH}]"
                )
            object.__setattr__(self, "epoch_profile", profile)

    def epoch_means(self) -> np.ndarray:
        return self.base_mean * np.asarray(self.epoch_profile)

    def thresholds(self) -> np.ndarray:
        return self.threshold_fraction * self.epoch_means()


@dataclass(frozen=True, eq=False)
class TrafficField:
    demand: np.ndarray      # (epochs, cells) Mbps/km^2
    threshold: np.ndarray   # (epochs,) Mbps/km^2


def sample_traffic(
    model: TrafficModel,
    n_grids: int,
    rng: np.random.Generator,
) -> TrafficField:
    """Draw the per-epoch, per-cell demand field.

    log demand ~ Normal(log(mean_t) - sigma^2/2, sigma^2), which makes the
    linear mean exactly mean_t.
    """
    means = model.epoch_means()
    mu = np.log(means) - 0.5 * model.sigma_log**2
    z = rng.standard_normal((model.epochs, int(n_grids)))
    demand = np.exp(mu[:, None] + model.sigma_log * z)
    return TrafficField(demand=demand, threshold=model.thresholds())


def gate_gain(g, demand, threshold):
    """Demand gate: keep the SNR ratio where demand meets the threshold,
    else fall back to unit gain."""
    out = np.where(np.asarray(demand) >= np.asarray(threshold), g, 1.0)
    if np.ndim(demand) == 0 and np.ndim(g) == 0:
        return float(out)
    return out


def write_traffic_csv(field: TrafficField, path) -> None:
    """Dump a demand field as (epoch, grid_index, demand) rows; epochs 1-based."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "grid_index", "demand_mbps_km2"])
        epochs, grids = field.demand.shape
        for t in range(epochs):
            for i in range(grids):
                writer.writerow([t + 1, i, repr(float(field.demand[t, i]))])


def lognormal_median(mean: float, sigma: float) -> float:
    """Median implied by a mean-calibrated log-normal: mean * exp(-sigma^2/2)."""
    return mean * math.exp(-0.5 * sigma**2)
