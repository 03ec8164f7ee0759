"""Run configuration shared by the bound computations."""

from __future__ import annotations

from dataclasses import dataclass

EPS_MAX = 0.15


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BoundConfig:
    epsilon: float = 0.01
    kmax: int = 16
    grid_points_t: int = 400
    grid_points_sigma: int = 400
    nonneg_tol: float = 1e-9
    nonneg_grid_points: int = 10**6 + 1
    table_round_dp: int = 8

    def __post_init__(self):
        check_epsilon(self.epsilon)
        if self.kmax < 1:
            raise ConfigError(f"kmax must be positive, got {self.kmax}")
        if self.grid_points_t < 2 or self.grid_points_sigma < 2:
            raise ConfigError("audit grids need at least 2 points per axis")
        if self.nonneg_grid_points < 2:
            raise ConfigError("non-negativity grid needs at least 2 points")
        if not self.nonneg_tol > 0:
            raise ConfigError("nonneg_tol must be positive")
        if self.table_round_dp < 1:
            raise ConfigError("table_round_dp must be positive")


def check_epsilon(epsilon: float) -> float:
    if not (0.0 < epsilon <= EPS_MAX):
        raise ConfigError(f"epsilon must lie in (0, {EPS_MAX}], got {epsilon!r}")
    return float(epsilon)
